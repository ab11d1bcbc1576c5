"""Small named graphs used across the test modules."""

from jacstab import DualGraph


def banana(marking_on_first: bool = True) -> DualGraph:
    """Two components joined at two nodes, markings 1,2 on one side."""
    if marking_on_first:
        verts = [("v1", 0, [1, 2]), ("v2", 1, [])]
    else:
        verts = [("v1", 1, []), ("v2", 0, [1, 2])]
    return DualGraph(verts, [("v1", "v2"), ("v1", "v2")])


def two_vertex_tree(g1: int = 1, g2: int = 1, legs1=(1,), legs2=(2,)) -> DualGraph:
    return DualGraph([("v1", g1, list(legs1)), ("v2", g2, list(legs2))],
                     [("v1", "v2")])


def path3() -> DualGraph:
    """Genus-1 chain v1-v2-v3 with marking 1 on v3."""
    return DualGraph([("v1", 1, []), ("v2", 1, []), ("v3", 1, [1])],
                     [("v1", "v2"), ("v2", "v3")])


def star() -> DualGraph:
    """Center c with leaves a, b, d; marking 1 on the center."""
    return DualGraph([("a", 1, []), ("b", 1, []), ("c", 0, [1]), ("d", 1, [])],
                     [("a", "c"), ("b", "c"), ("c", "d")])


def tree_with_loop() -> DualGraph:
    """Edge a-b plus a loop at b; marking 1 on a."""
    return DualGraph([("a", 1, [1]), ("b", 0, [])],
                     [("a", "b"), ("b", "b")])


def single_vertex(genus: int = 2, legs=(1,)) -> DualGraph:
    return DualGraph([("v1", genus, list(legs))], [])
