import random
from fractions import Fraction

import pytest

from jacstab import (DualGraph, JacstabError, Polarization, QSTABLE, SEMISTABLE, STABLE,
                     threshold, check_stability, enumerate_stable, is_balanced,
                     base_multidegree, locus_membership,
                     BALANCED, TREELIKE, BOTH, INDETERMINACY)
from jacstab.corpus import random_connected_graph, random_treelike_graph, random_tau
from jacstab.oracles import brute_force_stable
from jacstab.twister import split_at_edge
from common import banana, two_vertex_tree, path3

CAN0 = Polarization.canonical_zero()
GM1 = Polarization.trivial_gm1()


# ----------------------------------------------------------------------
# thresholds

def test_threshold_canonical_zero_banana():
    assert threshold(banana(), CAN0, ["v1"]) == Fraction(-1)


def test_threshold_trivial_gm1_two_vertex_tree():
    # q_Y = deg omega / 2 = 1/2, kappa = 1: threshold 0
    assert threshold(two_vertex_tree(g1=1, g2=1), GM1, ["v1"]) == 0


def test_threshold_canonical_zero_two_vertex_tree():
    assert threshold(two_vertex_tree(), CAN0, ["v1"]) == Fraction(-1, 2)


def test_threshold_rejects_empty_or_full():
    with pytest.raises(JacstabError) as err:
        threshold(banana(), CAN0, [])
    assert err.value.code == "EMPTY_OR_FULL"
    with pytest.raises(JacstabError) as err:
        threshold(banana(), CAN0, ["v1", "v2"])
    assert err.value.code == "EMPTY_OR_FULL"


# ----------------------------------------------------------------------
# stability checks

def test_trivial_bundle_is_qstable_on_banana():
    verdict = check_stability(banana(), CAN0, {"v1": 0, "v2": 0}, QSTABLE)
    assert verdict.ok


def test_banana_one_minus_one_qstable_but_not_reversed():
    g = banana()
    assert check_stability(g, CAN0, {"v1": 1, "v2": -1}, QSTABLE).ok
    verdict = check_stability(g, CAN0, {"v1": -1, "v2": 1}, QSTABLE)
    assert not verdict.ok
    assert verdict.witness == ("v1",)
    assert verdict.degree == -1 and verdict.bound == Fraction(-1) and verdict.strict


def test_two_vertex_tree_semistable_fail():
    verdict = check_stability(two_vertex_tree(), CAN0, {"v1": 1, "v2": -1}, SEMISTABLE)
    assert not verdict.ok
    assert verdict.witness == ("v2",)
    assert verdict.bound == Fraction(-1, 2)


def test_degree_mismatch_raises():
    with pytest.raises(JacstabError) as err:
        check_stability(banana(), CAN0, {"v1": 1, "v2": 0}, QSTABLE)
    assert err.value.code == "DEGREE_MISMATCH"


def test_multidegree_keys_must_match():
    with pytest.raises(JacstabError) as err:
        check_stability(banana(), CAN0, {"v1": 0}, QSTABLE)
    assert err.value.code == "BAD_MULTIDEGREE"


def test_connected_only_verdict_matches_exhaustive():
    # violations on arbitrary subcurves shrink to connected ones
    rng = random.Random(21)
    cases = 0
    for _ in range(40):
        g = random_connected_graph(rng, max_vertices=6)
        for mode in (SEMISTABLE, QSTABLE):
            m = {v: rng.randint(-2, 2) for v in g.ids}
            drift = -sum(m.values())
            m[g.ids[0]] += drift
            fast = check_stability(g, CAN0, m, mode)
            slow = check_stability(g, CAN0, m, mode, connected_only=False)
            assert fast.ok == slow.ok
            cases += 1
    assert cases


# ----------------------------------------------------------------------
# enumeration

def test_enumerate_banana_qstable():
    found = enumerate_stable(banana(), CAN0, QSTABLE)
    assert found == [{"v1": 0, "v2": 0}, {"v1": 1, "v2": -1}]


def test_enumerate_treelike_gives_zero_only():
    rng = random.Random(22)
    for _ in range(30):
        g = random_treelike_graph(rng, max_vertices=8)
        assert enumerate_stable(g, CAN0, QSTABLE) == [{v: 0 for v in g.ids}]


def test_enumerate_trivial_gm1_two_vertex_tree():
    found = enumerate_stable(two_vertex_tree(g1=1, g2=1), GM1, QSTABLE)
    assert found == [{"v1": 1, "v2": 0}]


def test_enumerate_single_vertex():
    g = DualGraph([("v1", 2, [1])], [])
    assert enumerate_stable(g, CAN0, QSTABLE) == [{"v1": 0}]
    assert enumerate_stable(g, GM1, QSTABLE) == [{"v1": 1}]


def test_enumerate_agrees_with_brute_force_box():
    # soundness and completeness against the dumb box scan over all subsets
    rng = random.Random(23)
    for _ in range(12):
        g = random_connected_graph(rng, max_vertices=4, max_extra_edges=2, max_genus=1)
        for pol in (CAN0, GM1):
            for mode in (SEMISTABLE, STABLE, QSTABLE):
                assert enumerate_stable(g, pol, mode) == brute_force_stable(g, pol, mode)


def test_enumerate_complete_on_larger_graphs():
    # the wide-box scan finds nothing beyond the derived-box search on graphs
    # of five and six vertices
    rng = random.Random(28)
    for _ in range(3):
        g = random_connected_graph(rng, max_vertices=5, max_extra_edges=1, max_genus=0)
        assert enumerate_stable(g, CAN0, QSTABLE) == brute_force_stable(g, CAN0, QSTABLE)
    six = DualGraph([("a", 0, [1, 2]), ("b", 0, [3]), ("c", 0, [4]),
                     ("d", 0, [5]), ("e", 0, [6]), ("f", 0, [7, 8])],
                    [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f")])
    assert six.validate() == []
    assert enumerate_stable(six, CAN0, QSTABLE) == brute_force_stable(six, CAN0, QSTABLE)


def test_enumerate_stable_subset_of_qstable_subset_of_semistable():
    rng = random.Random(24)
    for _ in range(10):
        g = random_connected_graph(rng, max_vertices=5, max_extra_edges=2, max_genus=1)
        key = lambda m: tuple(m[v] for v in g.ids)
        stable = {key(m) for m in enumerate_stable(g, CAN0, STABLE)}
        qstable = {key(m) for m in enumerate_stable(g, CAN0, QSTABLE)}
        semi = {key(m) for m in enumerate_stable(g, CAN0, SEMISTABLE)}
        assert stable <= qstable <= semi


# ----------------------------------------------------------------------
# balanced twist data

def test_balanced_banana_with_both_legs_on_one_side():
    assert is_balanced(banana(), [5, -5], 0).ok


def test_unbalanced_two_vertex_tree():
    verdict = is_balanced(two_vertex_tree(), [5, -5], 0)
    assert not verdict.ok
    assert verdict.witness == ("v2",)
    assert verdict.leg_sum == -5 and verdict.bound == Fraction(-1, 2)


def test_zero_tau_is_balanced():
    g = two_vertex_tree()
    assert is_balanced(g, [0, 0], 0).ok
    assert is_balanced(banana(), [0, 0], 0).ok


def test_balanced_tau_sum_enforced():
    with pytest.raises(JacstabError) as err:
        is_balanced(banana(), [1, 0], 0)
    assert err.value.code == "TAU_SUM"


def test_locus_membership_examples():
    assert locus_membership(banana(), [5, -5], 0) == BALANCED
    assert locus_membership(two_vertex_tree(), [5, -5], 0) == TREELIKE
    split_banana = DualGraph([("v1", 1, [1]), ("v2", 1, [2])],
                             [("v1", "v2"), ("v1", "v2")])
    assert split_banana.validate() == []
    assert locus_membership(split_banana, [5, -5], 0) == INDETERMINACY
    assert locus_membership(two_vertex_tree(), [0, 0], 0) == BOTH


def test_balanced_iff_qstable_base_multidegree():
    rng = random.Random(25)
    cases = 0
    for _ in range(60):
        g = random_connected_graph(rng, max_vertices=6)
        k = rng.randint(-1, 1)
        tau = random_tau(rng, g.n, k * (2 * g.g - 2), bound=5)
        if tau is None:
            continue
        m0 = base_multidegree(g, tau, k)
        assert sum(m0.values()) == 0
        assert is_balanced(g, tau, k).ok == check_stability(g, CAN0, m0, QSTABLE).ok
        cases += 1
    assert cases >= 40


def test_balanced_forces_zero_branch_sums():
    # legful treelike graphs with per-vertex leg sums k*deg-omega are balanced
    # and every separating edge's branch sum must vanish
    rng = random.Random(26)
    for _ in range(25):
        g = random_treelike_graph(rng, max_vertices=7, legful=True, extra_legs=1)
        k = rng.randint(-2, 2)
        tau = [0] * g.n
        for v in g.ids:
            legs = sorted(g.legs_of[v])
            want = k * g.omega_degree((v,))
            tau[legs[0] - 1] = want
            for other in legs[1:]:
                shift = rng.randint(-3, 3)
                tau[other - 1] += shift
                tau[legs[0] - 1] -= shift
        assert is_balanced(g, tau, k).ok
        for edge in g.nonloop_edges():
            for side in split_at_edge(g, edge):
                branch_sum = (sum(tau[i - 1] for v in side for i in g.legs_of[v])
                              - k * g.omega_degree(side))
                assert branch_sum == 0


def test_basepoint_override():
    # q-stability strictness follows the chosen component, default marking 1
    g = banana()
    assert check_stability(g, CAN0, {"v1": 1, "v2": -1}, QSTABLE).ok
    assert not check_stability(g, CAN0, {"v1": 1, "v2": -1}, QSTABLE,
                               basepoint="v2").ok
    found = enumerate_stable(g, CAN0, QSTABLE, basepoint="v2")
    assert found == [{"v1": -1, "v2": 1}, {"v1": 0, "v2": 0}]


def test_qstable_requires_a_basepoint():
    unmarked = DualGraph([("v1", 2, []), ("v2", 2, [])], [("v1", "v2")], n=0)
    assert unmarked.validate() == []
    with pytest.raises(JacstabError) as err:
        enumerate_stable(unmarked, CAN0, QSTABLE)
    assert err.value.code == "NO_BASEPOINT"
    assert enumerate_stable(unmarked, CAN0, QSTABLE, basepoint="v1") == [
        {"v1": 0, "v2": 0}]
    # a one-component curve has no proper subcurves, so no basepoint is needed
    single = DualGraph([("v1", 2, [])], [], n=0)
    assert enumerate_stable(single, CAN0, QSTABLE) == [{"v1": 0}]


def test_custom_polarization_reproduces_canonical_zero():
    g = banana()
    q = {v: -Fraction(g.omega_degree((v,)), 2) for v in g.ids}
    custom = Polarization.custom(q, 0)
    for Y in (("v1",), ("v2",)):
        assert threshold(g, custom, Y) == threshold(g, CAN0, Y)
    assert enumerate_stable(g, custom, QSTABLE) == enumerate_stable(g, CAN0, QSTABLE)


def test_balanced_connected_only_matches_exhaustive():
    rng = random.Random(27)
    cases = 0
    for _ in range(40):
        g = random_connected_graph(rng, max_vertices=6)
        k = rng.randint(-1, 1)
        tau = random_tau(rng, g.n, k * (2 * g.g - 2), bound=4)
        if tau is None:
            continue
        assert is_balanced(g, tau, k).ok == is_balanced(g, tau, k, connected_only=False).ok
        cases += 1
    assert cases >= 25
