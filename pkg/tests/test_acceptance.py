"""Acceptance criteria, one test per criterion, at the stated scales.

Run with ``pytest -s tests/test_acceptance.py`` to see one line per criterion.
All comparisons are exact (integer or rational equality); the time budgets are
asserted with the stated limits.
"""

import random
import time

from jacstab import (DualGraph, Polarization, QSTABLE,
                     check_stability, enumerate_stable, is_balanced,
                     base_multidegree, reduce_treelike, twist_multidegree,
                     branch_coefficients, branch_side,
                     theta_pullback, theta_pullback_hain, theta_gm1_pullback,
                     theta_via_pushforward, theta_gm1_via_pushforward,
                     compact_type_gm1_multidegree, exp_truncate)
from jacstab.corpus import (banana_graph, random_treelike_graph,
                            random_connected_graph, random_zero_sum, random_tau)
from jacstab.oracles import solve_twister, exp_series_degree_part

CAN0 = Polarization.canonical_zero()
GM1 = Polarization.trivial_gm1()


def _report(number: int, message: str, cases: int, started: float, budget: float):
    elapsed = time.monotonic() - started
    assert elapsed < budget, f"criterion {number} exceeded {budget}s ({elapsed:.1f}s)"
    print(f"ACCEPTANCE {number}: PASS - {message} ({cases} cases, {elapsed:.2f}s)")


def test_criterion_1_banana_enumeration():
    started = time.monotonic()
    cases = 0
    for marking_on_first in (True, False):
        graph = banana_graph(marking_on_first)
        base = graph.marking_vertex(1)
        other = next(v for v in graph.ids if v != base)
        found = enumerate_stable(graph, CAN0, QSTABLE)
        expected = sorted([{base: 0, other: 0}, {base: 1, other: -1}],
                          key=lambda m: tuple(m[v] for v in graph.ids))
        assert found == expected
        cases += 1
    _report(1, "banana q-stable multidegrees are exactly (0,0) and (1,-1)",
            cases, started, budget=1.0)


def test_criterion_2_treelike_uniqueness():
    started = time.monotonic()
    rng = random.Random(1002)
    cases = 0
    while cases < 200:
        graph = random_treelike_graph(rng, max_vertices=10)
        assert enumerate_stable(graph, CAN0, QSTABLE) == [{v: 0 for v in graph.ids}]
        cases += 1
    _report(2, "treelike graphs have the zero multidegree as unique q-stable one",
            cases, started, budget=30.0)


def test_criterion_3_twister_oracle():
    started = time.monotonic()
    rng = random.Random(1003)
    cases = 0
    while cases < 500:
        graph = random_treelike_graph(rng, max_vertices=12)
        m = random_zero_sum(rng, list(graph.ids))
        root = graph.marking_vertex(1) or graph.ids[0]
        result = reduce_treelike(graph, m)
        expected = solve_twister(graph, m, root)
        assert result.gamma == expected
        tw = twist_multidegree(graph, result.gamma)
        assert all(tw[v] + m[v] == 0 for v in graph.ids)
        # leaf-order independence
        reversed_order = reduce_treelike(graph, m, choose_leaf=lambda ls: ls[-1])
        shuffled = reduce_treelike(graph, m, choose_leaf=lambda ls: rng.choice(ls))
        assert reversed_order.gamma == expected and shuffled.gamma == expected
        assert all(v == 0 for v in result.final.values())
        cases += 1
    _report(3, "leaf peeling matches the exact Laplacian solve, order-independent",
            cases, started, budget=30.0)


def test_criterion_4_branch_coefficient_identity():
    started = time.monotonic()
    rng = random.Random(1004)
    cases = 0
    while cases < 120:
        graph = random_treelike_graph(rng, max_vertices=8, max_genus=1)
        if graph.g > 5:
            continue
        k = rng.randint(-2, 2)
        tau = random_tau(rng, graph.n, k * (2 * graph.g - 2), bound=5)
        if tau is None:
            continue
        coeffs = branch_coefficients(graph, tau, k)
        for edge, c in coeffs.items():
            side = branch_side(graph, edge)
            h = graph.subcurve_genus(side)
            legs = [i for v in side for i in graph.legs_of[v]]
            assert c == k * (1 - 2 * h) + sum(tau[i - 1] for i in legs)
        cases += 1
    _report(4, "per-edge twist coefficients equal k(1-2h) + branch tau sum",
            cases, started, budget=30.0)


def test_criterion_5_formula_cross_derivation():
    started = time.monotonic()
    rng = random.Random(1005)
    cases = 0
    for g in range(1, 6):
        for n in range(1, 5):
            for k in range(-2, 3):
                target = k * (2 * g - 2)
                seen = set()
                for _ in range(40):
                    if len(seen) >= 6:
                        break
                    tau = random_tau(rng, n, target, bound=5)
                    if tau is None:
                        break
                    if k == 0 and not any(tau):
                        continue
                    if tuple(tau) in seen:
                        continue
                    seen.add(tuple(tau))
                    assert theta_via_pushforward(g, n, tau, k) == theta_pullback(g, n, tau, k)
                    cases += 1
            seen = set()
            for _ in range(40):
                if len(seen) >= 6:
                    break
                tau = random_tau(rng, n, g - 1, bound=5)
                if tau is None:
                    break
                if tuple(tau) in seen:
                    continue
                seen.add(tuple(tau))
                assert theta_gm1_via_pushforward(g, n, tau) == theta_gm1_pullback(g, n, tau)
                cases += 1
    assert cases >= 400
    _report(5, "pushforward derivations equal the closed transcriptions",
            cases, started, budget=300.0)


def test_criterion_6_hain_agreement():
    started = time.monotonic()
    rng = random.Random(1006)
    cases = 0
    for g in range(1, 6):
        # exhaustive zero-sum grid for n = 2, seeded samples for n = 3, 4
        for b in range(-5, 6):
            if b == 0:
                continue
            assert theta_pullback(g, 2, [b, -b], 0) == theta_pullback_hain(g, 2, [b, -b])
            cases += 1
        for n in (3, 4):
            seen = set()
            for _ in range(120):
                if len(seen) >= 25:
                    break
                tau = random_tau(rng, n, 0, bound=5)
                if tau is None or not any(tau) or tuple(tau) in seen:
                    continue
                seen.add(tuple(tau))
                assert theta_pullback(g, n, tau, 0) == theta_pullback_hain(g, n, tau)
                cases += 1
    assert cases >= 250
    _report(6, "closed k=0 theta pullback equals the compact-type enumeration",
            cases, started, budget=120.0)


def test_criterion_7_balanced_equivalence():
    started = time.monotonic()
    rng = random.Random(1007)
    cases = zero_checked = 0
    while cases < 150:
        graph = random_connected_graph(rng, max_vertices=8)
        k = rng.randint(-1, 1)
        tau = random_tau(rng, graph.n, k * (2 * graph.g - 2), bound=5)
        if tau is None:
            continue
        balanced = is_balanced(graph, tau, k).ok
        m0 = base_multidegree(graph, tau, k)
        assert balanced == check_stability(graph, CAN0, m0, QSTABLE).ok
        if balanced and graph.classify().treelike:
            coeffs = branch_coefficients(graph, tau, k)
            assert all(c == 0 for c in coeffs.values())
            zero_checked += 1
        cases += 1
    assert zero_checked >= 5
    _report(7, "balanced iff q-stable base multidegree; balanced kills branch sums",
            cases, started, budget=60.0)


def test_criterion_8_exp_truncation():
    started = time.monotonic()
    from fractions import Fraction
    assert exp_truncate(1).terms == {((1, 1),): Fraction(-1)}
    assert exp_truncate(2).terms == {((1, 2),): Fraction(1, 2), ((2, 1),): Fraction(1)}
    assert exp_truncate(3).terms == {((1, 3),): Fraction(-1, 6),
                                     ((1, 1), (2, 1)): Fraction(-1),
                                     ((3, 1),): Fraction(-2)}
    cases = 3
    for g in range(1, 9):
        assert exp_truncate(g).terms == exp_series_degree_part(g)
        cases += 1
    _report(8, "graded exponential truncation matches the series oracle to g=8",
            cases, started, budget=30.0)


def test_criterion_9_compact_type_rule():
    started = time.monotonic()
    cases = 0
    for g1 in range(0, 7):
        for g2 in range(0, 7 - g1):
            for n1 in range(0, 4):
                for n2 in range(0, 4):
                    n = n1 + n2
                    if n == 0:
                        continue
                    if 2 * g1 - 1 + n1 <= 0 or 2 * g2 - 1 + n2 <= 0:
                        continue
                    for base_first in (True, False):
                        if (base_first and n1 == 0) or (not base_first and n2 == 0):
                            continue
                        legs1 = (list(range(1, n1 + 1)) if base_first
                                 else list(range(n2 + 1, n + 1)))
                        legs2 = sorted(set(range(1, n + 1)) - set(legs1))
                        graph = DualGraph([("v1", g1, legs1), ("v2", g2, legs2)],
                                          [("v1", "v2")])
                        assert graph.validate() == []
                        m = compact_type_gm1_multidegree(graph)
                        assert sum(m.values()) == graph.g - 1
                        assert check_stability(graph, GM1, m, QSTABLE).ok
                        cases += 1
    assert cases >= 300
    _report(9, "two-vertex compact-type rule is q-stable of total degree g-1",
            cases, started, budget=30.0)
