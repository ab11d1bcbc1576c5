"""Exact divisor classes on the moduli of stable n-marked genus-g curves.

Classes live in the rational span of psi_1..psi_n, lambda1, kappa1t (the
pushed-forward square of the relative canonical class), delta_irr and the
separating boundary divisors delta_{h,A}.  Boundary indices are kept in a
canonical form under the identification delta_{h,A} = delta_{g-h,A^c}:
either 2h < g, or 2h = g and marking 1 lies in A.  The conventions
delta_{0,{i}} = -psi_i (and its mirror) are applied before validity checks.

An index is a genuine boundary divisor here exactly when
2 <= h + |A| <= g + n - 2, read through the identification; note this range
excludes the classes of shape delta_{1,empty} on purpose, matching the ranges
of all the closed formulas below.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import JacstabError

Legs = tuple[int, ...]


def _check_gn(g: int, n: int) -> None:
    if g < 1 or n < 1 or 2 * g - 2 + n <= 0:
        raise JacstabError("BAD_INPUT", f"divisor classes need g >= 1, n >= 1, 2g-2+n > 0 (got g={g}, n={n})")


def is_valid_index(g: int, n: int, h: int, A: Iterable[int]) -> bool:
    """Whether (h, A) names a boundary divisor in the working range.

    The bound 2 <= h+|A| <= g+n-2 is symmetric under (h,A) -> (g-h,A^c), so it
    can be tested on either representative.
    """
    size = h + len(tuple(A))
    return 2 <= size <= g + n - 2


def canonical_pair(g: int, n: int, h: int, A: Iterable[int]) -> tuple[int, Legs]:
    """Canonical representative of a boundary index under complementation."""
    legs = tuple(sorted(set(int(i) for i in A)))
    if any(i < 1 or i > n for i in legs):
        raise JacstabError("INVALID_INDEX", f"legs {legs} not within 1..{n}")
    if not 0 <= h <= g:
        raise JacstabError("INVALID_INDEX", f"h = {h} outside 0..{g}")
    if 2 * h > g or (2 * h == g and 1 not in legs):
        h = g - h
        legs = tuple(i for i in range(1, n + 1) if i not in legs)
    return h, legs


def canonical_indices(g: int, n: int) -> list[tuple[int, Legs]]:
    """All valid canonical boundary indices, sorted by (h, lex A)."""
    _check_gn(g, n)
    out = []
    for h in range(0, g // 2 + 1):
        for r in range(0, n + 1):
            for A in combinations(range(1, n + 1), r):
                if 2 * h == g and 1 not in A:
                    continue
                if is_valid_index(g, n, h, A):
                    out.append((h, A))
    out.sort()
    return out


class DivisorClass:
    """Immutable rational combination of tautological divisor classes."""

    __slots__ = ("g", "n", "psi", "lambda1", "kappa1t", "delta_irr", "delta")

    def __init__(self, g: int, n: int, psi=None, lambda1=0, kappa1t=0, delta_irr=0, delta=None):
        _check_gn(g, n)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "n", n)
        psi = {int(i): Fraction(c) for i, c in (psi or {}).items() if c}
        if any(i < 1 or i > n for i in psi):
            raise JacstabError("BAD_INPUT", "psi index outside 1..n")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "lambda1", Fraction(lambda1))
        object.__setattr__(self, "kappa1t", Fraction(kappa1t))
        object.__setattr__(self, "delta_irr", Fraction(delta_irr))
        object.__setattr__(self, "delta", {k: Fraction(c) for k, c in (delta or {}).items() if c})

    def __setattr__(self, *args):
        raise AttributeError("DivisorClass is immutable")

    # -- algebra ---------------------------------------------------------

    def _binary(self, other: "DivisorClass", sign: int) -> "DivisorClass":
        if (self.g, self.n) != (other.g, other.n):
            raise JacstabError("BAD_INPUT", "classes live on different moduli spaces")
        psi = dict(self.psi)
        for i, c in other.psi.items():
            psi[i] = psi.get(i, Fraction(0)) + sign * c
        delta = dict(self.delta)
        for k, c in other.delta.items():
            delta[k] = delta.get(k, Fraction(0)) + sign * c
        return DivisorClass(self.g, self.n, psi=psi,
                            lambda1=self.lambda1 + sign * other.lambda1,
                            kappa1t=self.kappa1t + sign * other.kappa1t,
                            delta_irr=self.delta_irr + sign * other.delta_irr,
                            delta=delta)

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def scale(self, c) -> "DivisorClass":
        c = Fraction(c)
        return DivisorClass(self.g, self.n,
                            psi={i: c * v for i, v in self.psi.items()},
                            lambda1=c * self.lambda1, kappa1t=c * self.kappa1t,
                            delta_irr=c * self.delta_irr,
                            delta={k: c * v for k, v in self.delta.items()})

    def __eq__(self, other):
        return (isinstance(other, DivisorClass)
                and (self.g, self.n) == (other.g, other.n)
                and self.psi == other.psi and self.lambda1 == other.lambda1
                and self.kappa1t == other.kappa1t and self.delta_irr == other.delta_irr
                and self.delta == other.delta)

    def __hash__(self):
        return hash((self.g, self.n, tuple(sorted(self.psi.items())),
                     self.lambda1, self.kappa1t, self.delta_irr,
                     tuple(sorted(self.delta.items()))))

    def is_zero(self) -> bool:
        return (not self.psi and not self.delta and self.lambda1 == 0
                and self.kappa1t == 0 and self.delta_irr == 0)

    # -- presentation ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "psi": {str(i): str(self.psi[i]) for i in sorted(self.psi)},
            "lambda1": str(self.lambda1),
            "kappa1t": str(self.kappa1t),
            "delta_irr": str(self.delta_irr),
            "delta": [
                {"h": h, "A": list(A), "c": str(self.delta[(h, A)])}
                for (h, A) in sorted(self.delta)
            ],
        }

    def terms(self) -> list[tuple[str, Fraction]]:
        out: list[tuple[str, Fraction]] = []
        for i in sorted(self.psi):
            out.append((f"psi_{i}", self.psi[i]))
        if self.lambda1:
            out.append(("lambda1", self.lambda1))
        if self.kappa1t:
            out.append(("kappa1t", self.kappa1t))
        if self.delta_irr:
            out.append(("delta_irr", self.delta_irr))
        for (h, A) in sorted(self.delta):
            legs = ",".join(str(i) for i in A)
            out.append((f"delta_{{{h},{{{legs}}}}}", self.delta[(h, A)]))
        return out

    def text(self) -> str:
        parts = []
        for sym, c in self.terms():
            if c == 1:
                piece = sym
            elif c == -1:
                piece = f"-{sym}"
            else:
                piece = f"{c}*{sym}"
            if not parts:
                parts.append(piece)
            elif piece.startswith("-"):
                parts.append(f"- {piece[1:]}")
            else:
                parts.append(f"+ {piece}")
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"DivisorClass(g={self.g}, n={self.n}: {self.text()})"


def canonicalize(g: int, n: int, terms: Iterable[tuple]) -> DivisorClass:
    """Build a class from raw terms, applying the psi conventions and folding.

    Terms are tagged tuples: ("psi", i, c), ("lambda1", c), ("kappa1t", c),
    ("delta_irr", c), ("delta", h, A, c).  Boundary entries may use any
    representative, including the psi conventions (0,{i}) and (g,[n]-{i}).
    Indices that survive with a non-zero coefficient but fall outside the
    valid range are rejected.
    """
    _check_gn(g, n)
    psi: dict[int, Fraction] = {}
    delta: dict[tuple[int, Legs], Fraction] = {}
    lambda1 = kappa1t = delta_irr = Fraction(0)
    full = tuple(range(1, n + 1))
    for term in terms:
        tag = term[0]
        if tag == "psi":
            _, i, c = term
            psi[i] = psi.get(i, Fraction(0)) + Fraction(c)
        elif tag == "lambda1":
            lambda1 += Fraction(term[1])
        elif tag == "kappa1t":
            kappa1t += Fraction(term[1])
        elif tag == "delta_irr":
            delta_irr += Fraction(term[1])
        elif tag == "delta":
            _, h, A, c = term
            legs = tuple(sorted(set(int(i) for i in A)))
            c = Fraction(c)
            if h == 0 and len(legs) == 1:
                psi[legs[0]] = psi.get(legs[0], Fraction(0)) - c
            elif h == g and len(legs) == n - 1:
                (i,) = tuple(sorted(set(full) - set(legs)))
                psi[i] = psi.get(i, Fraction(0)) - c
            else:
                key = canonical_pair(g, n, h, legs)
                delta[key] = delta.get(key, Fraction(0)) + c
        else:
            raise JacstabError("BAD_INPUT", f"unknown term tag {tag!r}")
    for (h, A), c in delta.items():
        if c and not is_valid_index(g, n, h, A):
            raise JacstabError("INVALID_INDEX",
                               f"({h},{set(A) if A else '{}'}) is not a boundary divisor for g={g}, n={n}")
    return DivisorClass(g, n, psi=psi, lambda1=lambda1, kappa1t=kappa1t,
                        delta_irr=delta_irr, delta=delta)


# ----------------------------------------------------------------------
# closed-form pullback classes

def _check_tau_theta(g: int, n: int, tau: Sequence[int], k: int) -> list[int]:
    t = [int(x) for x in tau]
    if len(t) != n:
        raise JacstabError("BAD_INPUT", f"tau has {len(t)} entries, expected {n}")
    if sum(t) != k * (2 * g - 2):
        raise JacstabError("TAU_SUM", f"sum(tau) = {sum(t)}, expected k(2g-2) = {k * (2 * g - 2)}")
    if k == 0 and not any(t):
        raise JacstabError("TAU_SUM", "tau must be non-zero when k = 0")
    return t


def _check_tau_gm1(g: int, n: int, tau: Sequence[int]) -> list[int]:
    t = [int(x) for x in tau]
    if len(t) != n:
        raise JacstabError("BAD_INPUT", f"tau has {len(t)} entries, expected {n}")
    if sum(t) != g - 1:
        raise JacstabError("TAU_SUM", f"sum(tau) = {sum(t)}, expected g-1 = {g - 1}")
    return t


def theta_pullback_hain(g: int, n: int, tau: Sequence[int]) -> DivisorClass:
    """Compact-type theta pullback (the k = 0 case), by exhaustive enumeration.

    Sums -(1/4)(sum of tau over A)^2 over all ordered pairs (h, A) with
    1 <= h+|A| <= g+n-1, then canonicalizes: complementary pairs merge and the
    psi conventions apply.
    """
    _check_gn(g, n)
    t = _check_tau_theta(g, n, tau, 0)
    terms = []
    for h in range(0, g + 1):
        for r in range(0, n + 1):
            for A in combinations(range(1, n + 1), r):
                if not 1 <= h + r <= g + n - 1:
                    continue
                s = sum(t[i - 1] for i in A)
                if s:
                    terms.append(("delta", h, A, Fraction(-s * s, 4)))
    return canonicalize(g, n, terms)


def theta_pullback(g: int, n: int, tau: Sequence[int], k: int) -> DivisorClass:
    """Closed-form theta pullback for twist data (tau, k).

    One boundary term per canonical divisor class; at 2h = g the summand is
    counted once, not once per representative.
    """
    t = _check_tau_theta(g, n, tau, k)
    terms: list[tuple] = []
    for i, ti in enumerate(t, start=1):
        terms.append(("psi", i, Fraction(ti * ti, 2) + k * ti))
    terms.append(("kappa1t", Fraction(-k * k, 2)))
    for (h, A) in canonical_indices(g, n):
        c = k * (1 - 2 * h) + sum(t[i - 1] for i in A)
        terms.append(("delta", h, A, Fraction(-c * c, 2)))
    return canonicalize(g, n, terms)


def theta_gm1_pullback(g: int, n: int, tau: Sequence[int]) -> DivisorClass:
    """Degree g-1 theta pullback for a total-degree g-1 twist vector."""
    _check_gn(g, n)
    t = _check_tau_gm1(g, n, tau)
    terms: list[tuple] = [("lambda1", Fraction(-1))]
    for i, ti in enumerate(t, start=1):
        terms.append(("psi", i, Fraction(ti * (ti + 1), 2)))
    for (h, A) in canonical_indices(g, n):
        s = sum(t[i - 1] for i in A)
        terms.append(("delta", h, A, Fraction(-(s - h) * (s - h + 1), 2)))
    return canonicalize(g, n, terms)


def mueller_correction(g: int, n: int, tau: Sequence[int],
                       include_empty: bool = True) -> dict[tuple[int, Legs], int]:
    """Multiplicity correction terms for the effective-locus class.

    Enumerates pairs (h, A) with 0 <= 2h <= g in the valid range such that
    every tau_i with i in A is positive and h >= sum of tau over A; each
    contributes multiplicity h - that sum.  ``include_empty`` controls whether
    A = empty set qualifies (its positivity condition is vacuous).
    """
    t = _check_tau_gm1(g, n, tau)
    out: dict[tuple[int, Legs], int] = {}
    for h in range(0, g // 2 + 1):
        for r in range(0, n + 1):
            if r == 0 and not include_empty:
                continue
            for A in combinations(range(1, n + 1), r):
                if not is_valid_index(g, n, h, A):
                    continue
                if any(t[i - 1] <= 0 for i in A):
                    continue
                s = sum(t[i - 1] for i in A)
                if h < s:
                    continue
                if h - s:
                    key = canonical_pair(g, n, h, A)
                    out[key] = out.get(key, 0) + (h - s)
    return out


def mueller_class(g: int, n: int, tau: Sequence[int],
                  include_empty: bool = True) -> DivisorClass:
    """Class of the closure of the effective-bundle locus in degree g-1.

    The degree g-1 theta pullback minus the multiplicity corrections along the
    boundary components where the restricted bundle stays effective.  Requires
    at least one negative twist entry.
    """
    t = _check_tau_gm1(g, n, tau)
    if not any(x < 0 for x in t):
        raise JacstabError("NO_NEGATIVE_ENTRY", "at least one tau entry must be negative")
    base = theta_gm1_pullback(g, n, t)
    corr = mueller_correction(g, n, t, include_empty=include_empty)
    terms = [("delta", h, A, Fraction(-c)) for (h, A), c in corr.items()]
    return base + canonicalize(g, n, terms)
