"""Closed formulas for counts, divisor classes and Euler characteristics.

Classes on the surface are written ``a*lambda1 + b*lambda2``. The only
intersection numbers needed are ``lambda1.lambda2 = delta(d)/144`` and
``lambda_i^2 = 0``; a Teichmueller curve meets the first Hodge class in minus
its Euler characteristic, whence ``chi = -b*delta(d)/144``.

Formulas for even ``d`` (other than the H(2) ones) are conjectural and are
returned with ``conjectural=True``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Optional

from sympy import primefactors


def delta(l: int) -> int:
    """Order of SL2(Z/l)."""
    if l < 1:
        raise ValueError("l must be positive")
    out = Q(l**3)
    for p in primefactors(l):
        out *= 1 - Q(1, p * p)
    return int(out)


def cusp_count(d: int) -> Q:
    _need_level(d)
    return Q(delta(d), 2 * d)


def genus_Xd(d: int) -> Q:
    _need_level(d)
    return 1 + Q(d - 6, 24 * d) * delta(d)


def chi_X(d: int) -> Q:
    return Q(delta(d), 72)


def _need_level(d: int) -> None:
    if d < 3:
        raise ValueError("level d must be at least 3")


@dataclass(frozen=True)
class DivisorClass:
    a: Q
    b: Q
    conjectural: bool = False

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a + other.a, self.b + other.b, self.conjectural or other.conjectural)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + other.scale(-1)

    def scale(self, k) -> "DivisorClass":
        return DivisorClass(k * self.a, k * self.b, self.conjectural)

    def same(self, other: "DivisorClass") -> bool:
        """Equality of the classes, ignoring the provenance flag."""
        return (self.a, self.b) == (other.a, other.b)


ZERO = DivisorClass(Q(0), Q(0))


def valid_spins(d: int, m: int) -> tuple[Optional[int], ...]:
    """Spin values allowed by the parity law (``None`` when M is even)."""
    if m % 2 == 0:
        return (None,)
    return (1, 3) if d % 2 else (0, 2)


def _check_spin(d: int, m: int, eps: Optional[int]) -> Optional[int]:
    if d < 2 or m < 1:
        raise ValueError("need d >= 2 and M >= 1")
    if m % 2 == 0:
        if eps not in (None, 0):
            raise ValueError("even torsion order carries no spin")
        return None
    if eps not in valid_spins(d, m):
        raise ValueError(f"spin {eps} not allowed for d={d}, M={m}")
    return eps


def _as_count(x: Q) -> Q:
    if x.denominator != 1 or x < 0:
        raise ArithmeticError(f"count formula produced {x}")
    return x


def count_t(d: int, m: int, eps: Optional[int] = None) -> Q:
    """Number of reduced H(1,1) square-tiled surfaces with invariants (d, M, eps)."""
    eps = _check_spin(d, m, eps)
    dd, dm = delta(d), Q(delta(m), m)
    if m % 2 == 0:
        return _as_count(Q(1, 6) * (d - 1) * dd * dm)
    if m > 1:
        k = {3: Q(1, 24), 1: Q(1, 8), 0: Q(1, 24), 2: Q(1, 8)}[eps]
        return _as_count(k * (d - 1) * dd * dm)
    if eps == 3:
        return _as_count(Q(1, 24) * (d - 3) * (d - 5) * Q(dd, d))
    if eps == 1:
        return _as_count(Q(1, 8) * (d - 1) * (d - 3) * Q(dd, d))
    if eps == 0:
        return _as_count(Q(1, 24) * (d - 2) * dd)
    return _as_count(Q(1, 8) * (d - 2) * (d - 4) * Q(dd, d))


def count_w(d: int, eps: int) -> Q:
    """Number of reduced H(2) square-tiled surfaces of degree d and spin eps."""
    dd = Q(delta(d), d)
    if d % 2:
        if eps == 3:
            return _as_count(Q(3, 16) * (d - 3) * dd)
        if eps == 1:
            return _as_count(Q(3, 16) * (d - 1) * dd)
    elif eps == 2:
        return _as_count(Q(3, 8) * (d - 2) * dd)
    raise ValueError(f"spin {eps} not allowed in H(2) for d={d}")


def w_spins(d: int) -> tuple[int, ...]:
    return (1, 3) if d % 2 else (2,)


def class_T(d: int, m: int, eps: Optional[int] = None) -> DivisorClass:
    eps = _check_spin(d, m, eps)
    dm = Q(delta(m), m)
    conj = d % 2 == 0
    # shape shared by all M > 1 cases
    base = DivisorClass(d * dm * (1 - Q(1, d)), d * dm * (2 - Q(2, d)), conj)
    if m % 2 == 0:
        return base.scale(2)
    if m > 1:
        k = {3: Q(1, 2), 1: Q(3, 2), 0: Q(1, 2), 2: Q(3, 2)}[eps]
        return base.scale(k)
    if eps == 3:
        f = Q((d - 3) * (d - 5), d)
        return DivisorClass(f / 2, f)
    if eps == 1:
        f = Q(3 * (d - 1) * (d - 3), d)
        return DivisorClass(f / 2, f)
    if eps == 0:
        return DivisorClass(Q(d - 2, 2), Q(d - 2), True)
    f = Q(3 * (d - 2) * (d - 4), d)
    return DivisorClass(f / 2, f, True)


def class_W(d: int, eps: int) -> DivisorClass:
    if d % 2:
        k = {3: 1 - Q(3, d), 1: 1 - Q(1, d)}.get(eps)
        if k is None:
            raise ValueError(f"spin {eps} not allowed for odd d")
        return DivisorClass(Q(3, 2) * k, Q(9, 2) * k)
    if eps != 2 or d <= 2:
        raise ValueError("even d needs spin 2 and d > 2")
    k = 1 - Q(2, d)
    return DivisorClass(3 * k, 9 * k)


def p_spins(d: int) -> tuple[int, ...]:
    return (1, 3) if d % 2 else (0, 2)


def class_P(d: int, eps: Optional[int] = None) -> DivisorClass:
    """Reducible locus: the total class for ``eps=None``, else its spin component."""
    if eps is None:
        k = 5 - Q(6, d)
    elif d % 2:
        k = {3: Q(1, 2) - Q(3, 2 * d), 1: Q(9, 2) - Q(9, 2 * d)}.get(eps)
    else:
        k = {0: 2 - Q(6, d), 2: Q(3)}.get(eps)
    if k is None:
        raise ValueError(f"spin {eps} not allowed for d={d}")
    return DivisorClass(k, k)


def chi_P(d: int, eps: Optional[int] = None) -> Q:
    """Euler characteristic of the open reducible locus as displayed in closed form."""
    dd = delta(d)
    if eps is None:
        return -Q(1, 144) * (5 * d - 6) * Q(dd, d)
    table = {3: -Q(1, 288) * (d - 3) * Q(dd, d),
             1: -Q(1, 32) * (d - 1) * Q(dd, d),
             0: -Q(1, 72) * (d - 3) * Q(dd, d),
             2: -Q(1, 48) * dd}
    if eps not in p_spins(d):
        raise ValueError(f"spin {eps} not allowed for d={d}")
    return table[eps]


def chi_T(d: int, m: int, eps: Optional[int] = None) -> Q:
    """Euler characteristic of the Teichmueller curve, in closed form (odd d)."""
    eps = _check_spin(d, m, eps)
    if d % 2 == 0:
        raise ValueError("closed form only for odd d")
    dd, dm = delta(d), Q(delta(m), m)
    if m % 2 == 0:
        # -count/6; the count itself is (d-1) dd dm / 6
        return -Q(1, 36) * (d - 1) * dd * dm
    if m > 1:
        return -(Q(1, 144) if eps == 3 else Q(1, 48)) * (d - 1) * dd * dm
    if eps == 3:
        return -Q(1, 144) * (d - 3) * (d - 5) * Q(dd, d)
    return -Q(1, 48) * (d - 1) * (d - 3) * Q(dd, d)


def euler_from_class(c: DivisorClass, d: int) -> Q:
    return -c.b * Q(delta(d), 144)


def count_from_euler(chi: Q) -> Q:
    return -6 * chi


def kani_ems_total(d: int, branch_type: str) -> Q:
    """Minimal degree-d covers of an elliptic curve branched over P + Q."""
    dd = delta(d)
    if branch_type == "distinct":
        return Q(1, 3) * (d - 1) * dd
    if branch_type == "equal":
        return (Q(d - 1, 6) - Q(7 * d - 6, 24 * d)) * dd
    raise ValueError("branch_type must be 'distinct' or 'equal'")


def torsion_total(d: int, m: int) -> Q:
    """Reduced H(1,1) surfaces with M >= 2, summed over spin."""
    if m < 2:
        raise ValueError("M must be at least 2")
    return kani_ems_total(d, "distinct") * Q(delta(m), 2 * m)
