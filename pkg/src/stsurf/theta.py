"""Theta characteristics and Hilbert theta functions for the order o_{d^2}.

Elements of K = Q + Q are pairs of Fractions. The order and its dual are

    o      = {(x', x'') in Z^2 : x' = x'' mod d}
    o^dual = {(x'/d, -x''/d) : (x', x'') in o}

and the group acting on theta characteristics consists of 2x2 matrices
``((a, b), (c, e))`` over K with ``a, e`` in o, ``b`` in sqrt(D) o, ``c`` in
o^dual and determinant one. Characteristics transform through the Siegel
embedding attached to ``B = ((1, 0), (1, d))``.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy

KElt = tuple[Q, Q]


def k(x, y=None) -> KElt:
    return (Q(x), Q(x if y is None else y))


def kmul(x: KElt, y: KElt) -> KElt:
    return (x[0] * y[0], x[1] * y[1])


def kadd(x: KElt, y: KElt) -> KElt:
    return (x[0] + y[0], x[1] + y[1])


def ksub(x: KElt, y: KElt) -> KElt:
    return (x[0] - y[0], x[1] - y[1])


def in_order(x: KElt, d: int) -> bool:
    return all(t.denominator == 1 for t in x) and (x[0] - x[1]) % d == 0


def in_sqrtD_order(x: KElt, d: int) -> bool:
    return all((t / d).denominator == 1 for t in x) and in_order((x[0] / d, -x[1] / d), d)


def in_dual(x: KElt, d: int) -> bool:
    return in_order((x[0] * d, -x[1] * d), d)


def order_basis(d: int) -> tuple[KElt, KElt]:
    return (k(1), k(d, 0))


def dual_basis(d: int) -> tuple[KElt, KElt]:
    return (k(Q(1, d), Q(-1, d)), k(1, 0))


def trace(x: KElt) -> Q:
    return x[0] + x[1]


# characteristics

@dataclass(frozen=True, order=True)
class ThetaCharacteristic:
    g1: tuple[int, int]
    g2: tuple[int, int]

    def __post_init__(self):
        for t in self.g1 + self.g2:
            if t not in (0, 1):
                raise ValueError("characteristic entries must be 0 or 1")

    @classmethod
    def reduce(cls, g1: Sequence[int], g2: Sequence[int]) -> "ThetaCharacteristic":
        return cls(tuple(int(t) % 2 for t in g1), tuple(int(t) % 2 for t in g2))

    @property
    def odd(self) -> bool:
        return (self.g1[0] * self.g2[0] + self.g1[1] * self.g2[1]) % 2 == 1

    @property
    def parity(self) -> str:
        return "odd" if self.odd else "even"

    def __str__(self) -> str:
        return f"[({self.g1[0]},{self.g1[1]}),({self.g2[0]},{self.g2[1]})]"


ALL_CHARACTERISTICS = tuple(
    ThetaCharacteristic(g[:2], g[2:]) for g in itertools.product((0, 1), repeat=4))
EVEN_CHARACTERISTICS = tuple(c for c in ALL_CHARACTERISTICS if not c.odd)
ODD_CHARACTERISTICS = tuple(c for c in ALL_CHARACTERISTICS if c.odd)


def tc(g1, g2) -> ThetaCharacteristic:
    return ThetaCharacteristic(tuple(g1), tuple(g2))


INVARIANT_ODD_D = tc((0, 1), (1, 0))


@dataclass(frozen=True)
class BaseChangedCharacteristic:
    dg1: tuple[int, int]  # d * gamma1 A
    g2t: tuple[int, int]  # gamma2 B^T


def base_matrices(d: int) -> tuple[np.ndarray, np.ndarray]:
    """``(B, A)`` with ``A = B^-1``, as object arrays of Fractions."""
    B = np.array([[Q(1), Q(0)], [Q(1), Q(d)]], dtype=object)
    A = np.array([[Q(1), Q(0)], [Q(-1, d), Q(1, d)]], dtype=object)
    return B, A


def base_change(c: ThetaCharacteristic, d: int) -> BaseChangedCharacteristic:
    B, A = base_matrices(d)
    g1t = np.array(c.g1, dtype=object) @ A
    g2t = np.array(c.g2, dtype=object) @ B.T
    return BaseChangedCharacteristic(tuple(int(d * t) for t in g1t), tuple(int(t) for t in g2t))


def base_change_table(d: int) -> dict[ThetaCharacteristic, BaseChangedCharacteristic]:
    return {c: base_change(c, d) for c in ALL_CHARACTERISTICS}


# the group

@dataclass(frozen=True)
class KMatrix:
    a: KElt
    b: KElt
    c: KElt
    e: KElt

    def __matmul__(self, o: "KMatrix") -> "KMatrix":
        return KMatrix(kadd(kmul(self.a, o.a), kmul(self.b, o.c)),
                       kadd(kmul(self.a, o.b), kmul(self.b, o.e)),
                       kadd(kmul(self.c, o.a), kmul(self.e, o.c)),
                       kadd(kmul(self.c, o.b), kmul(self.e, o.e)))

    @property
    def det(self) -> KElt:
        return ksub(kmul(self.a, self.e), kmul(self.b, self.c))

    def inverse(self) -> "KMatrix":
        if self.det != k(1):
            raise ValueError("matrix is not unimodular")
        neg = lambda x: (-x[0], -x[1])
        return KMatrix(self.e, neg(self.b), neg(self.c), self.a)

    def component(self, i: int) -> tuple[Q, Q, Q, Q]:
        return (self.a[i], self.b[i], self.c[i], self.e[i])


IDENTITY = KMatrix(k(1), k(0), k(0), k(1))


class NotInGroupError(ValueError):
    pass


def _pair(x1: KElt, y1: KElt, x2: KElt, y2: KElt) -> Q:
    return trace(ksub(kmul(x1, y2), kmul(x2, y1)))


def is_member(m: KMatrix, d: int) -> bool:
    """Entry-wise membership plus preservation of o^dual + o and of the trace pairing."""
    if not (in_order(m.a, d) and in_order(m.e, d) and in_sqrtD_order(m.b, d)
            and in_dual(m.c, d) and m.det == k(1)):
        return False
    basis = [(x, k(0)) for x in dual_basis(d)] + [(k(0), y) for y in order_basis(d)]
    images = []
    for x, y in basis:
        nx, ny = kadd(kmul(x, m.a), kmul(y, m.c)), kadd(kmul(x, m.b), kmul(y, m.e))
        if not (in_dual(nx, d) and in_order(ny, d)):
            return False
        images.append((nx, ny))
    for (p, pi), (q, qi) in itertools.combinations(zip(basis, images), 2):
        if _pair(*p, *q) != _pair(*pi, *qi):
            return False
    return True


def require_member(m: KMatrix, d: int) -> KMatrix:
    if not is_member(m, d):
        raise NotInGroupError(f"{m} does not preserve the polarized module for d={d}")
    return m


def generators(d: int) -> list[KMatrix]:
    """Elementary elements: unipotents over sqrt(D) o and o^dual, a Weyl element and -I."""
    gens = []
    for b in (k(d, -d), k(0, d * d), k(d * d, 0)):
        gens.append(KMatrix(k(1), b, k(0), k(1)))
    for c in (k(Q(1, d), Q(-1, d)), k(1, 0), k(0, 1)):
        gens.append(KMatrix(k(1), k(0), c, k(1)))
    gens.append(KMatrix(k(0), k(d, -d), k(Q(-1, d), Q(1, d)), k(0)))
    gens.append(KMatrix(k(-1), k(0), k(0), k(-1)))
    return [require_member(g, d) for g in gens]


def random_element(d: int, rng: random.Random, length: int = 6) -> KMatrix:
    gens = generators(d)
    gens = gens + [g.inverse() for g in gens]
    m = IDENTITY
    for _ in range(length):
        m = m @ rng.choice(gens)
    return require_member(m, d)


def siegel_embedding(m: KMatrix, d: int) -> np.ndarray:
    """4x4 integral symplectic matrix ``[[A a* B, A b* A^T], [B^T c* B, B^T e* A^T]]``."""
    B, A = base_matrices(d)
    diag = lambda x: np.array([[x[0], Q(0)], [Q(0), x[1]]], dtype=object)
    blocks = [[A @ diag(m.a) @ B, A @ diag(m.b) @ A.T],
              [B.T @ diag(m.c) @ B, B.T @ diag(m.e) @ A.T]]
    out = np.block(blocks)
    if any(Q(t).denominator != 1 for t in out.flat):
        raise NotInGroupError("Siegel image is not integral")
    out = out.astype(np.int64)
    J = np.block([[np.zeros((2, 2), np.int64), np.eye(2, dtype=np.int64)],
                  [-np.eye(2, dtype=np.int64), np.zeros((2, 2), np.int64)]])
    if not np.array_equal(out.T @ J @ out, J):
        raise NotInGroupError("Siegel image is not symplectic")
    return out


def characteristic_action(m: KMatrix, c: ThetaCharacteristic, d: int) -> ThetaCharacteristic:
    """Image of ``c`` under ``m``, reduced mod 2."""
    require_member(m, d)
    S = siegel_embedding(m, d)
    A, B, C, E = S[:2, :2], S[:2, 2:], S[2:, :2], S[2:, 2:]
    g1, g2 = np.array(c.g1), np.array(c.g2)
    n1 = E @ g1 - C @ g2 + np.diag(C @ E.T)
    n2 = -B @ g1 + A @ g2 + np.diag(A @ B.T)
    return ThetaCharacteristic.reduce(n1, n2)


@dataclass(frozen=True)
class OrbitReport:
    d: int
    orbits: tuple[frozenset, ...]
    claimed: dict
    discrepancies: tuple[str, ...]

    @property
    def match(self) -> bool:
        return not self.discrepancies


def claimed_orbits(d: int) -> dict[str, frozenset]:
    """Decomposition of the even characteristics asserted in closed form."""
    if d % 2:
        o3 = frozenset({INVARIANT_ODD_D})
        return {"O3": o3, "O1": frozenset(EVEN_CHARACTERISTICS) - o3}
    e0 = frozenset({tc((0, 0), (0, 0)), tc((1, 0), (0, 1)), tc((1, 0), (0, 0)), tc((0, 0), (0, 1))})
    e2 = frozenset({tc((1, 1), (0, 0)), tc((1, 1), (1, 1)), tc((0, 0), (1, 1)),
                    tc((0, 1), (1, 0)), tc((0, 1), (0, 0)), tc((0, 0), (1, 0))})
    return {"E0": e0, "E2": e2}


def orbit_decomposition(d: int, extra: Iterable[KMatrix] = ()) -> list[frozenset]:
    if d < 3:
        raise ValueError("d must be at least 3")
    gens = generators(d) + [require_member(g, d) for g in extra]
    perms = [{c: characteristic_action(g, c, d) for c in ALL_CHARACTERISTICS} for g in gens]
    seen: set = set()
    out = []
    for c in ALL_CHARACTERISTICS:
        if c in seen:
            continue
        orb = {c}
        todo = [c]
        while todo:
            x = todo.pop()
            for p in perms:
                y = p[x]
                if y not in orb:
                    orb.add(y)
                    todo.append(y)
        seen |= orb
        out.append(frozenset(orb))
    return out


def orbit_report(d: int, samples: int = 0, seed: int = 0) -> OrbitReport:
    rng = random.Random(seed)
    extra = [random_element(d, rng) for _ in range(samples)]
    orbits = orbit_decomposition(d, extra)
    claimed = claimed_orbits(d)
    problems = []
    for name, s in claimed.items():
        covering = [o for o in orbits if o & s]
        if any(not o <= s for o in covering):
            problems.append(f"{name} is not a union of orbits")
        elif len(covering) > 1:
            problems.append(f"{name} splits into {len(covering)} orbits")
    return OrbitReport(d, tuple(sorted(orbits, key=lambda o: (len(o), min(o)))), claimed, tuple(problems))


# boundary vanishing orders

def _min_quadratic(a: Q, kk: Q) -> Q:
    """``min over s in Z`` of ``(s+a)^2/2 + k(s+a)``."""
    t = -kk - a
    lo = math.floor(t)
    return min(Q(1, 2) * (s + a) ** 2 + kk * (s + a) for s in (lo, lo + 1))


def vanishing_order(c: ThetaCharacteristic, i: int, kk: int, d: int) -> Q:
    """Order of the theta function along the k-th boundary line over the i-th cusp (i = 1, 2)."""
    if i not in (1, 2):
        raise ValueError("boundary index is 1 or 2")
    a = Q(base_change(c, d).dg1[i - 1], 2)
    return _min_quadratic(a, Q(kk))


def building_block_orders(d: int, kk: int) -> tuple[Q, Q]:
    """Orders of the one-variable theta with characteristic [1,1] and of eta along the same line."""
    a = Q(1, 2)
    t = -Q(kk) - a
    lo = math.floor(t)
    theta = min(Q(d, 2) * (x + a) ** 2 + kk * d * (x + a) for x in (lo, lo + 1))
    return theta, Q(d, 24)


# numeric theta functions

def _e(x):
    return cmath.exp(2j * cmath.pi * x)


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    tail_bound: float
    radius: tuple[int, int]
    mass: float = math.nan  # sum of |terms|; mass/|value| measures cancellation

    @property
    def condition(self) -> float:
        return self.mass / abs(self.value) if self.value else math.inf


def _gauss_tail(y: float, w: float, r: float, step: float) -> float:
    """Bound for sum over |x - c| >= r of exp(-pi y x^2 - 2 pi x w) on a grid of spacing ``step``."""
    if r <= 0:
        return math.inf
    head = -math.pi * y * r * r + math.pi * w * w / y
    return 2.0 * math.exp(head) / (1.0 - math.exp(-2.0 * math.pi * y * r * step))


def _gauss_total(y: float, w: float, step: float) -> float:
    """Bound for the full one-dimensional sum."""
    return 2.0 * math.exp(math.pi * w * w / y) * (1.0 + 1.0 / (step * math.sqrt(y)))


def theta_series(c: ThetaCharacteristic, z: Sequence[complex], u: Sequence[complex], d: int,
                 radius=None, tol: float = 1e-12, rtol: Optional[float] = None) -> ThetaValue:
    """Hilbert theta function as a lattice sum over o^dual + gamma1~/2.

    Lattice points are kept within ``radius[i]`` steps of 1/d of the Gaussian
    centre in coordinate i. Without ``radius`` the radii are grown until the
    rigorous tail bound is at most ``tol``, and also at most ``rtol * |value|``
    when ``rtol`` is given.
    """
    y = [complex(t).imag for t in z]
    if min(y) <= 0:
        raise ValueError("theta series needs Im z_i > 0")
    w = [complex(t).imag for t in u]
    bc = base_change(c, d)
    a = [float(Q(t, 2)) for t in bc.dg1]   # d * gamma1~ / 2
    h = [float(Q(t, 2)) for t in bc.g2t]   # gamma2~ / 2
    centre = [-w[i] / y[i] * d - a[i] for i in range(2)]
    step = 1.0 / d
    full = [_gauss_total(y[i], w[i], step) for i in range(2)]

    def bound(R) -> float:
        return sum(_gauss_tail(y[i], w[i], R[i] / d, step) * full[1 - i] for i in range(2))

    def radii(target: float) -> list[int]:
        R = [d, d]
        for i in range(2):
            while _gauss_tail(y[i], w[i], R[i] / d, step) * full[1 - i] > target / 2:
                R[i] += d
                if R[i] > 10**6:
                    raise ValueError("theta series does not converge fast enough here")
        return R

    def evaluate(R) -> tuple[complex, float]:
        s1 = np.arange(math.floor(centre[0]) - R[0], math.ceil(centre[0]) + R[0] + 1)
        s2 = np.arange(math.floor(centre[1]) - R[1], math.ceil(centre[1]) + R[1] + 1)
        S1, S2 = np.meshgrid(s1, s2, indexing="ij")
        mask = (S1 + S2) % d == 0
        x1 = (S1[mask] + a[0]) / d
        x2 = (S2[mask] + a[1]) / d
        phase = (0.5 * (x1 * x1 * complex(z[0]) + x2 * x2 * complex(z[1]))
                 + x1 * (complex(u[0]) + h[0]) + x2 * (complex(u[1]) + h[1]))
        terms = np.exp(2j * np.pi * phase)
        return complex(terms.sum()), float(np.abs(terms).sum())

    if radius is not None:
        R = [radius, radius] if isinstance(radius, int) else list(radius)
        val, mass = evaluate(R)
        return ThetaValue(val, bound(R), tuple(R), mass)
    R = radii(tol)
    val, mass = evaluate(R)
    if rtol is not None:
        for _ in range(8):
            if bound(R) <= rtol * abs(val) or abs(val) == 0:
                break
            R = radii(min(tol, rtol * abs(val)))
            val, mass = evaluate(R)
    return ThetaValue(val, bound(R), tuple(R), mass)


def siegel_theta(c: ThetaCharacteristic, Z: np.ndarray, U: Sequence[complex], radius: int) -> complex:
    """Genus-2 theta with characteristic, summed over the box |n_i| <= radius."""
    g1 = np.array(c.g1) / 2
    g2 = np.array(c.g2) / 2
    r = np.arange(-radius, radius + 1)
    N1, N2 = np.meshgrid(r, r, indexing="ij")
    n = np.stack([N1.ravel(), N2.ravel()], axis=1) + g1
    quad = np.einsum("ki,ij,kj->k", n, Z, n)
    lin = n @ (np.asarray(U, complex) + g2)
    return complex(np.exp(2j * np.pi * (0.5 * quad + lin)).sum())


def siegel_point(z: Sequence[complex], u: Sequence[complex], d: int) -> tuple[np.ndarray, np.ndarray]:
    """``(A z* A^T, A u)``: the period matrix and vector seen by the Siegel theta."""
    _, A = base_matrices(d)
    Af = A.astype(float)
    return Af @ np.diag(np.asarray(z, complex)) @ Af.T, Af @ np.asarray(u, complex)


def _kc(x: KElt) -> np.ndarray:
    return np.array([float(x[0]), float(x[1])])


def transformation_ratio(m: KMatrix, r1: KElt, r2: KElt, c: ThetaCharacteristic,
                         z: Sequence[complex], u: Sequence[complex], d: int) -> complex:
    """Quotient of the two sides of the theta transformation law, multiplier omitted.

    It must be a unit complex number that does not depend on ``(z, u)``.
    """
    return transformation_check(m, r1, r2, c, z, u, d)[0]


def transformation_check(m: KMatrix, r1: KElt, r2: KElt, c: ThetaCharacteristic,
                         z: Sequence[complex], u: Sequence[complex], d: int) -> tuple[complex, float]:
    """The ratio together with the worse cancellation condition of the two sums.

    Float error in the ratio is roughly ``condition * 1e-16``.
    """
    require_member(m, d)
    if not (in_dual(r1, d) and in_order(r2, d)):
        raise NotInGroupError("translation must lie in o^dual + o")
    z = np.asarray(z, complex)
    u = np.asarray(u, complex)
    a, b, cc, e = _kc(m.a), _kc(m.b), _kc(m.c), _kc(m.e)
    R1, R2 = _kc(r1), _kc(r2)
    tl = theta_series(c, z, u, d, rtol=1e-13)
    lhs = tl.value
    up = u + z * R1 + R2
    j = cc * z + e
    zt = (a * z + b) / j
    ut = up / j
    ct = characteristic_action(m, c, d)
    tr = theta_series(ct, zt, ut, d, rtol=1e-13)
    rhs = tr.value
    rhs *= np.prod(1 / np.sqrt(j))
    rhs *= _e(0.5 * np.sum(R1 * R1 * z + 2 * R1 * u))
    rhs *= _e(-0.5 * np.sum(cc * up * up / j))
    return complex(lhs / rhs), max(tl.condition, tr.condition)


def random_upper_point(rng: random.Random, min_imag: float = 1.0, spread: float = 1.0):
    z = [complex(rng.uniform(-0.5, 0.5), min_imag + rng.uniform(0, spread)) for _ in range(2)]
    u = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3)) for _ in range(2)]
    return z, u


def random_translation(d: int, rng: random.Random) -> tuple[KElt, KElt]:
    (p1, p2), (o1, o2) = dual_basis(d), order_basis(d)
    i, j, s, t = (rng.randint(-1, 1) for _ in range(4))
    r1 = kadd(kmul(k(i), p1), kmul(k(j), p2))
    r2 = kadd(kmul(k(s), o1), kmul(k(t), o2))
    return r1, r2


# exact boundary expansions

@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> sympy.Poly:
    x = sympy.Symbol("x")
    return sympy.Poly(sympy.cyclotomic_poly(n, x), x, domain="QQ")


class Cyclo:
    """Exact element of a cyclotomic field: ``sum c_k e(phase_k)``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[Q, Q] = defaultdict(Q)
        for ph, cf in (terms or {}).items():
            clean[Q(ph) % 1] += Q(cf)
        self.terms = {p: v for p, v in clean.items() if v}

    @classmethod
    def root(cls, phase, coeff=1) -> "Cyclo":
        return cls({Q(phase): Q(coeff)})

    def __add__(self, o: "Cyclo") -> "Cyclo":
        t = defaultdict(Q, self.terms)
        for p, v in o.terms.items():
            t[p] += v
        return Cyclo(t)

    def __mul__(self, o):
        if not isinstance(o, Cyclo):
            return Cyclo({p: v * Q(o) for p, v in self.terms.items()})
        t: dict[Q, Q] = defaultdict(Q)
        for p, v in self.terms.items():
            for q, w in o.terms.items():
                t[(p + q) % 1] += v * w
        return Cyclo(t)

    __rmul__ = __mul__

    def __neg__(self) -> "Cyclo":
        return self * -1

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        n = math.lcm(*(p.denominator for p in self.terms))
        x = sympy.Symbol("x")
        poly = sympy.Poly(sum(sympy.Rational(v.numerator, v.denominator) * x ** int(p * n)
                              for p, v in self.terms.items()), x, domain="QQ")
        return poly.rem(_cyclotomic(n)).is_zero

    def __complex__(self) -> complex:
        return sum(float(v) * _e(float(p)) for p, v in self.terms.items())

    def __repr__(self) -> str:
        return " + ".join(f"{v}*e({p})" for p, v in sorted(self.terms.items())) or "0"


class ExponentSeries:
    """Finite formal sum ``sum coeff * q^a * zeta^b`` with rational exponents.

    ``complete_to`` records the q-exponent up to which every term is present.
    """

    __slots__ = ("terms", "complete_to")

    def __init__(self, terms=None, complete_to: Q = Q(0)):
        t: dict[tuple[Q, Q], Cyclo] = {}
        for key, cf in (terms or {}).items():
            t[key] = t[key] + cf if key in t else cf
        self.terms = {kk: v for kk, v in t.items() if v.terms}
        self.complete_to = Q(complete_to)

    def __add__(self, o: "ExponentSeries") -> "ExponentSeries":
        t = dict(self.terms)
        for kk, v in o.terms.items():
            t[kk] = t[kk] + v if kk in t else v
        return ExponentSeries(t, min(self.complete_to, o.complete_to))

    def __sub__(self, o: "ExponentSeries") -> "ExponentSeries":
        return self + o.scale(-1)

    def scale(self, x) -> "ExponentSeries":
        if isinstance(x, Cyclo):
            return ExponentSeries({kk: v * x for kk, v in self.terms.items()}, self.complete_to)
        return ExponentSeries({kk: v * Q(x) for kk, v in self.terms.items()}, self.complete_to)

    def shift(self, qa=0, zb=0) -> "ExponentSeries":
        return ExponentSeries({(a + qa, b + zb): v for (a, b), v in self.terms.items()},
                              self.complete_to + qa)

    def min_q(self) -> Q:
        return min(a for a, _ in self.terms) if self.terms else self.complete_to

    def __mul__(self, o: "ExponentSeries") -> "ExponentSeries":
        lo_s, lo_o = self.min_q(), o.min_q()
        upto = min(self.complete_to + lo_o, o.complete_to + lo_s)
        t: dict = {}
        for (a, b), v in self.terms.items():
            for (c, e), w in o.terms.items():
                if a + c > upto:
                    continue
                key = (a + c, b + e)
                t[key] = t[key] + v * w if key in t else v * w
        return ExponentSeries(t, upto)

    def zeta_derivative(self) -> "ExponentSeries":
        """``zeta d/dzeta``; proportional to the derivative in the elliptic variable."""
        return ExponentSeries({(a, b): v * b for (a, b), v in self.terms.items()}, self.complete_to)

    def coefficient(self, qa) -> dict[Q, Cyclo]:
        qa = Q(qa)
        return {b: v for (a, b), v in self.terms.items() if a == qa}

    def leading(self) -> Optional[tuple[Q, dict[Q, Cyclo]]]:
        """Smallest q-exponent with a nonzero coefficient, within the complete range."""
        for a in sorted({a for a, _ in self.terms}):
            if a > self.complete_to:
                break
            cf = {b: v for b, v in self.coefficient(a).items() if not v.is_zero()}
            if cf:
                return a, cf
        return None

    def vanishes(self) -> bool:
        """True when every coefficient in the complete range is zero."""
        return self.leading() is None


def theta1(i: int, d: int, upto: Q) -> ExponentSeries:
    """``sum_{s = -i (d)} q^{(s-1/2)^2/2} zeta^{s-1/2} e((s+i)/(2d))`` in the first factor."""
    out = {}
    r = math.isqrt(int(2 * upto) + 1) + 2
    for s in range(-r - d, r + d + 1):
        if (s + i) % d:
            continue
        x = s - Q(1, 2)
        a = x * x / 2
        if a <= upto:
            out[(a, x)] = Cyclo.root(Q(s + i, 2 * d))
    return ExponentSeries(out, upto)


def theta2(i: int, d: int, upto: Q) -> ExponentSeries:
    out = {}
    r = math.isqrt(int(2 * upto) + 1) + 2
    for s in range(-r - d, r + d + 1):
        if (s + i) % d:
            continue
        x = s + Q(1, 2)
        a = x * x / 2
        if a <= upto:
            out[(a, x)] = Cyclo.root(Q(s + i, 2 * d) + Q(2 * i - 1, 4 * d))
    return ExponentSeries(out, upto)


def torsion_substituted(i: int, d: int, t1: Q, t2: Q, upto: Q) -> ExponentSeries:
    """``theta1(i)`` restricted to ``zeta = q^t1 e(t2/d)``; a series in q alone."""
    t1, t2 = Q(t1), Q(t2)
    out: dict = {}
    span = math.isqrt(int(2 * (upto + t1 * t1)) + 1) + abs(math.ceil(t1)) + d + 2
    for s in range(-span, span + 1):
        if (s + i) % d:
            continue
        x = s - Q(1, 2)
        a = x * x / 2 + t1 * x
        if a <= upto:
            key = (a, Q(0))
            cf = Cyclo.root(Q(s + i, 2 * d) + t2 * x / d)
            out[key] = out[key] + cf if key in out else cf
    return ExponentSeries(out, upto)


def zero_section_lift(d: int) -> tuple[Q, Q]:
    """Torsion parameters at which the restricted series of index -1 vanishes identically."""
    return Q(d - 1, 2), Q(0)


@dataclass(frozen=True)
class TorsionDeterminant:
    """Coefficients of ``q2^0`` and ``q2^1`` of the determinant along a torsion section."""
    t: tuple[Q, Q]
    order0: ExponentSeries  # F_0 F_{-1}
    order1: ExponentSeries  # 2 F_0 F_{-2}

    @property
    def vanishing_order(self) -> Optional[int]:
        if not self.order0.vanishes():
            return 0
        if not self.order1.vanishes():
            return 1
        return None


def torsion_determinant(d: int, t1, t2, upto: Q = Q(12)) -> TorsionDeterminant:
    """Determinant of the (zeta2^0, zeta2^1) coefficients of theta and its derivative near the second cusp.

    To first order in q2 the two functions are ``F_-1 + z F_0 + q2 (F_-2 + z^3 F_1)``
    and ``-F_-1/2 + z F_0/2 + q2 (-3 F_-2/2 + 3 z^3 F_1/2)``, where ``F_j`` is the
    restricted first-factor series of index j.
    """
    f = {j: torsion_substituted(j, d, t1, t2, upto) for j in (-2, -1, 0)}
    return TorsionDeterminant((Q(t1), Q(t2)), f[0] * f[-1], (f[0] * f[-2]).scale(2))


@dataclass(frozen=True)
class BoundaryReport:
    d: int
    theta2_leading: dict[int, tuple[Q, dict]]
    det1_leading: Optional[tuple[Q, dict]]
    det2_leading: Optional[tuple[Q, dict]]
    zero_section_order: Optional[int]
    torsion_orders: dict[tuple[Q, Q], Optional[int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.det1_leading is not None and self.det2_leading is not None
                and self.zero_section_order == 1
                and all(v == 0 for v in self.torsion_orders.values()))


def boundary_expansion_checks(d: int, torsion: Iterable[int] = (2, 3), upto: Q = None) -> BoundaryReport:
    if d < 3 or d % 2 == 0:
        raise ValueError("boundary checks need odd d >= 3")
    upto = Q((2 * d + 3) ** 2, 8) if upto is None else Q(upto)
    t20, t21 = theta2(0, d, upto), theta2(1, d, upto)
    det1 = t20 * t21.zeta_derivative() - t21 * t20.zeta_derivative()
    t10, t11 = theta1(0, d, upto), theta1(1, d, upto)
    det2 = (t10 * t11).scale(Q(1, 2)) + (t11 * t10).scale(Q(1, 2))
    z1, z2 = zero_section_lift(d)
    zero = torsion_determinant(d, z1, z2)
    orders = {}
    for m in torsion:
        for a in range(m):
            for b in range(m):
                if math.gcd(math.gcd(a, b), m) != 1:
                    continue
                t = (z1 + Q(a, m), z2 + Q(b, m))
                orders[t] = torsion_determinant(d, *t).vanishing_order
    return BoundaryReport(d, {0: t20.leading(), 1: t21.leading()}, det1.leading(), det2.leading(),
                          zero.vanishing_order, orders)
