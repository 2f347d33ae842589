"""Period lattices, hyperelliptic involution and the (d, M, spin) classification."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .origami import Origami, StratumSignature, compose, cycles, inverse, stratum

Vec = tuple[int, int]


@dataclass(frozen=True)
class Lattice2:
    """Finite-index sublattice of Z^2 with column basis ``(a, 0), (b, c)``."""

    basis: tuple[tuple[int, int], tuple[int, int]]

    @property
    def index(self) -> int:
        (a, _), (_, c) = self.basis
        return a * c

    def __contains__(self, w: Vec) -> bool:
        (a, b), (_, c) = self.basis
        x, y = w
        if y % c:
            return False
        return (x - (y // c) * b) % a == 0

    def order_of(self, w: Vec) -> int:
        """Order of ``w`` in Z^2 / self."""
        k = 1
        while (k * w[0], k * w[1]) not in self:
            k += 1
        return k


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def hnf(vectors: Iterable[Vec]) -> Lattice2:
    """Hermite normal form of the lattice spanned by ``vectors``."""
    vecs = [tuple(w) for w in vectors if w != (0, 0)]
    pivot: Vec = (0, 0)
    rest: list[int] = []
    for x, y in vecs:
        if y == 0:
            rest.append(x)
            continue
        px, py = pivot
        g, s, t = _ext_gcd(py, y)
        new = (s * px + t * x, g)
        # the complementary combination has zero second coordinate
        rest.append((y // g) * px - (py // g) * x)
        pivot = new
    a = 0
    for x in rest:
        a = gcd(a, x)
    if a == 0 or pivot[1] == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    b, c = pivot[0] % a, pivot[1]
    return Lattice2(((a, b), (0, c)))


Z2 = Lattice2(((1, 0), (0, 1)))


def potentials(o: Origami, root: int = 0) -> list[Vec]:
    """Developing-map positions of the bottom-left corners along a BFS spanning tree."""
    hi, vi = inverse(o.h), inverse(o.v)
    phi: list[Optional[Vec]] = [None] * o.n
    phi[root] = (0, 0)
    todo = deque([root])
    while todo:
        i = todo.popleft()
        x, y = phi[i]
        for j, p in ((o.h[i], (x + 1, y)), (o.v[i], (x, y + 1)),
                     (hi[i], (x - 1, y)), (vi[i], (x, y - 1))):
            if phi[j] is None:
                phi[j] = p
                todo.append(j)
    return phi  # type: ignore[return-value]


def _cycle_labels(o: Origami, phi: list[Vec]) -> list[Vec]:
    out = []
    for i in range(o.n):
        x, y = phi[i]
        hx, hy = phi[o.h[i]]
        vx, vy = phi[o.v[i]]
        out.append((x + 1 - hx, y - hy))
        out.append((x - vx, y + 1 - vy))
    return out


def absolute_period_lattice(o: Origami, root: int = 0) -> Lattice2:
    return hnf(_cycle_labels(o, potentials(o, root)))


def corner_cycles(o: Origami) -> list[tuple[int, ...]]:
    """Vertices as cycles of squares sharing a bottom-left corner."""
    kappa = compose(o.v, compose(o.h, compose(inverse(o.v), inverse(o.h))))
    return cycles(kappa)


def zero_positions(o: Origami, root: int = 0) -> list[Vec]:
    phi = potentials(o, root)
    return [phi[min(c)] for c in corner_cycles(o) if len(c) > 1]


def inter_zero_vectors(o: Origami, root: int = 0) -> list[Vec]:
    zs = zero_positions(o, root)
    return [(z[0] - zs[0][0], z[1] - zs[0][1]) for z in zs[1:]]


def relative_period_lattice(o: Origami, root: int = 0) -> Lattice2:
    phi = potentials(o, root)
    return hnf(_cycle_labels(o, phi) + inter_zero_vectors(o, root))


def _require_genus2(o: Origami) -> StratumSignature:
    sig = stratum(o)
    if sig.genus != 2:
        raise ValueError(f"expected a genus-2 surface, got genus {sig.genus}")
    return sig


def is_reduced(o: Origami) -> bool:
    _require_genus2(o)
    return relative_period_lattice(o) == Z2


class CyclicityError(AssertionError):
    pass


def torsion_order_and_degree(o: Origami) -> tuple[int, int]:
    """``(d, M)`` for a reduced genus-2 surface."""
    sig = _require_genus2(o)
    if not is_reduced(o):
        raise ValueError("surface is not reduced")
    lam = absolute_period_lattice(o)
    m = lam.index
    if o.n % m:
        raise CyclicityError(f"lattice index {m} does not divide n={o.n}")
    if sig.zero_orders == (1, 1):
        (w,) = inter_zero_vectors(o)
        if lam.order_of(w) != m:
            raise CyclicityError("Z^2/Lambda is not generated by the inter-zero vector")
    return o.n // m, m


@dataclass(frozen=True)
class Involution:
    sigma: tuple[int, ...]
    seed: int  # image of square 0


def _propagate(o: Origami, hi, vi, seed: int) -> Optional[tuple[int, ...]]:
    sig = [-1] * o.n
    sig[0] = seed
    todo = [0]
    while todo:
        i = todo.pop()
        s = sig[i]
        for j, t in ((o.h[i], hi[s]), (o.v[i], vi[s]), (hi[i], o.h[s]), (vi[i], o.v[s])):
            if sig[j] < 0:
                sig[j] = t
                todo.append(j)
            elif sig[j] != t:
                return None
    if sorted(sig) != list(range(o.n)):
        return None
    if any(sig[sig[i]] != i for i in range(o.n)):
        return None
    return tuple(sig)


@dataclass(frozen=True)
class WeierstrassPoint:
    kind: str  # "vertex" | "edge-midpoint" | "center"
    square: int
    position: tuple[Fraction, Fraction]


def _fixed_points(o: Origami, sigma, phi) -> list[WeierstrassPoint]:
    half = Fraction(1, 2)
    pts = []
    for i in range(o.n):
        x, y = phi[i]
        if sigma[i] == i:
            pts.append(WeierstrassPoint("center", i, (x + half, y + half)))
        if sigma[i] == o.h[i]:
            pts.append(WeierstrassPoint("edge-midpoint", i, (Fraction(x + 1), y + half)))
        if sigma[i] == o.v[i]:
            pts.append(WeierstrassPoint("edge-midpoint", i, (x + half, Fraction(y + 1))))
    vertex_of = {}
    cyc = corner_cycles(o)
    for k, c in enumerate(cyc):
        for i in c:
            vertex_of[i] = k
    for k, c in enumerate(cyc):
        i = c[0]
        # sigma sends the bottom-left corner of i to the top-right corner of sigma(i)
        image = vertex_of[o.v[o.h[sigma[i]]]]
        if image == k:
            rep = min(c)
            pts.append(WeierstrassPoint("vertex", rep, (Fraction(phi[rep][0]), Fraction(phi[rep][1]))))
    return pts


def involutions(o: Origami) -> list[Involution]:
    """All square-permuting isometries of derivative -I that are involutions."""
    hi, vi = inverse(o.h), inverse(o.v)
    out = []
    for seed in range(o.n):
        s = _propagate(o, hi, vi, seed)
        if s is not None:
            out.append(Involution(s, seed))
    return out


def hyperelliptic_involution(o: Origami) -> Involution:
    """The involution of derivative -I with six fixed points."""
    _require_genus2(o)
    phi = potentials(o)
    cands = [s for s in involutions(o) if len(_fixed_points(o, s.sigma, phi)) == 6]
    if len(cands) != 1:
        raise RuntimeError(f"found {len(cands)} candidate hyperelliptic involutions")
    return cands[0]


def weierstrass_points(o: Origami) -> list[WeierstrassPoint]:
    sigma = hyperelliptic_involution(o).sigma
    pts = _fixed_points(o, sigma, potentials(o))
    if len(pts) != 6:
        raise RuntimeError(f"expected 6 Weierstrass points, found {len(pts)}")
    return pts


def spin(o: Origami) -> int:
    return sum(p.kind == "vertex" for p in weierstrass_points(o))


@dataclass(frozen=True)
class SurfaceInvariants:
    stratum: StratumSignature
    reduced: bool
    d: Optional[int] = None
    M: Optional[int] = None
    epsilon: Optional[int] = None
    weierstrass: tuple[WeierstrassPoint, ...] = field(default=(), compare=False, repr=False)


def parity_allows(d: int, m: int, eps: int) -> bool:
    if m % 2 == 0:
        return eps == 0
    if d % 2:
        return eps in (1, 3)
    return eps in (0, 2)


def classify(o: Origami) -> SurfaceInvariants:
    sig = _require_genus2(o)
    if not is_reduced(o):
        return SurfaceInvariants(sig, False)
    d, m = torsion_order_and_degree(o)
    pts = tuple(weierstrass_points(o))
    eps = sum(p.kind == "vertex" for p in pts)
    return SurfaceInvariants(sig, True, d, m, eps, pts)
