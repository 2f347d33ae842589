"""Square-tiled surfaces as pairs of permutations.

Squares are labelled ``0..n-1``. ``h[i]`` is the square to the right of ``i``
and ``v[i]`` the square above it. Permutations are tuples acting on the left,
so ``compose(p, q)[i] == p[q[i]]``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """The permutation ``p o q`` (apply ``q`` first)."""
    return tuple(p[j] for j in q)


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def conjugate_perm(p: Sequence[int], s: Sequence[int]) -> Perm:
    """``s p s^-1``."""
    return compose(s, compose(p, inverse(s)))


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of ``p`` including fixed points, each starting at its least element."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def from_cycles(n: int, *cyc: Iterable[int]) -> Perm:
    """Build a permutation of ``range(n)`` from disjoint cycles."""
    img = list(range(n))
    for c in cyc:
        c = list(c)
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    if not is_permutation(img):
        raise ValueError("cycles are not disjoint")
    return tuple(img)


@dataclass(frozen=True)
class StratumSignature:
    zero_orders: tuple[int, ...]
    genus: int

    @property
    def tag(self) -> str:
        if self.genus == 2 and self.zero_orders == (2,):
            return "H2"
        if self.genus == 2 and self.zero_orders == (1, 1):
            return "H11"
        return "H(" + ",".join(map(str, self.zero_orders)) + ")"


@dataclass(frozen=True)
class Origami:
    h: Perm
    v: Perm

    def __post_init__(self):
        h, v = tuple(self.h), tuple(self.v)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)
        if len(h) != len(v) or not h:
            raise ValueError("h and v must be non-empty and of equal length")
        if not (is_permutation(h) and is_permutation(v)):
            raise ValueError("h and v must be permutations of range(n)")
        if not _transitive(h, v):
            raise ValueError("the pair (h, v) does not act transitively")

    @property
    def n(self) -> int:
        return len(self.h)

    def conjugate(self, s: Sequence[int]) -> "Origami":
        """Relabel squares by ``i -> s[i]``."""
        return Origami(conjugate_perm(self.h, s), conjugate_perm(self.v, s))


def _transitive(h: Perm, v: Perm) -> bool:
    n = len(h)
    seen = {0}
    todo = [0]
    hi, vi = inverse(h), inverse(v)
    while todo:
        x = todo.pop()
        for y in (h[x], v[x], hi[x], vi[x]):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == n


def commutator(o: Origami) -> Perm:
    """``h v h^-1 v^-1``."""
    return compose(o.h, compose(o.v, compose(inverse(o.h), inverse(o.v))))


def commutator_cycle_type(o: Origami) -> tuple[int, ...]:
    return cycle_type(commutator(o))


def stratum(o: Origami) -> StratumSignature:
    ct = commutator_cycle_type(o)
    twice = o.n - len(ct)
    genus = 1 + twice // 2
    return StratumSignature(tuple(sorted((l - 1 for l in ct if l > 1), reverse=True)), genus)


def _relabel_from(h: Perm, v: Perm, hi: Perm, vi: Perm, start: int) -> list[int]:
    n = len(h)
    lab = [-1] * n
    lab[start] = 0
    order = [start]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for y in (h[x], v[x], hi[x], vi[x]):
            if lab[y] < 0:
                lab[y] = len(order)
                order.append(y)
    return [lab[h[x]] for x in order] + [lab[v[x]] for x in order]


def canonical_form(o: Origami) -> tuple[bytes, int]:
    """Canonical key and the number of start squares attaining it.

    The second value is the order of the translation automorphism group.
    """
    hi, vi = inverse(o.h), inverse(o.v)
    best = None
    hits = 0
    for s in range(o.n):
        enc = _relabel_from(o.h, o.v, hi, vi, s)
        if best is None or enc < best:
            best, hits = enc, 1
        elif enc == best:
            hits += 1
    return bytes(best), hits


def canonical_key(o: Origami) -> bytes:
    return canonical_form(o)[0]


def from_key(key: bytes) -> Origami:
    n = len(key) // 2
    return Origami(tuple(key[:n]), tuple(key[n:]))


def canonical(o: Origami) -> Origami:
    return from_key(canonical_key(o))


def sl2_action(o: Origami, g: str) -> Origami:
    """Generators of the affine action: ``T`` is the horizontal shear, ``S`` a quarter turn."""
    if g == "T":
        return Origami(o.h, compose(o.v, inverse(o.h)))
    if g == "S":
        return Origami(o.v, inverse(o.h))
    raise ValueError(f"unknown generator {g!r}")


def orbit_partition(census: Iterable[Origami]) -> dict[bytes, str]:
    """Map each canonical key to its orbit id (hex of the least key in the orbit)."""
    keys = {canonical_key(o): o for o in census}
    orbit_of: dict[bytes, str] = {}
    for k0 in sorted(keys):
        if k0 in orbit_of:
            continue
        members = {k0}
        todo = deque([k0])
        while todo:
            k = todo.popleft()
            o = from_key(k)
            for g in "ST":
                k2 = canonical_key(sl2_action(o, g))
                if k2 not in keys:
                    raise ValueError("census is not closed under the SL2(Z) action")
                if k2 not in members:
                    members.add(k2)
                    todo.append(k2)
        oid = min(members).hex()
        for k in members:
            orbit_of[k] = oid
    return orbit_of


def orbit_sizes(orbit_of: dict[bytes, str]) -> dict[str, int]:
    return dict(sorted(Counter(orbit_of.values()).items()))
