"""Divisor algebra on the compactified universal family over X_{d^2}.

Expressions are polynomials of degree at most three in the generators
``L1, L2`` (pulled-back Hodge classes), ``D1, D2`` (boundary) and ``N1, N2``
(zero sections). Triple products are pushed down to classes on the surface
written in ``lambda1, lambda2, R1, R2`` with ``R_i = (12/d) lambda_i``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Mapping

from . import formulas
from .formulas import DivisorClass

GENERATORS = ("L1", "L2", "D1", "D2", "N1", "N2")
MAX_DEGREE = 3

Monomial = tuple[str, ...]


def _mono(*gens: str) -> Monomial:
    for g in gens:
        if g not in GENERATORS:
            raise ValueError(f"unknown generator {g}")
    return tuple(sorted(gens, key=GENERATORS.index))


class ChowExpression:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Q] | None = None):
        clean: dict[Monomial, Q] = {}
        for m, c in (terms or {}).items():
            m = _mono(*m)
            c = Q(c)
            if len(m) > MAX_DEGREE:
                raise ValueError(f"degree {len(m)} exceeds the cap {MAX_DEGREE}")
            if c:
                clean[m] = clean.get(m, Q(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def gen(cls, name: str, coeff=1) -> "ChowExpression":
        return cls({(name,): Q(coeff)})

    @classmethod
    def one(cls) -> "ChowExpression":
        return cls({(): Q(1)})

    def __add__(self, other: "ChowExpression") -> "ChowExpression":
        out = defaultdict(Q, self.terms)
        for m, c in other.terms.items():
            out[m] += c
        return ChowExpression(out)

    def __neg__(self) -> "ChowExpression":
        return self.scale(-1)

    def __sub__(self, other: "ChowExpression") -> "ChowExpression":
        return self + (-other)

    def scale(self, k) -> "ChowExpression":
        return ChowExpression({m: Q(k) * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, ChowExpression):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return isinstance(other, ChowExpression) and self.terms == other.terms

    def degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    def coefficient(self, *gens: str) -> Q:
        return self.terms.get(_mono(*gens), Q(0))

    def substitute(self, name: str, value: "ChowExpression") -> "ChowExpression":
        out = ChowExpression()
        for m, c in self.terms.items():
            term = ChowExpression.one().scale(c)
            for g in m:
                term = term * (value if g == name else ChowExpression.gen(g))
            out = out + term
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), [GENERATORS.index(g) for g in m])):
            parts.append(f"{self.terms[m]}*{'*'.join(m) or '1'}")
        return " + ".join(parts)


def multiply(a: ChowExpression, b: ChowExpression) -> ChowExpression:
    out: dict[Monomial, Q] = defaultdict(Q)
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            out[_mono(*ma, *mb)] += ca * cb
    return ChowExpression(out)


@dataclass(frozen=True)
class BaseClass:
    lam1: Q = Q(0)
    lam2: Q = Q(0)
    R1: Q = Q(0)
    R2: Q = Q(0)

    def __add__(self, o: "BaseClass") -> "BaseClass":
        return BaseClass(self.lam1 + o.lam1, self.lam2 + o.lam2, self.R1 + o.R1, self.R2 + o.R2)

    def __sub__(self, o: "BaseClass") -> "BaseClass":
        return self + o.scale(-1)

    def scale(self, k) -> "BaseClass":
        k = Q(k)
        return BaseClass(k * self.lam1, k * self.lam2, k * self.R1, k * self.R2)

    def to_divisor(self, d: int) -> DivisorClass:
        r = Q(12, d)
        return DivisorClass(self.lam1 + r * self.R1, self.lam2 + r * self.R2)


def _push_monomial(m: Monomial, d: int) -> BaseClass:
    d2 = Q(d * d)
    table = {
        _mono("N1", "N2", "L1"): BaseClass(lam1=d2),
        _mono("N1", "N2", "L2"): BaseClass(lam2=d2),
        _mono("N1", "N2", "D1"): BaseClass(R1=d2),
        _mono("N1", "N2", "D2"): BaseClass(R2=d2),
        _mono("N1", "N1", "N2"): BaseClass(lam1=-d2),
        _mono("N1", "N2", "N2"): BaseClass(lam2=-d2),
    }
    return table.get(m, BaseClass())


def pushforward(e: ChowExpression, d: int) -> BaseClass:
    if e.degrees() - {3}:
        raise ValueError("pushforward needs a homogeneous expression of degree 3")
    out = BaseClass()
    for m, c in e.terms.items():
        out = out + _push_monomial(m, d).scale(c)
    return out


def jacobi_class(kappa: tuple, m: tuple, d: int) -> ChowExpression:
    """Divisor class of a Jacobi form of weight ``kappa`` and index ``m``."""
    k1, k2 = map(Q, kappa)
    m1, m2 = map(Q, m)
    return ChowExpression({("L1",): k1 + 2 * m1 / d, ("L2",): k2 + 2 * m2 / d,
                           ("N1",): 2 * m1 / d, ("N2",): 2 * m2 / d})


HALF = Q(1, 2)


def j_theta(d: int) -> ChowExpression:
    return jacobi_class((HALF, HALF), (HALF, HALF), d)


def j_dtheta(d: int) -> ChowExpression:
    return jacobi_class((HALF, 3 * HALF), (HALF, HALF), d)


def torsion_class(m: int, d: int) -> ChowExpression:
    """Class of the primitive m-torsion multisection in the first factor."""
    if m == 1:
        return ChowExpression.gen("N1")
    k = Q(formulas.delta(m), m)
    return (ChowExpression.gen("N1") + ChowExpression.gen("L1")).scale(k)


@dataclass(frozen=True)
class BoundaryCorrections:
    d: int

    @property
    def B_theta(self) -> ChowExpression:
        return (ChowExpression.gen("D1") + ChowExpression.gen("D2")).scale(Q(1, 8))

    def B_dtheta(self, c1_jtheta: ChowExpression) -> ChowExpression:
        return self.B_theta * c1_jtheta

    @staticmethod
    def B_mN(m: int) -> BaseClass:
        """Pushforward of the boundary part of the torsion intersection."""
        return BaseClass(R2=Q(1)) if m == 1 else BaseClass()


def boundary_corrections(d: int) -> BoundaryCorrections:
    return BoundaryCorrections(d)


@dataclass(frozen=True)
class OTerms:
    m: int
    d: int
    main: BaseClass
    theta_boundary: BaseClass
    dtheta_boundary: BaseClass
    torsion_boundary: BaseClass

    @property
    def total(self) -> BaseClass:
        return self.main - self.theta_boundary - self.dtheta_boundary - self.torsion_boundary


def o_terms(m: int, d: int) -> OTerms:
    """The four contributions to the pushed-forward origami locus for torsion order m."""
    if d % 2 == 0 or d < 3:
        raise ValueError("the derivation is implemented for odd d >= 3")
    bc = boundary_corrections(d)
    jt, jd, nt = j_theta(d), j_dtheta(d), torsion_class(m, d)
    return OTerms(
        m, d,
        main=pushforward(jt * jd * nt, d),
        theta_boundary=pushforward(bc.B_theta * jd * nt, d),
        dtheta_boundary=pushforward(nt * bc.B_dtheta(jt), d),
        torsion_boundary=bc.B_mN(m),
    )


def pushforward_O(m: int, d: int) -> DivisorClass:
    return o_terms(m, d).total.to_divisor(d)


def derive_T_class(d: int, M: int, eps=None) -> DivisorClass:
    """Class of the Teichmueller curve solved from the pushed-forward origami loci."""
    if d % 2 == 0 or d < 3:
        raise ValueError("the derivation is implemented for odd d >= 3")
    if M % 2 == 0:
        if eps not in (None, 0):
            raise ValueError("even torsion order carries no spin")
        return pushforward_O(2 * M, d).scale(HALF)
    if eps not in (1, 3):
        raise ValueError("odd d and odd M need spin 1 or 3")
    if M > 1:
        return pushforward_O(M if eps == 3 else 2 * M, d).scale(HALF)
    o = pushforward_O(1 if eps == 3 else 2, d)
    rest = formulas.class_W(d, eps).scale(3) + formulas.class_P(d, eps)
    return (o - rest).scale(HALF)
