"""Re-derive every Teichmueller curve class over a grid of odd degrees and compare with the closed forms."""

import argparse
from dataclasses import dataclass

from stsurf import chow, formulas


@dataclass(frozen=True)
class Grid:
    d_max: int = 21
    m_max: int = 8


def main(grid: Grid) -> int:
    bad = 0
    print("d,M,eps,lambda1,lambda2,euler,count,match")
    for d in range(3, grid.d_max + 1, 2):
        for m in range(1, grid.m_max + 1):
            for eps in formulas.valid_spins(d, m):
                got = chow.derive_T_class(d, m, eps)
                ok = got.same(formulas.class_T(d, m, eps))
                chi = formulas.euler_from_class(got, d)
                bad += not ok
                print(f"{d},{m},{'' if eps is None else eps},{got.a},{got.b},{chi},{formulas.count_from_euler(chi)},{ok}")
    return int(bad > 0)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--d-max", type=int, default=21)
    p.add_argument("--m-max", type=int, default=8)
    a = p.parse_args()
    raise SystemExit(main(Grid(a.d_max, a.m_max)))
