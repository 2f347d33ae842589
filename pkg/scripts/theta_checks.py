"""Theta orbit decompositions, boundary expansions and a numeric sweep of the transformation law."""

import argparse
import random
from dataclasses import dataclass

from stsurf import theta


@dataclass(frozen=True)
class ThetaRun:
    degrees: tuple = (3, 4, 5, 6, 7, 9)
    samples: int = 40
    seed: int = 0
    # points whose sums cancel worse than this are redrawn
    max_condition: float = 1e5


def main(run: ThetaRun) -> int:
    rng = random.Random(run.seed)
    failures = 0
    for d in run.degrees:
        rep = theta.orbit_report(d, samples=10, seed=run.seed)
        sizes = sorted(len(o) for o in rep.orbits)
        line = f"d={d}: orbit sizes {sizes}, claimed sets match={rep.match}"
        if d % 2:
            b = theta.boundary_expansion_checks(d)
            line += f", boundary checks ok={b.ok}"
            failures += not b.ok
        worst, redrawn, done = 0.0, 0, 0
        while done < run.samples // len(run.degrees) + 1:
            m = theta.random_element(d, rng, length=3)
            r1, r2 = theta.random_translation(d, rng)
            c = rng.choice(theta.ALL_CHARACTERISTICS)
            a, ka = theta.transformation_check(m, r1, r2, c, *theta.random_upper_point(rng), d)
            b2, kb = theta.transformation_check(m, r1, r2, c, *theta.random_upper_point(rng), d)
            if max(ka, kb) > run.max_condition:
                redrawn += 1
                continue
            done += 1
            worst = max(worst, abs(abs(a) - 1), abs(a - b2))
        line += f", transformation residual {worst:.1e} ({redrawn} ill-conditioned draws skipped)"
        failures += not rep.match
        print(line)
    return int(failures > 0)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    raise SystemExit(main(ThetaRun(samples=a.samples, seed=a.seed)))
