"""Command line entry point: ``stsurf <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__, census, chow, formulas, theta

log = logging.getLogger("stsurf")

COMMANDS = ("census", "verify-counts", "classes", "euler", "chow-derive",
            "theta-orbits", "theta-vanishing", "orbit-partition")
DEFAULT_CACHE = "cache"


def parse_range(text: Optional[str]) -> tuple[int, ...]:
    """``"7"``, ``"3-10"`` or ``"3,5,7"``."""
    if text is None:
        return ()
    out: list[int] = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(sorted(set(out)))


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: tuple[int, ...] = ()
    d: tuple[int, ...] = ()
    M: tuple[int, ...] = ()
    eps: Optional[int] = None
    stratum: tuple[str, ...] = ("H2", "H11")
    cache_dir: str = DEFAULT_CACHE
    format: str = "csv"
    threads: int = 1
    radius: Optional[int] = None
    seed: int = 0
    bound: int = census.DEFAULT_BOUND

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        for s in self.stratum:
            if s not in census.STRATA:
                raise ValueError(f"unknown stratum {s}")
        if any(n < 1 or n > self.bound for n in self.n):
            raise ValueError(f"n must lie in 1..{self.bound}")
        if self.command in ("census", "verify-counts", "orbit-partition") and not self.n:
            raise ValueError(f"{self.command} needs --n")
        if self.command in ("classes", "euler", "chow-derive", "theta-orbits", "theta-vanishing"):
            if not self.d:
                raise ValueError(f"{self.command} needs --d")
            if any(d < 3 for d in self.d):
                raise ValueError("d must be at least 3")
        if self.command == "chow-derive":
            if any(d % 2 == 0 for d in self.d):
                raise ValueError("chow-derive is implemented for odd d only")
            if not self.M:
                raise ValueError("chow-derive needs --M")
        if self.radius is not None and self.radius < 1:
            raise ValueError("radius must be positive")
        return self

    def recorded(self) -> dict:
        """The configuration written into outputs; the thread count does not affect results."""
        out = asdict(self)
        out.pop("threads")
        out["version"] = __version__
        return out


# output helpers

@dataclass
class Report:
    fields: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, *row) -> None:
        self.rows.append(list(row))


def _cell(x) -> str:
    return "" if x is None else str(x)


def render(report: Report, cfg: RunConfig) -> str:
    if cfg.format == "json":
        body = {"config": cfg.recorded(),
                "rows": [dict(zip(report.fields, map(_cell, r))) for r in report.rows],
                "notes": report.notes}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg.recorded(), sort_keys=True) + "\n")
    for note in report.notes:
        buf.write(f"# {note}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.fields)
    for r in report.rows:
        w.writerow([_cell(x) for x in r])
    return buf.getvalue()


def _spin(eps) -> str:
    return "" if eps is None else str(eps)


# commands

def cmd_census(cfg: RunConfig) -> tuple[Report, int]:
    rep = Report(["stratum", "n", "records", "reduced", "unreduced", "path"])
    for s in cfg.stratum:
        for n in cfg.n:
            recs = census.enumerate(n, s, threads=cfg.threads, bound=cfg.bound)
            path = census.write_census(recs, Path(cfg.cache_dir), s, n, cfg.recorded())
            red = sum(r.invariants.reduced for r in recs)
            rep.add(s, n, len(recs), red, len(recs) - red, path.name)
    return rep, 0


def _load_rows(cfg: RunConfig, stratum: str, n: int) -> list[dict]:
    rows = census.read_census(Path(cfg.cache_dir), stratum, n)
    if rows is None:
        log.info("no usable cache for %s n=%d; enumerating in memory", stratum, n)
        rows = [r.to_json() for r in census.enumerate(n, stratum, threads=cfg.threads,
                                                       orbits=False, bound=cfg.bound)]
    return rows


def cmd_verify(cfg: RunConfig) -> tuple[Report, int]:
    rows = []
    for s in cfg.stratum:
        for n in cfg.n:
            rows.extend(_load_rows(cfg, s, n))
    table = census.count(rows)
    checks = [("count", r) for r in census.verify(table)] + [("torsion-total", r) for r in census.kani_rows(table)]
    rep = Report(["check", "stratum", "d", "M", "epsilon", "census", "expected", "source", "match"])
    status = 0
    for kind, r in checks:
        rep.add(kind, r.stratum, r.d, r.M, _spin(r.epsilon), r.count, r.expected, r.source, r.match)
        if not r.match:
            if r.source == "conjecture":
                msg = f"warning: conjectural value differs for {r.stratum} d={r.d} M={r.M} eps={_spin(r.epsilon)}"
                rep.notes.append(msg)
                log.warning(msg)
            else:
                status = 1
                msg = f"mismatch: {r.stratum} d={r.d} M={r.M} eps={_spin(r.epsilon)} census={r.count} expected={r.expected}"
                rep.notes.append(msg)
                log.error(msg)
    for (s, n), t in sorted(table.totals.items()):
        rep.notes.append(f"{s} n={n}: {t.get('records', 0)} records, {t.get('reduced', 0)} reduced")
    return rep, status


def _m_range(cfg: RunConfig) -> tuple[int, ...]:
    return cfg.M or tuple(range(1, 6))


def cmd_classes(cfg: RunConfig) -> tuple[Report, int]:
    rep = Report(["curve", "d", "M", "epsilon", "lambda1", "lambda2", "euler", "count", "conjectural"])
    for d in cfg.d:
        for m in _m_range(cfg):
            for eps in formulas.valid_spins(d, m):
                c = formulas.class_T(d, m, eps)
                chi = formulas.euler_from_class(c, d)
                rep.add("T", d, m, _spin(eps), c.a, c.b, chi, formulas.count_from_euler(chi), c.conjectural)
        for eps in formulas.w_spins(d):
            c = formulas.class_W(d, eps)
            chi = formulas.euler_from_class(c, d)
            rep.add("W", d, "", eps, c.a, c.b, chi, formulas.count_from_euler(chi), False)
        for eps in (*formulas.p_spins(d), None):
            c = formulas.class_P(d, eps)
            rep.add("P", d, "", _spin(eps), c.a, c.b, formulas.euler_from_class(c, d), "", False)
    return rep, 0


def cmd_euler(cfg: RunConfig) -> tuple[Report, int]:
    """Euler characteristics from classes against the closed counts."""
    rep = Report(["curve", "d", "M", "epsilon", "euler", "count_from_euler", "count", "match"])
    status = 0
    for d in cfg.d:
        fam = [("T", m, eps, formulas.class_T(d, m, eps), formulas.count_t(d, m, eps))
               for m in _m_range(cfg) for eps in formulas.valid_spins(d, m)]
        fam += [("W", None, eps, formulas.class_W(d, eps), formulas.count_w(d, eps)) for eps in formulas.w_spins(d)]
        for name, m, eps, c, cnt in fam:
            chi = formulas.euler_from_class(c, d)
            got = formulas.count_from_euler(chi)
            rep.add(name, d, m, _spin(eps), chi, got, cnt, got == cnt)
            if got != cnt:
                status = 1
        for eps in formulas.p_spins(d):
            chi = formulas.euler_from_class(formulas.class_P(d, eps), d)
            shown = formulas.chi_P(d, eps)
            rep.add("P", d, "", eps, chi, "", shown, chi == shown)
            status |= chi != shown
    return rep, int(status)


def _fmt_base(b: chow.BaseClass) -> str:
    return f"{b.lam1}*lambda1 + {b.lam2}*lambda2 + {b.R1}*R1 + {b.R2}*R2"


def cmd_chow(cfg: RunConfig) -> tuple[Report, int]:
    rep = Report(["d", "M", "epsilon", "step", "value"])
    status = 0
    for d in cfg.d:
        for m in cfg.M:
            spins = formulas.valid_spins(d, m) if cfg.eps is None else (cfg.eps,)
            for eps in spins:
                if m % 2 == 0:
                    used = 2 * m
                else:
                    used = m if eps == 3 else 2 * m
                t = chow.o_terms(used, d)
                rep.add(d, m, _spin(eps), "torsion order used", used)
                rep.add(d, m, _spin(eps), "J_theta.J_dtheta.N_tor", _fmt_base(t.main))
                rep.add(d, m, _spin(eps), "B(theta).J_dtheta.N_tor", _fmt_base(t.theta_boundary))
                rep.add(d, m, _spin(eps), "N_tor.B(dtheta)", _fmt_base(t.dtheta_boundary))
                rep.add(d, m, _spin(eps), "B_m(N)", _fmt_base(t.torsion_boundary))
                o = t.total.to_divisor(d)
                rep.add(d, m, _spin(eps), "pushforward O", f"{o.a}*lambda1 + {o.b}*lambda2")
                got = chow.derive_T_class(d, m, eps)
                want = formulas.class_T(d, m, eps)
                rep.add(d, m, _spin(eps), "class T", f"{got.a}*lambda1 + {got.b}*lambda2")
                rep.add(d, m, _spin(eps), "matches closed form", got.same(want))
                if not got.same(want):
                    status = 1
    return rep, status


def cmd_theta_orbits(cfg: RunConfig) -> tuple[Report, int]:
    rep = Report(["d", "orbit", "size", "parity", "members", "claimed", "match"])
    status = 0
    for d in cfg.d:
        r = theta.orbit_report(d, samples=8, seed=cfg.seed)
        names = {s: name for name, s in r.claimed.items()}
        for i, o in enumerate(r.orbits):
            parity = {c.parity for c in o}
            rep.add(d, i, len(o), "/".join(sorted(parity)), " ".join(map(str, sorted(o))),
                    names.get(o, ""), o in names if parity == {"even"} else "")
        for msg in r.discrepancies:
            rep.notes.append(f"d={d}: {msg}")
        status |= not r.match
        if cfg.radius is not None or cfg.format == "json":
            rng = random.Random(cfg.seed)
            m = theta.random_element(d, rng, length=3)
            r1, r2 = theta.random_translation(d, rng)
            c = rng.choice(theta.ALL_CHARACTERISTICS)
            ratios = [theta.transformation_ratio(m, r1, r2, c, *theta.random_upper_point(rng), d) for _ in range(3)]
            spread = max(abs(x - ratios[0]) for x in ratios)
            rep.notes.append(f"d={d}: transformation spot check |ratio|={abs(ratios[0]):.12f} spread={spread:.2e}")
    return rep, int(status)


def cmd_theta_vanishing(cfg: RunConfig) -> tuple[Report, int]:
    kmax = cfg.radius or 2
    rep = Report(["d", "characteristic", "parity", "d*gamma1~", "gamma2~", "boundary", "k", "order"])
    for d in cfg.d:
        table = theta.base_change_table(d)
        for c in theta.ALL_CHARACTERISTICS:
            bc = table[c]
            for i in (1, 2):
                for kk in range(-kmax, kmax + 1):
                    rep.add(d, str(c), c.parity, bc.dg1, bc.g2t, i, kk, theta.vanishing_order(c, i, kk, d))
        for kk in range(-kmax, kmax + 1):
            tb, eta = theta.building_block_orders(d, kk)
            rep.notes.append(f"d={d} k={kk}: theta[1,1] order {tb}, eta order {eta}")
        if d % 2:
            b = theta.boundary_expansion_checks(d)
            rep.notes.append(f"d={d}: det1 leading q^{b.det1_leading[0]}, det2 leading q^{b.det2_leading[0]}, "
                             f"zero-section order {b.zero_section_order}, "
                             f"torsion orders {sorted(set(b.torsion_orders.values()))}, ok={b.ok}")
    return rep, 0


def cmd_orbit_partition(cfg: RunConfig) -> tuple[Report, int]:
    rep = Report(["stratum", "n", "orbit", "size", "reduced", "d", "M", "epsilon"])
    for s in cfg.stratum:
        for n in cfg.n:
            recs = census.enumerate(n, s, threads=cfg.threads, bound=cfg.bound)
            by_orbit: dict[str, list] = {}
            for r in recs:
                by_orbit.setdefault(r.orbit_id, []).append(r)
            for oid, members in sorted(by_orbit.items()):
                inv = {(m.invariants.reduced, m.invariants.d, m.invariants.M, m.invariants.epsilon) for m in members}
                if len(inv) != 1:
                    rep.notes.append(f"{s} n={n} orbit {oid}: invariants not constant")
                red, d, m, eps = inv.pop()
                rep.add(s, n, oid, len(members), red, d, m, eps)
    return rep, 0


HANDLERS = {
    "census": cmd_census,
    "verify-counts": cmd_verify,
    "classes": cmd_classes,
    "euler": cmd_euler,
    "chow-derive": cmd_chow,
    "theta-orbits": cmd_theta_orbits,
    "theta-vanishing": cmd_theta_vanishing,
    "orbit-partition": cmd_orbit_partition,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stsurf", description="Genus-2 square-tiled surface census and checks.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--n", help="number of squares: 7, 3-10 or 3,5,7")
        s.add_argument("--d", help="degree(s), same syntax as --n")
        s.add_argument("--M", help="torsion order(s), same syntax as --n")
        s.add_argument("--eps", type=int, help="spin")
        s.add_argument("--stratum", choices=["H2", "H11", "all"], default="all")
        s.add_argument("--cache-dir", default=None, help="defaults to $CACHE_DIR, then ./cache")
        s.add_argument("--format", choices=["csv", "json"], default="csv")
        s.add_argument("--threads", type=int, default=1)
        s.add_argument("--radius", type=int, default=None)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", help="write the report here instead of stdout")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cache = args.cache_dir or os.environ.get("CACHE_DIR") or DEFAULT_CACHE
    strata = ("H2", "H11") if args.stratum == "all" else (args.stratum,)
    return RunConfig(command=args.command, n=parse_range(args.n), d=parse_range(args.d),
                     M=parse_range(args.M), eps=args.eps, stratum=strata, cache_dir=cache,
                     format=args.format, threads=args.threads, radius=args.radius,
                     seed=args.seed).validate()


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        report, status = HANDLERS[cfg.command](cfg)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(report, cfg)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
