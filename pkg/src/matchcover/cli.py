"""Command-line front end.

Exit codes: 0 computed/verified, 1 counterexample found, 2 usage or guard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds, covering, hyper, verify
from .matchings import GuardError, MatchingError, enumerate_pms, load_family

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    override_guards: bool = False
    output_format: str = "structured"
    out: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise UsageError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def parse_range(text: str) -> list[int]:
    """'5' -> [5]; '2-6' or '2:6' -> [2..6] inclusive."""
    for sep in ("-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            lo_i, hi_i = int(lo), int(hi)
            if lo_i > hi_i:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo_i, hi_i + 1))
    return [int(text)]


def frac(q: Fraction | None) -> str | None:
    return None if q is None else f"{q.numerator}/{q.denominator}"


def _pairs(n_values, x_text):
    for n in n_values:
        if n < 1:
            raise UsageError("n must be >= 1")
        xs = parse_range(x_text) if x_text else range(1, n + 1)
        for x in xs:
            if 1 <= x <= n:
                yield n, x
            elif x_text and len(n_values) == 1:
                raise UsageError(f"x={x} outside 1..{n}")


def _emit(cfg: RunConfig, doc: dict, rows: list[dict] | None = None) -> None:
    if cfg.output_format == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def bounds_row(n: int, x: int) -> dict:
    t1, t2, mk = bounds.thm1_bound(n, x), bounds.thm2_bound(n, x), bounds.main_k_bound(n, x)
    return {
        "n": n,
        "x": x,
        "thm1_exact": frac(t1.exact_value),
        "thm1_threshold": t1.integer_threshold,
        "thm1_vacuous": t1.vacuous,
        "thm2_exact": frac(t2.exact_value),
        "thm2_threshold": t2.integer_threshold,
        "thm2_vacuous": t2.vacuous,
        "w_count": bounds.w_count(n, x),
        "main_k": mk.integer_threshold,
        "main_vacuous": mk.vacuous,
    }


def cmd_bounds(cfg: RunConfig) -> int:
    rows = [bounds_row(n, x) for n, x in _pairs(parse_range(cfg.params["n"]), cfg.params.get("x"))]
    _emit(cfg, {"type": "bounds_table", "rows": rows}, rows)
    return EXIT_OK


def hyperbounds_row(t: int, n: int, x: int) -> dict:
    rep = hyper.conjecture_k_bound(t, n, x)
    return {
        "t": t,
        "n": n,
        "x": x,
        "N": hyper.N_value(t, n, x),
        "d_per_k": hyper.hyper_dependency_unit(t, n, x),
        "conjecture_k": rep.integer_threshold,
        "vacuous": rep.vacuous,
    }


def cmd_hyperbounds(cfg: RunConfig) -> int:
    t = cfg.params["t"]
    if t < 2:
        raise UsageError("t must be >= 2")
    rows = [hyperbounds_row(t, n, x) for n, x in _pairs(parse_range(cfg.params["n"]), cfg.params.get("x"))]
    _emit(cfg, {"type": "hyperbounds_table", "rows": rows}, rows)
    return EXIT_OK


def _single(cfg: RunConfig, name: str) -> int:
    value = cfg.params.get(name)
    if value is None:
        raise UsageError(f"--{name} is required")
    values = parse_range(str(value))
    if len(values) != 1:
        raise UsageError(f"--{name} must be a single value here")
    return values[0]


def _finish_report(cfg: RunConfig, report: verify.VerificationReport) -> int:
    if report.vacuous:
        print(
            f"warning: bound is vacuous (k={report.threshold}); nothing to verify",
            file=sys.stderr,
        )
    _emit(cfg, report.to_json())
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


def cmd_verify(cfg: RunConfig) -> int:
    n, x = _single(cfg, "n"), _single(cfg, "x")
    if not 1 <= x <= n:
        raise UsageError(f"need 1 <= x <= n, got n={n}, x={x}")
    report = verify.verify_theorem(
        cfg.params["theorem"],
        n,
        x,
        mode=cfg.params["mode"],
        samples=cfg.params["samples"],
        seed=cfg.seed,
        override=cfg.override_guards,
    )
    return _finish_report(cfg, report)


def _load(cfg: RunConfig):
    path = cfg.params.get("family")
    if not path:
        raise UsageError("--family is required")
    try:
        return load_family(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_oracle(cfg: RunConfig) -> int:
    family = _load(cfg)
    x = cfg.params.get("x")
    res = covering.min_max_agreement(family, cfg.override_guards)
    doc = {
        "type": "oracle_report",
        "n": family.n,
        "s": family.s,
        "min_max_agreement": res.value,
        "covering_radius": family.n - res.value if family.s else None,
    }
    witness = res.best
    if x is not None:
        x = int(x)
        if not 1 <= x <= family.n:
            raise UsageError(f"need 1 <= x <= n, got x={x}")
        doc["x"] = x
        if res.value > x - 1:
            witness = None
    doc["witness"] = witness.to_list() if witness is not None else "no witness"
    if witness is not None:
        from .matchings import agreement

        doc["agreements"] = [agreement(witness, m) for m in family.members]
    _emit(cfg, doc)
    return EXIT_OK


def cmd_ftable(cfg: RunConfig) -> int:
    n_max = _single(cfg, "n")
    n_min = cfg.params.get("n_min", 1)
    if n_max > covering.F_EXACT_GUARD_N and not cfg.override_guards:
        raise GuardError(f"ftable beyond n={covering.F_EXACT_GUARD_N} needs --override-guards")
    if not 1 <= n_min <= n_max:
        raise UsageError(f"need 1 <= n-min <= n, got {n_min} and {n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        for x in range(1, n + 1):
            f = covering.f_exact(n, x, cfg.override_guards)
            b1 = bounds.thm1_bound(n, x)
            t2 = bounds.thm2_bound(n, x).integer_threshold
            rows.append(
                {
                    "n": n,
                    "x": x,
                    "f": f,
                    "thm1": b1.integer_threshold,
                    "thm1_strict": b1.strict_threshold,
                    "thm2": t2,
                    "bound_exceeds_f": max(b1.integer_threshold, t2) > f,
                }
            )
    _emit(cfg, {"type": "f_table", "rows": rows}, rows)
    return EXIT_COUNTEREXAMPLE if any(r["bound_exceeds_f"] for r in rows) else EXIT_OK


def cmd_claimcheck(cfg: RunConfig) -> int:
    n, x = _single(cfg, "n"), _single(cfg, "x")
    if not 1 <= x <= n:
        raise UsageError(f"need 1 <= x <= n, got n={n}, x={x}")
    claim = verify.verify_counting_claim(n, x, cfg.params["samples"], cfg.seed, cfg.override_guards)
    partition = verify.verify_partition(n, x, cfg.override_guards)
    doc = {"type": "claimcheck_report", "counting_claim": claim.to_json(), "partition": partition.to_json()}
    _emit(cfg, doc)
    return EXIT_OK if claim.passed and partition.passed else EXIT_COUNTEREXAMPLE


def cmd_conjecture(cfg: RunConfig) -> int:
    t, n, x = cfg.params["t"], _single(cfg, "n"), _single(cfg, "x")
    if t < 2 or not 1 <= x <= n:
        raise UsageError(f"need t >= 2 and 1 <= x <= n, got t={t}, n={n}, x={x}")
    report = verify.verify_conjecture(t, n, x, cfg.params["samples"], cfg.seed, cfg.override_guards)
    return _finish_report(cfg, report)


def cmd_enumerate(cfg: RunConfig) -> int:
    n = _single(cfg, "n")
    t = cfg.params["t"]
    if n < 1 or t < 1:
        raise UsageError("need n >= 1 and t >= 1")
    if t == 2:
        stream = (m.to_list() for m in enumerate_pms(n, cfg.override_guards))
    else:
        stream = (m.to_list() for m in hyper.enumerate_hpms(t, n, cfg.override_guards))
    out = open(cfg.out, "w") if cfg.out else sys.stdout
    try:
        for item in stream:
            out.write(json.dumps(item) + "\n")
    finally:
        if cfg.out:
            out.close()
    return EXIT_OK


def cmd_search(cfg: RunConfig) -> int:
    family = _load(cfg)
    x = _single(cfg, "x")
    if not 1 <= x <= family.n:
        raise UsageError(f"need 1 <= x <= n, got x={x}")
    res = covering.local_search(family, x, cfg.seed, cfg.params["restarts"], cfg.params["steps"])
    doc = {"type": "cover_result", "n": family.n, "x": x, "seed": cfg.seed}
    doc.update(res.to_json())
    _emit(cfg, doc)
    return EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds,
    "hyperbounds": cmd_hyperbounds,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "ftable": cmd_ftable,
    "claimcheck": cmd_claimcheck,
    "conjecture": cmd_conjecture,
    "enumerate": cmd_enumerate,
    "search": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matchcover", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["structured", "csv"], default="structured")
    common.add_argument("--override-guards", action="store_true")
    common.add_argument("--out")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="tabulate T1/T2/MAIN thresholds")
    p.add_argument("--n", required=True, help="n or range a-b")
    p.add_argument("--x", help="x or range a-b (default 1..n)")

    p = sub.add_parser("hyperbounds", parents=[common], help="tabulate the hypergraph k bound")
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--n", required=True)
    p.add_argument("--x")

    p = sub.add_parser("verify", parents=[common], help="verify a theorem on small families")
    p.add_argument("--theorem", choices=["T1", "T2", "MAIN"], required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("oracle", parents=[common], help="exact min-max agreement for a family file")
    p.add_argument("--family", required=True)
    p.add_argument("--x")

    p = sub.add_parser("ftable", parents=[common], help="exact f(n, x) for small n")
    p.add_argument("--n", default="3", help="largest n")
    p.add_argument("--n-min", type=int, default=1, help="smallest n")

    p = sub.add_parser("claimcheck", parents=[common], help="check the injection and partition claims")
    p.add_argument("--n", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--samples", type=int, default=100, help="number of random trials")

    p = sub.add_parser("conjecture", parents=[common], help="test the hypergraph conjecture")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("enumerate", parents=[common], help="stream canonical perfect matchings")
    p.add_argument("--n", required=True)
    p.add_argument("--t", type=int, default=2)

    p = sub.add_parser("search", parents=[common], help="local search on a family file")
    p.add_argument("--family", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--steps", type=int, default=1000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "seed", "format", "override_guards", "out")
    }
    try:
        cfg = RunConfig(args.command, params, args.seed, args.override_guards, args.format, args.out)
        return COMMANDS[args.command](cfg)
    except (UsageError, GuardError, MatchingError, ValueError) as exc:
        print(f"matchcover {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
