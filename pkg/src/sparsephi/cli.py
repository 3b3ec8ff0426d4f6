"""Command-line entry point: ``sparsephi <command> ...``.

Exit codes: 0 success, 1 domain or usage error, 2 resource/budget error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import cache, density, families, progressions, sieve, sparsely_totient, suites
from .arith import DEFAULT_MEMORY_BUDGET, euler_phi
from .errors import DomainError, Overflow64Error, ResourceError, TotientError, VerificationError
from .inverse_totient import inverse_phi
from .sieve import HorizonPolicy, safe_horizon

EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    fmt: str = "json"
    cache_dir: Path | None = None
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    policy: HorizonPolicy = HorizonPolicy.CONSERVATIVE_2M2

    def __post_init__(self):
        if self.memory_budget <= 0:
            raise UsageError(f"memory budget must be positive, got {self.memory_budget}")


# --- output ---------------------------------------------------------------


def _cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    return str(v)


def _rows(obj):
    return obj if isinstance(obj, list) else [obj]


def render(obj, fmt):
    if fmt == "json":
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)
    rows = _rows(obj)
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue().rstrip("\r\n")
    table = [cols] + [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
    return "\n".join("  ".join(x.ljust(wd) for x, wd in zip(line, widths)).rstrip() for line in table)


# --- commands -------------------------------------------------------------

SET_BUILDERS = {
    "naturals": lambda x, cfg: density.naturals_bitmap(x),
    "evens": lambda x, cfg: density.evens_bitmap(x),
    "primes": lambda x, cfg: density.primes_bitmap(x),
    "spikes": lambda x, cfg: density.spikes_bitmap(x),
    "totients": lambda x, cfg: density.totients_bitmap(x, cfg.policy, cfg.memory_budget),
    "n1": lambda x, cfg: density.n1_bitmap(x, cfg.policy, cfg.memory_budget),
    "n2": lambda x, cfg: density.n2_bitmap(x, cfg.policy, cfg.memory_budget),
    "n3": lambda x, cfg: density.n3_bitmap(x, cfg.memory_budget),
}


def cmd_phi(cfg):
    n = cfg.params["n"]
    return {"n": n, "phi": euler_phi(n)}


def cmd_invphi(cfg):
    return inverse_phi(cfg.params["m"]).to_dict()


def cmd_n1(cfg):
    m = cfg.params["m"]
    table = sparsely_totient.sieve_for(m, cfg.policy, cfg.memory_budget)
    return {"m": m, "n1": sparsely_totient.n1_of(m, table, cfg.policy), "horizon": safe_horizon(m, cfg.policy)}


def cmd_n2(cfg):
    m = cfg.params["m"]
    return {"m": m, "n2": inverse_phi(m).n2}


def cmd_n3(cfg):
    m = cfg.params["m"]
    return {"m": m, "n3": inverse_phi(m).n3}


def cmd_n1set(cfg):
    recs = sparsely_totient.n1_set_up_to(cfg.params["x"], cfg.policy, cfg.memory_budget)
    return [{"n": r.n, "phi": r.m, "horizon": r.horizon} for r in recs]


def cmd_family(cfg):
    p = cfg.params
    kind, args, method = p["kind"], p["args"], p.get("method")
    check_n1 = not p.get("no_n1", False)
    if len(args) != 2:
        raise UsageError(f"family {kind} takes exactly two integer parameters")
    a, b = args
    if kind == "kmax":
        cert = families.gen_k_max(a, b, method, check_n1)
    elif kind == "kmin":
        cert = families.gen_k_min(a, b, method)
    elif kind == "r":
        cert = families.gen_r(a, b, method, check_n1)
    else:
        cert = families.gen_fermat(a, b, method, check_n1)
    return cert.to_dict()


def cmd_density(cfg):
    p = cfg.params
    bitmap = SET_BUILDERS[p["set"]](p["range"], cfg)
    windows = density.tiling_windows(p["range"], p["window"])
    if not windows:
        raise DomainError(f"window {p['window']} is longer than the range {p['range']}")
    report = density.density_report(bitmap, windows, p.get("checkpoints") or ())
    if cfg.fmt == "csv":
        return report  # rendered by DensityReport.to_csv
    out = report.to_dict()
    w, d = density.banach_lower_bound(bitmap, p["range"], p["window"])
    out["sliding_max"] = {"start": w.start, "length": w.length, "density": str(d)}
    if cfg.fmt == "table":
        return [dict(x) for x in out["windows"]]
    return out


def cmd_progression(cfg):
    p = cfg.params
    members = SET_BUILDERS[p["set"]](p["range"], cfg).members().tolist()
    if cfg.command == "ap":
        rec = progressions.longest_ap(members)
    else:
        rec = progressions.longest_gp(members, allow_rational=p.get("rational", False))
    return rec.to_dict()


def cmd_verify(cfg):
    p = cfg.params
    kwargs = {"limit": p.get("max"), "seed": p.get("seed", 0)}
    results = suites.run(p["suite"], **kwargs)
    return [r.to_dict() for r in results]


def cmd_erdos_scan(cfg):
    p = cfg.params
    rows = []
    for v in progressions.erdos_scan(p["mmax"], p["pmax"]):
        row = {"m": v.m, "p": v.p, "preimage": list(v.preimage), "target": list(v.target), "verdict": v.verdict}
        if p.get("oracle"):
            row["oracle_agrees"] = progressions.erdos_scaling_test(v.m, v.p, oracle=True) == v
        rows.append(row)
    return rows


COMMANDS = {
    "phi": cmd_phi,
    "invphi": cmd_invphi,
    "n1": cmd_n1,
    "n2": cmd_n2,
    "n3": cmd_n3,
    "n1set": cmd_n1set,
    "family": cmd_family,
    "density": cmd_density,
    "ap": cmd_progression,
    "gp": cmd_progression,
    "verify": cmd_verify,
    "erdos-scan": cmd_erdos_scan,
}


# --- parsing --------------------------------------------------------------


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return v


def _common_options(parser, suppress):
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=["json", "csv", "table"], default=dflt("json"))
    parser.add_argument("--cache-dir", type=Path, default=dflt(None),
                        help=f"phi-table cache (default ${cache.ENV_VAR} or ~/.cache/sparsephi)")
    parser.add_argument("--no-cache", action="store_true", default=dflt(False))
    parser.add_argument("--memory-budget", type=_positive, default=dflt(DEFAULT_MEMORY_BUDGET), help="bytes")
    parser.add_argument("--horizon-policy", choices=[p.value for p in HorizonPolicy],
                        default=dflt(HorizonPolicy.CONSERVATIVE_2M2.value))


def build_parser():
    parser = _Parser(prog="sparsephi", description="Inverse totients, sparsely totient numbers and friends.")
    _common_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _common_options(sp, suppress=True)
        return sp

    add("phi", "Euler phi of N").add_argument("n", type=_positive)
    add("invphi", "all n with phi(n) = M").add_argument("m", type=_positive)
    add("n1", "largest x with phi(x) <= M").add_argument("m", type=_positive)
    add("n2", "largest preimage of M").add_argument("m", type=_positive)
    add("n3", "smallest preimage of M").add_argument("m", type=_positive)
    add("n1set", "sparsely totient numbers <= X").add_argument("x", type=_positive)

    sp = add("family", "certify a member of a parametric family")
    sp.add_argument("kind", choices=["kmax", "kmin", "r", "fermat"])
    sp.add_argument("args", type=_positive, nargs="+", metavar="PARAM")
    sp.add_argument("--method", choices=[families.ORACLE_SCAN, families.STRUCTURAL_INVPHI, families.SIEVE])
    sp.add_argument("--no-n1", action="store_true", help="skip the N1 membership check")

    sp = add("density", "window densities of a set")
    sp.add_argument("set", choices=sorted(SET_BUILDERS))
    sp.add_argument("--range", type=_positive, required=True)
    sp.add_argument("--window", type=_positive, required=True)
    sp.add_argument("--checkpoints", type=_positive, nargs="*")

    for name in ("ap", "gp"):
        sp = add(name, f"longest {'arithmetic' if name == 'ap' else 'geometric'} progression in a set")
        sp.add_argument("set", choices=sorted(SET_BUILDERS))
        sp.add_argument("--range", type=_positive, required=True)
        if name == "gp":
            sp.add_argument("--rational", action="store_true", help="allow non-integer ratios")

    sp = add("verify", "run a property suite")
    sp.add_argument("suite", choices=sorted(suites.SUITES) + ["all"])
    sp.add_argument("--max", type=_positive, help="override the suite's default range")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("erdos-scan", "phi^-1(m (p-1)) versus p phi^-1(m) over a grid")
    sp.add_argument("--mmax", type=_positive, required=True)
    sp.add_argument("--pmax", type=_positive, required=True)
    sp.add_argument("--oracle", action="store_true", help="cross-check every verdict by brute force")
    return parser


_GLOBAL = {"format", "cache_dir", "no_cache", "memory_budget", "horizon_policy", "command"}


def parse_config(argv):
    ns = vars(build_parser().parse_args(argv))
    cache_dir = None if ns["no_cache"] else (ns["cache_dir"] or cache.default_cache_dir())
    return RunConfig(
        command=ns["command"],
        params={k: v for k, v in ns.items() if k not in _GLOBAL},
        fmt=ns["format"],
        cache_dir=cache_dir,
        memory_budget=ns["memory_budget"],
        policy=HorizonPolicy(ns["horizon_policy"]),
    )


def _failed(result):
    if isinstance(result, list):
        return any(r.get("passed") is False or r.get("oracle_agrees") is False for r in result)
    return False


def run(cfg, out=None):
    out = out or sys.stdout
    sieve.use_cache(cfg.cache_dir)
    try:
        result = COMMANDS[cfg.command](cfg)
    finally:
        sieve.use_cache(None)
    text = result.to_csv().rstrip("\r\n") if isinstance(result, density.DensityReport) else render(result, cfg.fmt)
    out.write(text + "\n")
    if _failed(result):
        raise VerificationError(f"{cfg.command}: verification failed")


def main(argv=None):
    try:
        run(parse_config(sys.argv[1:] if argv is None else argv))
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ResourceError, Overflow64Error, MemoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (TotientError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
