"""Command line front end.

Exit codes: 0 success or match, 1 mathematical mismatch, 2 usage or schema
error.  Settings are resolved as flags > config file > defaults; the config
file is one JSON object whose keys are the long flag names with dashes
replaced by underscores (``--config`` or ``$K3KIT_CONFIG``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import git_cubic, git_net, lattice, nl_rank, schemas
from .arith import DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS
from .report import FORMATS, render, timestamp

log = logging.getLogger("k3kit")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
COMMANDS = ("rank", "heegner", "normal-form", "tables", "cubic-stability", "net-stability")

# settings that may come from the config file, with their defaults
DEFAULTS = {
    "format": "markdown",
    "precision_bits": DEFAULT_PRECISION_BITS,
    "search_bound": None,
    "jobs": None,
    "no_timestamp": False,
    "from": None,
    "to": None,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    format: str = "markdown"
    precision_bits: int = DEFAULT_PRECISION_BITS
    search_bound: int | None = None
    jobs: int = 1
    no_timestamp: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        if not isinstance(self.precision_bits, int) or self.precision_bits < MIN_PRECISION_BITS:
            raise UsageError(f"--precision-bits must be an integer >= {MIN_PRECISION_BITS}")
        if self.search_bound is not None and (not isinstance(self.search_bound, int)
                                              or self.search_bound < 1):
            raise UsageError("--search-bound must be a positive integer")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise UsageError("--jobs must be a positive integer")
        return self


def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{s!r} must be positive")
    return v


def _lambda6(s):
    try:
        a = tuple(int(x) for x in s.replace(" ", "").strip("()[]").split(","))
        git_net.OnePS5(a)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad lambda {s!r}: {e}") from None
    return a


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # defaults are None so that unset flags can fall through to the config file
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--precision-bits", type=int, default=None, metavar="N")
    common.add_argument("--search-bound", type=_positive_int, default=None, metavar="N")
    common.add_argument("--jobs", type=_positive_int, default=None, metavar="N")
    common.add_argument("--no-timestamp", action="store_const", const=True, default=None)
    common.add_argument("--config", metavar="PATH", default=None)

    p = _Parser(prog="k3kit", description="Arithmetic and GIT invariants of K3 moduli.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("rank", parents=[common], help="rank of the Heegner-divisor span for a range of l")
    r.add_argument("--from", dest="from_", type=_positive_int, default=None, metavar="L")
    r.add_argument("--to", type=_positive_int, default=None, metavar="L")

    h = sub.add_parser("heegner", parents=[common], help="Heegner label of a Noether-Lefschetz divisor D_{d,g}")
    h.add_argument("d", type=int)
    h.add_argument("g", type=int)
    h.add_argument("l", type=_positive_int)

    n = sub.add_parser("normal-form", parents=[common],
                       help="orbit representative for (N, k, d), or invariants of a vector")
    n.add_argument("values", type=int, nargs="*", metavar="N k d l")
    n.add_argument("--vector", metavar="FILE", help="k3kit.vector/1 document to classify")

    t = sub.add_parser("tables", parents=[common], help="reproduce the destabilizing-set tables")
    t.add_argument("which", type=int, choices=(1, 2, 3))

    c = sub.add_parser("cubic-stability", parents=[common], help="torus stability of a cubic support")
    c.add_argument("file")

    s = sub.add_parser("net-stability", parents=[common], help="Plucker weights of a net of quadrics")
    s.add_argument("file")
    s.add_argument("--lambda", dest="lam", type=_lambda6, default=None, metavar="a0,...,a5")
    return p


def _load_config(path: str | None) -> dict:
    path = path or os.environ.get("K3KIT_CONFIG")
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise UsageError(f"config {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"config {path}: line {e.lineno}: {e.msg}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path}: expected a JSON object")
    unknown = sorted(set(cfg) - set(DEFAULTS))
    if unknown:
        raise UsageError(f"config {path}: unknown keys {', '.join(unknown)}")
    return cfg


def resolve(ns) -> RunConfig:
    """Merge parsed flags, the config file and the defaults into a RunConfig."""
    cfg = _load_config(ns.config)
    flags = {
        "format": ns.format,
        "precision_bits": ns.precision_bits,
        "search_bound": ns.search_bound,
        "jobs": ns.jobs,
        "no_timestamp": ns.no_timestamp,
        "from": getattr(ns, "from_", None),
        "to": getattr(ns, "to", None),
    }
    merged = {}
    for k, default in DEFAULTS.items():
        merged[k] = flags[k] if flags[k] is not None else cfg.get(k, default)
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "config", "from_", "to") and k not in flags}
    if ns.command == "rank":
        params["from"], params["to"] = merged["from"], merged["to"]
    jobs = merged["jobs"]
    if jobs is None:
        jobs = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    return RunConfig(command=ns.command, params=params, format=merged["format"],
                     precision_bits=merged["precision_bits"], search_bound=merged["search_bound"],
                     jobs=jobs, no_timestamp=bool(merged["no_timestamp"])).validate()


# -- commands -----------------------------------------------------------------

def _rank_one(args):
    l, bits = args
    return nl_rank.rank_report(l, bits).as_dict()


def cmd_rank(cfg: RunConfig):
    lo, hi = cfg.params["from"], cfg.params["to"]
    if lo is None:
        raise UsageError("rank: --from is required")
    hi = lo if hi is None else hi
    if not 1 <= lo <= hi:
        raise UsageError(f"rank: need 1 <= from <= to, got {lo}..{hi}")
    work = [(l, cfg.precision_bits) for l in range(lo, hi + 1)]
    jobs = min(cfg.jobs, len(work))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_rank_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        rows = [_rank_one(w) for w in work]
    bad = [r["l"] for r in rows if not r["agree"]]
    for l in bad:
        log.error("l=%d: Gauss-sum and Jacobi-symbol values disagree", l)
    return rows, "Rank of the Heegner-divisor span", EXIT_MISMATCH if bad else EXIT_OK


def cmd_heegner(cfg: RunConfig):
    p = cfg.params
    label = lattice.NLLabel(p["d"], p["g"], p["l"])
    try:
        s = lattice.heegner_summary(label)
    except ValueError as e:
        raise UsageError(f"heegner: {e}") from None
    s["representative"] = lattice.format_vector(s["vector"])
    return [s], f"Heegner label of D_{{{label.d},{label.g}}} at 2l = {2 * label.l}", EXIT_OK


def cmd_normal_form(cfg: RunConfig):
    p = cfg.params
    if p["vector"]:
        v, l = schemas.vector_from_doc(_read_doc(p["vector"], schemas.VECTOR))
        if l is None:
            raise UsageError("normal-form: the vector document needs an 'l' field")
        try:
            c = lattice.invariants_of(v, lattice.lambda_gram(l))
        except lattice.LatticeError as e:
            raise UsageError(f"normal-form: {e}") from None
        N, k, d = c.norm, c.level, c.type
    else:
        if len(p["values"]) != 4:
            raise UsageError("normal-form: expected N k d l (or --vector FILE)")
        N, k, d, l = p["values"]
        if l < 1:
            raise UsageError("normal-form: l must be positive")
    try:
        rep = lattice.canonical_primitive(N, k, d, l)
    except lattice.LatticeError as e:
        raise UsageError(f"normal-form: {e}") from None
    back = lattice.invariants_of(rep, lattice.lambda_gram(l))
    row = {"l": l, "norm": N, "level": k, "type": d % (2 * l),
           "representative": lattice.format_vector(rep), "vector": rep,
           "roundtrip": (back.norm, back.level, back.type) == (N, k, d % (2 * l))}
    return [row], "Primitive vector normal form", EXIT_OK if row["roundtrip"] else EXIT_MISMATCH


def cmd_tables(cfg: RunConfig):
    which = cfg.params["which"]
    if which in (1, 2):
        bound = cfg.search_bound or git_cubic.GRID_BOUND
        chk = git_cubic.check_table(which, bound)
        rows = []
        for case, lam, listed in git_cubic.printed_rows(which):
            rows.append({"case": case, "lambda": list(lam),
                         "monomials": [git_cubic.mono_str(m) for m in sorted(listed, reverse=True)],
                         "verified": chk.rows_ok[case]})
        for k, cls in enumerate(chk.regenerated, 1):
            rows.append({"case": f"search {k}", "lambda": list(cls.representative),
                         "monomials": [git_cubic.mono_str(m) for m in sorted(cls.maximal, reverse=True)],
                         "verified": None})
        for d in chk.diffs:
            log.error("table %d mismatch: %s", which, d)
        sign = "<= 0" if which == 1 else "< 0"
        return rows, f"Maximal subsets with weight {sign} (grid bound {bound})", \
            EXIT_OK if chk.ok else EXIT_MISMATCH
    checks = git_net.table3_verify()
    rows = [c.as_dict() for c in checks]
    ok = all(c.ok for c in checks)
    title = "Maximal destabilizing sets for nets"
    if cfg.search_bound is not None:
        classes = git_net.table3_search(cfg.search_bound, jobs=cfg.jobs)
        for k, cls in enumerate(classes, 1):
            d = cls.as_dict()
            rows.append({"case": f"search {k}", "lambda": d["representative"],
                         "slots": d["slots"], "n_triples": d["n_triples"], "n_lambdas": d["n_lambdas"]})
        found = {tuple(c.representative) for c in classes}
        printed = {tuple(a) for _, a, _ in git_net.TABLE3_ROWS}
        if len(classes) != len(printed):
            log.error("table 3 mismatch: %d printed rows, search finds %d classes", len(printed), len(classes))
            ok = False
        for a in sorted(found - printed):
            log.error("table 3 mismatch: extra class at %s", a)
        for a in sorted(printed - found):
            log.error("table 3 mismatch: printed row %s not a searched representative", a)
            ok = False
        title += f" (search over normalized lambda with a0 <= {cfg.search_bound}; complete only on that grid)"
    return rows, title, EXIT_OK if ok else EXIT_MISMATCH


def _read_doc(path, schema):
    try:
        return schemas.load(path, schema)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None


def cmd_cubic_stability(cfg: RunConfig):
    try:
        f = schemas.cubic_from_doc(_read_doc(cfg.params["file"], schemas.CUBIC))
        tags = git_cubic.match_normal_form(f)
    except schemas.SchemaError:
        raise
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = []
    status = EXIT_OK
    for strict, verdict in ((False, "not properly stable"), (True, "unstable")):
        lp = git_cubic.torus_destabilizer(f, strict)
        rays = git_cubic.torus_destabilizer_vertices(f, strict)
        if (lp is None) != (rays is None):
            log.error("exact LP and candidate-ray search disagree (strict=%s)", strict)
            status = EXIT_MISMATCH
        rows.append({
            "test": verdict,
            "result": f"{verdict} w.r.t. torus, certificate {tuple(lp.lam)}" if lp
            else "no torus destabilizer",
            "certificate": list(lp.lam) if lp else None,
            "weights": lp.as_dict()["weights"] if lp else None,
            "tags": tags,
        })
    return rows, "Torus stability of a cubic support", status


def cmd_net_stability(cfg: RunConfig):
    try:
        net = schemas.net_from_doc(_read_doc(cfg.params["file"], schemas.NET))
    except schemas.SchemaError:
        raise
    except ValueError as e:
        raise UsageError(str(e)) from None
    lam = cfg.params["lam"]
    if lam is not None:
        cert = git_net.not_properly_stable_wrt(net, lam)
        d = cert.as_dict()
        d["result"] = (f"not properly stable w.r.t. lambda (weight {cert.total})"
                       if cert.not_properly_stable else f"no conclusion from lambda (weight {cert.total})")
        d["conditions"] = git_net.lemma52_check(cert.triple, lam).as_dict()["conditions"]
        return [d], "Plucker weight of a net", EXIT_OK
    bound = cfg.search_bound or git_net.DEFAULT_SEARCH_BOUND
    rows = []
    for a in git_net.normalized_grid(bound):
        cert = git_net.not_properly_stable_wrt(net, a)
        if cert.not_properly_stable:
            rows.append(cert.as_dict())
    title = f"Normalized lambda with a0 <= {bound} and Plucker weight <= 0 ({len(rows)} found)"
    return rows, title, EXIT_OK


HANDLERS = {
    "rank": cmd_rank,
    "heegner": cmd_heegner,
    "normal-form": cmd_normal_form,
    "tables": cmd_tables,
    "cubic-stability": cmd_cubic_stability,
    "net-stability": cmd_net_stability,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    rows, title, status = HANDLERS[cfg.command](cfg)
    stamp = None if cfg.no_timestamp else timestamp()
    out.write(render(rows, cfg.format, stamp=stamp, title=title))
    return status


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="k3kit: %(levelname)s: %(message)s")
    try:
        cfg = resolve(build_parser().parse_args(argv))
        return run(cfg)
    except UsageError as e:
        print(f"k3kit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except schemas.SchemaError as e:
        print(f"k3kit: schema error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
