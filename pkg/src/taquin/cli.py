"""Command-line entry point: ``taquin <subcommand> ...``.

Every run writes a JSON manifest (flags, seed, versions, timestamps, output
digests).  With ``--out FILE`` it goes to ``FILE.manifest.json``; otherwise
to ``--manifest PATH`` or, failing that, as one line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .diagrams import Diagram, dumps_diagram, loads_diagram
from .dimensions import (
    DEFAULT_SIZE_CAP,
    MAX_DIM_CAP,
    DimCache,
    cotransitions_by_levels,
    exact_cotransition,
    exact_dim_3d,
    greedy_sequence_exact,
    hook_dim_2d,
    max_dim_levels,
)
from .errors import TaquinError
from .estimation import (
    estimate_cotransitions,
    greedy_sequence_estimated,
    normalized_dim,
)
from .jdt import schutz, schutz_preserve, schutz_preserve_inverse, schutz_rnd_with_nerve
from .processes import sample_plancherel2d_tableau, sample_pp_tableau
from .rng import RandomSource
from .stats import (
    chi_square_uniform,
    default_iterations,
    gaussian_summary,
    nerve_coverage,
    run_histogram,
)
from .tableaux import dumps_tableau, loads_tableau

EXACT_CAP_DEFAULT = 30


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    subcommand: str
    flags: dict
    seed: int | None
    versions: dict
    started: str
    finished: str = ""
    outputs: dict = field(default_factory=dict)


def _versions() -> dict:
    import numba
    import numpy
    import scipy

    return {"taquin": __version__, "python": platform.python_version(),
            "numpy": numpy.__version__, "numba": numba.__version__, "scipy": scipy.__version__}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def fmt_prob(p) -> str:
    """Six decimals; exact rationals round half to even."""
    if isinstance(p, Fraction):
        q = round(p * 10**6)
        return f"{q // 10**6}.{q % 10**6:06d}"
    return f"{p:.6f}"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _read_shape(path: str) -> Diagram:
    return loads_diagram(_read_json(path))


def _dim_of(d: Diagram, cap: int) -> int:
    if d.is_planar:
        return hook_dim_2d(d)
    return exact_dim_3d(d, DimCache(), cap)


class Table:
    """Column-named records rendered as CSV or JSON."""

    def __init__(self, columns):
        self.columns = list(columns)
        self.rows: list[list] = []

    def add(self, *values):
        self.rows.append(list(values))

    def records(self):
        return [dict(zip(self.columns, r)) for r in self.rows]

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()


def _render(args, tables: dict[str, Table]) -> str:
    if args.json:
        doc = {name: t.records() for name, t in tables.items()}
        return json.dumps(doc, indent=1) + "\n"
    return "\n".join(t.csv() for t in tables.values())


# --- subcommands --------------------------------------------------------------

def cmd_dim(args) -> str:
    d = _read_shape(args.shape)
    return f"{_dim_of(d, args.cap)}\n"


def cmd_max_dim(args) -> str:
    t = Table(["size", "dimension", "rowform"])
    for lm in max_dim_levels(args.n, args.cap):
        t.add(lm.size, str(lm.dim), dumps_diagram(lm.best))
    return _render(args, {"max_dim": t})


def cmd_cotrans(args) -> str:
    d = _read_shape(args.shape)
    est = estimate_cotransitions(d, args.trials, args.seed, args.burn_in, args.thin,
                                 args.chains, args.workers)
    exact = cotransitions_by_levels(d) if d.n <= args.exact_cap else {}
    t = Table(["corner_x", "corner_y", "corner_z", "count", "frequency", "exact"])
    for b, c in est.counts.items():
        t.add(b.x, b.y, b.z, c, fmt_prob(c / est.trials), fmt_prob(exact[b]) if exact else "")
    return _render(args, {"cotrans": t})


def cmd_greedy(args) -> str:
    if args.exact:
        t = Table(["size", "exact_cotransition", "rowform"])
        for s in greedy_sequence_exact(args.n, size_cap=args.cap):
            t.add(s.size, fmt_prob(s.probability), dumps_diagram(s.diagram))
        return _render(args, {"greedy": t})
    if args.trials is None:
        raise UsageError("greedy needs --exact or --trials")
    steps = greedy_sequence_estimated(args.n, args.trials, args.seed, burn_in=args.burn_in,
                                      thin=args.thin, chains=args.chains, workers=args.workers)
    cache = DimCache()
    t = Table(["size", "estimate", "exact", "ratio_cotrans", "ratio_dim", "rowform"])
    prev = Diagram()
    ratio_dim = 1.0
    for s in steps:
        ex = rc = rd = ""
        if s.size <= args.exact_cap:
            p, pf = exact_cotransition(prev, s.diagram, cache)
            r = s.estimate / pf
            ratio_dim *= r
            ex, rc, rd = fmt_prob(p), f"{r:.6f}", f"{ratio_dim:.6f}"
        t.add(s.size, fmt_prob(s.estimate), ex, rc, rd, dumps_diagram(s.diagram))
        prev = s.diagram
    return _render(args, {"greedy": t})


def cmd_normdim(args) -> str:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from exc
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise UsageError("greedy input is empty")
    col = args.column
    if col is None:
        col = "exact_cotransition" if "exact_cotransition" in rows[0] else "estimate"
    if col not in rows[0]:
        raise UsageError(f"column {col!r} not in greedy input")
    t = Table(["size", "c_lambda"])
    log_dim = 0.0
    for r in rows:
        log_dim -= math.log(float(r[col]))
        n = int(r["size"])
        t.add(n, f"{normalized_dim(n, log_dim):.9f}")
    return _render(args, {"normdim": t})


def cmd_generate(args) -> str:
    rng = RandomSource(args.seed)
    if args.process == "plancherel2d":
        path = sample_plancherel2d_tableau(args.n, rng)
    else:
        path = sample_pp_tableau(args.n, rng, log_space=args.log_space)
    return dumps_tableau(path) + "\n"


def cmd_step(args) -> str:
    path = loads_tableau(_read_json(args.tableau))
    if args.variant == "classic":
        out, nerve = schutz(path)
    elif args.variant == "preserve":
        out = schutz_preserve(path)
        nerve = schutz(path)[1]
    elif args.variant == "inverse":
        out = schutz_preserve_inverse(path)
        nerve = schutz(out)[1]
    else:
        out, nerve = schutz_rnd_with_nerve(path, RandomSource(args.seed), args.addlast)
    doc = {
        "tableau": json.loads(dumps_tableau(out)),
        "nerve": {"steps": [list(b) for b in nerve.steps], "end": list(nerve.end)},
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def cmd_uniformity(args) -> str:
    d = _read_shape(args.shape)
    dim = None
    try:
        dim = _dim_of(d, args.cap)
    except TaquinError:
        pass
    iters = args.iters if args.iters is not None else default_iterations(dim or 1000)
    res = run_histogram(d, iters, args.seed, args.chains, 1, args.burn_in, args.workers,
                        report_thin=args.thin)
    hists = [("1", res)] if args.thin <= 1 else [("1", res[0]), (str(args.thin), res[1])]
    hist_t = Table(["count_value", "num_tableaux"])
    full = hists[0][1]
    hoc = full.histogram_of_counts
    if dim is not None and dim > len(full.counts):
        hoc[0] += dim - len(full.counts)
    for v in sorted(hoc):
        hist_t.add(v, hoc[v])
    summ = Table(["mean", "sigma", "chi2", "dof", "pvalue", "samples", "thin"])
    for label, h in hists:
        mean, sigma = gaussian_summary(h, dim)
        chi = ("", "", "")
        if dim is not None and h.iterations / dim >= 5:
            stat, dof, p = chi_square_uniform(h, dim)
            chi = (f"{stat:.6f}", dof, f"{p:.6f}")
        summ.add(f"{mean:.6f}", f"{sigma:.6f}", *chi, h.iterations, label)
    return _render(args, {"histogram": hist_t, "summary": summ})


def cmd_coverage(args) -> str:
    rng = RandomSource(args.seed)
    path = sample_pp_tableau(args.n, rng)
    rep = nerve_coverage(path, args.max_iters, rng.state)
    t = Table(["iterations_to_full_coverage", "num_positions"])
    t.add("not reached" if rep.iterations is None else rep.iterations, len(rep.targets))
    return _render(args, {"coverage": t})


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true", help="CSV output (default)")
    fmt.add_argument("--json", action="store_true", help="JSON output with the same fields")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--manifest", help="manifest path (default: FILE.manifest.json or stderr)")
    common.add_argument("--workers", type=int, default=1)

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--seed", type=int, default=0)
    chain.add_argument("--burn-in", type=int, default=0)
    chain.add_argument("--thin", type=int, default=1)
    chain.add_argument("--chains", type=int, default=1)

    p = argparse.ArgumentParser(prog="taquin", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dim", parents=[common], help="exact dimension of a shape")
    s.add_argument("--shape", required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("max-dim", parents=[common], help="maximum dimensions by size")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cap", type=int, default=MAX_DIM_CAP)
    s.set_defaults(func=cmd_max_dim)

    s = sub.add_parser("cotrans", parents=[common, chain], help="estimate co-transition probabilities")
    s.add_argument("--shape", required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--exact-cap", type=int, default=EXACT_CAP_DEFAULT)
    s.set_defaults(func=cmd_cotrans)

    s = sub.add_parser("greedy", parents=[common, chain], help="greedy sequence of large dimension")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--trials", type=int)
    s.add_argument("--exact-cap", type=int, default=EXACT_CAP_DEFAULT)
    s.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP)
    s.set_defaults(func=cmd_greedy)

    s = sub.add_parser("normdim", parents=[common], help="normalized dimensions of a greedy run")
    s.add_argument("--input", default="-", help="greedy CSV (default: stdin)")
    s.add_argument("--column", help="probability column to use")
    s.set_defaults(func=cmd_normdim)

    s = sub.add_parser("generate", parents=[common], help="random tableau from a growth process")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--process", choices=["pp", "plancherel2d"], default="pp")
    s.add_argument("--log-space", action="store_true")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("step", parents=[common], help="apply one transformation to a tableau")
    s.add_argument("--tableau", required=True)
    s.add_argument("--variant", choices=["classic", "preserve", "inverse", "random"], default="classic")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--addlast", action="store_true")
    s.set_defaults(func=cmd_step)

    s = sub.add_parser("uniformity", parents=[common, chain], help="frequency histogram and chi-square")
    s.add_argument("--shape", required=True)
    s.add_argument("--iters", type=int)
    s.add_argument("--cap", type=int, default=MAX_DIM_CAP)
    s.set_defaults(func=cmd_uniformity)

    s = sub.add_parser("coverage", parents=[common], help="iterations until every corner ends a nerve")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=10**7)
    s.set_defaults(func=cmd_coverage)
    return p


def _write_manifest(args, manifest: RunManifest) -> None:
    text = json.dumps(asdict(manifest), sort_keys=True)
    target = args.manifest or (args.out + ".manifest.json" if args.out else None)
    if target:
        with open(target, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=sys.stderr)


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    flags = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = RunManifest(args.command, flags, getattr(args, "seed", None), _versions(), _now())
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"taquin {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except TaquinError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    data = text.encode()
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        manifest.outputs[args.out] = hashlib.sha256(data).hexdigest()
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
        manifest.outputs["<stdout>"] = hashlib.sha256(data).hexdigest()
    manifest.finished = _now()
    _write_manifest(args, manifest)
    return 0


def main() -> None:
    sys.exit(dispatch())
