"""Command-line interface: node files and metric tables.

Subcommands ``nodes``, ``lebesgue``, ``cond``, ``interp`` and ``compare``
write CSV (default) or JSON to standard output or ``-o``.  Exit codes are
0 on success, 2 for usage errors, 3 for numerical failures and 4 for file or
validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NodeFileError, NumericalError, SimplexNodesError
from .femcond import condition_table_row, lambda2
from .geometry import GEOMETRY_KINDS, reference_simplex
from .interp import (
    build_lagrange,
    default_alpha,
    f_A,
    f_B,
    interpolation_error,
    lebesgue_constant,
)
from .nodes import FAMILY_TAGS, make_nodeset, read_nodeset, write_nodeset
from .nodes1d import MAX_DEGREE

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_FILE = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    dim: int | None = None
    degrees: list = field(default_factory=list)
    families: list = field(default_factory=list)
    geometry: str | None = None
    fmt: str = "csv"
    output: str | None = None
    function: str = "fB"
    alpha: float | None = None
    grid_degree: int | None = None
    refine_levels: int = 8
    top_k: int = 10
    quad_order: int | None = None
    threads: int | None = None
    metric: str = "lebesgue"

    def header(self):
        deg = f"{self.degrees[0]}..{self.degrees[-1]}" if self.degrees else "file"
        parts = [
            f"command={self.command}",
            f"dim={self.dim if self.dim is not None else 'file'}",
            f"degree={deg}",
            f"family={','.join(self.families)}",
        ]
        for name in ("geometry", "function", "alpha", "grid_degree", "refine_levels", "top_k",
                     "quad_order", "metric"):
            if self._shows(name):
                parts.append(f"{name.replace('_', '-')}={getattr(self, name)}")
        return "# " + " ".join(parts)

    def _shows(self, name):
        used = {
            "nodes": {"geometry"},
            "lebesgue": {"grid_degree", "refine_levels", "top_k"},
            "cond": {"geometry", "quad_order"},
            "interp": {"geometry", "function", "alpha", "grid_degree", "refine_levels", "top_k"},
            "compare": {"metric", "geometry", "function", "alpha", "grid_degree", "refine_levels", "top_k",
                        "quad_order"},
        }
        return name in used[self.command]


def parse_degrees(text):
    """``"7"`` or ``"a..b"`` (inclusive) to a list of degrees."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid degree or range {text!r}; use N or A..B") from None
    if not 1 <= lo <= hi <= MAX_DEGREE:
        raise argparse.ArgumentTypeError(f"degree range must satisfy 1 <= {lo} <= {hi} <= {MAX_DEGREE}")
    return list(range(lo, hi + 1))


def _family_list(values):
    fams = []
    for v in values or []:
        fams.extend(f for f in v.split(",") if f)
    return fams


def _check_family(tag):
    if tag in FAMILY_TAGS or tag.startswith("external:"):
        return
    raise UsageError(f"unknown family {tag!r}; expected one of {', '.join(FAMILY_TAGS)} or external:<path>")


def build_parser():
    parser = argparse.ArgumentParser(prog="simplexnodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multi_family=False):
        p.add_argument("-d", "--dim", type=int)
        p.add_argument("-n", "--degree", type=parse_degrees)
        p.add_argument("--family", action="append", help="family tag; comma-separate or repeat" if multi_family
                       else "equispaced, lgl, gl, lgc, blp or external:<path>")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-o", "--output")
        p.add_argument("--threads", type=int)

    def search(p):
        p.add_argument("--grid-degree", type=int)
        p.add_argument("--refine-levels", type=int, default=8)
        p.add_argument("--top-k", type=int, default=10)

    p = sub.add_parser("nodes", help="write a node set")
    common(p)
    p.add_argument("--geometry", choices=GEOMETRY_KINDS)

    p = sub.add_parser("lebesgue", help="Lebesgue constants over a degree range")
    common(p)
    search(p)

    p = sub.add_parser("cond", help="condition numbers of M, K, G, L")
    common(p)
    p.add_argument("--geometry", choices=GEOMETRY_KINDS, default="biunit")
    p.add_argument("--quad-order", type=int)

    p = sub.add_parser("interp", help="interpolation errors of benchmark functions")
    common(p)
    search(p)
    p.add_argument("--geometry", choices=GEOMETRY_KINDS)
    p.add_argument("--function", choices=("fA", "fB", "poly"), default="fB")
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("compare", help="one metric for several families side by side")
    common(p, multi_family=True)
    search(p)
    p.add_argument("--metric", choices=("lebesgue", "cond", "interp", "lambda2"), default="lebesgue")
    p.add_argument("--geometry", choices=GEOMETRY_KINDS)
    p.add_argument("--function", choices=("fA", "fB", "poly"), default="fB")
    p.add_argument("--alpha", type=float)
    p.add_argument("--quad-order", type=int)
    return parser


def config_from_args(args):
    families = _family_list(args.family) or ["lgl"]
    for f in families:
        _check_family(f)
    if args.command == "compare" and len(families) < 2:
        raise UsageError("compare needs at least two families")
    if args.command != "compare" and len(families) != 1:
        raise UsageError(f"{args.command} takes a single family")
    external = all(f.startswith("external:") for f in families)
    if not external and (args.dim is None or args.degree is None):
        raise UsageError("-d/--dim and -n/--degree are required unless the family is external:<path>")
    if args.dim is not None and args.dim < 1:
        raise UsageError("dimension must be at least 1")
    if args.command == "nodes" and args.degree is not None and len(args.degree) != 1:
        raise UsageError("nodes takes a single degree")
    cfg = RunConfig(
        command=args.command,
        dim=args.dim,
        degrees=args.degree or [],
        families=families,
        geometry=getattr(args, "geometry", None),
        fmt=args.format,
        output=args.output,
        function=getattr(args, "function", "fB"),
        alpha=getattr(args, "alpha", None),
        grid_degree=getattr(args, "grid_degree", None),
        refine_levels=getattr(args, "refine_levels", 8),
        top_k=getattr(args, "top_k", 10),
        quad_order=getattr(args, "quad_order", None),
        threads=args.threads,
        metric=getattr(args, "metric", "lebesgue"),
    )
    if cfg.refine_levels < 0 or cfg.top_k < 1:
        raise UsageError("--refine-levels must be >= 0 and --top-k >= 1")
    return cfg


# --- metric helpers -----------------------------------------------------------


def _nodesets(cfg, family):
    if family.startswith("external:"):
        ns = read_nodeset(family[len("external:"):])
        if cfg.dim is not None and ns.dim != cfg.dim:
            raise UsageError(f"external node set has dimension {ns.dim}, not {cfg.dim}")
        if cfg.degrees and ns.degree not in cfg.degrees:
            return []
        return [ns]
    return [make_nodeset(family, cfg.dim, n) for n in cfg.degrees]


def _root(value, n):
    return value ** (1.0 / n)


def _benchmark(cfg, d, n):
    if cfg.function == "fA":
        return f_A, reference_simplex(cfg.geometry or "biunit", d)
    if cfg.function == "fB":
        alpha = default_alpha(d) if cfg.alpha is None else cfg.alpha
        return (lambda x: f_B(x, alpha)), reference_simplex(cfg.geometry or "equilateral", d)
    weights = 0.25 / np.arange(1, d + 1)

    def poly(x):
        return (0.5 + np.asarray(x) @ weights) ** n

    return poly, reference_simplex(cfg.geometry or "biunit", d)


def _lebesgue(cfg, op):
    r = lebesgue_constant(op, grid_degree=cfg.grid_degree, top_k=cfg.top_k, refine_levels=cfg.refine_levels)
    return r.constant


def _interp(cfg, op):
    f, g = _benchmark(cfg, op.dim, op.degree)
    return interpolation_error(op, f, g, sample_degree=cfg.grid_degree, top_k=cfg.top_k,
                               refine_levels=cfg.refine_levels)


def _cond(cfg, op):
    g = reference_simplex(cfg.geometry or "biunit", op.dim)
    rep = condition_table_row(op, g, quad_order=cfg.quad_order)
    return [rep[k].value for k in ("M", "K", "G", "L")]


# --- commands -------------------------------------------------------------------


def cmd_nodes(cfg):
    family = cfg.families[0]
    sets = _nodesets(cfg, family)
    if not sets:
        raise UsageError("external node set does not have the requested degree")
    ns = sets[0]
    cart = None
    if cfg.geometry is not None:
        cart = reference_simplex(cfg.geometry, ns.dim).bary_to_cart(ns.points)
    return write_nodeset(ns, cfg.fmt, None, cartesian=cart)


def cmd_lebesgue(cfg):
    rows = []
    for ns in _nodesets(cfg, cfg.families[0]):
        lam = _lebesgue(cfg, build_lagrange(ns))
        rows.append([ns.dim, ns.degree, ns.family, lam, _root(lam, ns.degree)])
    return ["d", "n", "family", "lebesgue", "lebesgue_root_n"], rows


def cmd_cond(cfg):
    rows = []
    for ns in _nodesets(cfg, cfg.families[0]):
        vals = _cond(cfg, build_lagrange(ns))
        row = [ns.dim, ns.degree, ns.family]
        for v in vals:
            row += [v, _root(v, ns.degree)]
        rows.append(row)
    cols = ["d", "n", "family"]
    for name in ("M", "K", "G", "L"):
        cols += [f"kappa_{name}", f"kappa_{name}_root_n"]
    return cols, rows


def cmd_interp(cfg):
    rows = []
    for ns in _nodesets(cfg, cfg.families[0]):
        rows.append([ns.dim, ns.degree, ns.family, _interp(cfg, build_lagrange(ns))])
    return ["d", "n", "family", "error"], rows


def cmd_compare(cfg):
    per_family = {}
    for family in cfg.families:
        for ns in _nodesets(cfg, family):
            op = build_lagrange(ns)
            if cfg.metric == "lebesgue":
                vals = [_lebesgue(cfg, op)]
            elif cfg.metric == "interp":
                vals = [_interp(cfg, op)]
            elif cfg.metric == "lambda2":
                vals = [lambda2(op)]
            else:
                vals = _cond(cfg, op)
            per_family[(family, ns.degree)] = (ns.dim, vals)
    names = {"lebesgue": ["lebesgue"], "interp": ["error"], "lambda2": ["lambda2"],
             "cond": ["kappa_M", "kappa_K", "kappa_G", "kappa_L"]}[cfg.metric]
    tags = [f.split("/")[-1] if f.startswith("external:") else f for f in cfg.families]
    cols = ["d", "n"] + [f"{name}[{tag}]" for tag in tags for name in names]
    rows = []
    degrees = sorted({n for (_, n) in per_family})
    for n in degrees:
        dims = [per_family[(f, n)][0] for f in cfg.families if (f, n) in per_family]
        row = [dims[0], n]
        for f in cfg.families:
            row += per_family[(f, n)][1] if (f, n) in per_family else [float("nan")] * len(names)
        rows.append(row)
    return cols, rows


COMMANDS = {
    "nodes": cmd_nodes,
    "lebesgue": cmd_lebesgue,
    "cond": cmd_cond,
    "interp": cmd_interp,
    "compare": cmd_compare,
}


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    return str(v)


def render_table(cfg, cols, rows):
    if cfg.fmt == "json":
        obj = {
            "config": cfg.header()[2:],
            "columns": cols,
            "rows": [[float(f"{v:.6g}") if isinstance(v, (float, np.floating)) else v for v in r] for r in rows],
        }
        return json.dumps(obj, indent=1) + "\n"
    lines = [cfg.header(), ",".join(cols)]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _thread_limit(threads):
    if threads is None:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=threads)


def run(argv=None, stdout=None):
    """Parse ``argv``, run the command and return the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        with _thread_limit(cfg.threads):
            result = COMMANDS[cfg.command](cfg)
        text = result if isinstance(result, str) else render_table(cfg, *result)
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"simplexnodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NodeFileError, OSError) as exc:
        print(f"simplexnodes: file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except NumericalError as exc:
        print(f"simplexnodes: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SimplexNodesError, ValueError) as exc:
        print(f"simplexnodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
