"""Batch command-line interface.

Commands: ``curve``, ``g2``, ``genscheme``, ``optimal``, ``verify``.
Every emitted file embeds the fully resolved configuration, the fixed
conventions (per-arm N_av, SQL constant, beamsplitter sign convention,
continuous-k NOON reference) and the tool version, so results are
reproducible from the file alone.  Configuration files are plain
``key = value`` lines; command-line flags override file values.

Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 verification
tolerance violation.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__, cats, genscheme, sweep
from .errors import CatqfiError, ParameterError

CONVENTIONS = {
    "n_av": "per-arm <n_b> of the input probe",
    "sql": "delta_phi = 1/sqrt(N_av)",
    "beamsplitter": "(a1+a2)/sqrt2, (a1-a2)/sqrt2",
    "noon_baseline": "continuous k = 2 N_av, F = eta^k k^2",
    "tmsv_axis": "per-mode n_av = sinh^2 r",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def _parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be min:max:points, got {text!r}")
    try:
        lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(str(exc))
    return lo, hi, points


def _parse_int_list(text: str) -> tuple:
    if not text.strip():
        raise UsageError("empty integer list")
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(str(exc))


def _load_config(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{line_no}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _apply_config(args: argparse.Namespace, parser_keys: set):
    if not getattr(args, "config", None):
        return
    file_vals = _load_config(args.config)
    unknown = set(file_vals) - parser_keys
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key, val in file_vals.items():
        if key in args._explicit:
            continue            # command-line flag wins
        setattr(args, key, val)


def _metadata(args: argparse.Namespace, keys) -> dict:
    meta = {"command": args.command, "version": __version__}
    for key in keys:
        meta[key] = getattr(args, key)
    meta["conventions"] = CONVENTIONS
    return meta


def _emit_csv(stream, header, rows, meta):
    for key in sorted(meta):
        if key == "conventions":
            for ck in sorted(meta[key]):
                stream.write(f"# convention.{ck} = {meta[key][ck]}\n")
        else:
            stream.write(f"# {key} = {meta[key]}\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def _json_safe(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _emit_json(stream, header, rows, meta):
    payload = {
        "metadata": meta,
        "rows": [dict(zip(header, (_json_safe(v) for v in row))) for row in rows],
    }
    json.dump(payload, stream, indent=2, sort_keys=True, default=_fmt)
    stream.write("\n")


def _write_output(args, header, rows, meta):
    text = io.StringIO()
    if args.format == "csv":
        _emit_csv(text, header, rows, meta)
    else:
        _emit_json(text, header, rows, meta)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text.getvalue())
    else:
        sys.stdout.write(text.getvalue())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

CURVE_HEADER = ("d", "k", "alpha", "eta", "n_av", "f_q", "delta_phi",
                "method", "f_q_paper")


def cmd_curve(args) -> int:
    req = sweep.CurveRequest(
        d_list=_parse_int_list(str(args.d)),
        k_list=_parse_int_list(str(args.k)),
        eta=float(args.eta),
        n_av_range=_parse_range(str(args.nav)),
        baselines=tuple(str(args.baselines).split(",")) if args.baselines else (),
    )
    rows = [
        (r.d, r.k, r.alpha, r.eta, r.n_av, r.f_q, r.delta_phi, r.method,
         r.f_q_paper)
        for r in sweep.trace_curve(req)
    ]
    meta = _metadata(args, ("d", "k", "eta", "nav", "baselines", "seed"))
    _write_output(args, CURVE_HEADER, rows, meta)
    return 0


G2_HEADER = ("d", "k", "alpha_sq", "g2", "mandel_q")


def cmd_g2(args) -> int:
    d_list = _parse_int_list(str(args.d))
    k_list = _parse_int_list(str(args.k))
    lo, hi, points = _parse_range(str(args.alpha_sq))
    if lo <= 0:
        raise UsageError("alpha_sq grid must start above 0")
    grid = np.linspace(lo, hi, points)
    rows = []
    for d in sorted(set(d_list)):
        for k in sorted(set(k_list)):
            if k >= d:
                continue
            for a2 in grid:
                mom = cats.cat_moments(cats.CatSpec(d, k, math.sqrt(a2)))
                rows.append((d, k, float(a2), mom.g2, mom.mandel_q))
    meta = _metadata(args, ("d", "k", "alpha_sq", "seed"))
    _write_output(args, G2_HEADER, rows, meta)
    return 0


GEN_HEADER = ("k1", "k2", "probability", "conditional_fidelity", "leakage",
              "leakage_flagged", "shots_observed")


def cmd_genscheme(args) -> int:
    beta = float(args.beta) if args.beta is not None \
        else genscheme.default_beta(int(args.d))
    cfg = genscheme.GenConfig(
        d=int(args.d), alpha=float(args.alpha), beta=beta,
        shots=int(args.shots), seed=int(args.seed),
    )
    outcomes = genscheme.end_to_end(cfg)
    counts = genscheme.shot_histogram(outcomes, cfg.shots, cfg.seed)
    rows = [
        (o.k_observed[0], o.k_observed[1], o.probability,
         o.conditional_fidelity, o.leakage, o.leakage_flagged, int(c))
        for o, c in zip(outcomes, counts)
    ]
    meta = _metadata(args, ("d", "alpha", "shots", "seed"))
    meta["beta"] = beta
    _write_output(args, GEN_HEADER, rows, meta)
    return 0


OPTIMAL_HEADER = ("d", "k", "alpha", "eta", "n_av", "f_q", "delta_phi")


def cmd_optimal(args) -> int:
    n_av = float(args.nav)
    eta = float(args.eta)
    d, k, alpha, f_q = sweep.optimal_probe(
        n_av, eta, d_max=int(args.d_max), k_max=int(args.k_max)
    )
    rows = [(d, k, alpha, eta, n_av, f_q, 1.0 / math.sqrt(f_q))]
    meta = _metadata(args, ("nav", "eta", "d_max", "k_max", "seed"))
    _write_output(args, OPTIMAL_HEADER, rows, meta)
    return 0


def cmd_verify(args) -> int:
    from . import verify

    results = verify.run_all(
        tol_scale=float(args.tol_scale),
        golden_dir=args.golden_dir,
    )
    if args.write_golden:
        verify.write_golden(args.golden_dir)
        sys.stdout.write("golden files rewritten\n")
        return 0
    sys.stdout.write(verify.report(results))
    return 0 if all(r.passed for r in results) else 3


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--output", default=None, help="output path (default stdout)")
    sub.add_argument("--format", default="csv", choices=("csv", "json"))
    sub.add_argument("--config", default=None, help="key = value config file")
    sub.add_argument("--seed", default=0, type=int)


def build_parser() -> _Parser:
    parser = _Parser(prog="catqfi")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("curve", help="precision vs energy sweep")
    p.add_argument("--d", required=True, help="comma list of d values")
    p.add_argument("--k", required=True, help="comma list of k values")
    p.add_argument("--eta", default=1.0, type=float)
    p.add_argument("--nav", default="0.05:4:120", help="min:max:points")
    p.add_argument("--baselines", default="", help="comma list: noon,tmsv,sql")
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = subs.add_parser("g2", help="second-order correlation table")
    p.add_argument("--d", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--alpha-sq", dest="alpha_sq", default="0.25:14:56")
    _add_common(p)
    p.set_defaults(func=cmd_g2)

    p = subs.add_parser("genscheme", help="generation protocol report")
    p.add_argument("--d", required=True, type=int)
    p.add_argument("--alpha", default=1.0, type=float)
    p.add_argument("--beta", default=None, type=float,
                   help="ancilla amplitude (default 1.5 d)")
    p.add_argument("--shots", default=10000, type=int)
    _add_common(p)
    p.set_defaults(func=cmd_genscheme, format="json")

    p = subs.add_parser("optimal", help="best (d, k) at fixed energy")
    p.add_argument("--nav", required=True, type=float)
    p.add_argument("--eta", default=1.0, type=float)
    p.add_argument("--d-max", dest="d_max", default=16, type=int)
    p.add_argument("--k-max", dest="k_max", default=3, type=int)
    _add_common(p)
    p.set_defaults(func=cmd_optimal)

    p = subs.add_parser("verify", help="run the invariant and golden suite")
    p.add_argument("--tol-scale", dest="tol_scale", default=1.0, type=float,
                   help="multiply every tolerance (0.1 tightens tenfold)")
    p.add_argument("--golden-dir", dest="golden_dir", default=None)
    p.add_argument("--write-golden", dest="write_golden", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args._explicit = _explicit_flags(argv)
        if getattr(args, "config", None):
            _apply_config(args, _flag_keys(parser, args.command))
        if getattr(args, "shots", None) is not None and int(args.shots) < 1:
            raise UsageError("shots must be >= 1")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except ParameterError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except CatqfiError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


def _explicit_flags(argv) -> set:
    keys = set()
    for token in argv:
        if token.startswith("--"):
            keys.add(token[2:].split("=", 1)[0].replace("-", "_"))
    return keys


def _flag_keys(parser: _Parser, command: str) -> set:
    for action in parser._subparsers._group_actions:
        sub = action.choices.get(command)
        if sub is None:
            continue
        return {
            a.dest for a in sub._actions
            if a.dest not in ("help", "func")
        }
    return set()


if __name__ == "__main__":
    sys.exit(main())
