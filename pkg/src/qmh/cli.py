"""Command-line interface: ``qmh <command> [flags]``.

Commands
--------
eval-phi    evaluate ``_r phi_s(q**num; q**den; q, z)``
limit-fn    evaluate the limit function at ``z``
mh-table    scaled polynomial against its limit at ``z`` for several ``n``
zeros       scaled zeros ``x*`` for each ``n``
census      purely imaginary / nonreal zero counts for ``(alpha, q)``
experiment  convergence tables of a built-in or configured experiment

Exit codes: 0 success, 2 invalid input, 64 unknown command, 74 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .errors import DomainError, HypothesisError, QMHError
from .experiments import ExperimentConfig, builtin_experiment, convergence_table, imaginary_zero_census
from .mehler import MHFamily, kappa, mh_limit, scaled_polynomial
from .numerics import NumericContext, make_context, to_hp, to_real
from .qhyper import PhiSpec, eval_phi, limit_fn_z
from .roots import Rect, solve_all_roots

__all__ = ["main", "run", "COMMANDS", "EXIT_OK", "EXIT_INVALID", "EXIT_USAGE", "EXIT_IO"]

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_USAGE = 64
EXIT_IO = 74

COMMANDS = ("eval-phi", "limit-fn", "mh-table", "zeros", "census", "experiment")

CSV_COLUMNS = ("experiment_id", "zero_index", "n", "xstar_re", "xstar_im", "zlim_re", "zlim_im", "gap")


class UsageError(Exception):
    """Bad or missing flag for a known command."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmh", description="q-hypergeometric Mehler-Heine asymptotics and zeros")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("--id", type=int)
    p.add_argument("--n", help="comma separated degrees")
    p.add_argument("--alpha")
    p.add_argument("--q")
    p.add_argument("--num", help="comma separated numerator exponents")
    p.add_argument("--den", help="comma separated denominator exponents")
    p.add_argument("--z", help="re[,im]")
    p.add_argument("--prec-bits", type=int, dest="prec_bits")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--out")
    p.add_argument("--window", help="lo,hi (real interval) or x0,x1,y0,y1 (box)")
    p.add_argument("--config", help="JSON family file")
    return p


# Parsing


def _split(text: str, what: str) -> list[str]:
    parts = [t.strip() for t in text.split(",")]
    if not text.strip() or any(not t for t in parts):
        raise UsageError(f"--{what} expects a comma separated list, got {text!r}")
    return parts


def _number(text: str, what: str):
    """Exact rational when possible (``-7.8`` -> ``-39/5``), else a string for mpmath."""
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        complex(text.replace("i", "j"))
    except ValueError:
        raise UsageError(f"--{what}: cannot parse {text!r} as a number") from None
    return text.replace("i", "j")


def _z(args, ctx):
    if args.z is None:
        raise UsageError("--z is required")
    parts = _split(args.z, "z")
    if len(parts) > 2:
        raise UsageError("--z expects re or re,im")
    re_ = to_real(_number(parts[0], "z"), ctx)
    im = to_real(_number(parts[1], "z"), ctx) if len(parts) == 2 else 0
    return ctx.mp.mpc(re_, im)


def _degrees(args, default):
    if args.n is None:
        return tuple(default)
    try:
        ns = tuple(int(t) for t in _split(args.n, "n"))
    except ValueError:
        raise UsageError(f"--n expects integers, got {args.n!r}") from None
    if any(n < 1 for n in ns):
        raise UsageError("--n entries must be positive")
    return ns


def _required(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


def _window(args):
    if args.window is None:
        return None, None
    parts = [_number(t, "window") for t in _split(args.window, "window")]
    if len(parts) == 2:
        return tuple(parts), None
    if len(parts) == 4:
        return None, Rect(*parts)
    raise UsageError("--window expects lo,hi or x0,x1,y0,y1")


def _param_pair(entry, where):
    if not (isinstance(entry, list) and len(entry) == 2):
        raise DomainError(f"{where}: expected [a, b] or [a, [b_re, b_im]], got {entry!r}")
    a, b = entry
    if isinstance(b, list):
        if len(b) != 2:
            raise DomainError(f"{where}: complex parameter must be [re, im]")
        b = (Fraction(str(b[0])), Fraction(str(b[1])))
    else:
        b = Fraction(str(b))
    return Fraction(str(a)), b


def load_family(path: str) -> MHFamily:
    """Read a family file ``{"s", "alpha", "q", "upper": [[a, [bre, bim]], ...], "lower": ...}``."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    for key in ("alpha", "q", "upper", "lower"):
        if key not in data:
            raise DomainError(f"family file lacks key {key!r}")
    upper = tuple(_param_pair(e, "upper") for e in data["upper"])
    lower = tuple(_param_pair(e, "lower") for e in data["lower"])
    if "s" in data and data["s"] != len(upper) + 1:
        raise DomainError(f"s = {data['s']} disagrees with {len(upper)} upper parameter pairs")
    return MHFamily(alpha=Fraction(str(data["alpha"])), q=Fraction(str(data["q"])),
                    upper=upper, lower=lower, name=data.get("name", os.path.basename(path)))


def _experiment(args) -> ExperimentConfig:
    if args.config is not None:
        fam = load_family(args.config)
        interval, box = _window(args)
        if interval is None and box is None:
            box, interval = Rect(-60, 400, -120, 120), (-40, 0)
        return ExperimentConfig(0, fam, _degrees(args, (10, 20, 40)), interval, box)
    if args.id is None:
        raise UsageError("--id or --config is required")
    cfg = builtin_experiment(args.id)
    interval, box = _window(args)
    if interval is not None or box is not None:
        cfg = ExperimentConfig(cfg.id, cfg.family, cfg.n_values, interval, box, cfg.default_zero_indices)
    if args.n is not None:
        cfg = ExperimentConfig(cfg.id, cfg.family, _degrees(args, cfg.n_values), cfg.scan_interval,
                               cfg.scan_box, cfg.default_zero_indices)
    return cfg


def _family_or_none(args):
    if args.config is not None:
        return load_family(args.config)
    if args.id is not None:
        return builtin_experiment(args.id).family
    return None


# Formatting


class _Fmt:
    def __init__(self, ctx: NumericContext):
        self.ctx = ctx
        self.digits = ctx.digits

    def real(self, x) -> str:
        return self.ctx.mp.nstr(self.ctx.mpf(x), self.digits, min_fixed=-5, max_fixed=5)

    def cplx(self, z) -> dict:
        z = to_hp(z, self.ctx)
        return {"re": self.real(z.real), "im": self.real(z.imag)}


def _text_value(v):
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{v['re']} {v['im']}i" if not v["im"].startswith("-") else f"{v['re']} - {v['im'][1:]}i"
    return str(v)


def _render(payload: dict, fmt: str, rows_key: str | None = None, columns=None) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    rows = payload.get(rows_key, []) if rows_key else [payload]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = list(columns) if columns else list(_flatten(rows[0]).keys()) if rows else []
        w.writerow(cols)
        for r in rows:
            flat = _flatten(r)
            w.writerow([flat.get(c, "") for c in cols])
        return buf.getvalue()
    lines = []
    header = {k: v for k, v in payload.items() if k != rows_key}
    for k, v in header.items():
        lines.append(f"{k}: {_text_value(v)}")
    if rows_key:
        for r in rows:
            lines.append("  ".join(f"{k}={_text_value(v)}" for k, v in r.items()))
    return "\n".join(lines) + "\n"


def _flatten(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, dict) and set(v) == {"re", "im"}:
            out[f"{k}_re"], out[f"{k}_im"] = v["re"], v["im"]
        else:
            out[k] = v
    return out


# Commands


def _cmd_eval_phi(args, ctx, f: _Fmt):
    q = _number(_required(args, "q"), "q")
    num = [_number(t, "num") for t in _split(args.num, "num")] if args.num else []
    den = [_number(t, "den") for t in _split(args.den, "den")] if args.den else []
    z = _z(args, ctx)
    value = eval_phi(PhiSpec(num, den, q), z, ctx)
    return {"command": "eval-phi", "r": len(num), "s": len(den), "z": f.cplx(z),
            "value": f.cplx(value)}, None, None


def _cmd_limit_fn(args, ctx, f: _Fmt):
    z = _z(args, ctx)
    fam = _family_or_none(args)
    if fam is not None:
        k = kappa(fam, ctx)
        value = mh_limit(fam, z, ctx)
        alpha, q = fam.alpha, fam.q
    else:
        alpha = _number(_required(args, "alpha"), "alpha")
        q = _number(_required(args, "q"), "q")
        k = ctx.mpf(1)
        value = limit_fn_z(alpha, 1, z, q, ctx)
    return {"command": "limit-fn", "alpha": f.real(to_real(alpha, ctx)), "q": f.real(to_real(q, ctx)),
            "kappa": f.real(k), "z": f.cplx(z), "value": f.cplx(value)}, None, None


def _cmd_mh_table(args, ctx, f: _Fmt):
    fam = _family_or_none(args)
    if fam is None:
        raise UsageError("--id or --config is required")
    z = _z(args, ctx)
    limit = mh_limit(fam, z, ctx)
    rows = []
    for n in _degrees(args, (10, 20, 40)):
        v = scaled_polynomial(fam, n, ctx)(z, ctx)
        rows.append({"n": n, "value": f.cplx(v), "gap": f.real(abs(v - limit))})
    return {"command": "mh-table", "family": fam.describe(), "z": f.cplx(z), "limit": f.cplx(limit),
            "rows": rows}, "rows", None


def _cmd_zeros(args, ctx, f: _Fmt):
    fam = _family_or_none(args)
    if fam is None:
        raise UsageError("--id or --config is required")
    rows = []
    for n in _degrees(args, (10, 20, 40)):
        for k, rec in enumerate(solve_all_roots(scaled_polynomial(fam, n, ctx), ctx), 1):
            rows.append({"n": n, "k": k, "x_star": f.cplx(rec.value), "residual": f.real(rec.residual),
                         "classification": rec.classification, "multiplicity": rec.multiplicity})
    return {"command": "zeros", "family": fam.describe(), "rows": rows}, "rows", None


def _cmd_census(args, ctx, f: _Fmt):
    alpha = _number(_required(args, "alpha"), "alpha")
    q = _number(_required(args, "q"), "q")
    interval, box = _window(args)
    if interval is not None:
        raise UsageError("census --window expects a box x0,x1,y0,y1")
    c = imaginary_zero_census(alpha, q, box, ctx)
    return {"command": "census", "alpha": f.real(c.alpha), "q": f.real(to_real(q, ctx)),
            "nonreal_w": c.total_nonreal_w, "purely_imaginary_w": c.purely_imaginary_w,
            "negative_real_z": c.negative_real_z, "nonreal_z": c.nonreal_z,
            "ambiguous": c.ambiguous, "boxes_used": c.boxes_used,
            "zeros": [f.cplx(r.value) for r in c.zeros]}, None, None


def _cmd_experiment(args, ctx, f: _Fmt):
    cfg = _experiment(args)
    rows = []
    last = None
    for r in convergence_table(cfg, None, ctx):
        if last is not None and r.zero_index != last.zero_index:
            rows.append(_limit_row(cfg, last, f))
        rows.append({"experiment_id": cfg.id, "zero_index": r.zero_index, "n": r.n,
                     "xstar": f.cplx(r.x_star), "zlim": f.cplx(r.matched_limit_zero), "gap": f.real(r.gap)})
        last = r
    if last is not None:
        rows.append(_limit_row(cfg, last, f))
    return {"command": "experiment", "experiment_id": cfg.id, "family": cfg.family.describe(),
            "n_values": list(cfg.n_values), "rows": rows}, "rows", CSV_COLUMNS


def _limit_row(cfg, r, f: _Fmt):
    z = f.cplx(r.matched_limit_zero)
    return {"experiment_id": cfg.id, "zero_index": r.zero_index, "n": -1, "xstar": z, "zlim": z,
            "gap": f.real(0)}


_HANDLERS = {
    "eval-phi": _cmd_eval_phi,
    "limit-fn": _cmd_limit_fn,
    "mh-table": _cmd_mh_table,
    "zeros": _cmd_zeros,
    "census": _cmd_census,
    "experiment": _cmd_experiment,
}


def _default_bits() -> int:
    env = os.environ.get("QMH_PREC_BITS")
    if env is None:
        return 256
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QMH_PREC_BITS must be an integer, got {env!r}") from None


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run one job and return its exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and not argv[0].startswith("-") and argv[0] not in COMMANDS:
        print(f"qmh: unknown command {argv[0]!r}; choose from {', '.join(COMMANDS)}", file=stderr)
        return EXIT_USAGE
    try:
        args = _build_parser().parse_args(argv)
        bits = args.prec_bits if args.prec_bits is not None else _default_bits()
        if bits < 64:
            raise UsageError(f"--prec-bits must be at least 64, got {bits}")
        ctx = make_context(bits)
        payload, rows_key, columns = _HANDLERS[args.command](args, ctx, _Fmt(ctx))
        fmt = args.format or "json"
        text = _render(payload, fmt, rows_key, columns)
    except UsageError as exc:
        print(f"qmh: {exc}", file=stderr)
        return EXIT_INVALID
    except HypothesisError as exc:
        print(f"qmh: hypothesis violated: {exc.hypothesis}: {exc}", file=stderr)
        return EXIT_INVALID
    except (QMHError, ValueError, ZeroDivisionError) as exc:
        print(f"qmh: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"qmh: I/O error: {exc}", file=stderr)
        return EXIT_IO
    if args.out is None:
        stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"qmh: cannot write {args.out}: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(run())
