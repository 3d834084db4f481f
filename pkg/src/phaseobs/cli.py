"""Batch command-line surface.

Reads states, matrices, and windows from JSON (windows also inline as
"lo:hi,lo:hi"), runs one operation per invocation, and writes CSV/JSON
outputs atomically.  Exit codes: 0 success, 1 I/O or parse error,
2 physics-level validation failure; diagnostics go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import distribution, observable, spectral
from .errors import PhaseObsError, ValidationError
from .hardy import TWO_PI, HardyState, PhaseWindow, normalize
from .observable import PhaseMatrix

BUILTIN_KINDS = ("canonical", "trivial", "exponential")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class RunConfig:
    """Validated per-invocation settings shared by the command handlers."""

    command: str
    grid: int = 256
    dim: int | None = None
    seed: int = 0
    samples: int = 0
    q: float | None = None
    out: str | None = None
    truncations: list[int] = field(default_factory=list)
    q_sweep: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.grid < 2:
            raise PhaseObsError("--grid must be >= 2")
        if self.dim is not None and self.dim < 1:
            raise PhaseObsError("--dim must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise PhaseObsError("--seed must be a 64-bit unsigned integer")
        if self.samples < 0:
            raise PhaseObsError("--samples must be non-negative")


def _diag(code: str, message: str, detail=None) -> None:
    payload = {"code": code, "message": message, "detail": detail}
    sys.stderr.write(json.dumps(payload) + "\n")


def _reject_constant(name: str):
    raise PhaseObsError(f"non-finite number {name!r} in JSON input")


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh, parse_constant=_reject_constant)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".phaseobs-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    """Shortest decimal that round-trips the binary double."""
    return repr(float(x))


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(_fmt(x) if not isinstance(x, int) else str(x) for x in row)
                 for row in rows)
    return "\n".join(lines) + "\n"


def _matrix_spec(args) -> dict:
    """Resolve --matrix into a matrix JSON dict (file path or builtin name)."""
    arg = args.matrix
    if arg in BUILTIN_KINDS:
        if args.dim is None:
            raise PhaseObsError(f"builtin matrix {arg!r} requires --dim")
        spec = {"kind": arg, "dim": args.dim}
        if arg == "exponential":
            if args.q is None:
                raise PhaseObsError("exponential matrix requires --q")
            spec["q"] = args.q
        return spec
    return _load_json(arg)


def _matrix_at(spec: dict, dim: int) -> PhaseMatrix:
    """Instantiate the matrix family at truncation `dim`; explicit matrices
    are truncated to their top-left block."""
    kind = spec.get("kind")
    if kind in BUILTIN_KINDS:
        local = dict(spec)
        local["dim"] = dim
        return PhaseMatrix.from_dict(local)
    return PhaseMatrix.from_dict(spec).truncated(dim)


def _load_matrix(args) -> PhaseMatrix:
    return PhaseMatrix.from_dict(_matrix_spec(args))


def _load_state(path: str) -> HardyState:
    data = _load_json(path)
    pairs = data["coeffs"]
    raw = np.array([complex(re, im) for re, im in pairs])
    return normalize(raw)


def _load_window(arg: str) -> PhaseWindow:
    if ":" in arg and not os.path.exists(arg):
        arcs = []
        for piece in arg.split(","):
            lo, _, hi = piece.partition(":")
            arcs.append((float(lo), float(hi)))
        return PhaseWindow(tuple(arcs))
    return PhaseWindow.from_dict(_load_json(arg))


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _parse_float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


# ---------------------------------------------------------------- handlers


def cmd_validate(args, cfg: RunConfig) -> int:
    spec = _matrix_spec(args)
    if spec.get("kind") == "explicit":
        entries = np.array(
            [[complex(re, im) for re, im in row] for row in spec["entries"]]
        )
        report = observable.validate(entries)
    else:
        report = observable.validate(_load_matrix(args).entries)
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    _emit(text, cfg.out)
    if not report.valid:
        _diag("invalid-matrix", "phase matrix validation failed", report.to_dict())
        return 2
    return 0


def cmd_density(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    state = _load_state(args.state)
    if cfg.grid >= 2 * matrix.dim - 1:
        values = distribution.density_grid(matrix, state, cfg.grid)
    else:
        # grid too coarse for the FFT rearrangement; use the direct sum
        values = np.array(
            [
                distribution.density(matrix, state, state, TWO_PI * j / cfg.grid).real
                for j in range(cfg.grid)
            ]
        )
    rows = [(TWO_PI * j / cfg.grid, values[j]) for j in range(cfg.grid)]
    _emit(_csv("theta,value", rows), cfg.out)
    return 0


def cmd_cdf(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    state = _load_state(args.state)
    rows = []
    for j in range(cfg.grid + 1):
        theta = TWO_PI * j / cfg.grid if j < cfg.grid else TWO_PI
        rows.append((theta, distribution.exact_cdf(matrix, state, theta)))
    _emit(_csv("theta,value", rows), cfg.out)
    return 0


def cmd_window_prob(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    state = _load_state(args.state)
    window = _load_window(args.window)
    prob = distribution.window_probability(matrix, state, window)
    payload = {"probability": prob, "window_measure": window.measure}
    _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    return 0


def cmd_kraus(args, cfg: RunConfig) -> int:
    family = observable.kraus_decompose(_load_matrix(args))
    _emit(json.dumps(family.to_dict()) + "\n", cfg.out)
    return 0


def cmd_kernel_check(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    state = _load_state(args.state)
    nonzero = np.nonzero(state.coeffs)[0]
    s = int(nonzero[-1]) if nonzero.size else 0
    if s >= matrix.dim:
        raise PhaseObsError("state band limit exceeds matrix dimension")
    rows = []
    for j in range(8):
        theta = TWO_PI * j / 8
        direct = distribution.density(matrix, state, state, theta).real
        sandwich = distribution.kernel_apply(matrix, s, state, theta, cfg.grid)
        rows.append((theta, direct, sandwich, abs(direct - sandwich)))
    _emit(_csv("theta,density,kernel,abs_err", rows), cfg.out)
    return 0


def cmd_moment(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    spectrum = spectral.moment_spectrum(matrix)
    rows = [(i, val) for i, val in enumerate(spectrum)]
    _emit(_csv("index,eigenvalue", rows), cfg.out)
    return 0


def cmd_localize(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    window = _load_window(args.window)
    lam, maximizer = spectral.localization_max(matrix, window)
    payload = {"lambda_max": lam, "maximizer": maximizer.to_dict()}
    _emit(json.dumps(payload, indent=2) + "\n", cfg.out)
    return 0


def cmd_sweep(args, cfg: RunConfig) -> int:
    spec = _matrix_spec(args)
    window = _load_window(args.window)
    if cfg.truncations and cfg.q_sweep:
        raise PhaseObsError("use either --truncations or --q-sweep, not both")
    if cfg.truncations:
        rows = []
        for dim in cfg.truncations:
            lam, _ = spectral.localization_max(_matrix_at(spec, dim), window)
            rows.append((dim, lam))
        _emit(_csv("S,lambda_max", rows), cfg.out)
        return 0
    if cfg.q_sweep:
        if cfg.dim is None:
            raise PhaseObsError("--q-sweep requires --dim")
        rows = []
        for q in cfg.q_sweep:
            lam, _ = spectral.localization_max(
                PhaseMatrix.exponential(q, cfg.dim), window
            )
            rows.append((q, lam))
        _emit(_csv("q,lambda_max", rows), cfg.out)
        return 0
    raise PhaseObsError("sweep requires --truncations or --q-sweep")


def cmd_sample(args, cfg: RunConfig) -> int:
    matrix = _load_matrix(args)
    state = _load_state(args.state)
    draws = distribution.sample(matrix, state, cfg.samples, cfg.seed)
    _emit("".join(_fmt(x) + "\n" for x in draws), cfg.out)
    return 0


# ------------------------------------------------------------------ parser


def _add_common(sub, matrix=True, state=False, window=False):
    if matrix:
        sub.add_argument("--matrix", required=True,
                         help="matrix JSON file, or builtin name with --dim/--q")
    if state:
        sub.add_argument("--state", required=True, help="state JSON file")
    if window:
        sub.add_argument("--window", required=True,
                         help="window JSON file or inline lo:hi,lo:hi")
    sub.add_argument("--dim", type=int, default=None)
    sub.add_argument("--q", type=float, default=None)
    sub.add_argument("--out", default=None, help="output path (atomic write)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="phaseobs", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    handlers = {
        "validate": (cmd_validate, dict()),
        "density": (cmd_density, dict(state=True)),
        "cdf": (cmd_cdf, dict(state=True)),
        "window-prob": (cmd_window_prob, dict(state=True, window=True)),
        "kraus": (cmd_kraus, dict()),
        "kernel-check": (cmd_kernel_check, dict(state=True)),
        "moment": (cmd_moment, dict()),
        "localize": (cmd_localize, dict(window=True)),
        "sweep": (cmd_sweep, dict(window=True)),
        "sample": (cmd_sample, dict(state=True)),
    }
    for name, (handler, kinds) in handlers.items():
        sub = commands.add_parser(name)
        _add_common(sub, **kinds)
        if name in ("density", "cdf", "kernel-check"):
            sub.add_argument("--grid", type=int,
                             default=4096 if name == "kernel-check" else 256)
        if name == "sweep":
            sub.add_argument("--truncations", default="")
            sub.add_argument("--q-sweep", dest="q_sweep", default="")
        if name == "sample":
            sub.add_argument("--samples", type=int, required=True)
            sub.add_argument("--seed", type=int, default=0)
        sub.set_defaults(handler=handler)
    return parser


def _config_from(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        grid=getattr(args, "grid", 256),
        dim=args.dim,
        seed=getattr(args, "seed", 0),
        samples=getattr(args, "samples", 0),
        q=args.q,
        out=args.out,
        truncations=_parse_int_list(getattr(args, "truncations", "")),
        q_sweep=_parse_float_list(getattr(args, "q_sweep", "")),
    )


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _diag("usage", str(exc))
        return 1
    try:
        cfg = _config_from(args)
        return args.handler(args, cfg)
    except ValidationError as exc:
        _diag("validation", str(exc))
        return 2
    except (PhaseObsError, OSError, KeyError, TypeError, ValueError,
            json.JSONDecodeError) as exc:
        _diag("error", str(exc))
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
