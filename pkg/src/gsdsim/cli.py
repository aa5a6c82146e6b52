"""Command-line front end.

Subcommands: play, table1, gain-sweep, loss-curve, delays, timing.

Settings come from (highest priority first) command-line flags, a flat
TOML config file given by ``--config`` or ``$GSD_CONFIG``, then built-in
defaults.  Tabular output is CSV or JSON; every CSV starts with a comment
line holding the tool version and a hash of the resolved configuration.

Exit codes: 0 success, 1 photon lost or game not won, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from typing import Any, Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__
from .circuit import (
    MAX_LEVELS,
    as_bits,
    bits_to_str,
    delay_schedule,
    parity_of_leaf,
)
from .infotheory import (
    MAX_ENUM_LEVELS,
    analytic_total,
    enumerate_gains,
    optimal_m,
    table1_report,
)
from .noise import PhysicalParams, loss_curve, monte_carlo_rate
from .optics import StageNoise
from .protocol import (
    Agent,
    DetectorAssignment,
    level_parity_assignment,
    play_round,
    single_alice_assignment,
    two_detector_assignment,
)
from .timing import (
    Geometry,
    classical_bits_within,
    classical_deadline,
    feasibility_max_n,
    quantum_window,
    validate_window,
)

EXIT_OK = 0
EXIT_LOST = 1
EXIT_USAGE = 2

PAPER_PARAMS = PhysicalParams.quantum_dot_snspd()

DEFAULTS: dict[str, Any] = {
    "n": None,
    "x": None,
    "y": None,
    "assignment": "balanced",
    "m": None,
    "p1": PAPER_PARAMS.p1,
    "eps": 0.0,
    "jitter": 0.0,
    "eta_d": PAPER_PARAMS.eta_d,
    "d": 300.0,
    "delta": 1.0,
    "c": 3.0e8,
    "slack": 0.0,
    "ratio": 100.0,
    "trials": None,
    "seed": None,
    "out": None,
    "format": "csv",
}

CONFIG_KEYS = frozenset(DEFAULTS)


class UsageError(Exception):
    pass


def load_config(path: Optional[str]) -> dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve(args: argparse.Namespace, keys: Sequence[str],
            defaults: Optional[dict[str, Any]] = None) -> dict[str, Any]:
    path = args.config or os.environ.get("GSD_CONFIG")
    file_values = load_config(path)
    base = {**DEFAULTS, **(defaults or {})}
    cfg = {}
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
        elif key in file_values:
            cfg[key] = file_values[key]
        else:
            cfg[key] = base[key]
    return cfg


def config_hash(command: str, cfg: dict[str, Any]) -> str:
    blob = json.dumps({"command": command, **cfg}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def parse_assignment(spec: str, n: int) -> DetectorAssignment:
    """``balanced``, ``two-detector``, ``level-parity:K``, ``single-alice[:LEAF]``,
    ``bob:L1,L2,...`` or an explicit pattern such as ``ABBA``."""
    text = spec.strip().lower()
    head, _, arg = text.partition(":")
    if head == "balanced":
        return level_parity_assignment(n, n)
    if head == "two-detector":
        return two_detector_assignment(n)
    if head == "level-parity":
        return level_parity_assignment(n, int(arg))
    if head == "single-alice":
        return single_alice_assignment(n, int(arg) if arg else 1)
    if head == "bob":
        leaves = [int(tok) for tok in arg.split(",") if tok.strip()]
        return DetectorAssignment.from_bob_leaves(n, leaves)
    assignment = DetectorAssignment.from_pattern(spec)
    if assignment.n != n:
        raise ValueError(f"pattern {spec!r} has {len(assignment.owners)} leaves, need {1 << n}")
    return assignment


def _fmt(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return str(value).lower()
    return value


def render_table(command: str, cfg: dict[str, Any], header: Sequence[str],
                 rows: Sequence[Sequence[Any]]) -> str:
    if cfg.get("format", "csv") == "json":
        payload = {
            "tool": f"gsdsim {__version__}",
            "command": command,
            "config_hash": config_hash(command, cfg),
            "rows": [dict(zip(header, row)) for row in rows],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# gsdsim {__version__} command={command} config_sha256={config_hash(command, cfg)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_n(cfg: dict[str, Any], cap: int = MAX_LEVELS) -> int:
    n = cfg["n"]
    if n is None:
        raise UsageError("--n is required")
    n = int(n)
    if not 1 <= n <= cap:
        raise UsageError(f"--n must lie in 1..{cap}")
    return n


def cmd_play(args: argparse.Namespace) -> int:
    cfg = resolve(args, ["n", "x", "y", "assignment", "eps", "jitter", "seed", "out", "format"])
    if cfg["x"] is None or cfg["y"] is None:
        raise UsageError("play needs --x and --y")
    x_text, y_text = str(cfg["x"]), str(cfg["y"])
    if cfg["n"] is None:
        cfg["n"] = len(x_text)
    n = _require_n(cfg)
    try:
        x = as_bits(x_text, n)
        y = as_bits(y_text, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    noise = StageNoise(loss_per_stage=float(cfg["eps"]), phase_jitter_halfwidth=float(cfg["jitter"]))
    rng = None
    if not noise.is_ideal:
        if cfg["seed"] is None:
            raise UsageError("noisy play needs --seed")
        rng = np.random.default_rng(int(cfg["seed"]))
    assignment = parse_assignment(str(cfg["assignment"]), n)
    report = play_round(x, y, assignment, noise, rng)
    record = {"assignment": assignment.pattern, **report.to_dict()}
    record["config_hash"] = config_hash("play", cfg)

    if report.outcome.lost:
        human = "photon lost; no click in the window; ABORT"
    else:
        click = report.outcome.result
        clicker, silent = click.owner, click.owner.other
        target = "y" if clicker is Agent.ALICE else "x"
        gain = report.silent_knowledge.bits_gained
        human = (
            f"{clicker.label} clicks (leaf {click.leaf}, delay {click.delay} delta); "
            f"{clicker.label} decodes {target}={bits_to_str(report.clicker_decode)}; "
            f"{silent.label} gains {gain:g} bit{'s' if gain != 1 else ''}; "
            f"{'WIN' if report.win else 'NO WIN'}"
        )
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    if cfg["format"] == "json":
        emit(text, cfg["out"])
    else:
        print(human)
        if cfg["out"]:
            emit(text, cfg["out"])
    return EXIT_OK if report.win else EXIT_LOST


def cmd_table1(args: argparse.Namespace) -> int:
    cfg = resolve(args, ["out", "format"])
    rows = [(r.case, r.pattern, r.bob_gain) for r in table1_report()]
    emit(render_table("table1", cfg, ["case", "pattern", "bob_gain"], rows), cfg["out"])
    return EXIT_OK


def cmd_gain_sweep(args: argparse.Namespace) -> int:
    cfg = resolve(args, ["n", "out", "format"])
    n = _require_n(cfg, cap=30)
    best = optimal_m(n)
    rows = []
    for m in range((1 << n) + 1):
        enumerated: Any = ""
        if n <= min(8, MAX_ENUM_LEVELS):
            assignment = DetectorAssignment.from_bob_leaves(n, range(1, m + 1))
            enumerated = enumerate_gains(n, assignment).total
        rows.append((m, analytic_total(n, m), enumerated, m == best))
    header = ["m", "analytic_total", "enumerated_total", "argmax"]
    emit(render_table("gain-sweep", cfg, header, rows), cfg["out"])
    return EXIT_OK


def cmd_loss_curve(args: argparse.Namespace) -> int:
    cfg = resolve(args, ["n", "p1", "eps", "eta_d", "trials", "seed", "out", "format"],
                  defaults={"n": 40, "eps": PAPER_PARAMS.eps_stage})
    n_max = _require_n(cfg, cap=10_000)
    params = PhysicalParams(p1=float(cfg["p1"]), eps_stage=float(cfg["eps"]), eta_d=float(cfg["eta_d"]))
    curve = loss_curve(1, n_max, params)
    header = ["n", "success_rate"]
    rows: list[tuple] = [tuple(pt) for pt in curve]
    if cfg["trials"] is not None:
        if cfg["seed"] is None:
            raise UsageError("Monte Carlo runs need --seed")
        trials, seed = int(cfg["trials"]), int(cfg["seed"])
        header += ["mc_rate", "mc_stderr"]
        rows = [(n, rate, *monte_carlo_rate(n, params, trials, seed + n)) for n, rate in curve]
    emit(render_table("loss-curve", cfg, header, rows), cfg["out"])
    return EXIT_OK


def cmd_delays(args: argparse.Namespace) -> int:
    cfg = resolve(args, ["n", "out", "format"])
    n = _require_n(cfg, cap=16)
    sched = delay_schedule(n)
    rows = []
    for leaf in range(1, (1 << n) + 1):
        side = Agent.ALICE if leaf % 2 else Agent.BOB
        rows.append((leaf, bits_to_str(parity_of_leaf(leaf, n)), sched.leaf_delay(leaf), side.label))
    header = ["leaf", "parity", "delay_delta", "detector"]
    emit(render_table("delays", cfg, header, rows), cfg["out"])
    return EXIT_OK


def cmd_timing(args: argparse.Namespace) -> int:
    cfg = resolve(args, ["n", "d", "delta", "c", "slack", "ratio", "out", "format"])
    n = _require_n(cfg, cap=10_000)
    geom = Geometry(d=float(cfg["d"]), delta=float(cfg["delta"]), c=float(cfg["c"]),
                    slack=float(cfg["slack"]))
    t_lo, t_hi = quantum_window(n, geom)
    rows = [
        ("t_lo_s", t_lo),
        ("t_hi_s", t_hi),
        ("classical_deadline_s", classical_deadline(n, geom)),
        ("window_valid", validate_window(n, geom)),
        ("classical_bits_in_window", classical_bits_within(t_hi, geom)),
        ("quantum_total_gain_bits", analytic_total(n, 1 << (n - 1)) if n <= 60 else n + 1),
        ("feasibility_max_n", feasibility_max_n(geom, float(cfg["ratio"]))),
    ]
    emit(render_table("timing", cfg, ["quantity", "value"], rows), cfg["out"])
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, *flags: str) -> None:
    p.add_argument("--config", help="flat TOML config file (default: $GSD_CONFIG)")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--format", choices=["csv", "json"])
    spec = {
        "n": dict(type=int, help="number of levels"),
        "x": dict(help="Alice's bit string, level 1 first"),
        "y": dict(help="Bob's bit string, level 1 first"),
        "assignment": dict(help="balanced | two-detector | level-parity:K | single-alice[:LEAF] "
                                "| bob:L1,L2 | pattern such as ABBA"),
        "m": dict(type=int, help="number of detectors held by Bob"),
        "p1": dict(type=float, help="single-photon probability per pulse"),
        "eps": dict(type=float, help="optical loss per stage"),
        "jitter": dict(type=float, help="phase jitter half-width in radians"),
        "eta-d": dict(type=float, dest="eta_d", help="detector efficiency"),
        "d": dict(type=float, help="distance between the agents (m)"),
        "delta": dict(type=float, help="inter-level fibre length (m)"),
        "c": dict(type=float, help="carrier speed (m/s)"),
        "slack": dict(type=float, help="time slack of the window (s)"),
        "ratio": dict(type=float, help="how many times 2**n * delta must fit in d"),
        "trials": dict(type=int, help="Monte Carlo trials"),
        "seed": dict(type=int, help="RNG seed"),
    }
    for flag in flags:
        p.add_argument(f"--{flag}", **spec[flag])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsdsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gsdsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="run one round of the game")
    _add_common(p, "n", "x", "y", "assignment", "eps", "jitter", "seed")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("table1", help="Bob's gain for the eight n=2 assignments")
    _add_common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("gain-sweep", help="total gain versus Bob's detector count")
    _add_common(p, "n")
    p.set_defaults(func=cmd_gain_sweep)

    p = sub.add_parser("loss-curve", help="success rate versus number of levels")
    _add_common(p, "n", "p1", "eps", "eta-d", "trials", "seed")
    p.set_defaults(func=cmd_loss_curve)

    p = sub.add_parser("delays", help="leaf delays of the two-detector circuit")
    _add_common(p, "n")
    p.set_defaults(func=cmd_delays)

    p = sub.add_parser("timing", help="quantum window versus the classical baseline")
    _add_common(p, "n", "d", "delta", "c", "slack", "ratio")
    p.set_defaults(func=cmd_timing)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"gsdsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
