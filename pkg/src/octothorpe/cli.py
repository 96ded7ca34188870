"""Command-line entry point.

Raw coefficients are always read as (a00, a10, a01, b00, b10, b01); canonical
parameters as (alpha, beta, a10, a01, b10, b01) and only behind --canonical."""

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .canonical import (CanonicalSystem, NonGeneric, SingularPayoffMatrix, normalize_to_family,
                        position_of_origin, to_canonical)
from .classifier import UnrealizablePosition, classify
from .compactification import classify_infinite
from .genericity import (HypothesesNotMet, discriminants, genericity_audit, limit_cycle_exists,
                         necessary_condition)
from .portrait import (Flow, cycle_orbit, detect_limit_cycle, omega_limit, render,
                       region_orbits, trace_separatrices)
from .replicator import (CorruptionPayoffs, RawSystem, TwoPlayerGame, corruption_conditions,
                         corruption_game, reduce_two_player, simulate_replicator)
from .singularities import all_finite

EXIT_IO, EXIT_NONGENERIC, EXIT_UNREALIZABLE = 1, 2, 3
CANONICAL_NAMES = ("alpha", "beta", "a10", "a01", "b10", "b01")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    coeffs: tuple | None = None
    canonical: tuple | None = None
    game: Path | None = None
    out: Path | None = None
    fmt: str = "json"
    atol: float = 1e-10
    rtol: float = 1e-9
    ball: float = 1e-5
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        sources = sum(x is not None for x in (self.coeffs, self.canonical, self.game))
        if sources > 1:
            raise InputError("give exactly one of --coeffs, --canonical, --game")
        for name in ("atol", "rtol", "ball"):
            if not getattr(self, name) > 0:
                raise InputError(f"tolerance {name} must be positive")

    @property
    def flow_options(self):
        return {"atol": self.atol, "rtol": self.rtol, "ball_radius": self.ball}


def _floats(text, n=None):
    try:
        vals = tuple(float(v) for v in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise InputError(f"cannot read numbers from {text!r}") from exc
    if n is not None and len(vals) != n:
        raise InputError(f"expected {n} comma-separated numbers, got {len(vals)}")
    return vals


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def load_system(cfg):
    """RawSystem or CanonicalSystem from the configured input source."""
    if cfg.canonical is not None:
        return CanonicalSystem(*cfg.canonical)
    if cfg.coeffs is not None:
        return RawSystem(*cfg.coeffs)
    if cfg.game is not None:
        data = _read_json(cfg.game)
        if "canonical" in data:
            return CanonicalSystem(*data["canonical"])
        if "coeffs" in data:
            return RawSystem(*data["coeffs"])
        if "A" in data and "B" in data:
            return reduce_two_player(TwoPlayerGame(np.array(data["A"]), np.array(data["B"])))
        raise InputError("game file needs 'A' and 'B', 'coeffs' or 'canonical'")
    raise InputError("no input: use --coeffs, --canonical or --game")


def _gate(system):
    check = necessary_condition(system)
    if not check:
        raise NonGeneric("a10*b01*detA vanishes", witness=list(check.witnesses))
    return system if isinstance(system, CanonicalSystem) else to_canonical(system)


def _cycle_verdict(c):
    try:
        return limit_cycle_exists(c)
    except HypothesesNotMet:
        return None


def classify_report(system, cfg, audit=True):
    c = _gate(system)
    pos = position_of_origin(c)
    result = classify(c, flow_options=cfg.flow_options)
    red = normalize_to_family(c)
    report = {
        "input": system.as_tuple() if isinstance(system, RawSystem) else list(system.params),
        "canonical": c.to_json(),
        "position": pos.index,
        "family": red.family,
        "case": result.label.name,
        "label": result.label.to_json(),
        "class": result.portrait.to_json() if result.portrait else None,
        "singularities": [r.to_json() for r in all_finite(c)],
        "infinity": [r.to_json() for r in classify_infinite(c)],
        "discriminants": discriminants(red.system).to_json(),
        "limit_cycle": _cycle_verdict(red.system) if red.position == 1 else None,
    }
    if audit:
        report["audit"] = genericity_audit(red.system, skeleton=result.skeleton).to_json()
    return report


def _text(report):
    lines = [f"position {report['position']}, family {report['family']}, case {report['case']}"]
    cls = report.get("class")
    if cls:
        lines.append(f"disk class {cls['disk_class']}, square class {cls['square_class']}")
        if cls["candidates"]:
            lines.append("candidates: " + ", ".join(cls["candidates"]))
    if report.get("limit_cycle") is not None:
        lines.append(f"limit cycle: {'yes' if report['limit_cycle'] else 'no'}")
    if "audit" in report:
        lines.append(f"genericity audit: {'pass' if report['audit']['passed'] else 'fail'}")
    for s in report["singularities"]:
        lines.append(f"  {s['id']:<7} {s['type']}")
    return "\n".join(lines) + "\n"


def _emit(cfg, text, name):
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / name).write_text(text)


def cmd_classify(cfg):
    report = classify_report(load_system(cfg), cfg)
    text = _text(report) if cfg.fmt == "text" else json.dumps(report, indent=2) + "\n"
    _emit(cfg, text, "classify." + ("txt" if cfg.fmt == "text" else "json"))


def cmd_portrait(cfg):
    system = load_system(cfg)
    c = _gate(system)
    flow = Flow(c, **cfg.flow_options)
    skel = trace_separatrices(c, flow)
    skel.orbits = region_orbits(c, flow)
    cycles, cycle_traj = [], None
    if _cycle_verdict(c):
        cy = detect_limit_cycle(c, flow=flow)
        if cy is not None:
            cycles.append(cy)
            cycle_traj = cycle_orbit(c, cy, flow)
    docs = {
        "portrait_disk.svg": render(c, skel, "disk", cycle=cycle_traj),
        "portrait_square.svg": render(c, skel, "square", cycle=cycle_traj),
        "skeleton.json": json.dumps(skel.to_json(stride=8, cycles=cycles)) + "\n",
    }
    if cfg.out is None:
        key = "portrait_square.svg" if cfg.extra.get("view") == "square" else "portrait_disk.svg"
        sys.stdout.write(docs["skeleton.json"] if cfg.fmt == "json" else docs[key])
        return
    for name, text in docs.items():
        _emit(cfg, text, name)


def cmd_simulate(cfg):
    system = load_system(cfg)
    c = _gate(system)
    x, y = cfg.extra["start"]
    shift = (0.0, 0.0) if cfg.canonical is not None else (c.alpha, c.beta)
    flow = Flow(c, **cfg.flow_options)
    traj = flow.integrate((x - shift[0], y - shift[1]), cfg.extra["direction"], "P",
                          max_time=cfg.extra["time"], max_steps=cfg.extra["steps"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x", "y"])
    for (t, ch, a, b), (px, py) in zip(traj.samples, traj.planar_points()):
        if ch == "P":
            w.writerow([f"{t:.10g}", f"{px + shift[0]:.12g}", f"{py + shift[1]:.12g}"])
    _emit(cfg, buf.getvalue(), "trajectory.csv")


def _sweep_cell(args):
    base, names, values, flow_options, trace = args
    params = dict(zip(CANONICAL_NAMES, base))
    params.update(zip(names, values))
    c = CanonicalSystem(*(params[n] for n in CANONICAL_NAMES))
    row = list(values)
    try:
        red = normalize_to_family(c)
        result = classify(c, trace=trace, flow_options=flow_options)
        audit = genericity_audit(red.system, skeleton=result.skeleton, numerical=trace)
        cls = result.portrait.disk_class if result.portrait else None
        cycle = _cycle_verdict(red.system) if red.position == 1 else None
        row += [red.position, red.family, result.label.name, cls or "",
                "" if cycle is None else int(cycle), int(audit.passed)]
    except (NonGeneric, UnrealizablePosition, SingularPayoffMatrix) as exc:
        row += [position_of_origin(c).index, "", type(exc).__name__, "", "", 0]
    return row


def _grid(axis):
    lo, hi, n = axis.split(":")
    return [float(v) for v in np.linspace(float(lo), float(hi), int(n))]


def cmd_sweep(cfg):
    if cfg.canonical is None:
        raise InputError("sweep needs a base system given with --canonical")
    names = cfg.extra["params"]
    for n in names:
        if n not in CANONICAL_NAMES:
            raise InputError(f"unknown sweep parameter {n!r}")
    if cfg.extra.get("samples"):
        rng = random.Random(cfg.seed)
        ranges = [tuple(float(v) for v in r.split(":")[:2]) for r in cfg.extra["ranges"]]
        cells = [tuple(rng.uniform(lo, hi) for lo, hi in ranges) for _ in range(cfg.extra["samples"])]
    else:
        axes = [_grid(r) for r in cfg.extra["ranges"]]
        cells = [tuple(v) for v in np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T]
    jobs = [(cfg.canonical, names, cell, cfg.flow_options, cfg.extra["trace"]) for cell in cells]
    workers = cfg.extra.get("workers", 1)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_sweep_cell, jobs))
    else:
        rows = [_sweep_cell(j) for j in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(names) + ["position", "family", "case", "class", "limit_cycle", "audit_pass"])
    for row in rows:
        w.writerow([f"{v:.10g}" if isinstance(v, float) else v for v in row])
    _emit(cfg, buf.getvalue(), "sweep.csv")


def cmd_replicator(cfg):
    data = _read_json(cfg.game) if cfg.game else {}
    A = np.array(data.get("A") or json.loads(cfg.extra["matrix"]), dtype=float)
    x0 = data.get("x0") or _floats(cfg.extra["x0"])
    path = simulate_replicator(x0, A, dt=cfg.extra["dt"], steps=cfg.extra["steps"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"x{i + 1}" for i in range(A.shape[0])])
    for k, x in enumerate(path):
        w.writerow([f"{k * cfg.extra['dt']:.10g}"] + [f"{v:.12g}" for v in x])
    _emit(cfg, buf.getvalue(), "replicator.csv")


def corruption_report(payoffs, grid=20, flow_options=None):
    """Square-level summary of the corruption game: corner types and where a grid of starts ends."""
    raw = reduce_two_player(corruption_game(payoffs))
    c = to_canonical(raw)
    flow = Flow(c, **(flow_options or {}))
    corners = {"p1": (0, 0), "p2": (1, 0), "p3": (1, 1), "p4": (0, 1)}
    types = {r.id: r.local_type for r in all_finite(c) if r.location is not None}
    ends = {}
    for i in range(grid):
        for j in range(grid):
            x, y = (i + 0.5) / grid, (j + 0.5) / grid
            end = omega_limit(c, (x - c.alpha, y - c.beta), flow)
            key = str(list(corners[end])) if end in corners else end
            ends[key] = ends.get(key, 0) + 1
    attractors = sorted(str(list(corners[k])) for k in corners if types[k].startswith("stable"))
    return {
        "coefficients": dict(zip(("a00", "a10", "a01", "b00", "b10", "b01"), raw.as_tuple())),
        "sign_conditions": bool(corruption_conditions(raw)),
        "interior_point": [c.alpha, c.beta],
        "corner_types": {str(list(corners[k])): types[k] for k in corners},
        "interior_type": types["origin"],
        "attractors": attractors,
        "omega_limits": ends,
        "generic": bool(necessary_condition(raw)),
        "note": "a10 = b01 = 0 puts this game outside the generic set; only the square is classified",
    }


def cmd_example_corruption(cfg):
    p = CorruptionPayoffs(**cfg.extra["payoffs"])
    report = corruption_report(p, cfg.extra["grid"], cfg.flow_options)
    if cfg.fmt == "text":
        text = (f"attractors {', '.join(report['attractors'])}; interior {report['interior_type']}; "
                f"grid ends {report['omega_limits']}\n")
    else:
        text = json.dumps(report, indent=2) + "\n"
    _emit(cfg, text, "corruption." + ("txt" if cfg.fmt == "text" else "json"))


COMMANDS = {"classify": cmd_classify, "portrait": cmd_portrait, "simulate": cmd_simulate,
            "sweep": cmd_sweep, "replicator": cmd_replicator,
            "example-corruption": cmd_example_corruption}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeffs", help="a00,a10,a01,b00,b10,b01")
    common.add_argument("--canonical", nargs="?", const=True,
                        help="alpha,beta,a10,a01,b10,b01 (or a flag marking --coeffs as canonical)")
    common.add_argument("--game", type=Path, help="JSON file: payoff matrices A and B, coeffs or canonical")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", dest="fmt", default="json", choices=("json", "text", "svg", "csv"))
    common.add_argument("--tol-atol", type=float, default=1e-10)
    common.add_argument("--tol-rtol", type=float, default=1e-9)
    common.add_argument("--tol-ball", type=float, default=1e-5)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="octothorpe", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common])
    pp = sub.add_parser("portrait", parents=[common])
    pp.add_argument("--view", default="disk", choices=("disk", "square"))
    ps = sub.add_parser("simulate", parents=[common])
    ps.add_argument("--start", required=True, help="x,y in the input's coordinates")
    ps.add_argument("--time", type=float, default=50.0)
    ps.add_argument("--steps", type=int, default=20000)
    ps.add_argument("--backward", action="store_true")
    pw = sub.add_parser("sweep", parents=[common])
    pw.add_argument("--param", action="append", required=True, metavar="NAME=LO:HI:N")
    pw.add_argument("--samples", type=int, default=0, help="random cells instead of a grid")
    pw.add_argument("--workers", type=int, default=1)
    pw.add_argument("--no-trace", action="store_true", help="skip separatrix-based subcases")
    pr = sub.add_parser("replicator", parents=[common])
    pr.add_argument("--matrix", help="JSON payoff matrix, e.g. [[0,1],[1,0]]")
    pr.add_argument("--x0", help="initial mixed strategy")
    pr.add_argument("--dt", type=float, default=1e-2)
    pr.add_argument("--steps", type=int, default=1000)
    pc = sub.add_parser("example-corruption", parents=[common])
    defaults = {"W": 1.0, "M": 2.0, "Mc": 1.0, "Mg": 1.0, "Mg_prime": 0.5, "e": 3.0,
                "V_gc": 1.0, "V_gnc": 2.0, "KP": 0.5}
    for name, value in defaults.items():
        pc.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, default=value)
    pc.add_argument("--grid", type=int, default=20)
    return p, defaults


_NUMERIC_OPTIONS = ("--coeffs", "--canonical", "--start", "--x0")


def _join_numeric(argv):
    """Glue values such as "-0.5,1" to their option so they are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in _NUMERIC_OPTIONS and i + 1 < len(argv) and argv[i + 1][:1] == "-" \
                and argv[i + 1][1:2] in "0123456789.":
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def config_from_args(argv):
    parser, payoff_names = _parser()
    ns = parser.parse_args(_join_numeric(list(argv)))
    coeffs = _floats(ns.coeffs, 6) if ns.coeffs else None
    canonical = None
    if isinstance(ns.canonical, str):
        canonical = _floats(ns.canonical, 6)
    elif ns.canonical is True:
        if coeffs is None:
            raise InputError("--canonical as a flag needs --coeffs")
        canonical, coeffs = coeffs, None
    extra = {}
    if ns.command == "portrait":
        extra["view"] = ns.view
    elif ns.command == "simulate":
        extra.update(start=_floats(ns.start, 2), time=ns.time, steps=ns.steps,
                     direction=-1.0 if ns.backward else 1.0)
    elif ns.command == "sweep":
        names, ranges = [], []
        for item in ns.param:
            if "=" not in item:
                raise InputError(f"--param needs NAME=LO:HI:N, got {item!r}")
            name, rng = item.split("=", 1)
            names.append(name)
            ranges.append(rng)
        extra.update(params=names, ranges=ranges, samples=ns.samples, workers=ns.workers,
                     trace=not ns.no_trace)
    elif ns.command == "replicator":
        extra.update(matrix=ns.matrix, x0=ns.x0, dt=ns.dt, steps=ns.steps)
    elif ns.command == "example-corruption":
        extra.update(payoffs={k: getattr(ns, k) for k in payoff_names}, grid=ns.grid)
    return RunConfig(ns.command, coeffs, canonical, ns.game, ns.out, ns.fmt,
                     ns.tol_atol, ns.tol_rtol, ns.tol_ball, ns.seed, extra)


def _fail(code, kind, message, **more):
    sys.stderr.write(json.dumps({"error": kind, "message": message, **more}) + "\n")
    return code


def run(cfg):
    try:
        COMMANDS[cfg.command](cfg)
    except NonGeneric as exc:
        return _fail(EXIT_NONGENERIC, "NonGeneric", str(exc), witness=exc.witness)
    except SingularPayoffMatrix as exc:
        return _fail(EXIT_NONGENERIC, "NonGeneric", str(exc), witness="detA")
    except UnrealizablePosition as exc:
        return _fail(EXIT_UNREALIZABLE, "UnrealizablePosition", str(exc))
    except (OSError, InputError, json.JSONDecodeError) as exc:
        return _fail(EXIT_IO, type(exc).__name__, str(exc))
    return 0


def main(argv=None):
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except InputError as exc:
        return _fail(EXIT_IO, "InputError", str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
