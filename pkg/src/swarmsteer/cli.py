"""Headless command-line entry point.

Subcommands:
  run         simulate a scenario, write trajectory / loss / probe artifacts
  validate    load-check a scenario file without simulating
  field-dump  raster the composite guidance field for external plotting

Exit codes: 0 success, 1 golden-record mismatch, 2 scenario load failure,
3 stability-probe violation (--strict), 4 safety violation (--strict).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .engine import Engine, export_records, stability_probe
from .fields import bump_zero_in, composite_field, path_from_polyline
from .world import ScenarioError, format_loss_table, load_scenario, loss_areas

EXIT_OK = 0
EXIT_GOLDEN_MISMATCH = 1
EXIT_LOAD_FAILURE = 2
EXIT_PROBE_VIOLATION = 3
EXIT_SAFETY_VIOLATION = 4


def _load_script(path: str | None):
    if path is None or path == "none":
        return []
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, list):
        raise ScenarioError("script file must contain a list of timed commands")
    return doc


def cmd_run(args) -> int:
    try:
        world = load_scenario(args.scenario)
        if args.dt is not None:
            world.dt = float(args.dt)
        script = _load_script(args.script)
    except (ScenarioError, OSError, json.JSONDecodeError) as exc:
        print(f"load failure: {exc}", file=sys.stderr)
        return EXIT_LOAD_FAILURE

    engine = Engine(world)
    engine.run(args.duration, script=script)
    export = export_records(engine.records)

    out = Path(args.out) if args.out else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "trajectory.csv").write_text(export)
        losses = loss_areas(world)
        (out / "loss.txt").write_text(format_loss_table({"run": losses}))
        report = stability_probe(engine.records, world.weights)
        (out / "probe.txt").write_text(report.format())
        events = "\n".join(f"{t:.2f}\t{kind}\t{detail}" for t, kind, detail in engine.events)
        (out / "events.txt").write_text(events + ("\n" if events else ""))
    else:
        report = stability_probe(engine.records, world.weights)

    status = EXIT_OK
    if args.golden:
        ref = Path(args.golden).read_bytes()
        if ref != export.encode():
            print("golden mismatch", file=sys.stderr)
            status = EXIT_GOLDEN_MISMATCH
    if args.strict:
        if any(kind == "violation" for _, kind, _ in engine.events):
            print("safety violation during run", file=sys.stderr)
            status = EXIT_SAFETY_VIOLATION
        elif not report.ok:
            print("stability probe violation", file=sys.stderr)
            status = EXIT_PROBE_VIOLATION
    print(f"ran {engine.tick_count} ticks, clock {world.clock:.2f}s, "
          f"loss total {sum(loss_areas(world)):.1f}")
    return status


def cmd_validate(args) -> int:
    try:
        load_scenario(args.scenario)
    except (ScenarioError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_LOAD_FAILURE
    print("valid")
    return EXIT_OK


def cmd_field_dump(args) -> int:
    try:
        world = load_scenario(args.scenario)
    except (ScenarioError, OSError, json.JSONDecodeError) as exc:
        print(f"load failure: {exc}", file=sys.stderr)
        return EXIT_LOAD_FAILURE
    points = json.loads(args.path_points)
    path = path_from_polyline(points)
    xs = np.linspace(args.xmin, args.xmax, args.nx)
    ys = np.linspace(args.ymin, args.ymax, args.ny)
    lines = ["x,y,vx,vy,gate"]
    for y in ys:
        for x in xs:
            xi = np.array([x, y])
            v = composite_field(path, world.obstacles, xi, {})
            gate = 1.0
            for ob in world.obstacles:
                gate *= bump_zero_in(ob, xi)
            lines.append(
                f"{float(x)!r},{float(y)!r},{float(v[0])!r},{float(v[1])!r},{float(gate)!r}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swarmsteer", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario")
    run.add_argument("--scenario", required=True)
    run.add_argument("--duration", type=float, default=120.0)
    run.add_argument("--dt", type=float, default=None)
    run.add_argument("--out", default=None)
    run.add_argument("--script", default=None, help="timed command file, or 'none'")
    run.add_argument("--golden", default=None, help="reference trajectory for byte compare")
    run.add_argument("--strict", action="store_true")
    run.add_argument("--serve", type=int, default=None, metavar="PORT",
                     help="serve the operator gateway instead of batch running")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a scenario file")
    val.add_argument("--scenario", required=True)
    val.set_defaults(func=cmd_validate)

    dump = sub.add_parser("field-dump", help="raster the guidance field")
    dump.add_argument("--scenario", required=True)
    dump.add_argument("--path-points", required=True,
                      help="JSON list of [x, y] waypoints for the guided path")
    dump.add_argument("--xmin", type=float, required=True)
    dump.add_argument("--xmax", type=float, required=True)
    dump.add_argument("--ymin", type=float, required=True)
    dump.add_argument("--ymax", type=float, required=True)
    dump.add_argument("--nx", type=int, default=50)
    dump.add_argument("--ny", type=int, default=50)
    dump.add_argument("--out", default=None)
    dump.set_defaults(func=cmd_field_dump)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run" and args.serve is not None:
        try:
            world = load_scenario(args.scenario)
            if args.dt is not None:
                world.dt = float(args.dt)
        except (ScenarioError, OSError, json.JSONDecodeError) as exc:
            print(f"load failure: {exc}", file=sys.stderr)
            return EXIT_LOAD_FAILURE
        from .gateway import serve
        serve(Engine(world), args.serve)
        return EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
