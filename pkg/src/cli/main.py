"""
dshell command-line interface

Subcommands: gen, analyze, partition, shell, slice, report, run, preview.
Exit codes: 0 success, 1 constraint or printability violation (or a
failing stage), 2 input error. Inputs are validated before any file is
written.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.config.constants import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VIOLATION,
    SHELL_FILE,
    PARTITION_FILE,
    Family,
    MeshKind,
    PreviewKind,
)
from src.config.settings import Settings
from src.core.errors import DoubleShellError, InputError
from src.core.mesh.generator import gen_testmesh
from src.core.mesh.mesh_io import load_mesh, write_mesh
from src.core.partition.pipeline import PartitionResult
from src.core.pipeline import FabricationPipeline, analyze_mesh, run_pipeline
from src.core.report.artifacts import read_json, toolpath_files
from src.core.report.preview import export_preview
from src.core.shell.builder import ShellResult
from src.utils.logger import logger, set_level

# flag dest -> Settings field
SETTING_FLAGS = {
    "gamma": "gamma",
    "bbox": "bbox",
    "dq": "dq",
    "nozzle": "nozzle",
    "thickness": "thickness",
    "rib_spacing": "rib_spacing",
    "rib_gap": "rib_gap",
    "h_target": "h_target",
    "speed_wall": "speed_wall",
    "speed_support": "speed_support",
    "hatch": "hatch",
    "workers": "workers",
}


def parse_bbox(text: str) -> List[float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"bbox must be X,Y,Z, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bbox must be numeric, got {text!r}")


def common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand"""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", help="Input mesh (or stage artifact)")
    p.add_argument("--out", default="out", help="Output directory (default: out)")
    p.add_argument("--config", help="JSON file of parameter overrides")
    p.add_argument("--gamma", type=float, help="Max print angle variation (rad)")
    p.add_argument("--bbox", type=parse_bbox, help="Reachable box X,Y,Z (mm)")
    p.add_argument("--dq", type=int, help="D2 transversal cut truncation (edges)")
    p.add_argument("--nozzle", type=float, help="Nozzle diameter n (mm)")
    p.add_argument("--thickness", type=float, help="Total shell thickness t (mm)")
    p.add_argument("--rib-spacing", type=int, help="Every k-th rail line carries a rib")
    p.add_argument("--rib-gap", type=float, help="Clearance at rib crossings (mm)")
    p.add_argument("--h-target", type=float, help="Target layer height (mm)")
    p.add_argument("--speed-wall", type=float, help="Object print speed (mm/s)")
    p.add_argument("--speed-support", type=float, help="Support print speed (mm/s)")
    p.add_argument("--hatch", type=float, help="Scaffold hatch spacing (mm)")
    p.add_argument("--workers", type=int, help="Slicing threads")
    p.add_argument("--name", help="Model name in the report")
    p.add_argument("--log", choices=["error", "warn", "info", "debug"], help="Log level (overrides DSHELL_LOG)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = common_parser()
    parser = argparse.ArgumentParser(
        prog="dshell",
        description="Double-shell partitioning and non-planar toolpath planning for SDQ meshes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="Write a synthetic SDQ test mesh")
    gen.add_argument("kind", choices=[k.value for k in MeshKind])
    for flag, kind in (
        ("--rows", int), ("--cols", int), ("--size", float), ("--radius", float),
        ("--minor-radius", float), ("--height", float), ("--amplitude", float),
        ("--sweep", float), ("--inner-radius", float), ("--sector", int),
    ):
        gen.add_argument(flag, type=kind)

    sub.add_parser("analyze", parents=[common], help="Print the singularity census as JSON")
    sub.add_parser("partition", parents=[common], help="Partition both strip networks")
    sub.add_parser("shell", parents=[common], help="Build the double shell from partition.json")
    sub.add_parser("slice", parents=[common], help="Write per-piece toolpaths from shell.json")
    sub.add_parser("report", parents=[common], help="Write the fabrication report")
    sub.add_parser("run", parents=[common], help="Run every stage")
    preview = sub.add_parser("preview", parents=[common], help="Export OBJ/SVG previews")
    preview.add_argument("--kind", default=PreviewKind.PATCHES.value, choices=[k.value for k in PreviewKind])
    return parser


def load_settings(args: argparse.Namespace) -> Settings:
    """
    defaults < DSHELL_* environment < --config JSON < flags

    Raises:
        InputError: unreadable config or unknown keys
        ValidationError: invalid values
    """
    values: Dict[str, Any] = Settings().model_dump()
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise InputError(f"config file not found: {path}")
        try:
            overrides = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise InputError(f"invalid config JSON: {e}")
        unknown = sorted(set(overrides) - set(Settings.model_fields))
        if unknown:
            raise InputError(f"unknown config keys: {unknown}")
        values.update(overrides)
    for dest, field in SETTING_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[field] = value
    if args.log:
        values["log"] = args.log
    settings = Settings(**values)
    # config objects validate the cross-field invariants up front
    settings.partition_config()
    settings.shell_config()
    settings.print_config()
    return settings


def _require_input(args: argparse.Namespace) -> Path:
    if not args.input:
        raise InputError(f"{args.command} needs --input")
    return Path(args.input)


def _artifact(args: argparse.Namespace, default: str) -> dict:
    return read_json(Path(args.input) if args.input else Path(args.out) / default)


def cmd_gen(args, settings) -> int:
    params = {
        k: getattr(args, k)
        for k in ("rows", "cols", "size", "radius", "minor_radius", "height",
                  "amplitude", "sweep", "inner_radius", "sector")
    }
    mesh = gen_testmesh(args.kind, **params)
    write_mesh(mesh, Path(args.out) / f"{args.name or args.kind}.json")
    return EXIT_OK


def cmd_analyze(args, settings) -> int:
    mesh = load_mesh(_require_input(args))
    analysis = analyze_mesh(mesh)
    print(json.dumps(analysis, indent=1))
    return EXIT_OK


def cmd_partition(args, settings) -> int:
    mesh = load_mesh(_require_input(args))
    result = FabricationPipeline(args.out, settings).partition(mesh)
    issues = result.violations()
    for issue in issues:
        logger.error(f"❌ {issue}")
    return EXIT_VIOLATION if issues else EXIT_OK


def cmd_shell(args, settings) -> int:
    partition = PartitionResult.from_dict(_artifact(args, PARTITION_FILE))
    FabricationPipeline(args.out, settings).shell(partition)
    return EXIT_OK


def cmd_slice(args, settings) -> int:
    shell = ShellResult.from_dict(_artifact(args, SHELL_FILE))
    pieces = FabricationPipeline(args.out, settings).slice(shell)
    issues = [f"{p.side.value}{p.piece}: {v}" for p in pieces for v in p.report.violations]
    for issue in issues:
        logger.error(f"❌ {issue}")
    return EXIT_VIOLATION if issues else EXIT_OK


def cmd_report(args, settings) -> int:
    pipeline = FabricationPipeline(args.out, settings)
    shell = ShellResult.from_dict(_artifact(args, SHELL_FILE))
    violations = [f"partition: {v}" for v in shell.partition.violations()] + pipeline.stored_violations()
    report = pipeline.report(args.name or "model", shell, violations)
    print(report.to_row())
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_run(args, settings) -> int:
    mesh = load_mesh(_require_input(args))
    name = args.name or Path(args.input).stem
    result = run_pipeline(mesh, settings, args.out, name)
    for issue in result.violations:
        logger.error(f"❌ {issue}")
    print(result.report.to_row())
    return EXIT_OK if result.ok else EXIT_VIOLATION


def cmd_preview(args, settings) -> int:
    out = Path(args.out)
    kind = args.kind
    if kind == PreviewKind.PATHS.value:
        toolpaths = [read_json(p) for p in toolpath_files(out)]
        export_preview(kind, out, toolpaths=toolpaths)
        return EXIT_OK
    if kind == PreviewKind.RIBS.value:
        data = _artifact(args, SHELL_FILE)
        shell = ShellResult.from_dict(data)
        export_preview(kind, out, mesh=shell.partition.mesh, ribs=data["ribs"])
        return EXIT_OK
    if kind == PreviewKind.PATCHES.value:
        partition = PartitionResult.from_dict(_artifact(args, PARTITION_FILE))
        patches = {
            side: {p.id: sorted(p.quads) for p in partition.patches[side]}
            for side in (Family.U, Family.V)
        }
        export_preview(kind, out, mesh=partition.mesh, patches=patches)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "analyze": cmd_analyze,
    "partition": cmd_partition,
    "shell": cmd_shell,
    "slice": cmd_slice,
    "report": cmd_report,
    "run": cmd_run,
    "preview": cmd_preview,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(args)
    except (InputError, ValidationError) as e:
        logger.error(f"❌ Invalid configuration: {e}")
        return EXIT_INPUT_ERROR
    set_level(settings.log)

    try:
        return COMMANDS[args.command](args, settings)
    except (InputError, ValidationError) as e:
        logger.error(f"❌ Input error: {e}")
        return EXIT_INPUT_ERROR
    except DoubleShellError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
