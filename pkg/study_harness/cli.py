"""
Command-line entry point.

    python -m study_harness generate --config F --seed N --out DIR [--condition GMS,TRAIL,SPEED] [--dry-run] [--threads N]
    python -m study_harness calibrate --config F --speed-level K --tau T
    python -m study_harness compensate --speed S [--model baseline|gms|vms2]
    python -m study_harness regenerate --manifest M --out DIR
    python -m study_harness composite --context DIR --focus DIR --out DIR --window N [--factor 4]

Results are printed as one JSON object on stdout; progress goes to stderr.
"""

import argparse
import json
import sys
import traceback
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import Config
from motion_smoothing.compositing import composite_directories
from motion_smoothing.echo import EchoParams, TrailSpec, window_size
from .batch import run_batch
from .conditions import PRESETS, make_condition, noise_seed, preset_conditions, scene_for
from .manifest import MANIFEST_NAME, load_manifest, manifest_inputs, verify_manifest
from .processor import StimulusProcessor
from .settings import load_stimulus_config
from .speed_models import (
    compensate_speed,
    compensated_speed,
    estimated_speed,
    get_model,
)
from .utils import create_standard_error_response, create_standard_success_response


def _parse_condition(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"--condition expects GMS,TRAIL,SPEED (e.g. on,2,3), got '{text}'")
    try:
        return parts[0], int(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"--condition trail and speed must be integers, got '{text}'")


def cmd_generate(args) -> Dict[str, Any]:
    config = load_stimulus_config(args.config)
    out_root = args.out

    if args.condition or args.preset:
        if args.condition:
            gms, trail, level = _parse_condition(args.condition)
            conditions = [make_condition(config, gms, trail, level, args.seed, compensated=args.compensated)]
        else:
            conditions = preset_conditions(args.preset, args.seed, config, speed_level=args.speed_level)
    else:
        conditions = None

    index = run_batch(config, out_root, args.seed, dry_run=args.dry_run, threads=args.threads,
                      progress=not args.quiet, conditions=conditions, export_layers=args.export_layers)
    return {
        "output": str(out_root),
        "dry_run": args.dry_run,
        "stimuli": [s["directory"] for s in index["stimuli"]],
        "frames_per_stimulus": 0 if args.dry_run else index["frames_per_stimulus"],
    }


def cmd_calibrate(args) -> Dict[str, Any]:
    config = load_stimulus_config(args.config)
    v = config.motion.speed(args.speed_level)
    params = config.motion.params(v, args.tau)
    processor = StimulusProcessor(config, progress=False)
    d_mol = scene_for(config, args.seed).d_mol
    trails = [args.trail] if args.trail is not None else list(config.smoothing.trail_lengths)

    calibration = processor.calibrate(params, config.noise(noise_seed(args.seed)), trails[0], d_mol)
    windows = {str(trail): window_size(TrailSpec(trail), d_mol, calibration["d_bar"],
                                       config.smoothing.frame_rate).n_window
               for trail in trails}
    result = {"speed_level": args.speed_level, "v": v, "tau": args.tau, "d_bar": calibration["d_bar"],
              "d_mol": d_mol, "n_window": windows}
    if args.trail is not None:
        result["n_window"] = windows[str(args.trail)]
    return result


def cmd_compensate(args) -> Dict[str, Any]:
    model = get_model(args.model)
    es = estimated_speed(args.speed, model)
    if model.mode == "baseline":
        cs = compensate_speed(args.speed)
    else:
        cs = compensated_speed(args.speed, model.mode)
    return {"speed": args.speed, "model": model.mode, "estimated_speed": es, "compensated_speed": cs}


def cmd_regenerate(args) -> Dict[str, Any]:
    expected = load_manifest(args.manifest)
    config, condition = manifest_inputs(expected)
    processor = StimulusProcessor(config, threads=args.threads, progress=not args.quiet)
    actual = processor.process_condition(condition, args.out)
    problems = verify_manifest(expected, actual)
    if problems:
        raise ValueError(f"Regenerated stimulus differs from {args.manifest}: {'; '.join(problems)}")
    return {"output": str(args.out), "manifest": str(args.out / MANIFEST_NAME), "matches": True,
            "frames": len(actual["frame_hashes"])}


def cmd_composite(args) -> Dict[str, Any]:
    summary = composite_directories(args.context, args.focus, args.out, EchoParams(args.window),
                                    factor=args.factor, image_format=args.format, threads=args.threads,
                                    cache_frames=Config.ECHO_CACHE_FRAMES, progress=not args.quiet)
    return {"output": str(args.out), "frames": summary["frames"], "n_window": summary["n_window"]}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="study_harness", description="Generate molecular-animation stimuli")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub, config=True):
        if config:
            sub.add_argument('--config', type=Path, default=Config.get_stimulus_config_path(),
                             help='Stimulus config (YAML or JSON)')
        sub.add_argument('--threads', type=int, default=Config.RENDER_THREADS, help='Render threads')
        sub.add_argument('--quiet', action='store_true', help='No progress output on stderr')

    generate = subparsers.add_parser('generate', help='Generate the condition matrix or single stimuli')
    common(generate)
    generate.add_argument('--seed', type=int, default=Config.STIMULUS_SEED)
    generate.add_argument('--out', type=Path, default=Config.get_output_dir())
    generate.add_argument('--condition', help='Single stimulus GMS,TRAIL,SPEED, e.g. on,2,3')
    generate.add_argument('--preset', choices=PRESETS, help='Study preset instead of the condition matrix')
    generate.add_argument('--speed-level', type=int, help='Speed level for presets')
    generate.add_argument('--compensated', action='store_true', help='Use the compensated speed (with --condition)')
    generate.add_argument('--dry-run', action='store_true', help='Write the index manifest only')
    generate.add_argument('--export-layers', action='store_true', help='Also write the unblurred layers')
    generate.set_defaults(handler=cmd_generate)

    calibrate = subparsers.add_parser('calibrate', help='Print mean displacement and blur windows')
    common(calibrate)
    calibrate.add_argument('--speed-level', type=int, required=True)
    calibrate.add_argument('--tau', type=float, required=True)
    calibrate.add_argument('--trail', type=int, help='Single trail length (default: all configured)')
    calibrate.add_argument('--seed', type=int, default=Config.STIMULUS_SEED)
    calibrate.set_defaults(handler=cmd_calibrate)

    compensate = subparsers.add_parser('compensate', help='Print estimated and compensated speed')
    compensate.add_argument('--speed', type=float, required=True, help='Ground-truth speed in percent')
    compensate.add_argument('--model', default='baseline', choices=['baseline', 'gms', 'vms2'])
    compensate.set_defaults(handler=cmd_compensate)

    regenerate = subparsers.add_parser('regenerate', help='Rebuild a stimulus from its manifest and verify it')
    common(regenerate, config=False)
    regenerate.add_argument('--manifest', type=Path, required=True)
    regenerate.add_argument('--out', type=Path, required=True)
    regenerate.set_defaults(handler=cmd_regenerate)

    composite = subparsers.add_parser('composite', help='Blur, blend and decimate two layer directories')
    common(composite, config=False)
    composite.add_argument('--context', type=Path, required=True)
    composite.add_argument('--focus', type=Path, required=True)
    composite.add_argument('--out', type=Path, required=True)
    composite.add_argument('--window', type=int, required=True, help='Odd echo window in frames')
    composite.add_argument('--factor', type=int, default=4)
    composite.add_argument('--format', default='png', choices=['png', 'ppm'])
    composite.set_defaults(handler=cmd_composite)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = create_standard_success_response(args.handler(args), command=args.command)
        print(json.dumps(result, indent=2))
        return 0
    except (ValueError, OSError) as e:
        if Config.DEBUG:
            traceback.print_exc(file=sys.stderr)
        print(json.dumps(create_standard_error_response(str(e), command=args.command)))
        return 1


if __name__ == "__main__":
    sys.exit(main())
