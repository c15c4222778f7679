"""Batch command-line front end for the radar pipeline.

Commands stage everything through files (raw ADC binary, the project tensor
format, JSON) so every boundary can be diffed against an oracle. Exit
codes: 0 success, 2 usage/config error, 3 data-format error, 4
numeric/contract violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, adc, cfar, fusion, probmap, sim, spectral, tensorio
from .config import ConfigError, load_config
from .manifest import write_manifest
from .pose import PoseError, load_keypoint_frames, load_oks_params, ap_summary, oks_per_frame

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CONTRACT = 4

DEFAULT_ADC_SCALE = 1000.0  # simulator amplitude -> int16 quantization scale


def _manifest_path(output: str) -> str:
    return str(output) + ".manifest.json"


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    scene = sim.SceneSpec.load(args.scene)
    if args.seed is not None:
        scene = sim.SceneSpec(targets=scene.targets, snr_db=scene.snr_db, noise_seed=args.seed)
    layout = adc.AdcLayout()
    cubes = []
    for radar_id, out_path in _sim_outputs(args):
        frames = [
            sim.synth_frame(scene, config, radar_id=radar_id, frame_index=i)
            for i in range(args.frames)
        ]
        for f in frames:
            for w in f.warnings:
                print(f"warning: {w}", file=sys.stderr)
        scaled = [
            adc.RadarCube(
                data=f.data * args.scale, frame_index=f.frame_index, radar_id=f.radar_id
            )
            for f in frames
        ]
        Path(out_path).write_bytes(adc.serialize_cubes(scaled, layout, config))
        cubes.append(out_path)
    write_manifest(
        _manifest_path(args.output),
        command="simulate",
        inputs=[args.scene],
        outputs=cubes,
        seed=scene.noise_seed,
        config_path=args.config,
        extra={"frames": args.frames, "scale": args.scale},
    )
    return EXIT_OK


def _sim_outputs(args):
    if args.radar == "both":
        base = Path(args.output)
        return [
            ("horizontal", str(base.with_suffix(".h" + base.suffix))),
            ("vertical", str(base.with_suffix(".v" + base.suffix))),
        ]
    return [(args.radar, args.output)]


def _load_cubes(path: str, config, radar_id: str) -> list[adc.RadarCube]:
    data = Path(path).read_bytes()
    return adc.parse_cubes(data, adc.AdcLayout(), config, radar_id=radar_id)


def cmd_heatmap(args) -> int:
    config = load_config(args.config)
    cubes = _load_cubes(args.adc, config, args.radar)
    frames = []
    for cube in cubes:
        if args.branch == "fft":
            spec = spectral.fft4d(cube, config)
            out = spectral.average_elevation(spec)
            if args.doppler_keep:
                out, _ = spectral.sample_doppler(out, args.doppler_keep, args.doppler_window)
            frames.append(out.data)
        else:
            rd = spectral.range_doppler_map(cube)
            frames.append(rd.data)
    tensorio.write_tensor(args.output, np.stack(frames))
    write_manifest(
        _manifest_path(args.output),
        command="heatmap",
        inputs=[args.adc],
        outputs=[args.output],
        config_path=args.config,
        extra={"branch": args.branch},
    )
    return EXIT_OK


def cmd_probmap(args) -> int:
    config = load_config(args.config)
    cubes_h = _load_cubes(args.adc_h, config, "horizontal")
    cubes_v = _load_cubes(args.adc_v, config, "vertical")
    if len(cubes_h) != len(cubes_v):
        raise adc.AdcError(
            f"frame count mismatch: horizontal has {len(cubes_h)}, "
            f"vertical has {len(cubes_v)}"
        )
    params = cfar.CfarParams(guard=args.cfar_guard, reference=args.cfar_ref, pfa=args.pfa)
    angle_fft = args.angle_fft or spectral.next_pow2(config.num_virtual)
    pe = probmap.positional_encoding(angle_fft, angle_fft, args.pe_depth)
    outputs = []
    for ch, cv in zip(cubes_h, cubes_v):
        bins_h = cfar.select_range_bins(
            cfar.detect_2d(spectral.magnitude_map(spectral.range_doppler_map(ch)), params)
        )
        bins_v = cfar.select_range_bins(
            cfar.detect_2d(spectral.magnitude_map(spectral.range_doppler_map(cv)), params)
        )
        v_ra = probmap.normalize(
            probmap.angle_spectrum(ch, config, bins_h, "azimuth", angle_fft=angle_fft)
        )
        v_re = probmap.normalize(
            probmap.angle_spectrum(cv, config, bins_v, "elevation", angle_fft=angle_fft)
        )
        pmap = probmap.probability_map(v_ra, v_re)
        encoded = probmap.encode_map(pmap, pe)
        tag = f"f{ch.frame_index:04d}"
        prob_path = f"{args.output}.prob.{tag}.tensor"
        enc_path = f"{args.output}.enc.{tag}.tensor"
        side_path = f"{args.output}.bins.{tag}.json"
        tensorio.write_tensor(prob_path, pmap.values)
        tensorio.write_tensor(enc_path, encoded.values)
        Path(side_path).write_text(
            json.dumps(
                {
                    "frame": ch.frame_index,
                    "range_bins": list(pmap.range_bins),
                    "empty_rows": list(pmap.empty_rows),
                    "axes": {"azimuth": angle_fft, "elevation": angle_fft},
                    "pe_depth": args.pe_depth,
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
        outputs += [prob_path, enc_path, side_path]
    write_manifest(
        _manifest_path(args.output),
        command="probmap",
        inputs=[args.adc_h, args.adc_v],
        outputs=outputs,
        config_path=args.config,
        extra={
            "cfar": {"guard": params.guard, "reference": params.reference, "pfa": params.pfa},
            "pe_depth": args.pe_depth,
        },
    )
    return EXIT_OK


def cmd_fuse(args) -> int:
    t1 = tensorio.read_tensor(args.tensor1)
    t2 = tensorio.read_tensor(args.tensor2)
    f1 = fusion.FeatureTensor(values=t1, layer_id=args.layer)
    f2 = fusion.FeatureTensor(values=t2, layer_id=args.layer, source=fusion.PROB_ENCODING_BRANCH)
    fused = fusion.fuse_add(f1, f2)
    tensorio.write_tensor(args.output, fused.values)
    write_manifest(
        _manifest_path(args.output),
        command="fuse",
        inputs=[args.tensor1, args.tensor2],
        outputs=[args.output],
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    preds = load_keypoint_frames(args.pred)
    gts = load_keypoint_frames(args.gt)
    params = load_oks_params(args.oks_config) if args.oks_config else None
    values = oks_per_frame(preds, gts, params) if params else oks_per_frame(preds, gts)
    report = ap_summary(values)
    report["per_frame_oks"] = values
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        write_manifest(
            _manifest_path(args.output),
            command="eval",
            inputs=[args.pred, args.gt] + ([args.oks_config] if args.oks_config else []),
            outputs=[args.output],
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radarpose",
        description="FMCW radar pipeline: simulate, transform, detect, encode, evaluate.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize a raw ADC capture from a scene")
    p.add_argument("scene", help="scene JSON file")
    p.add_argument("--config", required=True, help="radar key=value config file")
    p.add_argument("--output", required=True, help="raw ADC output path")
    p.add_argument("--radar", choices=["horizontal", "vertical", "both"], default="horizontal")
    p.add_argument("--frames", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="override the scene noise seed")
    p.add_argument("--scale", type=float, default=DEFAULT_ADC_SCALE)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("heatmap", help="frequency-domain maps from a raw capture")
    p.add_argument("adc", help="raw ADC capture")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True, help="tensor output path")
    p.add_argument("--branch", choices=["fft", "rd"], default="fft")
    p.add_argument("--radar", choices=["horizontal", "vertical"], default="horizontal")
    p.add_argument("--doppler-keep", type=int, default=0, help="0 disables Doppler sampling")
    p.add_argument("--doppler-window", type=float, default=0.5)
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("probmap", help="probability maps + positional encoding")
    p.add_argument("adc_h", help="horizontal radar capture")
    p.add_argument("adc_v", help="vertical radar capture")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True, help="output path prefix")
    p.add_argument("--cfar-guard", type=int, default=5)
    p.add_argument("--cfar-ref", type=int, default=16)
    p.add_argument("--pfa", type=float, default=1e-3)
    p.add_argument("--pe-depth", type=int, default=32)
    p.add_argument("--angle-fft", type=int, default=0, help="0 uses next pow2 of antennas")
    p.set_defaults(func=cmd_probmap)

    p = sub.add_parser("fuse", help="element-wise sum of two tensor files")
    p.add_argument("tensor1")
    p.add_argument("tensor2")
    p.add_argument("--output", required=True)
    p.add_argument("--layer", type=int, default=1)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", help="OKS / AP metrics from keypoint JSON files")
    p.add_argument("pred", help="predicted keypoints JSON")
    p.add_argument("gt", help="ground-truth keypoints JSON")
    p.add_argument("--oks-config", default=None, help="per-joint sigma overrides")
    p.add_argument("--output", default=None, help="metrics JSON path (stdout if omitted)")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (adc.AdcError, tensorio.TensorFormatError, PoseError,
            json.JSONDecodeError, FileNotFoundError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (cfar.CfarError, probmap.ProbMapError, fusion.FusionError,
            sim.SimError, spectral.SpectralError, ValueError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
