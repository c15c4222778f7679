import json

import numpy as np
import pytest

from radarpose.cli import EXIT_CONTRACT, EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from radarpose.manifest import sha256_file
from radarpose.pose import DEFAULT_SIGMAS, JOINT_NAMES
from radarpose.tensorio import read_tensor, write_tensor

CONFIG = """
num_adc_samples = 32
num_chirps = 8
num_tx = 2
num_rx = 2
sample_rate = 1e7
chirp_slope = 3e13
carrier_freq = 7.7e10
frame_rate = 10
"""


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "radar.cfg"
    path.write_text(CONFIG)
    return str(path)


def write_scene(tmp_path, targets=(), snr_db=None, seed=0, name="scene.json"):
    path = tmp_path / name
    path.write_text(json.dumps({
        "targets": list(targets), "snr_db": snr_db, "noise_seed": seed,
    }))
    return str(path)


def keypoint_doc(offsets=None):
    joints = []
    for i, name in enumerate(JOINT_NAMES):
        x, y = 10.0 + i, 20.0
        if offsets and name in offsets:
            x += offsets[name]
        joints.append({"name": name, "x": x, "y": y, "v": 1})
    return {"frame": 0, "joints": joints, "area": 100.0}


def test_simulate_empty_scene_writes_zeros(tmp_path, cfg_file):
    scene = write_scene(tmp_path)
    out = tmp_path / "cap.bin"
    assert main(["simulate", scene, "--config", cfg_file, "--output", str(out)]) == EXIT_OK
    assert set(out.read_bytes()) == {0}
    manifest = json.loads((tmp_path / "cap.bin.manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert str(out) in manifest["outputs"]


def test_simulate_deterministic_per_seed(tmp_path, cfg_file):
    scene = write_scene(tmp_path, targets=[{"range": 5.0, "azimuth": 0.2}], snr_db=20)
    out1, out2 = tmp_path / "a.bin", tmp_path / "b.bin"
    for out in (out1, out2):
        assert main([
            "simulate", scene, "--config", cfg_file, "--output", str(out), "--seed", "9",
        ]) == EXIT_OK
    assert sha256_file(out1) == sha256_file(out2)


def test_simulate_then_heatmap_peak(tmp_path, cfg_file):
    # on-bin target: range bin 10 of the 32-point FFT
    from radarpose.sim import SPEED_OF_LIGHT
    rng_m = 10 * 1e7 * SPEED_OF_LIGHT / (2 * 3e13 * 32)
    scene = write_scene(tmp_path, targets=[{"range": rng_m}])
    cap = tmp_path / "cap.bin"
    assert main(["simulate", scene, "--config", cfg_file, "--output", str(cap)]) == EXIT_OK
    out = tmp_path / "maps.tensor"
    assert main([
        "heatmap", str(cap), "--config", cfg_file, "--output", str(out), "--branch", "rd",
    ]) == EXIT_OK
    maps = read_tensor(out)
    assert maps.shape[0] == 1
    mag = np.abs(maps[0]).sum(axis=2)
    assert int(mag.max(axis=1).argmax()) == 10


def test_heatmap_fft_branch_shape(tmp_path, cfg_file):
    scene = write_scene(tmp_path, targets=[{"range": 4.0}])
    cap = tmp_path / "cap.bin"
    main(["simulate", scene, "--config", cfg_file, "--output", str(cap)])
    out = tmp_path / "maps.tensor"
    assert main([
        "heatmap", str(cap), "--config", cfg_file, "--output", str(out), "--branch", "fft",
    ]) == EXIT_OK
    # (frames, range, Doppler, azimuth) after elevation averaging
    assert read_tensor(out).shape == (1, 32, 8, 4)


def test_heatmap_zero_input_zero_tensor(tmp_path, cfg_file):
    scene = write_scene(tmp_path)
    cap = tmp_path / "cap.bin"
    main(["simulate", scene, "--config", cfg_file, "--output", str(cap)])
    out = tmp_path / "maps.tensor"
    main(["heatmap", str(cap), "--config", cfg_file, "--output", str(out)])
    assert not read_tensor(out).any()


def test_truncated_capture_exits_3(tmp_path, cfg_file):
    cap = tmp_path / "cap.bin"
    cap.write_bytes(b"\x00" * 100)
    assert main([
        "heatmap", str(cap), "--config", cfg_file, "--output", str(tmp_path / "o.tensor"),
    ]) == EXIT_DATA


def test_bad_config_exits_2(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("num_tx = 0\n")
    cap = tmp_path / "cap.bin"
    cap.write_bytes(b"")
    assert main([
        "heatmap", str(cap), "--config", str(bad), "--output", str(tmp_path / "o.tensor"),
    ]) == EXIT_USAGE


def test_missing_subcommand_args_exit_2(tmp_path):
    assert main(["simulate"]) == EXIT_USAGE


def run_probmap(tmp_path, cfg_file, scene_targets, snr=30, frames=1):
    scene = write_scene(tmp_path, targets=scene_targets, snr_db=snr)
    cap = tmp_path / "cap.bin"
    assert main([
        "simulate", scene, "--config", cfg_file, "--output", str(cap),
        "--radar", "both", "--frames", str(frames),
    ]) == EXIT_OK
    prefix = tmp_path / "out"
    code = main([
        "probmap", str(tmp_path / "cap.h.bin"), str(tmp_path / "cap.v.bin"),
        "--config", cfg_file, "--output", str(prefix),
        "--cfar-guard", "2", "--cfar-ref", "4", "--pfa", "1e-3", "--pe-depth", "8",
    ])
    return code, prefix


def test_probmap_single_target_unit_sum(tmp_path, cfg_file):
    code, prefix = run_probmap(
        tmp_path, cfg_file, [{"range": 6.0, "azimuth": 0.3, "elevation": 0.1}]
    )
    assert code == EXIT_OK
    prob = read_tensor(f"{prefix}.prob.f0000.tensor")
    side = json.loads(open(f"{prefix}.bins.f0000.json").read())
    assert prob.shape[1:] == (4, 4)
    assert len(side["range_bins"]) == prob.shape[0] > 0
    for r, empty in enumerate(side["empty_rows"]):
        if not empty:
            assert abs(prob[r].sum() - 1.0) < 1e-8
    enc = read_tensor(f"{prefix}.enc.f0000.tensor")
    assert enc.shape == (prob.shape[0], 16, 4, 4)


def test_probmap_zero_input_empty_bins(tmp_path, cfg_file):
    code, prefix = run_probmap(tmp_path, cfg_file, [], snr=None)
    assert code == EXIT_OK
    side = json.loads(open(f"{prefix}.bins.f0000.json").read())
    assert side["range_bins"] == []
    assert read_tensor(f"{prefix}.prob.f0000.tensor").shape == (0, 4, 4)


def test_probmap_frame_count_mismatch_exits_3(tmp_path, cfg_file):
    scene = write_scene(tmp_path, targets=[{"range": 5.0}])
    main(["simulate", scene, "--config", cfg_file, "--output", str(tmp_path / "one.bin"),
          "--radar", "horizontal", "--frames", "1"])
    main(["simulate", scene, "--config", cfg_file, "--output", str(tmp_path / "two.bin"),
          "--radar", "vertical", "--frames", "2"])
    assert main([
        "probmap", str(tmp_path / "one.bin"), str(tmp_path / "two.bin"),
        "--config", cfg_file, "--output", str(tmp_path / "o"),
    ]) == EXIT_DATA


def test_fuse_zero_identity_and_commutation(tmp_path, rng):
    a, z = tmp_path / "a.tensor", tmp_path / "z.tensor"
    x = rng.standard_normal((3, 4, 4))
    write_tensor(a, x)
    write_tensor(z, np.zeros((3, 4, 4)))
    out1, out2 = tmp_path / "o1.tensor", tmp_path / "o2.tensor"
    assert main(["fuse", str(a), str(z), "--output", str(out1)]) == EXIT_OK
    np.testing.assert_array_equal(read_tensor(out1), x)
    assert main(["fuse", str(z), str(a), "--output", str(out2)]) == EXIT_OK
    assert sha256_file(out1) == sha256_file(out2)


def test_fuse_random_pair_sum(tmp_path, rng):
    a, b = rng.standard_normal((2, 3)), rng.standard_normal((2, 3))
    write_tensor(tmp_path / "a.tensor", a)
    write_tensor(tmp_path / "b.tensor", b)
    out = tmp_path / "o.tensor"
    main(["fuse", str(tmp_path / "a.tensor"), str(tmp_path / "b.tensor"), "--output", str(out)])
    np.testing.assert_array_equal(read_tensor(out), a + b)


def test_fuse_shape_mismatch_exits_4(tmp_path):
    write_tensor(tmp_path / "a.tensor", np.zeros((2, 2)))
    write_tensor(tmp_path / "b.tensor", np.zeros((2, 3)))
    assert main([
        "fuse", str(tmp_path / "a.tensor"), str(tmp_path / "b.tensor"),
        "--output", str(tmp_path / "o.tensor"),
    ]) == EXIT_CONTRACT


def test_eval_perfect_prediction(tmp_path):
    doc = [keypoint_doc()]
    for name in ("pred.json", "gt.json"):
        (tmp_path / name).write_text(json.dumps(doc))
    out = tmp_path / "metrics.json"
    assert main([
        "eval", str(tmp_path / "pred.json"), str(tmp_path / "gt.json"),
        "--output", str(out),
    ]) == EXIT_OK
    metrics = json.loads(out.read_text())
    assert metrics["AP"] == metrics["AP50"] == metrics["AP75"] == 1.0


def test_eval_known_oks_fixture(tmp_path):
    # displace the head joint to hit OKS near 0.62 and 0.82 in two frames;
    # those pass 3 and 7 of the ten thresholds, so AP = 0.5 while AP50 = 1
    area, sigma = 100.0, DEFAULT_SIGMAS[0]
    gt_frames, pred_frames = [], []
    for target_oks in (0.62, 0.82):
        d = float(np.sqrt(-2.0 * area * sigma ** 2 * np.log(target_oks)))
        gt = keypoint_doc()
        gt["joints"] = [dict(j, v=(1 if j["name"] == "head" else 0)) for j in gt["joints"]]
        pred = json.loads(json.dumps(gt))
        pred["joints"][0]["x"] += d
        gt_frames.append(gt)
        pred_frames.append(pred)
    (tmp_path / "gt.json").write_text(json.dumps(gt_frames))
    (tmp_path / "pred.json").write_text(json.dumps(pred_frames))
    out = tmp_path / "metrics.json"
    assert main([
        "eval", str(tmp_path / "pred.json"), str(tmp_path / "gt.json"),
        "--output", str(out),
    ]) == EXIT_OK
    metrics = json.loads(out.read_text())
    assert metrics["AP50"] == 1.0
    assert metrics["AP75"] == 0.5
    assert metrics["AP"] == 0.5


def test_eval_missing_joint_exits_3(tmp_path):
    doc = keypoint_doc()
    doc["joints"] = doc["joints"][1:]
    (tmp_path / "pred.json").write_text(json.dumps([doc]))
    (tmp_path / "gt.json").write_text(json.dumps([keypoint_doc()]))
    assert main([
        "eval", str(tmp_path / "pred.json"), str(tmp_path / "gt.json"),
    ]) == EXIT_DATA
