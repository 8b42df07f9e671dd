import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.cli import CliRunner, ConfigLoader
from src.entities import PipelineConfig
from src.services.utils import ConfigError, Constants, ConstantsCrawler, FileReader, FileWriter, PathBuilder
from src.projects.colmap_io import ModelFormat, ModelReader, ModelWriter
from src.projects.pair_miner import ImageResizer, PairTable
from tests.builders import (
    MONO_SCALE,
    MONO_SHIFT,
    SyntheticScene,
    brute_force_ssim,
    random_model,
    write_crawler_fixtures,
    write_model_with_undecodable_name,
    write_synthetic_scene,
)


def _run(capsys: pytest.CaptureFixture, *argv: object) -> tuple[int, dict]:
    """ Exit status and the summary record printed on stdout. """
    status: int = CliRunner.run([str(arg) for arg in argv])
    lines: list[str] = [line for line in capsys.readouterr().out.splitlines() if line.strip()]
    return status, json.loads(lines[-1])


@pytest.fixture
def scene(tmp_path: Path) -> SyntheticScene:
    # Three images inside the capture window, one five hours later
    return write_synthetic_scene(tmp_path / "scene", num_images=4)


### CONFIG ###

def test_default_config() -> None:
    config: PipelineConfig = ConfigLoader.load_config()

    assert config.target_size == 256
    assert config.min_shared == 50
    assert config.max_dt == 10800.0
    assert config.min_inliers is None
    assert config.user_agent == ConstantsCrawler.USER_AGENT
    assert config.excluded_keywords == ConstantsCrawler.EXCLUDED_KEYWORDS


def test_config_file_and_overrides(tmp_path: Path) -> None:
    FileWriter.write_lines(["# local", "min_shared=10", "lenient=true", "sentinel_rgb=1,2,3"], tmp_path / "a.cfg")

    config: PipelineConfig = ConfigLoader.load_config(tmp_path / "a.cfg", {"min_shared": "20", "seed": None})

    assert config.min_shared == 20
    assert config.lenient is True
    assert config.sentinel_rgb == (1, 2, 3)
    assert config.seed == 0
    assert config.mining.min_shared == 20


def test_config_errors(tmp_path: Path) -> None:
    with pytest.raises(ConfigError):
        ConfigLoader.load_config(tmp_path / "missing.cfg")
    with pytest.raises(ConfigError):
        ConfigLoader.load_config(overrides={"no_such_key": "1"})
    with pytest.raises(ConfigError):
        ConfigLoader.load_config(overrides={"min_shared": "many"})
    with pytest.raises(ConfigError):
        ConfigLoader.parse_assignments(["min_shared"])

    assert ConfigLoader.parse_assignments(["a=1", " b = x=y "]) == {"a": "1", "b": "x=y"}


### EXIT STATUS ###

def test_exit_status(tmp_path: Path, scene: SyntheticScene, capsys: pytest.CaptureFixture) -> None:
    status, record = _run(capsys, "parse", "--model", scene.model_dir, "--set", "no_such_key=1")
    assert status == 2 and record["error"] == "ConfigError"

    status, record = _run(capsys, "parse", "--model", scene.model_dir, "--set", "min_shared=abc")
    assert status == 2

    status, record = _run(capsys, "frobnicate")
    assert status == 2 and record["status"] == "error"

    status, record = _run(capsys, "parse", "--model", tmp_path / "nowhere")
    assert status == 1 and record["error"] == "MissingModelFileError"

    status, record = _run(capsys, "parse", "--model", write_model_with_undecodable_name(tmp_path / "bad_name"))
    assert status == 1
    assert (record["status"], record["error"]) == ("error", "ModelParseError")


def test_dry_run_writes_nothing(tmp_path: Path, scene: SyntheticScene, capsys: pytest.CaptureFixture) -> None:
    status, record = _run(
        capsys, "mine", "--model", scene.model_dir, "--metadata", scene.metadata_path,
        "--min-shared", 7, "--dry-run", "--out", tmp_path / "pairs.tsv")

    assert status == 0
    assert record["status"] == "dry-run"
    assert record["config"]["min_shared"] == 7
    assert record["plan"]["out"] == str(tmp_path / "pairs.tsv")
    assert not (tmp_path / "pairs.tsv").exists()


### SPARSE MODEL COMMANDS ###

def test_parse_rewrites_the_model(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    model = random_model(5)
    ModelWriter.write_model(model, tmp_path / "bin", ModelFormat.BINARY)

    status, record = _run(capsys, "parse", "--model", tmp_path / "bin", "--out", tmp_path / "txt", "--out-format", "TEXT")

    assert status == 0
    assert (record["cameras"], record["images"], record["points"]) == (
        len(model.cameras), len(model.images), len(model.points))
    assert ModelReader.parse_model(tmp_path / "txt", ModelFormat.TEXT).equals(model)


def test_orient_and_orbit(tmp_path: Path, scene: SyntheticScene, capsys: pytest.CaptureFixture) -> None:
    status, record = _run(capsys, "orient", "--model", scene.model_dir, "--out", tmp_path / "oriented")
    assert status == 0 and record["images"] == 4
    assert ModelReader.parse_model(tmp_path / "oriented").images.keys() == scene.model.images.keys()

    status, record = _run(capsys, "orbit", "--model", scene.model_dir, "--k", 2, "--out", tmp_path / "orbit.tsv")
    assert status == 0
    assert len(record["references"]) == 2
    assert record["pairs"] == 2 * 3
    assert len(FileReader.read_tsv_file(tmp_path / "orbit.tsv")) == 6


### PIPELINE ###

def test_pipeline_end_to_end(tmp_path: Path, scene: SyntheticScene, capsys: pytest.CaptureFixture) -> None:
    pairs_path: Path = tmp_path / "pairs.tsv"
    aligned_dir: Path = tmp_path / "aligned"
    warp_dir: Path = tmp_path / "warps"

    status, record = _run(
        capsys, "mine", "--model", scene.model_dir, "--metadata", scene.metadata_path,
        "--scene-id", "S", "--out", pairs_path)
    assert status == 0
    assert record["pairs"] == 3 * 2
    pairs = PairTable.read_pairs(pairs_path)
    assert all(4 not in pair.pair_id for pair in pairs)

    status, record = _run(capsys, "align", "--model", scene.model_dir, "--depth-dir", scene.depth_dir,
                          "--out", aligned_dir)
    assert status == 0 and (record["aligned"], record["failed"]) == (4, 0)
    alignments = FileReader.read_jsonl_file(aligned_dir / "alignments.jsonl")
    assert [entry["image_id"] for entry in alignments] == [1, 2, 3, 4]
    assert all(entry["scale"] == pytest.approx(2.0, rel=1e-2) for entry in alignments)

    status, record = _run(capsys, "warp", "--model", scene.model_dir, "--pairs", pairs_path,
                          "--images", scene.image_dir, "--depth-dir", aligned_dir,
                          "--target-size", 64, "--out", warp_dir)
    assert status == 0
    assert (record["warped"], record["failed"]) == (6, 0)
    assert 0 < record["mean_coverage"] <= 1

    meta = FileReader.read_key_value_file(PathBuilder.build_paths_to_warp_files(warp_dir, 1, 2)["meta"])
    assert float(meta["alignment_scale"]) == pytest.approx(2.0, rel=1e-2)

    # A perfect generator reproduces the resized target
    generated_dir: Path = tmp_path / "generated"
    for pair in pairs:
        target = FileReader.read_image_file(scene.image_dir / scene.model.images[pair.tgt_image_id].name)
        canvas, _ = ImageResizer.resize_pad(target, 64)
        FileWriter.write_image_file(
            canvas, generated_dir / f"{PathBuilder.build_pair_stem(pair.ref_image_id, pair.tgt_image_id)}.png")

    status, record = _run(capsys, "eval", "--model", scene.model_dir, "--pairs", pairs_path,
                          "--generated", generated_dir, "--images", scene.image_dir, "--warps", warp_dir,
                          "--target-size", 64, "--out", tmp_path / "metrics")
    assert status == 0
    assert (record["evaluated"], record["failed"]) == (6, 0)
    assert record["means"]["psnr"] == 100.0
    assert record["means"]["ssim"] == pytest.approx(1.0)
    assert record["means"]["masked_psnr"] == 100.0
    assert len(FileReader.read_jsonl_file(tmp_path / "metrics" / "metrics.jsonl")) == 6
    assert "PSNR" in (tmp_path / "metrics" / "metrics_table.txt").read_text(encoding="utf-8")

    status, record = _run(capsys, "split", "--pairs", pairs_path, "--holdout", 1, "--val-pairs", 2,
                          "--out", tmp_path / "splits")
    assert status == 0
    assert record == {"status": "ok", "command": "split", "train": 0, "val": 2, "test": 4}


def _psnr(generated: np.ndarray, target: np.ndarray, mask: np.ndarray | None = None) -> float:
    squared = (generated.astype(np.float64) - target.astype(np.float64)) ** 2
    mse = float(np.mean(squared if mask is None else squared[mask]))
    return 100.0 if mse == 0 else 10 * math.log10(255 ** 2 / mse)


def _run_stages(capsys: pytest.CaptureFixture, scene: SyntheticScene, root: Path, jobs: int) -> dict[str, dict]:
    """ mine, align, warp and eval, with each warp RGB standing in for the generated image. """
    pairs_path: Path = root / "pairs.tsv"
    common: tuple = ("--model", scene.model_dir, "--jobs", jobs)
    records: dict[str, dict] = {}

    status, records["mine"] = _run(
        capsys, "mine", *common, "--metadata", scene.metadata_path, "--scene-id", "S", "--out", pairs_path)
    assert status == 0
    status, records["align"] = _run(capsys, "align", *common, "--depth-dir", scene.depth_dir, "--out", root / "aligned")
    assert status == 0
    status, records["warp"] = _run(
        capsys, "warp", *common, "--pairs", pairs_path, "--images", scene.image_dir,
        "--depth-dir", root / "aligned", "--target-size", 64, "--out", root / "warps")
    assert status == 0

    for pair in PairTable.read_pairs(pairs_path):
        warp_rgb: Path = PathBuilder.build_paths_to_warp_files(root / "warps", *pair.pair_id)["rgb"]
        (root / "generated").mkdir(exist_ok=True)
        (root / "generated" / f"{PathBuilder.build_pair_stem(*pair.pair_id)}.png").write_bytes(warp_rgb.read_bytes())

    status, records["eval"] = _run(
        capsys, "eval", *common, "--pairs", pairs_path, "--generated", root / "generated",
        "--images", scene.image_dir, "--warps", root / "warps", "--target-size", 64, "--out", root / "metrics")
    assert status == 0
    return records


def test_stages_on_twelve_images(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    scene: SyntheticScene = write_synthetic_scene(tmp_path / "scene", num_images=12)
    root: Path = tmp_path / "run"
    records = _run_stages(capsys, scene, root, jobs=1)

    # Eleven images inside the capture window, every ordered pair of them
    assert (records["mine"]["mined"], records["mine"]["pairs"]) == (110, 110)
    pairs = PairTable.read_pairs(root / "pairs.tsv")
    assert all(12 not in pair.pair_id for pair in pairs)

    assert (records["align"]["aligned"], records["align"]["failed"]) == (12, 0)
    alignments = FileReader.read_jsonl_file(root / "aligned" / Constants.file_names.ALIGNMENTS_JSONL_FILE)
    assert sorted(entry["image_id"] for entry in alignments) == list(range(1, 13))
    for entry in alignments:
        image = scene.model.images[entry["image_id"]]
        mono = FileReader.read_pfm_file(PathBuilder.build_path_to_depth_file(scene.depth_dir, image.name))
        cols, rows = np.floor(image.xys[image.observed_mask]).astype(np.int64).T
        mono_depths = mono[rows, cols].astype(np.float64)
        sfm_depths = image.pose.transform(scene.model.xyz_of(image.observed_point3d_ids))[:, 2]
        scale, shift = np.polyfit(mono_depths, sfm_depths, 1)
        relative = np.abs(scale * mono_depths + shift - sfm_depths) / sfm_depths

        assert entry["samples"] == 120
        if np.all(relative < 5 * 1.4826 * np.median(relative)):
            # The robust cutoff keeps every sample, so the refit is plain least squares over all of them
            assert entry["inlier_count"] == 120
            assert entry["scale"] == pytest.approx(scale, rel=1e-7)
            assert entry["shift"] == pytest.approx(shift, rel=1e-7, abs=1e-9)
        else:
            assert 24 <= entry["inlier_count"] < 120
        assert entry["scale"] == pytest.approx(MONO_SCALE, rel=1e-2)
        assert entry["shift"] == pytest.approx(MONO_SHIFT, abs=0.1)

        aligned = FileReader.read_pfm_file(PathBuilder.build_path_to_aligned_depth_file(root / "aligned", image.name))
        expected = (entry["scale"] * mono.astype(np.float64) + entry["shift"]).astype(np.float32)
        assert np.array_equal(aligned, expected)

    assert (records["warp"]["warped"], records["warp"]["failed"]) == (110, 0)

    # Pixels the warp leaves uncovered are black, so masked PSNR exceeds the unmasked one on average
    assert (records["eval"]["evaluated"], records["eval"]["failed"]) == (110, 0)
    metrics = FileReader.read_jsonl_file(root / "metrics" / Constants.file_names.METRICS_JSONL_FILE)
    assert [(record["ref_image_id"], record["tgt_image_id"]) for record in metrics] == [pair.pair_id for pair in pairs]

    for index, record in enumerate(metrics):
        warp_paths = PathBuilder.build_paths_to_warp_files(root / "warps", record["ref_image_id"], record["tgt_image_id"])
        generated = FileReader.read_image_file(warp_paths["rgb"])
        mask = FileReader.read_mask_file(warp_paths["mask"])
        target, _ = ImageResizer.resize_pad(
            FileReader.read_image_file(scene.image_dir / scene.model.images[record["tgt_image_id"]].name), 64)

        assert record["mask_coverage"] == pytest.approx(float(np.mean(mask)))
        # The bottom quarter of the square canvas is padding
        assert 0 < record["mask_coverage"] < 0.75
        assert record["psnr"] == pytest.approx(_psnr(generated, target), rel=1e-9)
        assert record["masked_psnr"] == pytest.approx(_psnr(generated, target, mask), rel=1e-9)
        if index < 3:
            assert record["ssim"] == pytest.approx(brute_force_ssim(generated, target), abs=1e-9)
            assert record["masked_ssim"] == pytest.approx(brute_force_ssim(generated, target, mask), abs=1e-9)

    means = records["eval"]["means"]
    for name in ("psnr", "ssim", "masked_psnr", "masked_ssim"):
        values = [record[name] for record in metrics if record[name] is not None]
        assert means[name] == pytest.approx(float(np.mean(values)), rel=1e-12)
    assert means["masked_psnr"] > means["psnr"]


def test_stage_outputs_are_independent_of_worker_count(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    scene: SyntheticScene = write_synthetic_scene(tmp_path / "scene", num_images=12)
    serial = _run_stages(capsys, scene, tmp_path / "jobs_1", jobs=1)
    parallel = _run_stages(capsys, scene, tmp_path / "jobs_4", jobs=4)

    assert serial == parallel
    for subdir in ("aligned", "warps", "metrics"):
        names = sorted(path.name for path in (tmp_path / "jobs_1" / subdir).iterdir())
        assert names == sorted(path.name for path in (tmp_path / "jobs_4" / subdir).iterdir())
        for name in names:
            assert (tmp_path / "jobs_1" / subdir / name).read_bytes() == (tmp_path / "jobs_4" / subdir / name).read_bytes()

    assert (tmp_path / "jobs_1" / "pairs.tsv").read_bytes() == (tmp_path / "jobs_4" / "pairs.tsv").read_bytes()
    assert len(list((tmp_path / "jobs_1" / "aligned").iterdir())) == 12 + 1
    assert len(list((tmp_path / "jobs_1" / "warps").iterdir())) == 110 * 4
    assert len(list((tmp_path / "jobs_1" / "metrics").iterdir())) == 2


def test_warp_of_unregistered_image(tmp_path: Path, scene: SyntheticScene, capsys: pytest.CaptureFixture) -> None:
    status, record = _run(capsys, "warp", "--model", scene.model_dir, "--ref", 1, "--tgt", 99,
                          "--images", scene.image_dir, "--depth-dir", tmp_path, "--out", tmp_path / "warps")

    assert status == 2 and record["error"] == "ConfigError"


### CRAWLER COMMANDS ###

def test_crawler_commands_offline(tmp_path: Path, capsys: pytest.CaptureFixture, no_network: None) -> None:
    fixtures: Path = write_crawler_fixtures(tmp_path / "fixtures")

    status, record = _run(capsys, "identify", "--classes", "Q1,Q2,Q3,Q5", "--fixtures", fixtures,
                          "--out", tmp_path / "scenes.jsonl")
    assert status == 0 and record["scenes"] == 3

    status, record = _run(capsys, "manifest", "--scenes", tmp_path / "scenes.jsonl", "--fixtures", fixtures,
                          "--out", tmp_path / "manifest.jsonl")
    assert status == 0
    assert record["entries"] == 7 + 1 + 1

    entries = FileReader.read_jsonl_file(tmp_path / "manifest.jsonl")
    assert {entry["scene"] for entry in entries} == {"Berlin Cathedral", "Castle Museum", "Old Bridge"}
