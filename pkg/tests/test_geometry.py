import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from src.entities import (
    CONDITIONING_SIZE,
    CameraIntrinsics,
    CameraModel,
    ConditioningVector,
    DepthMap,
    Pose,
    RegisteredImage,
    RelativePose,
    RigidTransform,
    SparseModel,
    qvec_to_rotmat,
    rotmat_to_qvec,
)
from src.services.coordinate_operations import (
    CameraProjector,
    ConditioningBuilder,
    DegenerateGravityError,
    DepthQuantile,
    EmptyDepthError,
    EmptyModelError,
    GravityAligner,
    InvalidParameterError,
    NonFiniteInputError,
    NonPositiveDepthError,
    OrbitSampler,
    OrbitSamplingError,
    PoseOperations,
)
from src.projects.pair_miner import ImageResizer
from tests.builders import pinhole_camera, random_model, random_pose, ring_model


### PROJECTION ###

def test_project_pinhole_examples() -> None:
    camera: CameraIntrinsics = pinhole_camera()

    pixel, depth = CameraProjector.project(camera, Pose.identity(), np.array([0.0, 0.0, 1.0]))
    assert np.allclose(pixel, [128.0, 128.0]) and depth == 1.0

    pixel, depth = CameraProjector.project(camera, Pose.identity(), np.array([1.0, 0.0, 2.0]))
    assert np.allclose(pixel, [178.0, 128.0]) and depth == 2.0


def test_point_behind_camera_has_no_pixel() -> None:
    pixel, depth = CameraProjector.project(pinhole_camera(), Pose.identity(), np.array([0.0, 0.0, -3.0]))

    assert depth == -3.0
    assert np.all(np.isnan(pixel))


def test_non_finite_point_is_rejected() -> None:
    with pytest.raises(NonFiniteInputError):
        CameraProjector.project(pinhole_camera(), Pose.identity(), np.array([np.nan, 0.0, 1.0]))


def test_simple_radial_matches_distortion_formula(rng: np.random.Generator) -> None:
    f, cx, cy, k = 300.0, 160.0, 120.0, 0.1
    camera = CameraIntrinsics(camera_id=1, model=CameraModel.SIMPLE_RADIAL, width=320, height=240,
                              params=[f, cx, cy, k])
    pose: Pose = random_pose(rng, translation_scale=0.5)

    for _ in range(50):
        xyz_camera = np.array([*rng.uniform(-1.0, 1.0, size=2), rng.uniform(2.0, 5.0)])
        xyz_world = pose.rotation_matrix.T @ (xyz_camera - pose.tvec)

        u, v = xyz_camera[0] / xyz_camera[2], xyz_camera[1] / xyz_camera[2]
        radial = 1.0 + k * (u * u + v * v)
        expected = [f * u * radial + cx, f * v * radial + cy]

        pixel, depth = CameraProjector.project(camera, pose, xyz_world)
        assert np.allclose(pixel, expected, atol=1e-9)
        assert depth == pytest.approx(xyz_camera[2], abs=1e-12)


def test_unproject_pinhole_example() -> None:
    point = CameraProjector.unproject(pinhole_camera(), Pose.identity(), np.array([128.0, 128.0]), 1.0)

    assert np.allclose(point, [0.0, 0.0, 1.0])


@pytest.mark.parametrize("model", list(CameraModel))
def test_unproject_then_project_round_trip(rng: np.random.Generator, model: CameraModel) -> None:
    params: dict[CameraModel, list[float]] = {
        CameraModel.SIMPLE_PINHOLE: [400.0, 320.0, 240.0],
        CameraModel.PINHOLE: [400.0, 420.0, 320.0, 240.0],
        CameraModel.SIMPLE_RADIAL: [400.0, 320.0, 240.0, -0.05],
        CameraModel.RADIAL: [400.0, 320.0, 240.0, 0.04, -0.01],
        CameraModel.OPENCV: [400.0, 420.0, 320.0, 240.0, -0.05, 0.01, 1e-3, -5e-4],
    }
    camera = CameraIntrinsics(camera_id=1, model=model, width=640, height=480, params=params[model])
    pose: Pose = random_pose(rng)

    pixels = rng.uniform([0.0, 0.0], [640.0, 480.0], size=(1000, 2))
    depths = rng.uniform(0.5, 50.0, size=1000)

    points = CameraProjector.unproject_pixels(camera, pose, pixels, depths)
    reprojected, reprojected_depths = CameraProjector.project_points(camera, pose, points)

    assert np.max(np.abs(reprojected - pixels)) < 1e-6
    assert np.allclose(reprojected_depths, depths)


def test_unproject_requires_positive_depth() -> None:
    for depth in (0.0, -1.0):
        with pytest.raises(NonPositiveDepthError):
            CameraProjector.unproject(pinhole_camera(), Pose.identity(), np.array([10.0, 10.0]), depth)


def test_vertical_fov() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=300, height=200, focal=100.0)

    assert CameraProjector.vertical_fov(camera) == pytest.approx(math.pi / 2)


def test_camera_for_placement() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=1024, height=768, focal=500.0, cx=512.0, cy=384.0)
    placement = ImageResizer.placement_for(1024, 768, 256)

    resized: CameraIntrinsics = CameraProjector.camera_for_placement(camera, placement)

    assert (resized.width, resized.height) == (256, 256)
    assert np.allclose(resized.params, [125.0, 125.0, 128.0, 128.0])
    # The vertical extent of the content keeps its field of view
    assert 2 * math.atan(192 / 2 / resized.focal_y) == pytest.approx(CameraProjector.vertical_fov(camera))


### POSES ###

def test_quaternion_round_trip(rng: np.random.Generator) -> None:
    for _ in range(100):
        pose: Pose = random_pose(rng)
        assert np.allclose(qvec_to_rotmat(rotmat_to_qvec(pose.rotation_matrix)), pose.rotation_matrix)
        assert np.allclose(pose.rotation_matrix, Rotation.from_quat(np.roll(pose.qvec, -1)).as_matrix())


def test_relative_pose_examples() -> None:
    pose = Pose(qvec=rotmat_to_qvec(Rotation.from_euler("xyz", [10, 20, 30], degrees=True).as_matrix()),
                tvec=[1.0, 2.0, 3.0])
    same: RelativePose = PoseOperations.relative_pose(pose, pose)
    assert np.allclose(same.rotation_matrix, np.eye(3), atol=1e-12)
    assert np.allclose(same.tvec, 0.0, atol=1e-12)

    shifted = Pose(qvec=[1.0, 0.0, 0.0, 0.0], tvec=[0.0, 0.0, -1.0])
    forward: RelativePose = PoseOperations.relative_pose(Pose.identity(), shifted)
    assert np.allclose(forward.tvec, [0.0, 0.0, -1.0])


def test_relative_pose_matches_matrix_algebra(rng: np.random.Generator) -> None:
    for _ in range(100):
        ref, tgt = random_pose(rng), random_pose(rng)
        relative: RelativePose = PoseOperations.relative_pose(ref, tgt)

        assert np.allclose(relative.matrix, tgt.matrix @ np.linalg.inv(ref.matrix), atol=1e-9)
        assert np.allclose(PoseOperations.compose(ref, relative).matrix, tgt.matrix, atol=1e-9)


### DEPTH QUANTILE ###

def test_depth_quantile_examples() -> None:
    depth: DepthMap = DepthMap.from_values(np.arange(1.0, 11.0).reshape(2, 5))
    assert DepthQuantile.depth_quantile_scale(depth, 0.2) == 2.0

    constant: DepthMap = DepthMap.from_values(np.full((4, 4), 5.0))
    for q in (0.01, 0.2, 0.5, 0.99):
        assert DepthQuantile.depth_quantile_scale(constant, q) == 5.0


def test_depth_quantile_ignores_invalid_pixels() -> None:
    values = np.array([[0.0, np.nan, 3.0], [1.0, 2.0, -4.0]])

    assert DepthQuantile.depth_quantile_scale(DepthMap.from_values(values), 0.5) == 2.0


def test_depth_quantile_matches_sort_oracle(rng: np.random.Generator) -> None:
    for _ in range(50):
        values = rng.uniform(0.1, 100.0, size=(int(rng.integers(1, 30)), int(rng.integers(1, 30))))
        q = float(rng.uniform(0.01, 0.99))
        ordered = np.sort(values.reshape(-1))

        expected = ordered[max(math.ceil(q * len(ordered)) - 1, 0)]
        assert DepthQuantile.depth_quantile_scale(DepthMap.from_values(values), q) == expected
        # Permutation invariant
        assert DepthQuantile.nearest_rank(rng.permutation(ordered), q) == expected


def test_depth_quantile_errors() -> None:
    with pytest.raises(EmptyDepthError):
        DepthQuantile.depth_quantile_scale(DepthMap.from_values(np.zeros((3, 3))), 0.2)
    for q in (0.0, 1.0, -0.5):
        with pytest.raises(InvalidParameterError):
            DepthQuantile.nearest_rank(np.ones(3), q)


### CONDITIONING ###

def test_identity_conditioning_layout() -> None:
    identity = RelativePose(qvec=[1.0, 0.0, 0.0, 0.0], tvec=np.zeros(3))
    conditioning: ConditioningVector = ConditioningBuilder.build_conditioning(identity, math.pi / 2, 1.0)

    assert len(conditioning.values) == CONDITIONING_SIZE
    assert np.allclose(conditioning.values, [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, math.pi / 2])


def test_conditioning_scales_translation() -> None:
    relative = RelativePose(qvec=[1.0, 0.0, 0.0, 0.0], tvec=[0.0, 0.0, 2.0])
    conditioning: ConditioningVector = ConditioningBuilder.build_conditioning(relative, 1.0, 2.0)

    assert np.allclose(conditioning.translation, [0.0, 0.0, 1.0])
    assert conditioning.fov == 1.0


def test_conditioning_is_invariant_to_scene_scale(rng: np.random.Generator) -> None:
    for _ in range(20):
        pose: Pose = random_pose(rng)
        relative = RelativePose(qvec=pose.qvec, tvec=pose.tvec)
        scaled = RelativePose(qvec=pose.qvec, tvec=3.5 * pose.tvec)

        base = ConditioningBuilder.build_conditioning(relative, 0.8, 1.2)
        assert np.allclose(base.values, ConditioningBuilder.build_conditioning(scaled, 0.8, 3.5 * 1.2).values)
        assert np.max(np.abs(base.rotation @ base.rotation.T - np.eye(3))) < 1e-9


def test_conditioning_errors() -> None:
    identity = RelativePose(qvec=[1.0, 0.0, 0.0, 0.0], tvec=np.zeros(3))
    with pytest.raises(InvalidParameterError):
        ConditioningBuilder.build_conditioning(identity, 1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        ConditioningBuilder.build_conditioning(identity, math.pi, 1.0)


### GRAVITY ALIGNMENT ###

def _projections(model: SparseModel) -> dict[int, np.ndarray]:
    return {
        image_id: CameraProjector.project_points(
            model.camera_of(image_id), image.pose, model.xyz_of(image.observed_point3d_ids))[0]
        for image_id, image in model.images.items()
    }


def test_aligned_model_gets_identity_transform() -> None:
    model: SparseModel = ring_model(8)
    aligned, transform = GravityAligner.gravity_align(model)

    assert np.allclose(transform.rotation_matrix, np.eye(3), atol=1e-9)
    assert np.allclose(transform.tvec, 0.0)
    for image_id, image in aligned.images.items():
        assert np.allclose(image.pose.matrix, model.images[image_id].pose.matrix, atol=1e-9)


def test_gravity_alignment_undoes_a_tilt() -> None:
    model: SparseModel = ring_model(8)
    tilt = RigidTransform(qvec=rotmat_to_qvec(Rotation.from_euler("x", 90, degrees=True).as_matrix()),
                          tvec=np.zeros(3))
    tilted: SparseModel = PoseOperations.apply_rigid_transform(model, tilt)

    aligned, transform = GravityAligner.gravity_align(tilted)

    assert np.allclose(transform.rotation_matrix, tilt.rotation_matrix.T, atol=1e-9)
    for image_id, image in aligned.images.items():
        assert np.allclose(image.pose.down_axis, [0.0, 0.0, -1.0], atol=1e-9)
        assert np.allclose(image.pose.matrix, model.images[image_id].pose.matrix, atol=1e-9)


def test_gravity_alignment_keeps_projections_and_distances() -> None:
    model: SparseModel = random_model(21, num_images=8, num_points=30)
    aligned, transform = GravityAligner.gravity_align(model)

    before, after = _projections(model), _projections(aligned)
    for image_id in model.images:
        finite = np.isfinite(before[image_id])
        assert np.array_equal(finite, np.isfinite(after[image_id]))
        assert np.allclose(before[image_id][finite], after[image_id][finite], rtol=1e-8, atol=1e-8)

    xyz_before, xyz_after = model.point_xyz, aligned.point_xyz
    assert np.allclose(
        np.linalg.norm(xyz_before[1:] - xyz_before[:-1], axis=1),
        np.linalg.norm(xyz_after[1:] - xyz_after[:-1], axis=1),
    )
    mean_down = np.mean([image.pose.down_axis for image in aligned.images.values()], axis=0)
    assert np.allclose(mean_down / np.linalg.norm(mean_down), [0.0, 0.0, -1.0], atol=1e-9)


def test_gravity_alignment_errors() -> None:
    with pytest.raises(EmptyModelError):
        GravityAligner.gravity_align(SparseModel(cameras={}, images={}, points={}))

    # Opposite down axes cancel out
    model: SparseModel = ring_model(2)
    flipped = Pose.from_matrix(np.diag([-1.0, -1.0, 1.0]), np.zeros(3))
    images = dict(model.images)
    images[1] = RegisteredImage(
        image_id=1, name=images[1].name, camera_id=images[1].camera_id, pose=Pose.identity(),
        xys=np.zeros((0, 2)), point3d_ids=np.zeros(0, dtype=np.int64))
    images[2] = RegisteredImage(
        image_id=2, name=images[2].name, camera_id=images[2].camera_id, pose=flipped,
        xys=np.zeros((0, 2)), point3d_ids=np.zeros(0, dtype=np.int64))
    with pytest.raises(DegenerateGravityError):
        GravityAligner.gravity_align(SparseModel(cameras=model.cameras, images=images, points={}))


def test_minimal_rotation_antiparallel() -> None:
    rotation = GravityAligner.minimal_rotation(np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0]))

    assert np.allclose(rotation @ [0.0, 0.0, 1.0], [0.0, 0.0, -1.0])
    assert np.linalg.det(rotation) == pytest.approx(1.0)


### ORBIT SAMPLING ###

def _view_angle(model: SparseModel, image_id: int) -> float:
    direction = model.images[image_id].pose.viewing_direction
    return math.atan2(direction[1], direction[0])


def test_ring_of_ten_returns_every_camera_in_angular_order() -> None:
    model: SparseModel = ring_model(10)
    selected: list[int] = OrbitSampler.sample_orbit_references(model, 10)

    assert sorted(selected) == sorted(model.images)
    angles = [_view_angle(model, image_id) for image_id in selected]
    assert angles == sorted(angles)


def test_every_tenth_of_a_hundred() -> None:
    model: SparseModel = ring_model(100)
    ordered: list[int] = OrbitSampler.sort_by_view_angle(model)

    assert OrbitSampler.sample_orbit_references(model, 10) == ordered[::10]


def test_orbit_samples_are_evenly_spaced() -> None:
    model: SparseModel = ring_model(37, phase=1.1)
    selected: list[int] = OrbitSampler.sample_orbit_references(model, 6)

    angles = np.sort([_view_angle(model, image_id) for image_id in selected])
    gaps = np.diff(np.append(angles, angles[0] + 2 * math.pi))
    slot = 2 * math.pi / 37
    assert np.all(np.abs(gaps - 2 * math.pi / 6) <= slot + 1e-9)


def test_orbit_sampling_errors() -> None:
    with pytest.raises(OrbitSamplingError):
        OrbitSampler.sample_orbit_references(ring_model(5), 6)
    with pytest.raises(OrbitSamplingError):
        OrbitSampler.sample_orbit_references(ring_model(5), 0)
    with pytest.raises(EmptyModelError):
        OrbitSampler.sample_orbit_references(SparseModel(cameras={}, images={}, points={}), 1)
