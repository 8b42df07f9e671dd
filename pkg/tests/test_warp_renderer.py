from pathlib import Path

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from src.entities import (
    CameraIntrinsics,
    DepthMap,
    Pose,
    WarpMesh,
    WarpOutput,
    WarpParams,
    NO_TRIANGLE,
    rotmat_to_qvec,
)
from src.services.coordinate_operations import CameraProjector
from src.services.utils import FileReader, PathBuilder
from src.projects.pair_miner import ImageResizer
from src.projects.warp_renderer import (
    DimensionMismatchError,
    EmptyDepthWarpError,
    MeshBuilder,
    Rasterizer,
    Warper,
)
from tests.builders import SyntheticScene, pinhole_camera, random_pose, write_synthetic_scene


UNFILTERED: WarpParams = WarpParams(discontinuity_threshold=None)


def _random_rgb(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def _flat_triangle(camera: CameraIntrinsics, pixels: list[list[float]], depth: float,
                   color: tuple[int, int, int]) -> WarpMesh:
    vertices = CameraProjector.unproject_pixels(camera, Pose.identity(), np.array(pixels), np.full(3, depth))
    return WarpMesh(vertices=vertices, colors=[color] * 3, triangles=[[0, 1, 2]])


def _inside(pixels: list[list[float]], px: float, py: float) -> bool:
    """ Point-in-triangle test by edge signs, either winding. """
    signs = []
    for (x0, y0), (x1, y1) in zip(pixels, pixels[1:] + pixels[:1]):
        signs.append((x1 - x0) * (py - y0) - (y1 - y0) * (px - x0))
    return all(sign >= 0 for sign in signs) or all(sign <= 0 for sign in signs)


### MESH ###

def test_two_by_two_mesh() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=2, height=2, focal=2.0, cx=1.0, cy=1.0)
    rgb = np.arange(12, dtype=np.uint8).reshape(2, 2, 3)

    mesh: WarpMesh = MeshBuilder.build_mesh(rgb, DepthMap.from_values(np.full((2, 2), 3.0)), camera,
                                            Pose.identity(), 0.1)

    assert len(mesh.vertices) == 4
    assert mesh.triangles.tolist() == [[0, 2, 1], [1, 2, 3]]
    assert np.array_equal(mesh.colors, rgb.reshape(4, 3))
    assert np.allclose(mesh.vertices[:, 2], 3.0)


def test_incomplete_quad_has_no_triangles() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=2, height=2, focal=2.0, cx=1.0, cy=1.0)
    depth: DepthMap = DepthMap.from_values(np.array([[1.0, 1.0], [0.0, 1.0]]))

    mesh: WarpMesh = MeshBuilder.build_mesh(np.zeros((2, 2, 3), np.uint8), depth, camera, Pose.identity(), None)

    assert len(mesh.vertices) == 3
    assert mesh.num_triangles == 0


def test_depth_step_drops_straddling_triangles() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=3, height=3, focal=3.0, cx=1.5, cy=1.5)
    values = np.array([[1.0, 1.0, 2.0]] * 3)
    threshold: float = 0.1

    mesh: WarpMesh = MeshBuilder.build_mesh(np.zeros((3, 3, 3), np.uint8), DepthMap.from_values(values),
                                            camera, Pose.identity(), threshold)

    # Enumerate quads and both diagonal halves by hand
    expected: int = 0
    for row in range(2):
        for col in range(2):
            tl, tr, bl, br = values[row, col], values[row, col + 1], values[row + 1, col], values[row + 1, col + 1]
            for corners in ((tl, bl, tr), (tr, bl, br)):
                if (max(corners) - min(corners)) / min(corners) <= threshold:
                    expected += 1

    assert mesh.num_triangles == expected == 4
    assert np.all(np.isin(mesh.triangles, [0, 1, 3, 4, 6, 7]))


def test_mesh_requires_matching_sizes() -> None:
    depth: DepthMap = DepthMap.from_values(np.ones((4, 4)))
    with pytest.raises(DimensionMismatchError):
        MeshBuilder.build_mesh(np.zeros((4, 5, 3), np.uint8), depth, pinhole_camera(width=4, height=4),
                               Pose.identity(), None)
    with pytest.raises(DimensionMismatchError):
        MeshBuilder.build_mesh(np.zeros((4, 4, 3), np.uint8), depth, pinhole_camera(width=8, height=4),
                               Pose.identity(), None)


### RASTERIZER ###

def test_empty_mesh_renders_sentinel() -> None:
    output: WarpOutput = Rasterizer.rasterize(WarpMesh.empty(), pinhole_camera(width=8, height=6),
                                              Pose.identity(), (7, 8, 9))

    assert not np.any(output.mask)
    assert np.all(output.rgb == [7, 8, 9])
    assert np.all(output.triangle_ids == NO_TRIANGLE)
    assert output.coverage == 0.0


def test_single_triangle_matches_half_plane_oracle() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=64, height=64, focal=60.0, cx=32.0, cy=32.0)
    corners = [[10.3, 12.7], [50.2, 20.1], [25.6, 55.9]]
    output: WarpOutput = Rasterizer.rasterize(_flat_triangle(camera, corners, 5.0, (200, 100, 50)),
                                              camera, Pose.identity())

    expected = np.array([[_inside(corners, col + 0.5, row + 0.5) for col in range(64)] for row in range(64)])
    assert np.array_equal(output.mask, expected)
    assert np.all(output.rgb[output.mask] == [200, 100, 50])
    assert np.all(output.rgb[~output.mask] == 0)
    assert np.allclose(output.depth[output.mask], 5.0)


def test_nearest_fragment_wins() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=48, height=48, focal=40.0, cx=24.0, cy=24.0)
    far_corners = [[2.2, 3.1], [44.7, 6.3], [20.4, 45.8]]
    near_corners = [[10.9, 30.2], [40.1, 12.6], [45.3, 44.4]]

    far: WarpMesh = _flat_triangle(camera, far_corners, 6.0, (255, 0, 0))
    near: WarpMesh = _flat_triangle(camera, near_corners, 3.0, (0, 0, 255))
    mesh = WarpMesh(
        vertices=np.vstack([far.vertices, near.vertices]),
        colors=np.vstack([far.colors, near.colors]),
        triangles=[[0, 1, 2], [3, 4, 5]],
    )
    output: WarpOutput = Rasterizer.rasterize(mesh, camera, Pose.identity())

    for row in range(48):
        for col in range(48):
            in_far = _inside(far_corners, col + 0.5, row + 0.5)
            in_near = _inside(near_corners, col + 0.5, row + 0.5)
            expected_id = 1 if in_near else 0 if in_far else NO_TRIANGLE
            assert output.triangle_ids[row, col] == expected_id
            if in_near:
                assert output.depth[row, col] == pytest.approx(3.0)
                assert output.rgb[row, col].tolist() == [0, 0, 255]


def _brute_force_zbuffer(corners: np.ndarray, depths: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    """ Every triangle tested at every pixel center; nearest perspective-correct depth, then lowest index. """
    xs, ys = np.meshgrid(np.arange(size) + 0.5, np.arange(size) + 0.5)
    best_depth = np.full((size, size), np.inf)
    best_id = np.full((size, size), NO_TRIANGLE, dtype=np.int64)

    for index, ((x0, y0), (x1, y1), (x2, y2)) in enumerate(corners):
        area = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        if abs(area) < 1e-12:
            continue
        w0 = ((x1 - xs) * (y2 - ys) - (x2 - xs) * (y1 - ys)) / area
        w1 = ((x2 - xs) * (y0 - ys) - (x0 - xs) * (y2 - ys)) / area
        w2 = 1.0 - w0 - w1
        inside = (w0 >= -1e-9) & (w1 >= -1e-9) & (w2 >= -1e-9)

        z = 1.0 / (w0 / depths[index, 0] + w1 / depths[index, 1] + w2 / depths[index, 2])
        closer = inside & (z < best_depth)
        best_depth[closer] = z[closer]
        best_id[closer] = index

    return best_id, best_depth


def test_zbuffer_matches_brute_force_on_random_meshes(rng: np.random.Generator) -> None:
    size: int = 128
    camera: CameraIntrinsics = pinhole_camera(width=size, height=size, focal=100.0, cx=64.0, cy=64.0)
    covered, matched = 0, 0

    for _ in range(200):
        num_triangles = int(rng.integers(1, 51))
        corners = rng.uniform(-10.0, size + 10.0, size=(num_triangles, 3, 2))
        depths = rng.uniform(1.0, 10.0, size=(num_triangles, 3))
        pose: Pose = random_pose(rng)

        mesh = WarpMesh(
            vertices=CameraProjector.unproject_pixels(camera, pose, corners.reshape(-1, 2), depths.reshape(-1)),
            colors=rng.integers(0, 256, size=(3 * num_triangles, 3)),
            triangles=np.arange(3 * num_triangles).reshape(-1, 3),
        )
        output: WarpOutput = Rasterizer.rasterize(mesh, camera, pose)
        expected_ids, expected_depths = _brute_force_zbuffer(corners, depths, size)

        either = (expected_ids != NO_TRIANGLE) | output.mask
        agree = either & (output.triangle_ids == expected_ids)
        covered += int(either.sum())
        matched += int(agree.sum())
        assert np.allclose(output.depth[agree], expected_depths[agree], rtol=1e-6)

    assert covered > 0
    assert matched >= 0.999 * covered


def test_equal_depth_goes_to_lower_triangle_index() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=32, height=32, focal=30.0, cx=16.0, cy=16.0)
    corners = [[3.3, 4.1], [28.2, 6.6], [14.9, 29.7]]
    first: WarpMesh = _flat_triangle(camera, corners, 4.0, (10, 20, 30))
    second: WarpMesh = _flat_triangle(camera, corners, 4.0, (40, 50, 60))
    mesh = WarpMesh(
        vertices=np.vstack([first.vertices, second.vertices]),
        colors=np.vstack([first.colors, second.colors]),
        triangles=[[3, 4, 5], [0, 1, 2]],
    )

    output: WarpOutput = Rasterizer.rasterize(mesh, camera, Pose.identity())

    assert np.all(output.triangle_ids[output.mask] == 0)
    assert np.all(output.rgb[output.mask] == [40, 50, 60])


def test_triangle_behind_camera_is_discarded() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=16, height=16, focal=16.0, cx=8.0, cy=8.0)
    mesh = WarpMesh(vertices=[[0.0, 0.0, -1.0], [1.0, 0.0, 2.0], [0.0, 1.0, 2.0]], colors=np.zeros((3, 3)),
                    triangles=[[0, 1, 2]])

    assert not np.any(Rasterizer.rasterize(mesh, camera, Pose.identity()).mask)


def test_more_triangles_never_shrink_coverage(rng: np.random.Generator) -> None:
    camera: CameraIntrinsics = pinhole_camera(width=24, height=24, focal=20.0, cx=12.0, cy=12.0)
    depth: DepthMap = DepthMap.from_values(rng.uniform(2.0, 3.0, size=(24, 24)))
    mesh: WarpMesh = MeshBuilder.build_mesh(_random_rgb(rng, 24, 24), depth, camera, Pose.identity(), None)
    tgt_pose = Pose(qvec=[1.0, 0.0, 0.0, 0.0], tvec=[0.3, -0.2, 0.5])

    subset: WarpOutput = Rasterizer.rasterize(mesh.subset(np.arange(0, mesh.num_triangles, 2)), camera, tgt_pose)
    full: WarpOutput = Rasterizer.rasterize(mesh, camera, tgt_pose)

    assert np.all(full.mask[subset.mask])


### WARP ###

def test_identity_warp_reproduces_reference(rng: np.random.Generator) -> None:
    camera: CameraIntrinsics = pinhole_camera(width=20, height=16, focal=18.0, cx=10.0, cy=8.0)
    pose: Pose = random_pose(rng)
    rgb = _random_rgb(rng, 20, 16)
    depth: DepthMap = DepthMap.from_values(rng.uniform(2.0, 3.0, size=(16, 20)))

    output: WarpOutput = Warper.warp(rgb, depth, camera, pose, camera, pose, UNFILTERED)

    assert np.all(output.mask)
    assert np.array_equal(output.rgb, rgb)
    assert np.allclose(output.depth, depth.values)


def test_identity_warp_masks_invalid_depth(rng: np.random.Generator) -> None:
    camera: CameraIntrinsics = pinhole_camera(width=12, height=12, focal=12.0, cx=6.0, cy=6.0)
    rgb = _random_rgb(rng, 12, 12)
    values = np.full((12, 12), 4.0)
    values[:, 6:] = 0.0

    output: WarpOutput = Warper.warp(rgb, DepthMap.from_values(values), camera, Pose.identity(),
                                     camera, Pose.identity(), UNFILTERED)

    assert np.all(output.mask[:, :6]) and not np.any(output.mask[:, 6:])
    assert np.array_equal(output.rgb[:, :6], rgb[:, :6])


def test_rotation_away_from_geometry_covers_nothing(rng: np.random.Generator) -> None:
    camera: CameraIntrinsics = pinhole_camera(width=20, height=20, focal=20.0, cx=10.0, cy=10.0)
    depth: DepthMap = DepthMap.from_values(np.full((20, 20), 4.0))
    turned = Pose(qvec=rotmat_to_qvec(Rotation.from_euler("y", 90, degrees=True).as_matrix()), tvec=np.zeros(3))

    output: WarpOutput = Warper.warp(_random_rgb(rng, 20, 20), depth, camera, Pose.identity(), camera, turned,
                                     UNFILTERED)

    assert output.coverage == 0.0


@pytest.mark.parametrize("camera_z", [5.0, -10.0])
def test_translation_along_the_axis_matches_homography(camera_z: float) -> None:
    size, focal, center, plane_depth = 32, 32.0, 16.0, 10.0
    camera: CameraIntrinsics = pinhole_camera(width=size, height=size, focal=focal, cx=center, cy=center)
    rows, cols = np.indices((size, size))
    rgb = np.stack([6 * cols + 10, 5 * rows + 20, np.full((size, size), 100)], axis=-1).astype(np.uint8)
    depth: DepthMap = DepthMap.from_values(np.full((size, size), plane_depth))
    moved = Pose(qvec=[1.0, 0.0, 0.0, 0.0], tvec=[0.0, 0.0, -camera_z])

    output: WarpOutput = Warper.warp(rgb, depth, camera, Pose.identity(), camera, moved, UNFILTERED)

    # Target pixel p sees the reference pixel c + (p - c) * (plane_depth - camera_z) / plane_depth
    ratio: float = (plane_depth - camera_z) / plane_depth
    ref_u = center + (cols + 0.5 - center) * ratio
    ref_v = center + (rows + 0.5 - center) * ratio
    inner = (ref_u > 1.0) & (ref_u < size - 1.0) & (ref_v > 1.0) & (ref_v < size - 1.0)
    outer = (ref_u < 0.0) | (ref_u > size) | (ref_v < 0.0) | (ref_v > size)

    assert np.all(output.mask[inner])
    assert not np.any(output.mask[outer])
    if camera_z > 0:
        # Moving toward the plane magnifies its center over the whole frame
        assert output.coverage == 1.0
    else:
        assert 0.2 < output.coverage < 0.3
        assert output.mask[size // 2, size // 2] and not output.mask[0, 0]

    expected = np.stack([6 * (ref_u - 0.5) + 10, 5 * (ref_v - 0.5) + 20, np.full((size, size), 100.0)], axis=-1)
    assert np.max(np.abs(output.rgb[inner].astype(float) - expected[inner])) <= 1.0
    assert np.allclose(output.depth[inner], plane_depth - camera_z)


def test_warp_is_deterministic(rng: np.random.Generator) -> None:
    camera: CameraIntrinsics = pinhole_camera(width=24, height=18, focal=20.0, cx=12.0, cy=9.0)
    rgb = _random_rgb(rng, 24, 18)
    depth: DepthMap = DepthMap.from_values(rng.uniform(2.0, 6.0, size=(18, 24)))
    tgt_pose: Pose = Pose(qvec=rotmat_to_qvec(Rotation.from_euler("y", 5, degrees=True).as_matrix()),
                          tvec=[0.2, 0.0, 0.1])

    first: WarpOutput = Warper.warp(rgb, depth, camera, Pose.identity(), camera, tgt_pose, WarpParams())
    second: WarpOutput = Warper.warp(rgb, depth, camera, Pose.identity(), camera, tgt_pose, WarpParams())

    assert np.array_equal(first.rgb, second.rgb)
    assert np.array_equal(first.triangle_ids, second.triangle_ids)
    assert np.array_equal(first.depth, second.depth)


def test_empty_depth_is_an_error() -> None:
    camera: CameraIntrinsics = pinhole_camera(width=4, height=4)
    with pytest.raises(EmptyDepthWarpError):
        Warper.warp(np.zeros((4, 4, 3), np.uint8), DepthMap.from_values(np.zeros((4, 4))), camera,
                    Pose.identity(), camera, Pose.identity(), UNFILTERED)


### PAIRS IN THE TRAINING FRAME ###

def test_warp_pair_onto_itself_copies_the_canvas(tmp_path: Path) -> None:
    scene: SyntheticScene = write_synthetic_scene(tmp_path, num_images=3)
    ref_rgb = FileReader.read_image_file(scene.image_dir / "img_001.png")
    depth: DepthMap = DepthMap.from_values(scene.true_depths[1])
    params = WarpParams(target_size=64)

    output: WarpOutput = Warper.warp_pair(scene.model, 1, 1, ref_rgb, depth, params)

    canvas, placement = ImageResizer.resize_pad(ref_rgb, 64)
    content = ImageResizer.content_mask(placement)
    assert (placement.offset_x, placement.offset_y) == (0, 8)
    assert np.array_equal(output.mask, content)
    assert np.array_equal(output.rgb[content], canvas[content])


def test_warp_pair_writes_outputs(tmp_path: Path) -> None:
    scene: SyntheticScene = write_synthetic_scene(tmp_path, num_images=3)
    ref_rgb = FileReader.read_image_file(scene.image_dir / "img_001.png")
    depth: DepthMap = DepthMap.from_values(scene.true_depths[1])
    params = WarpParams(target_size=32)
    alignment = {"scale": 2.0, "shift": 0.5}

    output: WarpOutput = Warper.warp_pair(scene.model, 1, 3, ref_rgb, depth, params,
                                          output_dir=tmp_path / "warps", alignment=alignment)

    assert output.rgb.shape == (32, 32, 3)
    # Nothing lands on the target's padding bands
    assert not np.any(output.mask[:4]) and not np.any(output.mask[-4:])
    assert 0.0 < output.coverage < 1.0

    paths = PathBuilder.build_paths_to_warp_files(tmp_path / "warps", 1, 3)
    assert sorted(path.name for path in (tmp_path / "warps").iterdir()) == sorted(path.name for path in paths.values())
    assert paths["rgb"].name.startswith("000001_000003")

    assert np.array_equal(FileReader.read_mask_file(paths["mask"]), output.mask)
    assert np.array_equal(FileReader.read_image_file(paths["rgb"]), output.rgb)
    assert np.allclose(FileReader.read_pfm_file(paths["depth"]), output.depth, rtol=1e-6)

    meta = FileReader.read_key_value_file(paths["meta"])
    assert meta["alignment_scale"] == "2.0"
    assert meta["ref_name"] == "img_001.png" and meta["tgt_name"] == "img_003.png"
    assert float(meta["mask_coverage"]) == pytest.approx(output.coverage)


def test_warp_pair_rejects_wrong_image_size(tmp_path: Path) -> None:
    scene: SyntheticScene = write_synthetic_scene(tmp_path, num_images=2)

    with pytest.raises(DimensionMismatchError):
        Warper.warp_pair(scene.model, 1, 2, np.zeros((10, 10, 3), np.uint8),
                         DepthMap.from_values(scene.true_depths[1]), WarpParams(target_size=32))
