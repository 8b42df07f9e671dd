import numpy as np
from numpy.typing import NDArray

from src.entities import CameraIntrinsics, Pose, WarpMesh, WarpOutput, NO_TRIANGLE
from src.services.coordinate_operations import CameraProjector
from src.services.utils import Logger


logger = Logger("Rasterizer")


# Bounding boxes up to this many pixels per side are rasterized in one vectorized batch
_STENCIL_SIZE: int = 4
_BATCH_TRIANGLES: int = 100_000

# Pixel centers on an edge count as covered; ties are settled by the depth buffer
_COVERAGE_EPS: float = 1e-9
_BBOX_PAD: float = 1e-6
_MIN_AREA: float = 1e-12


class Rasterizer:
    @classmethod
    def rasterize(
            cls,
            mesh: WarpMesh,
            camera: CameraIntrinsics,
            pose: Pose,
            sentinel_rgb: tuple[int, int, int] = (0, 0, 0),
    ) -> WarpOutput:
        """
        Z-buffered rendering of the mesh from the given camera. Pixel (row, col) is
        sampled at (col + 0.5, row + 0.5); depth and color use perspective-correct
        barycentric weights; the nearest fragment wins and equal depths go to the
        lower triangle index. Triangles with a vertex at depth <= 0 are discarded.
        """
        width, height = camera.width, camera.height
        rgb: NDArray[np.uint8] = np.empty((height, width, 3), dtype=np.uint8)
        rgb[:] = np.asarray(sentinel_rgb, dtype=np.uint8)
        depth: NDArray[np.float64] = np.zeros((height, width))
        triangle_ids: NDArray[np.int64] = np.full((height, width), NO_TRIANGLE, dtype=np.int64)

        if mesh.num_triangles == 0:
            return WarpOutput(rgb=rgb, mask=triangle_ids != NO_TRIANGLE, depth=depth, triangle_ids=triangle_ids)

        xyz_camera: NDArray[np.float64] = pose.transform(mesh.vertices)
        vertex_pixels, vertex_depths = CameraProjector.project_camera_points(camera, xyz_camera)

        triangles: NDArray[np.int64] = mesh.triangles
        in_front: NDArray[np.bool_] = np.all(vertex_depths[triangles] > 0, axis=1)
        triangle_indexes: NDArray[np.int64] = np.flatnonzero(in_front)

        corners: NDArray[np.float64] = vertex_pixels[triangles[triangle_indexes]]  # (T, 3, 2)
        x_min: NDArray[np.int64] = np.ceil(corners[:, :, 0].min(axis=1) - 0.5 - _BBOX_PAD).astype(np.int64)
        x_max: NDArray[np.int64] = np.floor(corners[:, :, 0].max(axis=1) - 0.5 + _BBOX_PAD).astype(np.int64)
        y_min: NDArray[np.int64] = np.ceil(corners[:, :, 1].min(axis=1) - 0.5 - _BBOX_PAD).astype(np.int64)
        y_max: NDArray[np.int64] = np.floor(corners[:, :, 1].max(axis=1) - 0.5 + _BBOX_PAD).astype(np.int64)

        np.clip(x_min, 0, None, out=x_min)
        np.clip(y_min, 0, None, out=y_min)
        np.clip(x_max, None, width - 1, out=x_max)
        np.clip(y_max, None, height - 1, out=y_max)

        on_screen: NDArray[np.bool_] = (x_min <= x_max) & (y_min <= y_max)
        small: NDArray[np.bool_] = on_screen & (x_max - x_min < _STENCIL_SIZE) & (y_max - y_min < _STENCIL_SIZE)
        large: NDArray[np.bool_] = on_screen & ~small

        fragments: list[tuple[NDArray, ...]] = []

        small_positions: NDArray[np.int64] = np.flatnonzero(small)
        for start in range(0, len(small_positions), _BATCH_TRIANGLES):
            batch: NDArray[np.int64] = small_positions[start:start + _BATCH_TRIANGLES]
            offsets_x, offsets_y = np.meshgrid(np.arange(_STENCIL_SIZE), np.arange(_STENCIL_SIZE))
            xs: NDArray[np.int64] = x_min[batch, None] + offsets_x.reshape(1, -1)
            ys: NDArray[np.int64] = y_min[batch, None] + offsets_y.reshape(1, -1)
            within: NDArray[np.bool_] = (xs <= x_max[batch, None]) & (ys <= y_max[batch, None])

            owners: NDArray[np.int64] = np.broadcast_to(batch[:, None], xs.shape)[within]
            fragments.append(cls._shade(owners, xs[within], ys[within], corners, triangle_indexes,
                                        triangles, vertex_depths, mesh.colors, width))

        for position in np.flatnonzero(large):
            xs, ys = np.meshgrid(
                np.arange(x_min[position], x_max[position] + 1),
                np.arange(y_min[position], y_max[position] + 1),
            )
            owners = np.full(xs.size, position, dtype=np.int64)
            fragments.append(cls._shade(owners, xs.reshape(-1), ys.reshape(-1), corners, triangle_indexes,
                                        triangles, vertex_depths, mesh.colors, width))

        fragments = [fragment for fragment in fragments if len(fragment[0])]
        if fragments:
            pixels, fragment_depths, fragment_triangles, fragment_colors = (
                np.concatenate(parts) for parts in zip(*fragments)
            )

            # Nearest depth per pixel, then lowest triangle index
            order: NDArray[np.int64] = np.lexsort((fragment_triangles, fragment_depths, pixels))
            sorted_pixels: NDArray[np.int64] = pixels[order]
            _, first = np.unique(sorted_pixels, return_index=True)
            winners: NDArray[np.int64] = order[first]

            rows, cols = np.divmod(pixels[winners], width)
            depth[rows, cols] = fragment_depths[winners]
            triangle_ids[rows, cols] = fragment_triangles[winners]
            rgb[rows, cols] = np.clip(np.rint(fragment_colors[winners]), 0, 255).astype(np.uint8)

        mask: NDArray[np.bool_] = triangle_ids != NO_TRIANGLE
        logger.debug(f"Rasterized {len(triangle_indexes)} triangles, coverage {float(mask.mean()):.4f}")
        return WarpOutput(rgb=rgb, mask=mask, depth=depth, triangle_ids=triangle_ids)

    @staticmethod
    def _shade(
            owners: NDArray[np.int64],
            xs: NDArray[np.int64],
            ys: NDArray[np.int64],
            corners: NDArray[np.float64],
            triangle_indexes: NDArray[np.int64],
            triangles: NDArray[np.int64],
            vertex_depths: NDArray[np.float64],
            vertex_colors: NDArray[np.uint8],
            width: int,
    ) -> tuple[NDArray[np.int64], NDArray[np.float64], NDArray[np.int64], NDArray[np.float64]]:
        """ Coverage test and perspective-correct interpolation of candidate pixel centers. """
        p0: NDArray[np.float64] = corners[owners, 0]
        p1: NDArray[np.float64] = corners[owners, 1]
        p2: NDArray[np.float64] = corners[owners, 2]
        px: NDArray[np.float64] = xs + 0.5
        py: NDArray[np.float64] = ys + 0.5

        area: NDArray[np.float64] = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) \
            - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0])
        usable: NDArray[np.bool_] = np.abs(area) > _MIN_AREA
        safe_area: NDArray[np.float64] = np.where(usable, area, 1.0)

        # Screen-space barycentrics from the edge functions
        w0: NDArray[np.float64] = ((p2[:, 0] - p1[:, 0]) * (py - p1[:, 1]) - (p2[:, 1] - p1[:, 1]) * (px - p1[:, 0])) / safe_area
        w1: NDArray[np.float64] = ((p0[:, 0] - p2[:, 0]) * (py - p2[:, 1]) - (p0[:, 1] - p2[:, 1]) * (px - p2[:, 0])) / safe_area
        w2: NDArray[np.float64] = 1.0 - w0 - w1

        covered: NDArray[np.bool_] = usable & (w0 >= -_COVERAGE_EPS) & (w1 >= -_COVERAGE_EPS) & (w2 >= -_COVERAGE_EPS)

        mesh_triangles: NDArray[np.int64] = triangle_indexes[owners[covered]]
        corner_vertices: NDArray[np.int64] = triangles[mesh_triangles]
        weights: NDArray[np.float64] = np.column_stack([w0[covered], w1[covered], w2[covered]])

        inverse_depths: NDArray[np.float64] = weights / vertex_depths[corner_vertices]
        inverse_sum: NDArray[np.float64] = inverse_depths.sum(axis=1)
        fragment_depths: NDArray[np.float64] = 1.0 / inverse_sum

        perspective_weights: NDArray[np.float64] = inverse_depths / inverse_sum[:, None]
        colors: NDArray[np.float64] = np.einsum(
            "fk,fkc->fc", perspective_weights, vertex_colors[corner_vertices].astype(np.float64))

        pixel_ids: NDArray[np.int64] = ys[covered] * width + xs[covered]
        return pixel_ids, fragment_depths, mesh_triangles, colors
