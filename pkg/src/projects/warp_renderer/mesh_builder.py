import numpy as np
from numpy.typing import NDArray

from src.entities import CameraIntrinsics, DepthMap, Pose, WarpMesh
from src.services.coordinate_operations import CameraProjector
from src.services.utils import Logger
from .warp_exceptions import DimensionMismatchError


logger = Logger("MeshBuilder")


class MeshBuilder:
    @classmethod
    def build_mesh(
            cls,
            rgb: NDArray[np.uint8],
            depth: DepthMap,
            camera: CameraIntrinsics,
            pose: Pose,
            discontinuity_threshold: float | None,
    ) -> WarpMesh:
        """
        One vertex per valid depth pixel, unprojected at the pixel center. Each 2x2
        quad with four valid corners is split along the top-right to bottom-left
        diagonal into (tl, bl, tr) and (tr, bl, br). A triangle is dropped when its
        relative depth spread exceeds the threshold (None disables the filter).
        """
        height, width = depth.height, depth.width
        if rgb.shape[:2] != (height, width):
            raise DimensionMismatchError(f"RGB {rgb.shape[:2]} and depth {(height, width)} differ in size.")
        if (camera.width, camera.height) != (width, height):
            raise DimensionMismatchError(
                f"Camera {camera.width}x{camera.height} does not match the {width}x{height} image.")

        vertex_index: NDArray[np.int64] = np.full((height, width), -1, dtype=np.int64)
        rows, cols = np.nonzero(depth.valid)
        vertex_index[rows, cols] = np.arange(len(rows))

        if len(rows) == 0:
            return WarpMesh.empty()

        centers: NDArray[np.float64] = np.column_stack([cols + 0.5, rows + 0.5])
        vertex_depths: NDArray[np.float64] = depth.values[rows, cols]
        vertices: NDArray[np.float64] = CameraProjector.unproject_pixels(camera, pose, centers, vertex_depths)
        colors: NDArray[np.uint8] = np.asarray(rgb, dtype=np.uint8)[rows, cols, :3]

        triangles: NDArray[np.int64] = cls._quad_triangles(vertex_index)
        if discontinuity_threshold is not None and len(triangles):
            triangle_depths: NDArray[np.float64] = vertex_depths[triangles]
            spread: NDArray[np.float64] = (
                (triangle_depths.max(axis=1) - triangle_depths.min(axis=1)) / triangle_depths.min(axis=1)
            )
            kept: NDArray[np.bool_] = spread <= discontinuity_threshold
            logger.debug(f"Discontinuity filter dropped {int(np.count_nonzero(~kept))} of {len(triangles)} triangles")
            triangles = triangles[kept]

        return WarpMesh(vertices=vertices, colors=colors, triangles=triangles)

    @staticmethod
    def _quad_triangles(vertex_index: NDArray[np.int64]) -> NDArray[np.int64]:
        """ Triangles of every complete quad in row-major quad order, two per quad. """
        top_left: NDArray[np.int64] = vertex_index[:-1, :-1]
        top_right: NDArray[np.int64] = vertex_index[:-1, 1:]
        bottom_left: NDArray[np.int64] = vertex_index[1:, :-1]
        bottom_right: NDArray[np.int64] = vertex_index[1:, 1:]

        complete: NDArray[np.bool_] = (top_left >= 0) & (top_right >= 0) & (bottom_left >= 0) & (bottom_right >= 0)
        tl, tr, bl, br = (corner[complete] for corner in (top_left, top_right, bottom_left, bottom_right))

        first: NDArray[np.int64] = np.column_stack([tl, bl, tr])
        second: NDArray[np.int64] = np.column_stack([tr, bl, br])
        return np.stack([first, second], axis=1).reshape(-1, 3)
