import numpy as np
from numpy.typing import NDArray

from src.entities import CameraIntrinsics, CameraModel, Pose, Placement
from src.services.utils import Constants, Logger
from .geometry_exceptions import NonFiniteInputError, NonPositiveDepthError, UndistortionError


logger = Logger("CameraProjector")


class CameraProjector:
    """
    Projection between world points and pixels under the reconstruction tool's
    camera models. Pixel coordinates are continuous with the top-left pixel
    center at (0.5, 0.5).
    """

    ### PROJECTION ###

    @classmethod
    def project(
            cls,
            camera: CameraIntrinsics,
            pose: Pose,
            xyz_world: NDArray[np.float64],
    ) -> tuple[NDArray[np.float64], float]:
        """
        Returns (pixel (2,), depth). Depth <= 0 signals a point behind the camera,
        its pixel is then NaN.
        """
        pixels, depths = cls.project_points(camera, pose, np.asarray(xyz_world, dtype=np.float64).reshape(1, 3))
        return pixels[0], float(depths[0])

    @classmethod
    def project_points(
            cls,
            camera: CameraIntrinsics,
            pose: Pose,
            xyz_world: NDArray[np.float64],
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """ Vectorized project over (N, 3) points: (pixels (N, 2), depths (N,)). """
        xyz_world = np.asarray(xyz_world, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(xyz_world)):
            raise NonFiniteInputError("Cannot project non-finite world coordinates.")

        xyz_camera: NDArray[np.float64] = pose.transform(xyz_world)
        return cls.project_camera_points(camera, xyz_camera)

    @classmethod
    def project_camera_points(
            cls,
            camera: CameraIntrinsics,
            xyz_camera: NDArray[np.float64],
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """ Project (N, 3) points given in the camera frame. """
        depths: NDArray[np.float64] = xyz_camera[:, 2].copy()
        in_front: NDArray[np.bool_] = depths > 0

        pixels: NDArray[np.float64] = np.full((len(xyz_camera), 2), np.nan)
        if not np.any(in_front):
            return pixels, depths

        normalized: NDArray[np.float64] = xyz_camera[in_front, :2] / depths[in_front, None]
        distorted: NDArray[np.float64] = normalized + cls._distortion_offset(camera.distortion, normalized)

        cx, cy = camera.principal_point
        pixels[in_front, 0] = camera.focal_x * distorted[:, 0] + cx
        pixels[in_front, 1] = camera.focal_y * distorted[:, 1] + cy
        return pixels, depths

    ### UNPROJECTION ###

    @classmethod
    def unproject(
            cls,
            camera: CameraIntrinsics,
            pose: Pose,
            pixel: NDArray[np.float64],
            depth: float,
    ) -> NDArray[np.float64]:
        points: NDArray[np.float64] = cls.unproject_pixels(
            camera, pose,
            pixels=np.asarray(pixel, dtype=np.float64).reshape(1, 2),
            depths=np.array([depth], dtype=np.float64),
        )
        return points[0]

    @classmethod
    def unproject_pixels(
            cls,
            camera: CameraIntrinsics,
            pose: Pose,
            pixels: NDArray[np.float64],
            depths: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        """ Vectorized unproject: (N, 2) pixels with (N,) camera-frame depths to (N, 3) world points. """
        pixels = np.asarray(pixels, dtype=np.float64).reshape(-1, 2)
        depths = np.asarray(depths, dtype=np.float64).reshape(-1)

        if not (np.all(np.isfinite(pixels)) and np.all(np.isfinite(depths))):
            raise NonFiniteInputError("Cannot unproject non-finite pixels or depths.")
        if np.any(depths <= 0):
            raise NonPositiveDepthError(f"Depth must be positive, got min {depths.min()!r}.")

        cx, cy = camera.principal_point
        distorted: NDArray[np.float64] = np.column_stack([
            (pixels[:, 0] - cx) / camera.focal_x,
            (pixels[:, 1] - cy) / camera.focal_y,
        ])
        normalized: NDArray[np.float64] = (
            cls._undistort(camera.distortion, distorted) if camera.has_distortion else distorted
        )

        xyz_camera: NDArray[np.float64] = np.column_stack([normalized * depths[:, None], depths])

        # X_world = R^T (X_cam - t)
        return (xyz_camera - pose.tvec) @ pose.rotation_matrix

    ### DERIVED CAMERAS ###

    @staticmethod
    def vertical_fov(camera: CameraIntrinsics) -> float:
        return float(2.0 * np.arctan(camera.height / (2.0 * camera.focal_y)))

    @staticmethod
    def camera_for_placement(camera: CameraIntrinsics, placement: Placement) -> CameraIntrinsics:
        """ Camera of a resized and padded image: focals scaled, principal point scaled then offset. """
        params: NDArray[np.float64] = camera.params.copy()
        scale: float = placement.scale

        if camera.model in (CameraModel.PINHOLE, CameraModel.OPENCV):
            focal_indexes, principal_indexes = (0, 1), (2, 3)
        else:
            focal_indexes, principal_indexes = (0,), (1, 2)

        for index in focal_indexes:
            params[index] *= scale
        params[principal_indexes[0]] = params[principal_indexes[0]] * scale + placement.offset_x
        params[principal_indexes[1]] = params[principal_indexes[1]] * scale + placement.offset_y

        return camera.with_params(params, width=placement.target, height=placement.target)

    ### DISTORTION ###

    @staticmethod
    def _distortion_offset(
            distortion: NDArray[np.float64],
            normalized: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        """ OPENCV-style radial + tangential offset; covers every supported model via zero coefficients. """
        k1, k2, p1, p2 = distortion
        u: NDArray[np.float64] = normalized[:, 0]
        v: NDArray[np.float64] = normalized[:, 1]

        uu, vv, uv = u * u, v * v, u * v
        r2: NDArray[np.float64] = uu + vv
        radial: NDArray[np.float64] = k1 * r2 + k2 * r2 * r2

        du: NDArray[np.float64] = u * radial + 2 * p1 * uv + p2 * (r2 + 2 * uu)
        dv: NDArray[np.float64] = v * radial + 2 * p2 * uv + p1 * (r2 + 2 * vv)
        return np.column_stack([du, dv])

    @classmethod
    def _undistort(
            cls,
            distortion: NDArray[np.float64],
            distorted: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        """ Newton iterations solving u + offset(u) = distorted for every row. """
        k1, k2, p1, p2 = distortion
        normalized: NDArray[np.float64] = distorted.copy()

        for _ in range(Constants.math.UNDISTORT_MAX_ITERATIONS):
            u: NDArray[np.float64] = normalized[:, 0]
            v: NDArray[np.float64] = normalized[:, 1]
            r2: NDArray[np.float64] = u * u + v * v
            radial: NDArray[np.float64] = k1 * r2 + k2 * r2 * r2
            radial_slope: NDArray[np.float64] = 2 * (k1 + 2 * k2 * r2)

            residual: NDArray[np.float64] = (
                normalized + cls._distortion_offset(distortion, normalized) - distorted
            )

            # Jacobian of u + offset(u)
            j_uu: NDArray[np.float64] = 1 + radial + u * u * radial_slope + 2 * p1 * v + 6 * p2 * u
            j_uv: NDArray[np.float64] = u * v * radial_slope + 2 * p1 * u + 2 * p2 * v
            j_vu: NDArray[np.float64] = j_uv
            j_vv: NDArray[np.float64] = 1 + radial + v * v * radial_slope + 2 * p2 * u + 6 * p1 * v

            determinant: NDArray[np.float64] = j_uu * j_vv - j_uv * j_vu
            step: NDArray[np.float64] = np.column_stack([
                (j_vv * residual[:, 0] - j_uv * residual[:, 1]) / determinant,
                (j_uu * residual[:, 1] - j_vu * residual[:, 0]) / determinant,
            ])
            normalized = normalized - step

            if not np.all(np.isfinite(normalized)):
                break
            if np.max(np.abs(step), initial=0.0) < Constants.math.UNDISTORT_STEP_TOL:
                return normalized

        final_residual: NDArray[np.float64] = (
            normalized + cls._distortion_offset(distortion, normalized) - distorted
        )
        if np.all(np.isfinite(final_residual)) and np.max(np.abs(final_residual), initial=0.0) < 1e-12:
            return normalized

        logger.warning("Undistortion did not converge for", len(distorted), "pixels")
        raise UndistortionError(
            f"Undistortion diverged after {Constants.math.UNDISTORT_MAX_ITERATIONS} iterations.")
