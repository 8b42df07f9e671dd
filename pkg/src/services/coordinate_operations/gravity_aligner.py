import numpy as np
from numpy.typing import NDArray
from scipy.spatial.transform import Rotation

from src.entities import SparseModel, RigidTransform, rotmat_to_qvec
from src.services.utils import Constants, Logger
from .geometry_exceptions import DegenerateGravityError, EmptyModelError
from .pose_operations import PoseOperations


logger = Logger("GravityAligner")


# World up is +z, so the mean camera down axis goes to -z
WORLD_DOWN: NDArray[np.float64] = np.array([0.0, 0.0, -1.0])


class GravityAligner:
    @classmethod
    def gravity_align(cls, model: SparseModel) -> tuple[SparseModel, RigidTransform]:
        if not model.images:
            raise EmptyModelError("Gravity alignment needs at least one registered image.")

        down_axes: NDArray[np.float64] = np.stack([
            model.images[image_id].pose.down_axis for image_id in sorted(model.images)
        ])
        mean_down: NDArray[np.float64] = down_axes.mean(axis=0)
        norm: float = float(np.linalg.norm(mean_down))

        if norm < Constants.math.DEGENERATE_NORM:
            raise DegenerateGravityError(f"Mean camera down axis is degenerate (norm {norm:.3e}).")

        rotation: NDArray[np.float64] = cls.minimal_rotation(mean_down / norm, WORLD_DOWN)
        transform: RigidTransform = RigidTransform(qvec=rotmat_to_qvec(rotation), tvec=np.zeros(3))

        angle_deg: float = float(np.degrees(np.linalg.norm(Rotation.from_matrix(rotation).as_rotvec())))
        logger.info(f"Gravity alignment rotates the world by {angle_deg:.3f} deg")

        return PoseOperations.apply_rigid_transform(model, transform), transform

    @staticmethod
    def minimal_rotation(source: NDArray[np.float64], target: NDArray[np.float64]) -> NDArray[np.float64]:
        """ Smallest rotation taking unit vector source onto unit vector target. """
        axis: NDArray[np.float64] = np.cross(source, target)
        sin_angle: float = float(np.linalg.norm(axis))
        cos_angle: float = float(np.dot(source, target))

        if sin_angle < Constants.math.DEGENERATE_NORM:
            if cos_angle > 0:
                return np.eye(3)
            # Antiparallel: half turn about any axis perpendicular to source
            helper: NDArray[np.float64] = np.eye(3)[int(np.argmin(np.abs(source)))]
            axis = np.cross(source, helper)
            return Rotation.from_rotvec(np.pi * axis / np.linalg.norm(axis)).as_matrix()

        angle: float = float(np.arctan2(sin_angle, cos_angle))
        return Rotation.from_rotvec(angle * axis / sin_angle).as_matrix()
