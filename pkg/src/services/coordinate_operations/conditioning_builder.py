import numpy as np
from numpy.typing import NDArray

from src.entities import ConditioningVector, RelativePose
from .geometry_exceptions import InvalidParameterError


class ConditioningBuilder:
    @staticmethod
    def build_conditioning(rel: RelativePose, fov_vertical: float, scale: float) -> ConditioningVector:
        """ Row-major [R | t / scale] followed by the vertical field of view. """
        if not scale > 0:
            raise InvalidParameterError(f"Translation scale must be positive, got {scale}.")
        if not 0 < fov_vertical < np.pi:
            raise InvalidParameterError(f"Field of view must be in (0, pi), got {fov_vertical}.")

        extrinsic: NDArray[np.float64] = np.hstack([rel.rotation_matrix, (rel.tvec / scale)[:, None]])
        return ConditioningVector(values=np.append(extrinsic.reshape(-1), fov_vertical))
