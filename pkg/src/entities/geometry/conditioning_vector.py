from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


CONDITIONING_SIZE: int = 13


@dataclass(frozen=True, eq=False)
class ConditioningVector:
    """
    Pose conditioning: row-major 3x4 extrinsic (9 rotation values with the scaled
    translation as the 4th column) followed by the vertical field of view in radians.
    """
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64).reshape(CONDITIONING_SIZE))

    @property
    def extrinsic(self) -> NDArray[np.float64]:
        return self.values[:12].reshape(3, 4)

    @property
    def rotation(self) -> NDArray[np.float64]:
        return self.extrinsic[:, :3]

    @property
    def translation(self) -> NDArray[np.float64]:
        return self.extrinsic[:, 3]

    @property
    def fov(self) -> float:
        return float(self.values[12])
