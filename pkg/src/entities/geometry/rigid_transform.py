from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..sparse_model import Pose


@dataclass(frozen=True, eq=False)
class RigidTransform(Pose):
    """ Rigid transform applied to world coordinates: X' = R @ X + t. """

    def apply(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.transform(points)
