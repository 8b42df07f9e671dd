import math

import numpy as np
from numpy.typing import NDArray

from src.entities import DepthMap
from .geometry_exceptions import EmptyDepthError, InvalidParameterError


# Keeps q*n products like 0.7*10 from rounding up a rank
_RANK_EPS: float = 1e-9


class DepthQuantile:
    @staticmethod
    def nearest_rank(values: NDArray[np.float64], q: float) -> float:
        """ Nearest-rank q-quantile: the value at index ceil(q*n) - 1 of the ascending values. """
        if not 0 < q < 1:
            raise InvalidParameterError(f"Quantile must be in (0, 1), got {q}.")

        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if len(values) == 0:
            raise EmptyDepthError("No valid depth values to take a quantile of.")

        rank: int = min(max(math.ceil(q * len(values) - _RANK_EPS) - 1, 0), len(values) - 1)
        return float(np.partition(values, rank)[rank])

    @classmethod
    def depth_quantile_scale(cls, depth: DepthMap, q: float) -> float:
        """ Translation scale of a reference image: the q-quantile of its valid depths. """
        return cls.nearest_rank(depth.valid_values, q)
