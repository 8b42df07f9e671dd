from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class DepthMap:
    """ Per-pixel depth (H, W) with a validity mask; valid values are finite and positive. """
    values: NDArray[np.float64]
    valid: NDArray[np.bool_]

    def __post_init__(self) -> None:
        values: NDArray[np.float64] = np.asarray(self.values, dtype=np.float64)
        valid: NDArray[np.bool_] = np.asarray(self.valid, dtype=bool)

        if values.ndim != 2 or values.shape != valid.shape:
            raise ValueError(f"Depth values {values.shape} and validity {valid.shape} must be matching 2D arrays.")

        # Invalidate anything that breaks the invariant
        valid = valid & np.isfinite(values) & (values > 0)
        object.__setattr__(self, "values", np.where(valid, values, 0.0))
        object.__setattr__(self, "valid", valid)

    @classmethod
    def from_values(cls, values: NDArray[np.float64]) -> "DepthMap":
        """ Depth map where zero, negative or non-finite values are invalid. """
        values = np.asarray(values, dtype=np.float64)
        return cls(values=values, valid=np.isfinite(values) & (values > 0))

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def valid_values(self) -> NDArray[np.float64]:
        return self.values[self.valid]

    def with_values(self, values: NDArray[np.float64], valid: NDArray[np.bool_]) -> "DepthMap":
        return replace(self, values=values, valid=valid)
