from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class AlignmentResult:
    """ Affine fit d_sfm ~ scale * d_mono + shift and its inlier set. """
    scale: float
    shift: float
    inlier_count: int
    inlier_flags: NDArray[np.bool_]
    residual_rms: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "inlier_flags", np.asarray(self.inlier_flags, dtype=bool).reshape(-1))

        if not self.scale > 0:
            raise ValueError(f"Alignment scale must be positive, got {self.scale}.")
        if self.inlier_count != int(np.count_nonzero(self.inlier_flags)):
            raise ValueError("inlier_count does not match the inlier flags.")

    def to_dict(self) -> dict[str, float | int]:
        return {
            "scale": float(self.scale),
            "shift": float(self.shift),
            "inlier_count": int(self.inlier_count),
            "samples": int(len(self.inlier_flags)),
            "residual_rms": float(self.residual_rms),
        }
