from dataclasses import dataclass

from ..sparse_model import Pose


@dataclass(frozen=True, eq=False)
class RelativePose(Pose):
    """ Target-camera-from-reference-camera transform: X_tgt = R @ X_ref + t. """
