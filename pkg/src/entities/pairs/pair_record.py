from dataclasses import dataclass

import numpy as np

from ..geometry import RelativePose


PAIR_COLUMNS: list[str] = [
    "scene_id",
    "ref_image_id",
    "tgt_image_id",
    "shared_points",
    "timestamp_delta",
    "qw", "qx", "qy", "qz",
    "tx", "ty", "tz",
    "translation_scale",
    "aspect_ratio",
]


@dataclass(frozen=True, eq=False)
class PairRecord:
    """ One mined (reference, target) pair. """
    scene_id: str
    ref_image_id: int
    tgt_image_id: int
    shared_points: int
    timestamp_delta: float | None
    relative: RelativePose
    translation_scale: float
    aspect_ratio: float

    @property
    def pair_id(self) -> tuple[int, int]:
        return self.ref_image_id, self.tgt_image_id

    @property
    def sort_key(self) -> tuple[str, int, int]:
        return self.scene_id, self.ref_image_id, self.tgt_image_id

    def to_row(self) -> list[str]:
        """ Field values as text; floats use repr so the table round-trips exactly. """
        return [
            self.scene_id,
            str(self.ref_image_id),
            str(self.tgt_image_id),
            str(self.shared_points),
            "" if self.timestamp_delta is None else repr(float(self.timestamp_delta)),
            *(repr(float(value)) for value in self.relative.qvec),
            *(repr(float(value)) for value in self.relative.tvec),
            repr(float(self.translation_scale)),
            repr(float(self.aspect_ratio)),
        ]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "PairRecord":
        return cls(
            scene_id=row["scene_id"],
            ref_image_id=int(row["ref_image_id"]),
            tgt_image_id=int(row["tgt_image_id"]),
            shared_points=int(row["shared_points"]),
            timestamp_delta=float(row["timestamp_delta"]) if row["timestamp_delta"] != "" else None,
            relative=RelativePose(
                qvec=np.array([float(row[key]) for key in ("qw", "qx", "qy", "qz")]),
                tvec=np.array([float(row[key]) for key in ("tx", "ty", "tz")]),
            ),
            translation_scale=float(row["translation_scale"]),
            aspect_ratio=float(row["aspect_ratio"]),
        )
