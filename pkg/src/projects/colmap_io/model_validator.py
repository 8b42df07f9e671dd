from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.entities import (
    SparseModel,
    RegisteredImage,
    Point3D,
    INVALID_POINT3D_ID,
)
from src.services.utils import Logger
from .model_exceptions import DanglingReferenceError, ModelParseError


logger = Logger("ModelValidator")

# Offending ids listed per category in error messages
_MAX_LISTED_IDS: int = 20


@dataclass(frozen=True)
class ValidationReport:
    dropped_images: int = 0
    dropped_observations: int = 0
    dropped_track_elements: int = 0
    dropped_points: int = 0

    @property
    def is_clean(self) -> bool:
        return not (self.dropped_images or self.dropped_observations
                    or self.dropped_track_elements or self.dropped_points)

    def to_dict(self) -> dict[str, int]:
        return {
            "dropped_images": self.dropped_images,
            "dropped_observations": self.dropped_observations,
            "dropped_track_elements": self.dropped_track_elements,
            "dropped_points": self.dropped_points,
        }


class ModelValidator:
    @classmethod
    def validate_model(cls, model: SparseModel, lenient: bool = False) -> tuple[SparseModel, ValidationReport]:
        """
        Check every cross-reference of the model. Strict mode raises
        DanglingReferenceError listing the offending ids; lenient mode drops what
        does not resolve and reports the counts.
        """
        cls._check_unique_names(model)

        # Images whose camera does not exist
        images_without_camera: list[int] = sorted(
            image_id for image_id, image in model.images.items() if image.camera_id not in model.cameras
        )
        images: dict[int, RegisteredImage] = {
            image_id: image for image_id, image in model.images.items() if image_id not in images_without_camera
        }

        # Track elements must point at an existing image whose observation points back
        bad_track_points: list[int] = []
        empty_track_points: list[int] = []
        dropped_track_elements: int = 0
        points: dict[int, Point3D] = {}

        for point_id in sorted(model.points):
            point: Point3D = model.points[point_id]
            keep: NDArray[np.bool_] = np.array([
                cls._is_reciprocal(images, point_id, int(image_id), int(index))
                for image_id, index in point.track
            ], dtype=bool).reshape(-1)

            if len(point.track) == 0:
                empty_track_points.append(point_id)
                continue
            if not np.all(keep):
                bad_track_points.append(point_id)
                dropped_track_elements += int(np.count_nonzero(~keep))
            if np.any(keep):
                points[point_id] = Point3D(
                    point3d_id=point.point3d_id,
                    xyz=point.xyz,
                    rgb=point.rgb,
                    error=point.error,
                    track=point.track[keep],
                )

        # Observations must point at a surviving point whose track holds them
        tracked: set[tuple[int, int, int]] = {
            (point_id, int(image_id), int(index))
            for point_id, point in points.items()
            for image_id, index in point.track
        }
        bad_observation_images: list[int] = []
        dropped_observations: int = 0
        cleaned_images: dict[int, RegisteredImage] = {}

        for image_id in sorted(images):
            image: RegisteredImage = images[image_id]
            point3d_ids: NDArray[np.int64] = image.point3d_ids.copy()
            for index in np.flatnonzero(image.observed_mask):
                if (int(point3d_ids[index]), image_id, int(index)) not in tracked:
                    point3d_ids[index] = INVALID_POINT3D_ID
                    dropped_observations += 1

            if not np.array_equal(point3d_ids, image.point3d_ids):
                bad_observation_images.append(image_id)
                image = RegisteredImage(
                    image_id=image.image_id,
                    name=image.name,
                    camera_id=image.camera_id,
                    pose=image.pose,
                    xys=image.xys,
                    point3d_ids=point3d_ids,
                )
            cleaned_images[image_id] = image

        report: ValidationReport = ValidationReport(
            dropped_images=len(images_without_camera),
            dropped_observations=dropped_observations,
            dropped_track_elements=dropped_track_elements,
            dropped_points=len(model.points) - len(points),
        )

        if report.is_clean:
            return model, report

        offending_ids: dict[str, list[int]] = {
            key: ids for key, ids in {
                "images_with_missing_camera": images_without_camera,
                "points_with_dangling_track": bad_track_points,
                "points_with_empty_track": empty_track_points,
                "images_with_dangling_observations": bad_observation_images,
            }.items() if ids
        }

        if not lenient:
            details: str = "; ".join(
                f"{key}: {ids[:_MAX_LISTED_IDS]}{' ...' if len(ids) > _MAX_LISTED_IDS else ''}"
                for key, ids in offending_ids.items()
            )
            raise DanglingReferenceError(f"Model has dangling cross-references ({details}).", offending_ids)

        logger.warning("Lenient parse dropped dangling references:", report.to_dict())
        return SparseModel(cameras=dict(model.cameras), images=cleaned_images, points=points), report

    @staticmethod
    def _is_reciprocal(images: dict[int, RegisteredImage], point_id: int, image_id: int, index: int) -> bool:
        image: RegisteredImage | None = images.get(image_id)
        if image is None or not 0 <= index < len(image):
            return False
        return int(image.point3d_ids[index]) == point_id

    @staticmethod
    def _check_unique_names(model: SparseModel) -> None:
        seen: dict[str, int] = {}
        for image_id in sorted(model.images):
            name: str = model.images[image_id].name
            if name in seen:
                raise ModelParseError(f"Image name {name!r} is used by images {seen[name]} and {image_id}.")
            seen[name] = image_id
