import numpy as np
from numpy.typing import NDArray

from src.entities import SparseModel
from .geometry_exceptions import EmptyModelError, OrbitSamplingError


class OrbitSampler:
    @staticmethod
    def sort_by_view_angle(model: SparseModel) -> list[int]:
        """ Image ids sorted by atan2 of the horizontal viewing direction, ties by id. """
        image_ids: list[int] = sorted(model.images)
        angles: dict[int, float] = {}
        for image_id in image_ids:
            direction: NDArray[np.float64] = model.images[image_id].pose.viewing_direction
            angles[image_id] = float(np.arctan2(direction[1], direction[0]))
        return sorted(image_ids, key=lambda image_id: (angles[image_id], image_id))

    @classmethod
    def sample_orbit_references(cls, model: SparseModel, k: int) -> list[int]:
        """ k evenly spaced images of the angular sort; expects a gravity-aligned model. """
        n: int = len(model.images)
        if n == 0:
            raise EmptyModelError("Cannot sample orbit references from an empty model.")
        if not 1 <= k <= n:
            raise OrbitSamplingError(f"Orbit sample size must be in [1, {n}], got {k}.")

        ordered: list[int] = cls.sort_by_view_angle(model)
        return [ordered[(i * n) // k] for i in range(k)]
