import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from src.entities import SparseModel


class Covisibility:
    @staticmethod
    def covisibility_graph(model: SparseModel) -> dict[tuple[int, int], int]:
        """
        Number of 3D points observed by both images of every unordered pair,
        keyed (smaller id, larger id). Pairs with no shared point are omitted.
        """
        image_ids: NDArray[np.int64] = np.array(sorted(model.images), dtype=np.int64)
        if len(image_ids) < 2 or not model.points:
            return {}

        rows: list[NDArray[np.int64]] = []
        cols: list[NDArray[np.int64]] = []
        for row, point in enumerate(model.points.values()):
            # One incidence per (point, image), however many times the image observes it
            track_images: NDArray[np.int64] = np.unique(point.image_ids)
            track_images = track_images[np.isin(track_images, image_ids)]
            rows.append(np.full(len(track_images), row, dtype=np.int64))
            cols.append(np.searchsorted(image_ids, track_images))

        incidence = sparse.csr_matrix(
            (np.ones(sum(len(col) for col in cols), dtype=np.int64), (np.concatenate(rows), np.concatenate(cols))),
            shape=(len(model.points), len(image_ids)),
        )
        shared = sparse.triu(incidence.T @ incidence, k=1).tocoo()

        return {
            (int(image_ids[a]), int(image_ids[b])): int(count)
            for a, b, count in sorted(zip(shared.row, shared.col, shared.data))
            if count > 0
        }

    @staticmethod
    def shared_points(graph: dict[tuple[int, int], int], image_a: int, image_b: int) -> int:
        """ Symmetric lookup; 0 for pairs absent from the graph. """
        return graph.get((min(image_a, image_b), max(image_a, image_b)), 0)
