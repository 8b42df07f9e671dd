from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class WarpMesh:
    """ Triangle mesh of an unprojected RGBD image: world vertices with colors and index triples. """
    vertices: NDArray[np.float64]
    colors: NDArray[np.uint8]
    triangles: NDArray[np.int64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3))
        object.__setattr__(self, "colors", np.asarray(self.colors, dtype=np.uint8).reshape(-1, 3))
        object.__setattr__(self, "triangles", np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3))

        if len(self.vertices) != len(self.colors):
            raise ValueError("Every mesh vertex needs a color.")
        if len(self.triangles) and (self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)):
            raise ValueError("Triangle indices out of range.")

    @classmethod
    def empty(cls) -> "WarpMesh":
        return cls(vertices=np.zeros((0, 3)), colors=np.zeros((0, 3)), triangles=np.zeros((0, 3)))

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def subset(self, triangle_indexes: NDArray[np.int64]) -> "WarpMesh":
        """ Same vertices, only the selected triangles. """
        return WarpMesh(vertices=self.vertices, colors=self.colors, triangles=self.triangles[triangle_indexes])
