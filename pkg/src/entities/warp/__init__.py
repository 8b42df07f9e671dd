from .warp_mesh import WarpMesh
from .warp_output import WarpOutput, NO_TRIANGLE
