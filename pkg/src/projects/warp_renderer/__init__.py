from .warp_exceptions import *
from .mesh_builder import MeshBuilder
from .rasterizer import Rasterizer
from .warper import Warper
