from .depth_map import DepthMap
from .sparse_depth import SparseDepth
from .alignment_result import AlignmentResult
