from .alignment_exceptions import *
from .sparse_depth_extractor import SparseDepthExtractor
from .depth_aligner import DepthAligner
