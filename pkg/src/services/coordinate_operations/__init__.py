from .geometry_exceptions import *
from .camera_projector import CameraProjector
from .pose_operations import PoseOperations
from .depth_quantile import DepthQuantile
from .conditioning_builder import ConditioningBuilder
from .gravity_aligner import GravityAligner
from .orbit_sampler import OrbitSampler
