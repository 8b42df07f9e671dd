from .relative_pose import RelativePose
from .rigid_transform import RigidTransform
from .conditioning_vector import ConditioningVector, CONDITIONING_SIZE
