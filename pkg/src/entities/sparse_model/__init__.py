from .camera_intrinsics import CameraModel, CameraIntrinsics
from .pose import Pose, qvec_to_rotmat, rotmat_to_qvec
from .registered_image import RegisteredImage, INVALID_POINT3D_ID
from .point3d import Point3D
from .sparse_model import SparseModel
from .keypoint_set import KeypointSet
