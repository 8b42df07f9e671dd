import numpy as np
from numpy.typing import NDArray

from src.entities import SparseModel, SparseDepth, RegisteredImage, CameraIntrinsics
from src.services.utils import Logger
from .alignment_exceptions import UnregisteredImageError, NoObservationsError


logger = Logger("SparseDepthExtractor")


class SparseDepthExtractor:
    @staticmethod
    def sparse_depth_for_image(model: SparseModel, image_id: int) -> SparseDepth:
        """
        Camera-frame depth of every 3D point the image observes, at the stored 2D
        observation. Points behind the camera and observations outside the image are dropped.
        """
        image: RegisteredImage | None = model.images.get(image_id)
        if image is None:
            raise UnregisteredImageError(f"Image {image_id} is not registered in the model.")

        camera: CameraIntrinsics = model.camera_of(image_id)
        point3d_ids: NDArray[np.int64] = image.observed_point3d_ids
        pixels: NDArray[np.float64] = image.xys[image.observed_mask]

        if len(point3d_ids) == 0:
            raise NoObservationsError(f"Image {image_id} ({image.name}) observes no 3D points.")

        depths: NDArray[np.float64] = image.pose.transform(model.xyz_of(point3d_ids))[:, 2]
        inside: NDArray[np.bool_] = (
            (pixels[:, 0] >= 0) & (pixels[:, 0] < camera.width)
            & (pixels[:, 1] >= 0) & (pixels[:, 1] < camera.height)
        )
        keep: NDArray[np.bool_] = (depths > 0) & inside

        if not np.any(keep):
            raise NoObservationsError(f"Image {image_id} ({image.name}) has no 3D point in front of the camera.")

        dropped: int = int(np.count_nonzero(~keep))
        if dropped:
            logger.debug(f"Image {image_id}: dropped {dropped} observations behind the camera or off the image")

        return SparseDepth(pixels=pixels[keep], depths=depths[keep], point3d_ids=point3d_ids[keep])
