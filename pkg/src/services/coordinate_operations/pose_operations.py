import numpy as np
from numpy.typing import NDArray

from src.entities import (
    Pose,
    RelativePose,
    RigidTransform,
    SparseModel,
    RegisteredImage,
    Point3D,
)


class PoseOperations:
    @staticmethod
    def relative_pose(ref: Pose, tgt: Pose) -> RelativePose:
        """ Transform from reference-camera to target-camera coordinates: R = R_t R_r^T, t = t_t - R t_r. """
        rotation: NDArray[np.float64] = tgt.rotation_matrix @ ref.rotation_matrix.T
        translation: NDArray[np.float64] = tgt.tvec - rotation @ ref.tvec
        pose: Pose = Pose.from_matrix(rotation, translation)
        return RelativePose(qvec=pose.qvec, tvec=pose.tvec)

    @staticmethod
    def compose(ref: Pose, relative: RelativePose) -> Pose:
        """ World-to-target pose obtained by applying relative after ref. """
        rotation: NDArray[np.float64] = relative.rotation_matrix @ ref.rotation_matrix
        translation: NDArray[np.float64] = relative.rotation_matrix @ ref.tvec + relative.tvec
        return Pose.from_matrix(rotation, translation)

    @staticmethod
    def apply_rigid_transform(model: SparseModel, transform: RigidTransform) -> SparseModel:
        """
        Move the world by X' = R X + t. Poses are updated so camera-frame
        coordinates, and hence every projection, are unchanged.
        """
        rotation: NDArray[np.float64] = transform.rotation_matrix
        translation: NDArray[np.float64] = transform.tvec

        images: dict[int, RegisteredImage] = {}
        for image_id, image in model.images.items():
            image_rotation: NDArray[np.float64] = image.pose.rotation_matrix @ rotation.T
            image_translation: NDArray[np.float64] = image.pose.tvec - image_rotation @ translation
            images[image_id] = RegisteredImage(
                image_id=image.image_id,
                name=image.name,
                camera_id=image.camera_id,
                pose=Pose.from_matrix(image_rotation, image_translation),
                xys=image.xys,
                point3d_ids=image.point3d_ids,
            )

        points: dict[int, Point3D] = {
            point_id: Point3D(
                point3d_id=point.point3d_id,
                xyz=rotation @ point.xyz + translation,
                rgb=point.rgb,
                error=point.error,
                track=point.track,
            )
            for point_id, point in model.points.items()
        }

        return SparseModel(cameras=dict(model.cameras), images=images, points=points)
