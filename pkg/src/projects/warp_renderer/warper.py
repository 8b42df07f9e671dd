from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from src.entities import (
    CameraIntrinsics,
    DepthMap,
    Placement,
    Pose,
    SparseModel,
    WarpMesh,
    WarpOutput,
    WarpParams,
    NO_TRIANGLE,
)
from src.services.coordinate_operations import CameraProjector, PoseOperations
from src.services.utils import FileWriter, Logger, PathBuilder
from src.projects.pair_miner.image_resizer import ImageResizer
from .mesh_builder import MeshBuilder
from .rasterizer import Rasterizer
from .warp_exceptions import DimensionMismatchError, EmptyDepthWarpError


logger = Logger("Warper")


class Warper:
    @staticmethod
    def warp(
            ref_rgb: NDArray[np.uint8],
            aligned_depth: DepthMap,
            ref_camera: CameraIntrinsics,
            ref_pose: Pose,
            tgt_camera: CameraIntrinsics,
            tgt_pose: Pose,
            params: WarpParams,
    ) -> WarpOutput:
        """ Mesh the reference RGBD and render it from the target camera. """
        if not np.any(aligned_depth.valid):
            raise EmptyDepthWarpError("Aligned depth has no valid pixel to warp.")

        mesh: WarpMesh = MeshBuilder.build_mesh(
            ref_rgb, aligned_depth, ref_camera, ref_pose, params.discontinuity_threshold)
        return Rasterizer.rasterize(mesh, tgt_camera, tgt_pose, params.sentinel_rgb)

    @classmethod
    def warp_pair(
            cls,
            model: SparseModel,
            ref_image_id: int,
            tgt_image_id: int,
            ref_rgb: NDArray[np.uint8],
            aligned_depth: DepthMap,
            params: WarpParams,
            output_dir: Path | None = None,
            alignment: dict[str, float] | None = None,
    ) -> WarpOutput:
        """
        Warp in the square padded training frame: both images are placed with
        resize_pad, cameras follow the placement, and the mask is limited to the
        target's content region. Outputs are written when output_dir is given.
        """
        ref_camera: CameraIntrinsics = model.camera_of(ref_image_id)
        tgt_camera: CameraIntrinsics = model.camera_of(tgt_image_id)
        ref_pose: Pose = model.images[ref_image_id].pose
        tgt_pose: Pose = model.images[tgt_image_id].pose

        if ref_rgb.shape[:2] != (ref_camera.height, ref_camera.width):
            raise DimensionMismatchError(
                f"Reference image {ref_rgb.shape[1]}x{ref_rgb.shape[0]} does not match its camera "
                f"{ref_camera.width}x{ref_camera.height}.")

        depth: DepthMap = ImageResizer.resample_depth(aligned_depth, ref_camera.width, ref_camera.height)
        canvas_rgb, ref_placement = ImageResizer.resize_pad(ref_rgb[..., :3], params.target_size, params.pad_value)
        canvas_depth: DepthMap = ImageResizer.resize_pad_depth(depth, ref_placement)
        tgt_placement: Placement = ImageResizer.placement_for(tgt_camera.width, tgt_camera.height, params.target_size)

        output: WarpOutput = cls.warp(
            canvas_rgb,
            canvas_depth,
            CameraProjector.camera_for_placement(ref_camera, ref_placement),
            ref_pose,
            CameraProjector.camera_for_placement(tgt_camera, tgt_placement),
            tgt_pose,
            params,
        )
        output = cls._restrict_to_content(output, ImageResizer.content_mask(tgt_placement), params)

        logger.info(f"Warp {ref_image_id} -> {tgt_image_id}: coverage {output.coverage:.4f}")

        if output_dir is not None:
            cls.write_warp(output, output_dir, model, ref_image_id, tgt_image_id, params, alignment)
        return output

    @staticmethod
    def write_warp(
            output: WarpOutput,
            output_dir: Path,
            model: SparseModel,
            ref_image_id: int,
            tgt_image_id: int,
            params: WarpParams,
            alignment: dict[str, float] | None,
    ) -> dict[str, Path]:
        """ rgb PNG, mask PNG, depth PFM and a key=value record; alignment is an AlignmentResult.to_dict() record. """
        paths: dict[str, Path] = PathBuilder.build_paths_to_warp_files(output_dir, ref_image_id, tgt_image_id)
        ref_pose: Pose = model.images[ref_image_id].pose
        tgt_pose: Pose = model.images[tgt_image_id].pose
        relative = PoseOperations.relative_pose(ref_pose, tgt_pose)

        def _vector(values: NDArray[np.float64]) -> str:
            return ",".join(repr(float(value)) for value in values)

        meta: dict[str, object] = {
            "ref_image_id": ref_image_id,
            "tgt_image_id": tgt_image_id,
            "ref_name": model.images[ref_image_id].name,
            "tgt_name": model.images[tgt_image_id].name,
            "alignment_scale": repr(float(alignment["scale"])) if alignment else "",
            "alignment_shift": repr(float(alignment["shift"])) if alignment else "",
            "discontinuity_threshold": (
                "" if params.discontinuity_threshold is None else repr(float(params.discontinuity_threshold))
            ),
            "target_size": params.target_size,
            "ref_qvec": _vector(ref_pose.qvec),
            "ref_tvec": _vector(ref_pose.tvec),
            "tgt_qvec": _vector(tgt_pose.qvec),
            "tgt_tvec": _vector(tgt_pose.tvec),
            "relative_qvec": _vector(relative.qvec),
            "relative_tvec": _vector(relative.tvec),
            "mask_coverage": repr(output.coverage),
        }

        FileWriter.write_image_file(output.rgb, paths["rgb"])
        FileWriter.write_mask_file(output.mask, paths["mask"])
        FileWriter.write_pfm_file(output.depth.astype(np.float32), paths["depth"])
        FileWriter.write_key_value_file(meta, paths["meta"])
        return paths

    @staticmethod
    def _restrict_to_content(output: WarpOutput, content: NDArray[np.bool_], params: WarpParams) -> WarpOutput:
        outside: NDArray[np.bool_] = output.mask & ~content
        if not np.any(outside):
            return output

        rgb: NDArray[np.uint8] = output.rgb.copy()
        depth: NDArray[np.float64] = output.depth.copy()
        triangle_ids: NDArray[np.int64] = output.triangle_ids.copy()
        rgb[outside] = np.asarray(params.sentinel_rgb, dtype=np.uint8)
        depth[outside] = 0.0
        triangle_ids[outside] = NO_TRIANGLE
        return WarpOutput(rgb=rgb, mask=triangle_ids != NO_TRIANGLE, depth=depth, triangle_ids=triangle_ids)
