from pathlib import Path
from ..constants import Constants


class PathBuilder:

    ### SPARSE MODEL ###

    @staticmethod
    def build_paths_to_model_files(model_dir: Path, is_binary: bool) -> tuple[Path, Path, Path]:
        """ Returns (cameras, images, points) file paths of a model directory. """
        names = Constants.file_names
        if is_binary:
            return (
                model_dir / names.CAMERAS_BIN_FILE,
                model_dir / names.IMAGES_BIN_FILE,
                model_dir / names.POINTS_BIN_FILE,
            )
        return (
            model_dir / names.CAMERAS_TXT_FILE,
            model_dir / names.IMAGES_TXT_FILE,
            model_dir / names.POINTS_TXT_FILE,
        )

    ### PER-IMAGE DATA ###

    @staticmethod
    def build_path_to_depth_file(depth_dir: Path, image_name: str) -> Path:
        """
        Depth file of an image: '<image name stem>.pfm', or '.png' (with sidecar)
        when no PFM exists. Nested image names keep their sub-directories.
        """
        stem: Path = Path(image_name).with_suffix("")
        pfm_path: Path = depth_dir / stem.with_suffix(".pfm")
        if pfm_path.exists():
            return pfm_path

        png_path: Path = depth_dir / stem.with_suffix(".png")
        return png_path if png_path.exists() else pfm_path

    @staticmethod
    def build_path_to_aligned_depth_file(output_dir: Path, image_name: str) -> Path:
        return output_dir / Path(image_name).with_suffix(".pfm")

    ### PER-PAIR OUTPUTS ###

    @staticmethod
    def build_pair_stem(ref_image_id: int, tgt_image_id: int) -> str:
        return f"{ref_image_id:06d}_{tgt_image_id:06d}"

    @classmethod
    def build_paths_to_warp_files(
            cls,
            output_dir: Path,
            ref_image_id: int,
            tgt_image_id: int,
    ) -> dict[str, Path]:
        stem: str = cls.build_pair_stem(ref_image_id, tgt_image_id)
        names = Constants.file_names
        return {
            "rgb": output_dir / f"{stem}{names.WARP_RGB_SUFFIX}",
            "mask": output_dir / f"{stem}{names.WARP_MASK_SUFFIX}",
            "depth": output_dir / f"{stem}{names.WARP_DEPTH_SUFFIX}",
            "meta": output_dir / f"{stem}{names.WARP_META_SUFFIX}",
        }
