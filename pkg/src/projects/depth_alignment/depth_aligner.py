from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from src.entities import (
    AlignmentParams,
    AlignmentResult,
    CameraIntrinsics,
    DepthMap,
    SparseDepth,
    SparseModel,
)
from src.services.utils import FileReader, Logger
from .sparse_depth_extractor import SparseDepthExtractor
from .alignment_exceptions import (
    TooFewCorrespondencesError,
    DegenerateSampleError,
    NoConsensusError,
    NonPositiveScaleError,
    MonoDepthFormatError,
)


logger = Logger("DepthAligner")

# Hypotheses scored per vectorized batch
_HYPOTHESIS_CHUNK: int = 256

# Robust refit: sigma from the median absolute relative residual
_MAD_TO_SIGMA: float = 1.4826
_TRIM_SIGMAS: float = 5.0
_TRIM_FLOOR: float = 1e-9
_MAX_TRIM_ROUNDS: int = 20


class DepthAligner:
    ### LOADING ###

    @staticmethod
    def load_mono_depth(path: Path, invert_input: bool = False) -> DepthMap:
        """ PFM or 16-bit PNG (with sidecar scale); zeros are invalid, disparity is inverted on request. """
        suffix: str = path.suffix.lower()
        if suffix == ".pfm":
            values: NDArray = FileReader.read_pfm_file(path)
        elif suffix == ".png":
            values = FileReader.read_depth_png_file(path)
        else:
            raise MonoDepthFormatError(f"Unsupported depth file {path}, expected .pfm or .png.")

        if values.ndim != 2:
            raise MonoDepthFormatError(f"{path}: depth must be single-channel, got shape {values.shape}.")

        depth: DepthMap = DepthMap.from_values(values)
        if invert_input:
            inverted: NDArray[np.float64] = np.zeros_like(depth.values)
            np.divide(1.0, depth.values, out=inverted, where=depth.valid)
            depth = DepthMap(values=inverted, valid=depth.valid)
        return depth

    ### FITTING ###

    @classmethod
    def ransac_align(cls, mono: DepthMap, sparse: SparseDepth, params: AlignmentParams) -> AlignmentResult:
        """
        Robust affine fit d_sfm ~ scale * d_mono + shift. inlier_flags has one entry
        per sparse sample; samples without a valid mono pixel are never inliers.

        The best hypothesis's inliers are refit by least squares. Every sample is then re-scored
        against the fit: inliers are those within 5 robust sigmas of the relative residuals (never
        more than the inlier threshold), and the fit is repeated until the inlier set is stable.
        """
        mono_depths, usable = cls._lookup(mono, sparse.pixels)
        sfm_depths: NDArray[np.float64] = sparse.depths

        m: NDArray[np.float64] = mono_depths[usable]
        s: NDArray[np.float64] = sfm_depths[usable]
        num_samples: int = len(m)
        min_points: int = 1 if params.scale_only else 2

        if num_samples < min_points:
            raise TooFewCorrespondencesError(
                f"Need at least {min_points} correspondences with valid mono depth, got {num_samples}.")
        if not params.scale_only and np.ptp(m) == 0:
            raise DegenerateSampleError("All correspondences share one mono depth, no affine hypothesis exists.")

        min_inliers: int = params.resolve_min_inliers(num_samples)
        consensus: NDArray[np.bool_] | None = cls._best_consensus(m, s, params)
        best_count: int = -1 if consensus is None else int(np.count_nonzero(consensus))

        if consensus is None or best_count < min_inliers:
            raise NoConsensusError(
                f"Best hypothesis has {max(best_count, 0)} inliers, {min_inliers} required "
                f"({num_samples} correspondences).")

        scale, shift, inliers = cls._robust_refit(m, s, consensus, params, max(min_points, min_inliers))
        if not scale > 0:
            raise NonPositiveScaleError(f"Least-squares refit gave non-positive scale {scale!r}.")

        residuals: NDArray[np.float64] = scale * m[inliers] + shift - s[inliers]
        inlier_flags: NDArray[np.bool_] = np.zeros(len(sfm_depths), dtype=bool)
        inlier_flags[np.flatnonzero(usable)[inliers]] = True

        return AlignmentResult(
            scale=float(scale),
            shift=float(shift),
            inlier_count=int(np.count_nonzero(inliers)),
            inlier_flags=inlier_flags,
            residual_rms=float(np.sqrt(np.mean(residuals ** 2))),
        )

    @staticmethod
    def apply_alignment(mono: DepthMap, alignment: AlignmentResult) -> DepthMap:
        """ scale * values + shift on valid pixels; pixels driven to <= 0 become invalid. """
        aligned: NDArray[np.float64] = alignment.scale * mono.values + alignment.shift
        return DepthMap(values=aligned, valid=mono.valid & (aligned > 0))

    @classmethod
    def align_image(
            cls,
            model: SparseModel,
            image_id: int,
            mono: DepthMap,
            params: AlignmentParams,
    ) -> tuple[DepthMap, AlignmentResult]:
        """ Sparse depth of the image, robust fit and aligned dense depth. """
        sparse: SparseDepth = SparseDepthExtractor.sparse_depth_for_image(model, image_id)
        camera: CameraIntrinsics = model.camera_of(image_id)

        # Mono depth may come at another resolution than the registered image
        if (mono.width, mono.height) != (camera.width, camera.height):
            sparse = SparseDepth(
                pixels=sparse.pixels * np.array([mono.width / camera.width, mono.height / camera.height]),
                depths=sparse.depths,
                point3d_ids=sparse.point3d_ids,
            )

        alignment: AlignmentResult = cls.ransac_align(mono, sparse, params)
        logger.metrics(
            f"Image {image_id}: scale={alignment.scale:.6g} shift={alignment.shift:.6g} "
            f"inliers={alignment.inlier_count}/{len(sparse)} rms={alignment.residual_rms:.4g}")

        return cls.apply_alignment(mono, alignment), alignment

    ### HELPERS ###

    @staticmethod
    def _lookup(mono: DepthMap, pixels: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.bool_]]:
        """ Nearest-pixel mono depth at continuous pixel coordinates. """
        cols: NDArray[np.int64] = np.floor(pixels[:, 0]).astype(np.int64)
        rows: NDArray[np.int64] = np.floor(pixels[:, 1]).astype(np.int64)
        inside: NDArray[np.bool_] = (cols >= 0) & (cols < mono.width) & (rows >= 0) & (rows < mono.height)

        values: NDArray[np.float64] = np.zeros(len(pixels))
        usable: NDArray[np.bool_] = np.zeros(len(pixels), dtype=bool)
        values[inside] = mono.values[rows[inside], cols[inside]]
        usable[inside] = mono.valid[rows[inside], cols[inside]]
        return values, usable

    @staticmethod
    def _hypotheses(
            rng: np.random.Generator,
            m: NDArray[np.float64],
            s: NDArray[np.float64],
            count: int,
            scale_only: bool,
    ) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.bool_]]:
        """ count minimal-sample hypotheses as (scales, shifts, usable). """
        if scale_only:
            index: NDArray[np.int64] = rng.integers(len(m), size=count)
            return s[index] / m[index], np.zeros(count), np.ones(count, dtype=bool)

        # Two distinct indices per hypothesis
        first: NDArray[np.int64] = rng.integers(len(m), size=count)
        second: NDArray[np.int64] = rng.integers(len(m) - 1, size=count)
        second += second >= first

        mono_step: NDArray[np.float64] = m[first] - m[second]
        distinct: NDArray[np.bool_] = mono_step != 0
        scales: NDArray[np.float64] = np.zeros(count)
        np.divide(s[first] - s[second], mono_step, out=scales, where=distinct)
        shifts: NDArray[np.float64] = s[first] - scales * m[first]
        return scales, shifts, distinct & (scales > 0)

    @classmethod
    def _best_consensus(
            cls,
            m: NDArray[np.float64],
            s: NDArray[np.float64],
            params: AlignmentParams,
    ) -> NDArray[np.bool_] | None:
        """ Inlier set of the first hypothesis with the most inliers; None when no hypothesis is usable. """
        rng: np.random.Generator = np.random.default_rng(params.seed)
        best_inliers: NDArray[np.bool_] | None = None
        best_count: int = -1

        for start in range(0, params.iterations, _HYPOTHESIS_CHUNK):
            count: int = min(_HYPOTHESIS_CHUNK, params.iterations - start)
            scales, shifts, usable = cls._hypotheses(rng, m, s, count, params.scale_only)

            inliers: NDArray[np.bool_] = (
                np.abs(scales[:, None] * m + shifts[:, None] - s) / s < params.inlier_threshold)
            counts: NDArray[np.int64] = np.where(usable, np.count_nonzero(inliers, axis=1), -1)

            best_in_chunk: int = int(np.argmax(counts))
            if counts[best_in_chunk] > best_count:
                best_count = int(counts[best_in_chunk])
                best_inliers = inliers[best_in_chunk]

        return best_inliers if best_count >= 0 else None

    @classmethod
    def _robust_refit(
            cls,
            m: NDArray[np.float64],
            s: NDArray[np.float64],
            consensus: NDArray[np.bool_],
            params: AlignmentParams,
            min_keep: int,
    ) -> tuple[float, float, NDArray[np.bool_]]:
        """ Least squares over the consensus, then re-scored against the fit with a robust cutoff until stable. """
        kept: NDArray[np.bool_] = consensus
        scale, shift = cls._least_squares(m[kept], s[kept], params.scale_only)

        for _ in range(_MAX_TRIM_ROUNDS):
            relative: NDArray[np.float64] = np.abs(scale * m + shift - s) / s
            sigma: float = _MAD_TO_SIGMA * float(np.median(relative[kept]))
            cutoff: float = min(max(_TRIM_SIGMAS * sigma, _TRIM_FLOOR), params.inlier_threshold)

            rescored: NDArray[np.bool_] = relative < cutoff
            if np.array_equal(rescored, kept) or np.count_nonzero(rescored) < min_keep:
                break

            kept = rescored
            scale, shift = cls._least_squares(m[kept], s[kept], params.scale_only)

        return scale, shift, kept

    @staticmethod
    def _least_squares(m: NDArray[np.float64], s: NDArray[np.float64], scale_only: bool) -> tuple[float, float]:
        if scale_only:
            return float(np.dot(m, s) / np.dot(m, m)), 0.0

        design: NDArray[np.float64] = np.column_stack([m, np.ones_like(m)])
        solution, *_ = np.linalg.lstsq(design, s, rcond=None)
        return float(solution[0]), float(solution[1])
