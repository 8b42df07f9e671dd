import math

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from src.entities import MetricReport, WarpOutput
from src.services.utils import Logger
from .metrics_exceptions import (
    EmptyMaskError,
    ImageShapeMismatchError,
    ImageTooSmallError,
    NoInteriorWindowError,
)


logger = Logger("MetricsCalculator")


DYNAMIC_RANGE: float = 255.0
DEFAULT_PSNR_CAP: float = 100.0

SSIM_WINDOW: int = 11
SSIM_SIGMA: float = 1.5
SSIM_K1: float = 0.01
SSIM_K2: float = 0.03


def _gaussian_taps(size: int, sigma: float) -> NDArray[np.float64]:
    offsets: NDArray[np.float64] = np.arange(size, dtype=np.float64) - (size - 1) / 2
    taps: NDArray[np.float64] = np.exp(-(offsets ** 2) / (2 * sigma ** 2))
    return taps / taps.sum()


_SSIM_TAPS: NDArray[np.float64] = _gaussian_taps(SSIM_WINDOW, SSIM_SIGMA)


class MetricsCalculator:
    @classmethod
    def psnr(
            cls,
            image_a: NDArray,
            image_b: NDArray,
            mask: NDArray[np.bool_] | None = None,
            cap: float = DEFAULT_PSNR_CAP,
    ) -> float:
        """ 10*log10(255^2 / MSE) over all pixels or the masked ones; identical pixels give the cap. """
        a, b = cls._as_channels(image_a, image_b)
        squared: NDArray[np.float64] = (a - b) ** 2

        if mask is None:
            values: NDArray[np.float64] = squared.reshape(-1, squared.shape[2])
        else:
            values = squared[cls._check_mask(mask, a)]

        mse: float = float(np.mean(values))
        if mse == 0:
            return cap
        return 10 * math.log10(DYNAMIC_RANGE ** 2 / mse)

    @classmethod
    def ssim(
            cls,
            image_a: NDArray,
            image_b: NDArray,
            mask: NDArray[np.bool_] | None = None,
    ) -> float:
        """
        Single-scale SSIM with an 11x11 Gaussian window (sigma 1.5) over every window
        fully inside the image, averaged over channels. With a mask only windows lying
        entirely inside the mask are averaged.
        """
        a, b = cls._as_channels(image_a, image_b)
        height, width = a.shape[:2]
        if height < SSIM_WINDOW or width < SSIM_WINDOW:
            raise ImageTooSmallError(f"SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {width}x{height}.")

        ssim_map: NDArray[np.float64] = np.mean(
            [cls._ssim_map(a[..., channel], b[..., channel]) for channel in range(a.shape[2])], axis=0)

        if mask is None:
            return float(np.mean(ssim_map))

        mask = cls._check_mask(mask, a)
        interior: NDArray[np.bool_] = cls._valid_crop(
            ndimage.minimum_filter(mask.astype(np.uint8), size=SSIM_WINDOW, mode="constant", cval=0) > 0)
        if not np.any(interior):
            raise NoInteriorWindowError("No SSIM window lies entirely inside the mask.")

        return float(np.mean(ssim_map[interior]))

    @classmethod
    def report(
            cls,
            generated: NDArray,
            target: NDArray,
            warp: WarpOutput,
            psnr_cap: float = DEFAULT_PSNR_CAP,
    ) -> MetricReport:
        """ Unmasked metrics of (generated, target) plus the same metrics restricted to the warp mask. """
        return cls.report_for_mask(generated, target, warp.mask, psnr_cap)

    @classmethod
    def report_for_mask(
            cls,
            generated: NDArray,
            target: NDArray,
            mask: NDArray[np.bool_],
            psnr_cap: float = DEFAULT_PSNR_CAP,
    ) -> MetricReport:
        a, _ = cls._as_channels(generated, target)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != a.shape[:2]:
            raise ImageShapeMismatchError(f"Mask {mask.shape} does not match image {a.shape[:2]}.")

        coverage: float = float(np.mean(mask))
        masked_psnr: float | None = None
        masked_ssim: float | None = None

        if coverage > 0:
            masked_psnr = cls.psnr(generated, target, mask, psnr_cap)
            try:
                masked_ssim = cls.ssim(generated, target, mask)
            except NoInteriorWindowError as e:
                logger.warning(f"Masked SSIM undefined: {e.message}")

        return MetricReport(
            psnr=cls.psnr(generated, target, cap=psnr_cap),
            ssim=cls.ssim(generated, target),
            masked_psnr=masked_psnr,
            masked_ssim=masked_ssim,
            mask_coverage=coverage,
        )

    @classmethod
    def _ssim_map(cls, a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
        c1: float = (SSIM_K1 * DYNAMIC_RANGE) ** 2
        c2: float = (SSIM_K2 * DYNAMIC_RANGE) ** 2

        mu_a = cls._window_mean(a)
        mu_b = cls._window_mean(b)
        var_a = cls._window_mean(a * a) - mu_a * mu_a
        var_b = cls._window_mean(b * b) - mu_b * mu_b
        covariance = cls._window_mean(a * b) - mu_a * mu_b

        numerator = (2 * mu_a * mu_b + c1) * (2 * covariance + c2)
        denominator = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
        return numerator / denominator

    @classmethod
    def _window_mean(cls, values: NDArray[np.float64]) -> NDArray[np.float64]:
        """ Gaussian-weighted window mean at every center whose window fits in the image. """
        filtered = ndimage.correlate1d(values, _SSIM_TAPS, axis=0, mode="constant")
        filtered = ndimage.correlate1d(filtered, _SSIM_TAPS, axis=1, mode="constant")
        return cls._valid_crop(filtered)

    @staticmethod
    def _valid_crop(values: NDArray) -> NDArray:
        radius: int = SSIM_WINDOW // 2
        return values[radius:values.shape[0] - radius, radius:values.shape[1] - radius]

    @staticmethod
    def _as_channels(image_a: NDArray, image_b: NDArray) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        a: NDArray[np.float64] = np.asarray(image_a, dtype=np.float64)
        b: NDArray[np.float64] = np.asarray(image_b, dtype=np.float64)
        if a.shape != b.shape:
            raise ImageShapeMismatchError(f"Images differ in shape: {a.shape} vs {b.shape}.")
        if a.ndim == 2:
            return a[..., None], b[..., None]
        if a.ndim != 3:
            raise ImageShapeMismatchError(f"Expected (H, W) or (H, W, C) images, got {a.shape}.")
        return a, b

    @staticmethod
    def _check_mask(mask: NDArray[np.bool_], image: NDArray) -> NDArray[np.bool_]:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != image.shape[:2]:
            raise ImageShapeMismatchError(f"Mask {mask.shape} does not match image {image.shape[:2]}.")
        if not np.any(mask):
            raise EmptyMaskError("Mask selects no pixel.")
        return mask
