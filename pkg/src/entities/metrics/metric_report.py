from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class MetricReport:
    """ Unmasked and masked reconstruction metrics of one generated image. """
    psnr: float
    ssim: float
    masked_psnr: float | None
    masked_ssim: float | None
    mask_coverage: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.mask_coverage <= 1.0:
            raise ValueError(f"Mask coverage must be in [0, 1], got {self.mask_coverage}.")

    def to_dict(self) -> dict[str, float | None]:
        return asdict(self)
