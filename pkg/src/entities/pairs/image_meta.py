from dataclasses import dataclass


@dataclass(frozen=True)
class ImageMeta:
    """ Capture metadata of one image; timestamp in UTC seconds or None when unknown. """
    name: str
    timestamp: float | None
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Image {self.name!r}: dimensions must be positive ({self.width}x{self.height}).")

    @property
    def aspect_ratio(self) -> float:
        return self.width / self.height
