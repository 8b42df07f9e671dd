from dataclasses import dataclass


@dataclass(frozen=True)
class Placement:
    """ Where resized content sits inside a square padded canvas. """
    scale: float
    offset_x: int
    offset_y: int
    content_width: int
    content_height: int
    source_width: int
    source_height: int
    target: int

    def to_source(self, x: float, y: float) -> tuple[float, float]:
        """ Canvas coordinates back to source image coordinates. """
        return (x - self.offset_x) / self.scale, (y - self.offset_y) / self.scale

    def to_canvas(self, x: float, y: float) -> tuple[float, float]:
        return x * self.scale + self.offset_x, y * self.scale + self.offset_y
