from pathlib import Path
from typing import Iterator

import numpy as np
from numpy.typing import NDArray

from src.entities import (
    CameraIntrinsics,
    CameraModel,
    Pose,
    RegisteredImage,
    Point3D,
)
from .model_exceptions import (
    MissingModelFileError,
    UnknownCameraModelError,
    ModelParseError,
    ModelWriteError,
)


def _fmt(value: float) -> str:
    """ 17 significant digits round-trip every double. """
    return format(float(value), ".17g")


def _read_lines(path: Path) -> list[tuple[int, str]]:
    """ Numbered lines without comments; blank lines are kept (an image may observe nothing). """
    if not path.is_file():
        raise MissingModelFileError(f"Model file not found: {path}")
    data: bytes = path.read_bytes()
    try:
        lines: list[str] = data.decode("utf-8").splitlines()
    except UnicodeDecodeError as e:
        line_number: int = data.count(b"\n", 0, e.start) + 1
        raise ModelParseError(f"{path}:{line_number}: not valid UTF-8.")
    return [
        (number, line.rstrip("\r")) for number, line in enumerate(lines, start=1)
        if not line.lstrip().startswith("#")
    ]


def _records(lines: list[tuple[int, str]]) -> Iterator[tuple[int, list[str]]]:
    for number, line in lines:
        if line.strip():
            yield number, line.split()


def _write_text(path: Path, header: list[str], lines: list[str]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as text_file:
            text_file.writelines(line + "\n" for line in header)
            text_file.writelines(line + "\n" for line in lines)
    except OSError as e:
        raise ModelWriteError(f"Cannot write {path}: {e}")


class TextModelCodec:
    ### READING ###

    @staticmethod
    def read_cameras(path: Path) -> dict[int, CameraIntrinsics]:
        cameras: dict[int, CameraIntrinsics] = {}

        for number, fields in _records(_read_lines(path)):
            try:
                model: CameraModel = CameraModel.from_name(fields[1])
            except IndexError:
                raise ModelParseError(f"{path}:{number}: incomplete camera record.")
            except ValueError:
                raise UnknownCameraModelError(f"{path}:{number}: unknown camera model {fields[1]!r}.")

            try:
                camera_id: int = int(fields[0])
                cameras[camera_id] = CameraIntrinsics(
                    camera_id=camera_id,
                    model=model,
                    width=int(fields[2]),
                    height=int(fields[3]),
                    params=np.array([float(value) for value in fields[4:]]),
                )
            except (IndexError, ValueError) as e:
                raise ModelParseError(f"{path}:{number}: invalid camera record ({e}).")

        return cameras

    @staticmethod
    def read_images(path: Path) -> dict[int, RegisteredImage]:
        lines: list[tuple[int, str]] = _read_lines(path)
        images: dict[int, RegisteredImage] = {}

        position: int = 0
        while position < len(lines):
            number, header = lines[position]
            position += 1
            if not header.strip():
                continue

            # The name is the rest of the line and may contain spaces
            fields: list[str] = header.split(maxsplit=9)
            if len(fields) != 10:
                raise ModelParseError(f"{path}:{number}: image record needs 10 fields, got {len(fields)}.")

            points_line: str = lines[position][1] if position < len(lines) else ""
            position += 1

            try:
                values: list[str] = points_line.split()
                if len(values) % 3:
                    raise ValueError("observation line must hold (x, y, point3d_id) triples")
                observations: NDArray[np.float64] = np.array(values, dtype=np.float64).reshape(-1, 3)

                image_id: int = int(fields[0])
                images[image_id] = RegisteredImage(
                    image_id=image_id,
                    name=fields[9],
                    camera_id=int(fields[8]),
                    pose=Pose(
                        qvec=np.array([float(value) for value in fields[1:5]]),
                        tvec=np.array([float(value) for value in fields[5:8]]),
                    ),
                    xys=observations[:, :2],
                    point3d_ids=np.array(values[2::3], dtype=np.int64),
                )
            except ValueError as e:
                raise ModelParseError(f"{path}:{number}: invalid image record ({e}).")

        return images

    @staticmethod
    def read_points(path: Path) -> dict[int, Point3D]:
        points: dict[int, Point3D] = {}

        for number, fields in _records(_read_lines(path)):
            try:
                if len(fields) < 8 or (len(fields) - 8) % 2:
                    raise ValueError("expected id, xyz, rgb, error and (image_id, point2d_index) pairs")
                point_id: int = int(fields[0])
                points[point_id] = Point3D(
                    point3d_id=point_id,
                    xyz=np.array([float(value) for value in fields[1:4]]),
                    rgb=np.array([int(value) for value in fields[4:7]], dtype=np.uint8),
                    error=float(fields[7]),
                    track=np.array(fields[8:], dtype=np.int64).reshape(-1, 2),
                )
            except ValueError as e:
                raise ModelParseError(f"{path}:{number}: invalid point record ({e}).")

        return points

    ### WRITING ###

    @staticmethod
    def write_cameras(cameras: dict[int, CameraIntrinsics], path: Path) -> None:
        header: list[str] = [
            "# Camera list with one line of data per camera:",
            "#   CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]",
            f"# Number of cameras: {len(cameras)}",
        ]
        lines: list[str] = [
            " ".join([
                str(camera_id), camera.model.name, str(camera.width), str(camera.height),
                *(_fmt(value) for value in camera.params),
            ])
            for camera_id, camera in sorted(cameras.items())
        ]
        _write_text(path, header, lines)

    @staticmethod
    def write_images(images: dict[int, RegisteredImage], path: Path) -> None:
        header: list[str] = [
            "# Image list with two lines of data per image:",
            "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME",
            "#   POINTS2D[] as (X, Y, POINT3D_ID)",
            f"# Number of images: {len(images)}",
        ]
        lines: list[str] = []
        for image_id, image in sorted(images.items()):
            lines.append(" ".join([
                str(image_id),
                *(_fmt(value) for value in image.pose.qvec),
                *(_fmt(value) for value in image.pose.tvec),
                str(image.camera_id),
                image.name,
            ]))
            lines.append(" ".join(
                f"{_fmt(x)} {_fmt(y)} {int(point3d_id)}"
                for (x, y), point3d_id in zip(image.xys, image.point3d_ids)
            ))
        _write_text(path, header, lines)

    @staticmethod
    def write_points(points: dict[int, Point3D], path: Path) -> None:
        header: list[str] = [
            "# 3D point list with one line of data per point:",
            "#   POINT3D_ID, X, Y, Z, R, G, B, ERROR, TRACK[] as (IMAGE_ID, POINT2D_IDX)",
            f"# Number of points: {len(points)}",
        ]
        lines: list[str] = [
            " ".join([
                str(point_id),
                *(_fmt(value) for value in point.xyz),
                *(str(int(channel)) for channel in point.rgb),
                _fmt(point.error),
                *(str(int(value)) for value in point.track.reshape(-1)),
            ])
            for point_id, point in sorted(points.items())
        ]
        _write_text(path, header, lines)
