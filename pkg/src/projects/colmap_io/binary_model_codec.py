import struct
from pathlib import Path

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
    TruncatedStreamError,
    UnknownCameraModelError,
    ModelParseError,
    ModelWriteError,
)


# Little-endian record layouts
_POINT2D_DTYPE = np.dtype([("x", "<f8"), ("y", "<f8"), ("point3d_id", "<i8")])
_TRACK_DTYPE = np.dtype([("image_id", "<i4"), ("point2d_index", "<i4")])
_CAMERA_HEADER = struct.Struct("<iiQQ")
_IMAGE_HEADER = struct.Struct("<i4d3di")
_POINT_HEADER = struct.Struct("<Q3d3Bd")
_COUNT = struct.Struct("<Q")


class _ByteStream:
    """ Sequential reader over a file's bytes that fails loudly on short reads. """

    def __init__(self, data: bytes, path: Path) -> None:
        self.data: bytes = data
        self.path: Path = path
        self.offset: int = 0

    def read(self, num_bytes: int) -> bytes:
        end: int = self.offset + num_bytes
        if end > len(self.data):
            raise TruncatedStreamError(
                f"{self.path}: truncated stream, needed {num_bytes} bytes at offset {self.offset}, "
                f"{len(self.data) - self.offset} left.")
        chunk: bytes = self.data[self.offset:end]
        self.offset = end
        return chunk

    def unpack(self, record: struct.Struct) -> tuple:
        return record.unpack(self.read(record.size))

    def read_count(self) -> int:
        return int(self.unpack(_COUNT)[0])

    def read_array(self, dtype: np.dtype, count: int) -> NDArray:
        return np.frombuffer(self.read(dtype.itemsize * count), dtype=dtype, count=count)

    def read_c_string(self) -> str:
        end: int = self.data.find(b"\x00", self.offset)
        if end < 0:
            raise TruncatedStreamError(f"{self.path}: unterminated image name at offset {self.offset}.")
        raw: bytes = self.data[self.offset:end]
        try:
            name: str = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelParseError(
                f"{self.path}: image name at offset {self.offset} is not valid UTF-8 "
                f"(byte {raw[e.start]:#04x} at offset {self.offset + e.start}).")
        self.offset = end + 1
        return name

    def ensure_consumed(self) -> None:
        if self.offset != len(self.data):
            raise ModelParseError(f"{self.path}: {len(self.data) - self.offset} trailing bytes after last record.")


def _open_stream(path: Path) -> _ByteStream:
    if not path.is_file():
        raise MissingModelFileError(f"Model file not found: {path}")
    return _ByteStream(path.read_bytes(), path)


def _write_bytes(path: Path, payload: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise ModelWriteError(f"Cannot write {path}: {e}")


class BinaryModelCodec:
    ### READING ###

    @staticmethod
    def read_cameras(path: Path) -> dict[int, CameraIntrinsics]:
        stream: _ByteStream = _open_stream(path)
        cameras: dict[int, CameraIntrinsics] = {}

        for _ in range(stream.read_count()):
            camera_id, model_id, width, height = stream.unpack(_CAMERA_HEADER)
            try:
                model: CameraModel = CameraModel.from_id(model_id)
            except ValueError:
                raise UnknownCameraModelError(f"{path}: camera {camera_id} has unknown model id {model_id}.")

            params: NDArray[np.float64] = stream.read_array(np.dtype("<f8"), model.num_params).astype(np.float64)
            try:
                cameras[camera_id] = CameraIntrinsics(
                    camera_id=camera_id, model=model, width=width, height=height, params=params)
            except ValueError as e:
                raise ModelParseError(f"{path}: {e}")

        stream.ensure_consumed()
        return cameras

    @staticmethod
    def read_images(path: Path) -> dict[int, RegisteredImage]:
        stream: _ByteStream = _open_stream(path)
        images: dict[int, RegisteredImage] = {}

        for _ in range(stream.read_count()):
            image_id, qw, qx, qy, qz, tx, ty, tz, camera_id = stream.unpack(_IMAGE_HEADER)
            name: str = stream.read_c_string()
            points2d: NDArray = stream.read_array(_POINT2D_DTYPE, stream.read_count())

            try:
                images[image_id] = RegisteredImage(
                    image_id=image_id,
                    name=name,
                    camera_id=camera_id,
                    pose=Pose(qvec=np.array([qw, qx, qy, qz]), tvec=np.array([tx, ty, tz])),
                    xys=np.column_stack([points2d["x"], points2d["y"]]),
                    point3d_ids=points2d["point3d_id"].astype(np.int64),
                )
            except ValueError as e:
                raise ModelParseError(f"{path}: image {image_id}: {e}")

        stream.ensure_consumed()
        return images

    @staticmethod
    def read_points(path: Path) -> dict[int, Point3D]:
        stream: _ByteStream = _open_stream(path)
        points: dict[int, Point3D] = {}

        for _ in range(stream.read_count()):
            point_id, x, y, z, r, g, b, error = stream.unpack(_POINT_HEADER)
            track: NDArray = stream.read_array(_TRACK_DTYPE, stream.read_count())

            points[point_id] = Point3D(
                point3d_id=point_id,
                xyz=np.array([x, y, z]),
                rgb=np.array([r, g, b], dtype=np.uint8),
                error=error,
                track=np.column_stack([track["image_id"], track["point2d_index"]]).astype(np.int64),
            )

        stream.ensure_consumed()
        return points

    ### WRITING ###

    @staticmethod
    def write_cameras(cameras: dict[int, CameraIntrinsics], path: Path) -> None:
        chunks: list[bytes] = [_COUNT.pack(len(cameras))]
        for camera_id in sorted(cameras):
            camera: CameraIntrinsics = cameras[camera_id]
            chunks.append(_CAMERA_HEADER.pack(camera_id, camera.model.model_id, camera.width, camera.height))
            chunks.append(camera.params.astype("<f8").tobytes())
        _write_bytes(path, b"".join(chunks))

    @staticmethod
    def write_images(images: dict[int, RegisteredImage], path: Path) -> None:
        chunks: list[bytes] = [_COUNT.pack(len(images))]
        for image_id in sorted(images):
            image: RegisteredImage = images[image_id]
            chunks.append(_IMAGE_HEADER.pack(image_id, *image.pose.qvec, *image.pose.tvec, image.camera_id))
            chunks.append(image.name.encode("utf-8") + b"\x00")

            points2d: NDArray = np.zeros(len(image), dtype=_POINT2D_DTYPE)
            points2d["x"] = image.xys[:, 0]
            points2d["y"] = image.xys[:, 1]
            points2d["point3d_id"] = image.point3d_ids
            chunks.append(_COUNT.pack(len(image)))
            chunks.append(points2d.tobytes())
        _write_bytes(path, b"".join(chunks))

    @staticmethod
    def write_points(points: dict[int, Point3D], path: Path) -> None:
        chunks: list[bytes] = [_COUNT.pack(len(points))]
        for point_id in sorted(points):
            point: Point3D = points[point_id]
            chunks.append(_POINT_HEADER.pack(point_id, *point.xyz, *(int(c) for c in point.rgb), point.error))

            track: NDArray = np.zeros(len(point.track), dtype=_TRACK_DTYPE)
            track["image_id"] = point.image_ids
            track["point2d_index"] = point.point2d_indexes
            chunks.append(_COUNT.pack(len(track)))
            chunks.append(track.tobytes())
        _write_bytes(path, b"".join(chunks))
