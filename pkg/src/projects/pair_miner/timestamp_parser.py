import calendar
import re
from datetime import datetime
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from src.services.utils import Logger


logger = Logger("TimestampParser")


# "YYYY:MM:DD HH:MM:SS" as written by cameras; '-' date separators and a 'T' are accepted from manifests
_TIMESTAMP_PATTERN: re.Pattern = re.compile(
    r"(\d{4})[:\-](\d{2})[:\-](\d{2})[ T](\d{2}):(\d{2}):(\d{2})"
)

_EXIF_IFD_TAG: int = 0x8769
_DATETIME_ORIGINAL_TAG: int = 36867
_DATETIME_TAG: int = 306


class TimestampParser:
    @staticmethod
    def parse_timestamp(metadata_blob: bytes | str | None) -> float | None:
        """
        Capture time in seconds of the naive timestamp read as UTC; None when the
        blob carries no parseable date. Never raises.
        """
        if not metadata_blob:
            return None

        try:
            if isinstance(metadata_blob, bytes):
                text: str = metadata_blob.decode("latin-1", errors="ignore")
            else:
                text = str(metadata_blob)

            match: re.Match | None = _TIMESTAMP_PATTERN.search(text)
            if match is None:
                return None

            captured: datetime = datetime(*(int(group) for group in match.groups()))
            return float(calendar.timegm(captured.timetuple()))

        except (ValueError, OverflowError, TypeError):
            return None

    @classmethod
    def read_exif_timestamp(cls, path_to_image: Path) -> float | None:
        """ DateTimeOriginal of the image's EXIF block, falling back to DateTime. """
        try:
            with Image.open(path_to_image) as image:
                exif = image.getexif()
                original = exif.get_ifd(_EXIF_IFD_TAG).get(_DATETIME_ORIGINAL_TAG)
                fallback = exif.get(_DATETIME_TAG)

        except (OSError, UnidentifiedImageError) as e:
            logger.warning(f"Cannot read EXIF from {path_to_image}: {e}")
            return None

        timestamp: float | None = cls.parse_timestamp(original)
        return timestamp if timestamp is not None else cls.parse_timestamp(fallback)
