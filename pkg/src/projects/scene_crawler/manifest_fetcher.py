from pathlib import Path

from src.entities import ImageManifestEntry
from src.services.utils import Logger
from .api_client import ApiClient
from .crawler_exceptions import EndpointError


logger = Logger("ManifestFetcher")


class ManifestFetcher:
    """ Thin byte fetch of manifest entries; files already on disk are skipped. """

    @staticmethod
    def file_name_for(entry: ImageManifestEntry) -> str:
        return entry.title.replace("/", "_")

    @classmethod
    def fetch_manifest(
            cls,
            entries: list[ImageManifestEntry],
            out_dir: Path,
            client: ApiClient,
    ) -> dict[str, int]:
        counts: dict[str, int] = {"fetched": 0, "skipped": 0, "failed": 0}

        for entry in entries:
            path_to_file: Path = out_dir / cls.file_name_for(entry)
            if path_to_file.exists() or not entry.url:
                counts["skipped"] += 1
                continue

            try:
                data: bytes = client.get_bytes(entry.url)
            except EndpointError as e:
                logger.warning(f"Failed to fetch {entry.title}: {e.message}")
                counts["failed"] += 1
                continue

            path_to_file.parent.mkdir(parents=True, exist_ok=True)
            temp_path: Path = path_to_file.with_name(path_to_file.name + ".part")
            temp_path.write_bytes(data)
            temp_path.replace(path_to_file)
            logger.info(f"Fetched {entry.title}")
            counts["fetched"] += 1

        return counts
