from pathlib import Path

from src.entities import CategoryRecord, EntityRecord, FileRecord
from src.services.utils import FileReader, Logger
from .crawler_exceptions import FixtureError


logger = Logger("FixtureSources")


def _read_records(folder: Path, key: str) -> dict[str, dict]:
    """ Every JSON record of a fixture folder, indexed by its key field. """
    records: dict[str, dict] = {}
    for file_name in FileReader.read_list_of_files(folder, format=".json"):
        try:
            record: dict = FileReader.read_json_file(folder, file_name)
            records[str(record[key])] = record
        except (ValueError, KeyError, TypeError) as e:
            raise FixtureError(f"Malformed fixture record {folder / file_name}: {e}")
    return records


class FixtureGraphSource:
    """ Knowledge graph read from <root>/graph/entities/*.json records. """

    def __init__(self, fixture_dir: Path) -> None:
        self.entities: dict[str, EntityRecord] = {
            entity_id: EntityRecord.from_dict(record)
            for entity_id, record in _read_records(fixture_dir / "graph" / "entities", "id").items()
        }
        logger.debug(f"Loaded {len(self.entities)} fixture entities")

    def entity(self, entity_id: str) -> EntityRecord | None:
        return self.entities.get(entity_id)

    def direct_instances(self, class_id: str) -> list[str]:
        return sorted(
            entity_id for entity_id, entity in self.entities.items() if class_id in entity.instance_of)

    def direct_subclasses(self, class_id: str) -> list[str]:
        return sorted(
            entity_id for entity_id, entity in self.entities.items() if class_id in entity.subclass_of)


class FixtureCatalogSource:
    """ Media catalog read from <root>/catalog/categories/*.json and <root>/catalog/files/*.json. """

    def __init__(self, fixture_dir: Path) -> None:
        self.categories: dict[str, CategoryRecord] = {
            title: CategoryRecord.from_dict(record)
            for title, record in _read_records(fixture_dir / "catalog" / "categories", "title").items()
        }
        self.files: dict[str, FileRecord] = {
            title: FileRecord.from_dict(record)
            for title, record in _read_records(fixture_dir / "catalog" / "files", "title").items()
        }
        logger.debug(f"Loaded {len(self.categories)} fixture categories and {len(self.files)} files")

    def category(self, title: str) -> CategoryRecord | None:
        return self.categories.get(title)

    def file(self, title: str) -> FileRecord | None:
        return self.files.get(title)

    def category_entity(self, title: str) -> str | None:
        record: CategoryRecord | None = self.categories.get(title)
        return record.entity_id if record else None
