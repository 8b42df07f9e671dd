from src.entities import CategoryRecord, FileRecord, ImageManifestEntry, SubcategoryNode
from src.interfaces import PCatalogSource
from src.services.utils import Logger


logger = Logger("ManifestBuilder")


MISSING_LICENSE_FLAG: str = "missing_license"


class ManifestBuilder:
    @staticmethod
    def build_manifest(
            tree: SubcategoryNode,
            catalog: PCatalogSource,
            include_unlicensed: bool = False,
    ) -> list[ImageManifestEntry]:
        """
        One entry per file page of the traversed tree, de-duplicated by title (the first
        category path in pre-order wins). Entries without a license are flagged and left
        out unless include_unlicensed is set. Sorted by title.
        """
        entries: dict[str, ImageManifestEntry] = {}

        for node, path in tree.paths():
            record: CategoryRecord | None = catalog.category(node.title)
            if record is None:
                continue

            for file_title in record.files:
                if file_title in entries:
                    continue

                file_record: FileRecord = catalog.file(file_title) or FileRecord(title=file_title)
                entries[file_title] = ImageManifestEntry(
                    title=file_title,
                    url=file_record.url,
                    license=file_record.license,
                    category_path=path,
                    metadata=dict(file_record.metadata),
                    flags=() if file_record.license else (MISSING_LICENSE_FLAG,),
                )

        unlicensed: int = sum(not entry.has_license for entry in entries.values())
        if unlicensed:
            logger.warning(f"{tree.title}: {unlicensed} files have no license tag")

        return sorted(
            (entry for entry in entries.values() if include_unlicensed or entry.has_license),
            key=lambda entry: entry.title,
        )
