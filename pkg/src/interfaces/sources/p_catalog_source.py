from typing import Protocol

from src.entities import CategoryRecord, FileRecord


class PCatalogSource(Protocol):
    """ Read access to the media catalog (categories and file pages). """

    def category(self, title: str) -> CategoryRecord | None:
        ...

    def file(self, title: str) -> FileRecord | None:
        ...

    def category_entity(self, title: str) -> str | None:
        """ Knowledge-graph id linked from the category page, if any. """
        ...
