from typing import Protocol

from src.entities import EntityRecord


class PKnowledgeGraphSource(Protocol):
    """ Read access to the structured-data knowledge graph. """

    def entity(self, entity_id: str) -> EntityRecord | None:
        """ Entity record, None when the id does not exist. """
        ...

    def direct_instances(self, class_id: str) -> list[str]:
        """ Ids of entities that are a direct instance of the class. """
        ...

    def direct_subclasses(self, class_id: str) -> list[str]:
        """ Ids of classes that are a direct subclass of the class. """
        ...
