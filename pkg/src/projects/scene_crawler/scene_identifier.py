from src.entities import EntityRecord, SceneCategory
from src.interfaces import PKnowledgeGraphSource
from src.services.utils import Logger
from .crawler_exceptions import MalformedResponseError


logger = Logger("SceneIdentifier")


class SceneIdentifier:
    @staticmethod
    def subclass_closure(class_ids: list[str], graph: PKnowledgeGraphSource) -> list[str]:
        """ The classes and all their transitive subclasses, sorted. """
        visited: set[str] = set()
        stack: list[str] = list(class_ids)
        while stack:
            class_id: str = stack.pop()
            if class_id in visited:
                continue
            visited.add(class_id)
            stack.extend(subclass for subclass in graph.direct_subclasses(class_id) if subclass not in visited)
        return sorted(visited)

    @classmethod
    def identify_scenes(cls, class_ids: list[str], graph: PKnowledgeGraphSource) -> list[SceneCategory]:
        """
        Entities that are instances of a listed class (through the subclass closure)
        and link to a catalog category, one SceneCategory per entity.
        """
        labels: dict[str, str] = {}
        scenes: dict[str, SceneCategory] = {}

        for class_id in cls.subclass_closure(class_ids, graph):
            for entity_id in graph.direct_instances(class_id):
                if entity_id in scenes:
                    continue

                entity: EntityRecord | None = graph.entity(entity_id)
                if entity is None:
                    raise MalformedResponseError(f"Instance {entity_id} of {class_id} has no entity record.")
                if not entity.commons_category:
                    logger.debug(f"{entity_id} ({entity.label}) has no catalog category")
                    continue

                scenes[entity_id] = SceneCategory(
                    commons_category=entity.commons_category,
                    entity_id=entity_id,
                    class_ids=entity.instance_of,
                    class_labels=tuple(cls._label(class_of, graph, labels) for class_of in entity.instance_of),
                )

        logger.info(f"{len(scenes)} scene categories from {len(class_ids)} classes")
        return sorted(scenes.values(), key=lambda scene: (scene.commons_category, scene.entity_id))

    @staticmethod
    def _label(class_id: str, graph: PKnowledgeGraphSource, labels: dict[str, str]) -> str:
        if class_id not in labels:
            entity: EntityRecord | None = graph.entity(class_id)
            labels[class_id] = entity.label if entity else ""
        return labels[class_id]
