from dataclasses import dataclass, field, replace
from typing import Iterator


@dataclass(frozen=True)
class SubcategoryNode:
    """ A visited catalog category; the root has depth 0. """
    title: str
    depth: int
    children: tuple["SubcategoryNode", ...] = ()

    def walk(self) -> Iterator["SubcategoryNode"]:
        """ Pre-order traversal. """
        yield self
        for child in self.children:
            yield from child.walk()

    def paths(self, prefix: tuple[str, ...] = ()) -> Iterator[tuple["SubcategoryNode", tuple[str, ...]]]:
        """ Every node with the category path leading to it. """
        path: tuple[str, ...] = (*prefix, self.title)
        yield self, path
        for child in self.children:
            yield from child.paths(path)

    @property
    def max_depth(self) -> int:
        return max(node.depth for node in self.walk())

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "depth": self.depth,
            "children": [child.to_dict() for child in self.children],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SubcategoryNode":
        return cls(
            title=str(data["title"]),
            depth=int(data["depth"]),
            children=tuple(cls.from_dict(child) for child in data.get("children") or ()),
        )


@dataclass(frozen=True)
class SceneCategory:
    commons_category: str
    entity_id: str
    class_ids: tuple[str, ...] = ()
    class_labels: tuple[str, ...] = ()
    subcategories: SubcategoryNode | None = None
    flags: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.commons_category:
            raise ValueError(f"Scene {self.entity_id}: catalog category must be non-empty.")

    def with_subcategories(self, tree: SubcategoryNode) -> "SceneCategory":
        return replace(self, subcategories=tree)

    def with_flag(self, flag: str) -> "SceneCategory":
        if flag in self.flags:
            return self
        return replace(self, flags=tuple(sorted((*self.flags, flag))))

    def to_dict(self) -> dict:
        return {
            "commons_category": self.commons_category,
            "entity_id": self.entity_id,
            "class_ids": list(self.class_ids),
            "class_labels": list(self.class_labels),
            "subcategories": self.subcategories.to_dict() if self.subcategories else None,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SceneCategory":
        tree: dict | None = data.get("subcategories")
        return cls(
            commons_category=str(data["commons_category"]),
            entity_id=str(data["entity_id"]),
            class_ids=tuple(data.get("class_ids") or ()),
            class_labels=tuple(data.get("class_labels") or ()),
            subcategories=SubcategoryNode.from_dict(tree) if tree else None,
            flags=tuple(data.get("flags") or ()),
        )
