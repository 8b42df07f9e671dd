from dataclasses import dataclass, field


@dataclass(frozen=True)
class EntityRecord:
    """ One knowledge-graph entity as seen by the crawler. """
    entity_id: str
    label: str = ""
    aliases: tuple[str, ...] = ()
    instance_of: tuple[str, ...] = ()
    subclass_of: tuple[str, ...] = ()
    commons_category: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "EntityRecord":
        return cls(
            entity_id=str(data["id"]),
            label=str(data.get("label") or ""),
            aliases=tuple(data.get("aliases") or ()),
            instance_of=tuple(data.get("instance_of") or ()),
            subclass_of=tuple(data.get("subclass_of") or ()),
            commons_category=data.get("commons_category") or None,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.entity_id,
            "label": self.label,
            "aliases": list(self.aliases),
            "instance_of": list(self.instance_of),
            "subclass_of": list(self.subclass_of),
            "commons_category": self.commons_category,
        }


@dataclass(frozen=True)
class CategoryRecord:
    """ One media-catalog category: its linked entity, direct subcategories and direct files. """
    title: str
    entity_id: str | None = None
    subcategories: tuple[str, ...] = ()
    files: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, data: dict) -> "CategoryRecord":
        return cls(
            title=str(data["title"]),
            entity_id=data.get("entity_id") or None,
            subcategories=tuple(data.get("subcategories") or ()),
            files=tuple(data.get("files") or ()),
        )


@dataclass(frozen=True)
class FileRecord:
    """ File page metadata; license is None when the page carries no license tag. """
    title: str
    url: str = ""
    license: str | None = None
    metadata: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "FileRecord":
        return cls(
            title=str(data["title"]),
            url=str(data.get("url") or ""),
            license=data.get("license") or None,
            metadata={str(key): str(value) for key, value in (data.get("metadata") or {}).items()},
        )
