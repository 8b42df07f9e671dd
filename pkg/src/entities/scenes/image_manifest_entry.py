from dataclasses import dataclass, field


@dataclass(frozen=True)
class ImageManifestEntry:
    """ One file to fetch; entries without a license are flagged 'missing_license'. """
    title: str
    url: str
    license: str | None
    category_path: tuple[str, ...]
    metadata: dict[str, str] = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    @property
    def has_license(self) -> bool:
        return bool(self.license)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "url": self.url,
            "license": self.license,
            "category_path": list(self.category_path),
            "metadata": dict(self.metadata),
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ImageManifestEntry":
        return cls(
            title=str(data["title"]),
            url=str(data.get("url") or ""),
            license=data.get("license") or None,
            category_path=tuple(data.get("category_path") or ()),
            metadata=dict(data.get("metadata") or {}),
            flags=tuple(data.get("flags") or ()),
        )
