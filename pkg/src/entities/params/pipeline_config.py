import dataclasses
import types
import typing
from dataclasses import dataclass, fields, replace
from typing import Any, Mapping

from .stage_params import (
    AlignmentParams,
    MiningParams,
    WarpParams,
    SplitParams,
    SubcategoryRules,
    ClientParams,
)


_TRUE_VALUES: frozenset[str] = frozenset({"1", "true", "yes", "on"})
_FALSE_VALUES: frozenset[str] = frozenset({"0", "false", "no", "off"})
_NONE_VALUES: frozenset[str] = frozenset({"", "none", "null"})


def _coerce(value: Any, annotation: Any) -> Any:
    """ Convert a raw (usually text) value to the annotated field type. """
    origin = typing.get_origin(annotation)
    args: tuple = typing.get_args(annotation)

    if origin in (typing.Union, types.UnionType):
        non_none: list = [arg for arg in args if arg is not type(None)]
        if isinstance(value, str) and value.strip().lower() in _NONE_VALUES:
            return None
        if value is None:
            return None
        return _coerce(value, non_none[0])

    if origin is tuple:
        items: list = (
            [item.strip() for item in value.split(",") if item.strip()]
            if isinstance(value, str) else list(value)
        )
        item_type = args[0]
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_coerce(item, item_type) for item in items)
        if len(items) != len(args):
            raise ValueError(f"expected {len(args)} comma-separated values, got {len(items)}")
        return tuple(_coerce(item, arg) for item, arg in zip(items, args))

    if annotation is bool:
        if isinstance(value, bool):
            return value
        text: str = str(value).strip().lower()
        if text in _TRUE_VALUES:
            return True
        if text in _FALSE_VALUES:
            return False
        raise ValueError(f"not a boolean: {value!r}")

    if annotation is int:
        if isinstance(value, bool):
            raise ValueError(f"not an integer: {value!r}")
        if isinstance(value, int):
            return value
        return int(str(value).strip())

    if annotation is float:
        return float(str(value).strip()) if isinstance(value, str) else float(value)

    if annotation is str:
        return str(value)

    raise ValueError(f"unsupported config type {annotation!r}")


@dataclass(frozen=True)
class PipelineConfig:
    """ Every tunable of the pipeline with its default. Loaded from a flat key=value file. """
    # Parsing
    model_format: str = "AUTO"
    lenient: bool = False

    # Reproducibility and workers
    seed: int = 0
    jobs: int = 1

    # Depth alignment
    ransac_iterations: int = 1000
    inlier_threshold: float = 0.05
    min_inliers: int | None = None
    scale_only: bool = False
    invert_input: bool = False

    # Pair mining
    min_shared: int = 50
    max_dt: float = 10800.0
    aspect_tol: float = 0.01
    depth_quantile: float = 0.2
    score_threshold: float = 0.8
    orbit_k: int = 10

    # Resizing and warping
    target_size: int = 256
    pad_value: int = 0
    discontinuity_threshold: float | None = 0.1
    sentinel_rgb: tuple[int, int, int] = (0, 0, 0)

    # Splits
    holdout_scenes: int = 800
    val_pairs: int = 10000

    # Keypoint masking
    border_fraction: float = 0.05
    watermark_ratio: float = 0.1

    # Metrics
    psnr_cap: float = 100.0

    # Crawler
    max_depth: int = 4
    excluded_keywords: tuple[str, ...] = ()
    user_agent: str = ""
    commons_api_url: str = "https://commons.wikimedia.org/w/api.php"
    wikidata_api_url: str = "https://www.wikidata.org/w/api.php"
    wikidata_sparql_url: str = "https://query.wikidata.org/sparql"
    max_concurrency: int = 2
    max_retries: int = 5
    backoff_base_sec: float = 1.0
    timeout_sec: float = 30.0

    def __post_init__(self) -> None:
        problems: list[str] = []

        if self.model_format not in ("AUTO", "BINARY", "TEXT"):
            problems.append(f"model_format must be AUTO, BINARY or TEXT, got {self.model_format!r}")
        if self.jobs < 1:
            problems.append("jobs must be >= 1")
        if self.ransac_iterations < 1:
            problems.append("ransac_iterations must be >= 1")
        if self.inlier_threshold <= 0:
            problems.append("inlier_threshold must be positive")
        if not 0 < self.depth_quantile < 1:
            problems.append("depth_quantile must be in (0, 1)")
        if self.target_size <= 0:
            problems.append("target_size must be positive")
        if not 0 <= self.pad_value <= 255 or not all(0 <= c <= 255 for c in self.sentinel_rgb):
            problems.append("pad_value and sentinel_rgb must be in [0, 255]")
        if not 0 <= self.border_fraction < 0.5:
            problems.append("border_fraction must be in [0, 0.5)")
        if self.max_depth < 0:
            problems.append("max_depth must be >= 0")
        if self.max_concurrency < 1:
            problems.append("max_concurrency must be >= 1")

        if problems:
            raise ValueError("; ".join(problems))

    @classmethod
    def keys(cls) -> list[str]:
        return [config_field.name for config_field in fields(cls)]

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any], base: "PipelineConfig | None" = None) -> "PipelineConfig":
        """
        Apply raw values on top of base (defaults when None).
        Raises KeyError on unknown keys and ValueError on uncoercible values.
        """
        hints: dict[str, Any] = typing.get_type_hints(cls)
        unknown: list[str] = sorted(key for key in values if key not in hints)
        if unknown:
            raise KeyError(f"Unknown config keys: {', '.join(unknown)}")

        coerced: dict[str, Any] = {}
        for key, raw in values.items():
            try:
                coerced[key] = _coerce(raw, hints[key])
            except (TypeError, ValueError) as e:
                raise ValueError(f"Invalid value for {key!r}: {e}")

        return replace(base or cls(), **coerced)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = dataclasses.asdict(self)
        return {key: list(value) if isinstance(value, tuple) else value for key, value in data.items()}

    ### Stage views ###

    @property
    def alignment(self) -> AlignmentParams:
        return AlignmentParams(
            iterations=self.ransac_iterations,
            inlier_threshold=self.inlier_threshold,
            min_inliers=self.min_inliers,
            seed=self.seed,
            scale_only=self.scale_only,
        )

    @property
    def mining(self) -> MiningParams:
        return MiningParams(
            min_shared=self.min_shared,
            max_dt=self.max_dt,
            aspect_tol=self.aspect_tol,
            depth_quantile=self.depth_quantile,
        )

    @property
    def warping(self) -> WarpParams:
        return WarpParams(
            discontinuity_threshold=self.discontinuity_threshold,
            sentinel_rgb=self.sentinel_rgb,
            target_size=self.target_size,
            pad_value=self.pad_value,
        )

    @property
    def split(self) -> SplitParams:
        return SplitParams(holdout_scenes=self.holdout_scenes, val_pairs=self.val_pairs, seed=self.seed)

    def subcategory_rules(self, name_substrings: tuple[str, ...]) -> SubcategoryRules:
        return SubcategoryRules(
            max_depth=self.max_depth,
            excluded_keywords=self.excluded_keywords,
            name_substrings=name_substrings,
        )

    @property
    def client(self) -> ClientParams:
        return ClientParams(
            user_agent=self.user_agent,
            commons_api_url=self.commons_api_url,
            wikidata_api_url=self.wikidata_api_url,
            wikidata_sparql_url=self.wikidata_sparql_url,
            max_concurrency=self.max_concurrency,
            max_retries=self.max_retries,
            backoff_base_sec=self.backoff_base_sec,
            timeout_sec=self.timeout_sec,
        )
