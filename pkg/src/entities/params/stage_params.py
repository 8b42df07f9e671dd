from dataclasses import dataclass


@dataclass(frozen=True)
class AlignmentParams:
    """ RANSAC settings; min_inliers=None means max(10, 20% of correspondences). """
    iterations: int = 1000
    inlier_threshold: float = 0.05
    min_inliers: int | None = None
    seed: int = 0
    scale_only: bool = False

    def resolve_min_inliers(self, num_correspondences: int) -> int:
        if self.min_inliers is not None:
            return self.min_inliers
        return max(10, int(0.2 * num_correspondences))


@dataclass(frozen=True)
class MiningParams:
    min_shared: int = 50
    max_dt: float = 10800.0
    aspect_tol: float = 0.01
    depth_quantile: float = 0.2


@dataclass(frozen=True)
class WarpParams:
    discontinuity_threshold: float | None = 0.1
    sentinel_rgb: tuple[int, int, int] = (0, 0, 0)
    target_size: int = 256
    pad_value: int = 0


@dataclass(frozen=True)
class SplitParams:
    holdout_scenes: int = 800
    val_pairs: int = 10000
    seed: int = 0


@dataclass(frozen=True)
class SubcategoryRules:
    max_depth: int = 4
    excluded_keywords: tuple[str, ...] = ()
    name_substrings: tuple[str, ...] = ()


@dataclass(frozen=True)
class ClientParams:
    """ HTTP etiquette of the live catalog and knowledge-graph clients. """
    user_agent: str
    commons_api_url: str
    wikidata_api_url: str
    wikidata_sparql_url: str
    max_concurrency: int = 2
    max_retries: int = 5
    backoff_base_sec: float = 1.0
    timeout_sec: float = 30.0
