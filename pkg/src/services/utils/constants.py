from pathlib import Path
import logging
import dotenv
import os


# Values already present in the environment win over the .env file
dotenv.load_dotenv()


class _ConstantsSettings:
    LOG_WORKER_NAMES: bool = os.environ.get("LOG_WORKER_NAMES", "false") == "true"
    DEV_MODE: bool = os.environ.get("DEV_MODE", "false") == "true"  # False by default


class _ConstantsFilenames:
    # Dir names
    DATA_DIR: str = "data"
    CONFIGS_DIR: str = "configs"
    CONSTANTS_DIR: str = "constants"
    CACHE_DIR: str = ".cache"

    # Sparse model files
    CAMERAS_BIN_FILE: str = "cameras.bin"
    IMAGES_BIN_FILE: str = "images.bin"
    POINTS_BIN_FILE: str = "points3D.bin"
    CAMERAS_TXT_FILE: str = "cameras.txt"
    IMAGES_TXT_FILE: str = "images.txt"
    POINTS_TXT_FILE: str = "points3D.txt"

    # Constants and configs
    CRAWLER_DEFAULTS_JSON_FILE: str = "crawler_defaults.json"
    DEFAULT_PIPELINE_CONFIG_FILE: str = "default_pipeline.cfg"

    # Pipeline outputs
    ALIGNMENTS_JSONL_FILE: str = "alignments.jsonl"
    METRICS_JSONL_FILE: str = "metrics.jsonl"
    METRICS_TABLE_FILE: str = "metrics_table.txt"

    # Suffixes of per-pair warp outputs
    WARP_RGB_SUFFIX: str = "_warp.png"
    WARP_MASK_SUFFIX: str = "_mask.png"
    WARP_DEPTH_SUFFIX: str = "_depth.pfm"
    WARP_META_SUFFIX: str = "_meta.txt"
    SIDECAR_SUFFIX: str = ".meta"


class _ConstantsPath:
    UTILS_DIR_PATH: Path = Path(__file__).resolve().parent
    ROOT_DIR_PATH: Path = UTILS_DIR_PATH.parent.parent.parent

    DATA_DIR_PATH: Path = ROOT_DIR_PATH / _ConstantsFilenames.DATA_DIR
    CONFIGS_DATA_PATH: Path = DATA_DIR_PATH / _ConstantsFilenames.CONFIGS_DIR
    CONSTANTS_DATA_PATH: Path = DATA_DIR_PATH / _ConstantsFilenames.CONSTANTS_DIR

    DEFAULT_PIPELINE_CONFIG_FILE: Path = CONFIGS_DATA_PATH / _ConstantsFilenames.DEFAULT_PIPELINE_CONFIG_FILE

    # Crawler response cache; the CACHE_DIR env var wins over the default
    CACHE_DIR_PATH: Path = Path(os.environ.get("CACHE_DIR") or ROOT_DIR_PATH / _ConstantsFilenames.CACHE_DIR)


class _ConstantsLogger:
    LEVELS: dict[str, int] = {
        "debug": logging.DEBUG,  # 10
        "info": logging.INFO,  # 20
        "performance": 25,
        "metrics": 27,
        "warning": logging.WARNING,  # 30
        "error": logging.ERROR,  # 40
    }
    DEFAULT_LEVEL: str = "info"
    LEVEL: int = int(os.environ.get("LEVEL", 0)) or LEVELS[DEFAULT_LEVEL]


class _ConstantsMath:
    # Tolerances shared by the geometry services
    DEGENERATE_NORM: float = 1e-9

    UNDISTORT_MAX_ITERATIONS: int = 100
    UNDISTORT_STEP_TOL: float = 1e-14


class Constants:
    path = _ConstantsPath
    logger = _ConstantsLogger
    file_names = _ConstantsFilenames
    math = _ConstantsMath
    settings = _ConstantsSettings
