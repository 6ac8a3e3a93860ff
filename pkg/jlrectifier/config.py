# jlrectifier/config.py
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file if it exists
dotenv_path = Path('.') / '.env'
load_dotenv(dotenv_path=dotenv_path)

# XDG Base Directory Specification
XDG_CONFIG_HOME = Path(os.environ.get('XDG_CONFIG_HOME', Path.home() / '.config'))

APP_NAME = "jlrectifier"
APP_CONFIG_DIR = XDG_CONFIG_HOME / APP_NAME
USER_ENV_FILE_PATH = APP_CONFIG_DIR / "jlrectifier.env"

user_config_loaded = False
if USER_ENV_FILE_PATH.is_file():
    # override=False: variables already exported in the shell win over the file
    user_config_loaded = load_dotenv(dotenv_path=USER_ENV_FILE_PATH)


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def _optional_int_env(name: str) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


# --- Execution ---
DEFAULT_JOBS: int = max(1, _int_env("JLRECT_JOBS", 1))
LOG_LEVEL: str = os.environ.get("JLRECT_LOG_LEVEL", "WARNING").upper()

# --- Reports ---
REPORT_SCHEMA_VERSION: str = os.environ.get("JLRECT_REPORT_SCHEMA", "jlrectifier/report/v1")
DEFAULT_OUTPUT_FORMAT: str = os.environ.get("JLRECT_FORMAT", "json").lower()  # "json" or "table"

# --- Sweeps ---
SWEEP_SEED: int = _int_env("JLRECT_SWEEP_SEED", 0)
# unset: every Frobenius orbit of z_E/F that can be listed
MAX_Z_CHOICES: Optional[int] = _optional_int_env("JLRECT_MAX_Z_CHOICES")
# draws per (q, f) when mu_{q^f-1} is too large to list its orbits
SAMPLED_Z_CHOICES: int = max(1, _int_env("JLRECT_SAMPLED_Z_CHOICES", 6))
MAX_TOWER_LEVELS: int = 3
SWEEP_Q_VALUES = (3, 4, 5, 7, 8, 9, 11, 13)
SWEEP_N_MAX: int = 12

# --- Signature certification ---
SIGNATURE_BOUND: int = _int_env("JLRECT_SIGNATURE_BOUND", 3 ** 10)
# above this field size one element per order is enumerated instead of every element
SIGNATURE_EXHAUSTIVE_LIMIT: int = _int_env("JLRECT_SIGNATURE_EXHAUSTIVE", 3 ** 7)

# Orbits are recomputed at every representative only below this many embeddings
FULL_ORBIT_CHECK_MAX_N: int = _int_env("JLRECT_FULL_ORBIT_MAX_N", 12)


if __name__ == "__main__":
    # For testing the config module
    print(f"App Name: {APP_NAME}")
    print(f"Config Dir: {APP_CONFIG_DIR}")
    print(f"User env file: {USER_ENV_FILE_PATH} (loaded: {user_config_loaded})")
    print(f"Default jobs: {DEFAULT_JOBS}")
    print(f"Log level: {LOG_LEVEL}")
    print(f"Report schema: {REPORT_SCHEMA_VERSION}")
    print(f"Sweep seed: {SWEEP_SEED}, max z choices: {MAX_Z_CHOICES}, sampled z choices: {SAMPLED_Z_CHOICES}")
    print(f"Signature bound: {SIGNATURE_BOUND}")
