import os
from dotenv import load_dotenv
from typing import Tuple
from pathlib import Path

# Load environment variables from .env file in the same directory as this script
env_path = Path(__file__).parent / '.env'
load_dotenv(dotenv_path=env_path, override=False, encoding='utf-8')


class ConfigurationError(Exception):
    """Raised when required configuration is missing or invalid."""
    pass


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


def _env_int(name: str, default: int) -> int:
    raw = (os.getenv(name) or "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        return -1  # rejected by validate_config()


# ============================================================================
# ENVIRONMENT VARIABLES (Loaded from .env)
# ============================================================================

# Console log level for the CLI (file logs always capture DEBUG)
LOG_LEVEL = (os.getenv("KAPPA_LOG_LEVEL") or "WARNING").strip().upper()
LOG_TO_FILE = _env_bool("KAPPA_LOG_TO_FILE", True)

# Sweep execution
SWEEP_WORKERS = _env_int("KAPPA_SWEEP_WORKERS", 4)
RUN_TIMEOUT_SECONDS = _env_int("KAPPA_RUN_TIMEOUT", 120)


# ============================================================================
# APPLICATION CONSTANTS
# ============================================================================

# Absolute tolerance for probability comparisons and row sums
PROBABILITY_TOLERANCE = 1e-9

# Relative slack used when a probability sits on an exact power of epsilon
TRANSLATION_GUARD = 1e-12

# Epsilons used by the diagnosis experiments
DEFAULT_EPSILONS: Tuple[float, ...] = (0.2, 0.02, 0.002)

# Fixed output formatting
PROBABILITY_DECIMALS = 6
INFINITY_TOKEN = "inf"

# File Paths
DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
NETWORKS_DIR = os.path.join(DATA_DIR, "networks")
FIGURES_DIR = os.path.join(DATA_DIR, "figures")
REPORTS_DIR = os.path.join(DATA_DIR, "reports")
LOGS_DIR = os.path.join(DATA_DIR, "logs")


# ============================================================================
# VALIDATION
# ============================================================================

def validate_config() -> None:
    """
    Validates the environment-driven settings.
    Raises ConfigurationError listing every invalid value.
    """
    problems = []

    if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        problems.append(f"KAPPA_LOG_LEVEL={LOG_LEVEL!r} is not a logging level")

    if SWEEP_WORKERS < 1:
        problems.append("KAPPA_SWEEP_WORKERS must be a positive integer")

    if RUN_TIMEOUT_SECONDS < 1:
        problems.append("KAPPA_RUN_TIMEOUT must be a positive integer (seconds)")

    if not 0 < PROBABILITY_TOLERANCE < 1e-3:
        problems.append("PROBABILITY_TOLERANCE must lie in (0, 1e-3)")

    for eps in DEFAULT_EPSILONS:
        if not 0 < eps < 1:
            problems.append(f"default epsilon {eps} is outside (0, 1)")

    if problems:
        error_message = (
            "CONFIGURATION ERROR: "
            + "; ".join(problems)
        )
        raise ConfigurationError(error_message)


# ============================================================================
# INITIALIZATION
# ============================================================================

if __name__ == "__main__":
    # Test configuration when run directly
    try:
        validate_config()
        print("✅ Configuration validated successfully!")
        print(f"📊 Sweep workers: {SWEEP_WORKERS}, run timeout: {RUN_TIMEOUT_SECONDS}s")
        print(f"📁 Networks: {NETWORKS_DIR}")
    except ConfigurationError as e:
        print(e)
