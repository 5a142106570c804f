"""
System Configuration Manager
Loads experiment presets (sweep epsilons, car-network runs, figure ranges)
"""

import copy
import json
import os
from pathlib import Path
from typing import Dict, Any

from utils.logger import logger


DEFAULT_SYSTEM_CONFIG: Dict[str, Any] = {
    "sweep_settings": {
        "epsilons": [0.2, 0.02, 0.002],
        "max_workers": 4,
        "timeout_per_run": 120
    },
    "analytic_settings": {
        "chain_length": 10,
        "fork_effects": 10
    },
    "car_experiment": {
        "network": "car.json",
        "faults": {},
        "fixed_evidence": {},
        "runs": []
    }
}


class SystemConfig:
    """Read-only view over data/system_config.json with dot-path lookups"""

    def __init__(self, config_file: str = "data/system_config.json"):
        # Ensure absolute path relative to project root
        base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        self.config_file = Path(os.path.join(base_dir, config_file))
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from JSON file, falling back to built-in defaults"""
        if not self.config_file.exists():
            logger.debug(f"No system config at {self.config_file}, using defaults")
            return copy.deepcopy(DEFAULT_SYSTEM_CONFIG)

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Error loading system config: {e}")
            return copy.deepcopy(DEFAULT_SYSTEM_CONFIG)

    def get(self, key_path: str, default=None):
        """Get config value using dot notation (e.g., 'sweep_settings.epsilons')"""
        keys = key_path.split('.')
        value = self.config

        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default

        return value

    def get_all(self) -> Dict:
        """Get entire configuration"""
        return self.config


# Global instance
SYSTEM_CONFIG = SystemConfig()
