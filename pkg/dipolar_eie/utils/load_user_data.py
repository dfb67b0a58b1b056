import json
from pathlib import Path
from typing import Dict

from dipolar_eie.exceptions import ConfigError


def read_scenario_config_from_file(config_path: Path) -> Dict:
    """Reads a scenario or sweep configuration stored in a `.json` file."""
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError("config", f"{config_path} does not exist.")
    with open(config_path) as config_file:
        try:
            data = json.loads(config_file.read())
        except json.JSONDecodeError as error:
            raise ConfigError(
                "config", f"{config_path} is not valid JSON ({error})."
            ) from error
    if not isinstance(data, dict):
        raise ConfigError("config", "The top level must be a JSON object.")
    return data
