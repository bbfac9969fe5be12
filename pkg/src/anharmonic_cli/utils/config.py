import os
from pathlib import Path

import typer


def get_config_folder() -> Path:
    config_dir = os.getenv("ANHARMONIC_CLI_CONFIG_DIR")

    if config_dir:
        return Path(config_dir).expanduser()

    return Path(typer.get_app_dir("anharmonic-cli"))


def get_cli_config_path() -> Path:
    cli_config_path = get_config_folder() / "cli.json"
    cli_config_path.parent.mkdir(parents=True, exist_ok=True)

    return cli_config_path
