from pathlib import Path

import pytest
import typer

from anharmonic_cli.config import ConfigError, Settings
from anharmonic_cli.utils.config import get_cli_config_path, get_config_folder


def test_loads_default_values_when_file_does_not_exist() -> None:
    settings = Settings.from_user_settings(Path("non_existent_file.json"))

    assert settings == Settings()
    assert settings.mesh_size == 50
    assert settings.mesh_kind == "laguerre"
    assert settings.pt_order == 3


def test_loads_settings_even_when_file_is_broken(tmp_path: Path) -> None:
    broken_settings_path = tmp_path / "broken_settings.json"
    broken_settings_path.write_text("this is not json")

    assert Settings.from_user_settings(broken_settings_path) == Settings()


def test_loads_partial_settings(tmp_path: Path) -> None:
    settings_path = tmp_path / "settings.json"
    settings_path.write_text('{"mesh_size": 30, "unknown": true}')

    settings = Settings.from_user_settings(settings_path)

    assert settings.mesh_size == 30
    assert settings.mesh_kind == Settings().mesh_kind


def test_user_settings_fall_back_when_values_are_invalid(tmp_path: Path) -> None:
    settings_path = tmp_path / "settings.json"
    settings_path.write_text('{"mesh_size": 500}')

    assert Settings.from_user_settings(settings_path) == Settings()


def test_get_reads_config_dir(isolated_config_path: Path) -> None:
    (isolated_config_path / "cli.json").write_text('{"mesh_kind": "hermite"}')

    assert Settings.get().mesh_kind == "hermite"


def test_from_file_rejects_invalid_json(tmp_path: Path) -> None:
    path = tmp_path / "config.json"
    path.write_text("mesh_size = 20")

    with pytest.raises(ConfigError, match="not valid JSON"):
        Settings.from_file(path)


def test_from_file_rejects_non_object(tmp_path: Path) -> None:
    path = tmp_path / "config.json"
    path.write_text("[1, 2]")

    with pytest.raises(ConfigError, match="JSON object"):
        Settings.from_file(path)


def test_from_file_reports_invalid_fields(tmp_path: Path) -> None:
    path = tmp_path / "config.json"
    path.write_text('{"mesh_size": 2, "pt_order": 3}')

    with pytest.raises(ConfigError, match="mesh_size"):
        Settings.from_file(path)


def test_from_file_rejects_unknown_keys(tmp_path: Path) -> None:
    path = tmp_path / "config.json"
    path.write_text('{"mesh_sise": 20}')

    with pytest.raises(ConfigError, match="mesh_sise"):
        Settings.from_file(path)


def test_resolve_prefers_explicit_overrides(tmp_path: Path) -> None:
    path = tmp_path / "config.json"
    path.write_text('{"mesh_size": 20, "output_format": "json"}')

    settings = Settings.resolve(path, mesh_size=40, mesh_kind=None)

    assert settings.mesh_size == 40
    assert settings.mesh_kind == "laguerre"
    assert settings.output_format == "json"


def test_resolve_rejects_out_of_range_overrides() -> None:
    with pytest.raises(ConfigError):
        Settings.resolve(None, pt_order=9)


def test_get_config_folder_reads_env_override(
    monkeypatch: pytest.MonkeyPatch, tmp_path: Path
) -> None:
    monkeypatch.setenv("ANHARMONIC_CLI_CONFIG_DIR", str(tmp_path))

    assert get_config_folder() == tmp_path
    assert get_cli_config_path() == tmp_path / "cli.json"


def test_get_config_folder_defaults_to_app_dir(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    monkeypatch.delenv("ANHARMONIC_CLI_CONFIG_DIR", raising=False)

    assert get_config_folder() == Path(typer.get_app_dir("anharmonic-cli"))
