"""
Path management utilities following the XDG Base Directory Specification.

This module provides functions to get appropriate directories for:
- Configuration (settings.json with computation limits)
- Logs (bidihedral_verify.log)
- Cache (written reports)

Falls back to the project root .data/ directory in development mode.
"""

import os
from pathlib import Path


def get_app_name() -> str:
    """Get the application name for directory paths."""
    return "bidihedral-verify"


def is_development_mode() -> bool:
    """
    Check if running from a source checkout rather than an installed wheel.

    Returns True only when the package is not under site-packages, the
    project root has a .data/ directory, and src/ or pyproject.toml exists.
    """
    utils_dir = Path(__file__).parent

    path_str = str(utils_dir.resolve())
    if "site-packages" in path_str or "dist-packages" in path_str:
        return False

    project_root = get_project_root()
    data_dir = project_root / ".data"
    src_dir = project_root / "src"
    pyproject = project_root / "pyproject.toml"

    return data_dir.exists() and (src_dir.exists() or pyproject.exists())


def get_project_root() -> Path:
    """Get the project root directory (src layout)."""
    return Path(__file__).parent.parent.parent.parent


def get_package_data_dir() -> Path:
    """Get the directory holding bundled generator files and the default manifest."""
    return Path(__file__).parent.parent / "data"


def _xdg_dir(env_var: str, fallback: Path) -> Path:
    if is_development_mode():
        directory = get_project_root() / ".data"
    else:
        xdg_home = os.environ.get(env_var)
        directory = Path(xdg_home) / get_app_name() if xdg_home else fallback
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def get_data_dir() -> Path:
    """
    Get the directory for user data files.

    In production: ~/.local/share/bidihedral-verify/
    In development: <project-root>/.data/
    """
    return _xdg_dir("XDG_DATA_HOME", Path.home() / ".local" / "share" / get_app_name())


def get_config_dir() -> Path:
    """
    Get the directory for configuration files.

    In production: ~/.config/bidihedral-verify/
    In development: <project-root>/.data/
    """
    return _xdg_dir("XDG_CONFIG_HOME", Path.home() / ".config" / get_app_name())


def get_cache_dir() -> Path:
    """
    Get the directory for cache files.

    In production: ~/.cache/bidihedral-verify/
    In development: <project-root>/.data/
    """
    return _xdg_dir("XDG_CACHE_HOME", Path.home() / ".cache" / get_app_name())


def get_log_dir() -> Path:
    """
    Get the directory for log files.

    In production: ~/.local/share/bidihedral-verify/logs/
    In development: <project-root>/logs/
    """
    if is_development_mode():
        log_dir = get_project_root() / "logs"
    else:
        log_dir = get_data_dir() / "logs"

    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir


def get_default_manifest_path() -> Path:
    """Get the path of the bundled default check manifest."""
    return get_package_data_dir() / "default_manifest.json"


def get_generator_file(name: str) -> Path:
    """Get the path of a bundled generator file such as ``m12``."""
    return get_package_data_dir() / f"{name}.json"
