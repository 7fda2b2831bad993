"""Pytest configuration and fixtures.

Config, log and cache directories are redirected to temporary directories so
tests never read a developer's settings.json or write into the project's
.data/ and logs/ directories.
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))


@pytest.fixture(autouse=True)
def test_env(tmp_path, monkeypatch):
    """Create isolated test environment with temporary directories.

    Every path helper points into ``tmp_path`` and the logger is reset before
    and after each test, so settings written by one test never leak into the
    next.
    """
    data_dir = tmp_path / "test_data"
    data_dir.mkdir()

    config_dir = tmp_path / "test_config"
    config_dir.mkdir()

    cache_dir = tmp_path / "test_cache"
    cache_dir.mkdir()

    logs_dir = tmp_path / "test_logs"
    logs_dir.mkdir()

    from bidihedral_verify.utils import logger, paths

    monkeypatch.setattr(paths, "get_data_dir", lambda: data_dir)
    monkeypatch.setattr(paths, "get_config_dir", lambda: config_dir)
    monkeypatch.setattr(paths, "get_cache_dir", lambda: cache_dir)
    monkeypatch.setattr(paths, "get_log_dir", lambda: logs_dir)
    monkeypatch.setattr("bidihedral_verify.utils.logger.get_log_dir", lambda: logs_dir)
    monkeypatch.delenv("VERIFY_JOBS", raising=False)

    logger.reset_logger()

    yield {
        "data_dir": data_dir,
        "config_dir": config_dir,
        "cache_dir": cache_dir,
        "logs_dir": logs_dir,
        "tmp_path": tmp_path,
    }

    logger.reset_logger()


@pytest.fixture
def small_limits(test_env):
    """Shrink the computation limits so capacity paths trigger quickly."""
    from bidihedral_verify.utils.config import update_settings

    update_settings(
        {
            "limits": {
                "enumeration_cap": 50,
                "field_size": 64,
                "analysis_vertices": 10,
                "orbital_domain": 10,
                "isometry_sweep": 100,
            }
        }
    )
    return test_env
