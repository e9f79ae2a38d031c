"""Contains fixtures for tests for the command-line interface."""

import pytest
from click.testing import CliRunner


@pytest.fixture
def runner() -> CliRunner:
    """runner returns a click test runner."""
    return CliRunner()


@pytest.fixture
def db_env_file(tmp_path) -> str:
    """
    db_env_file returns a .env file of a sqlite results database in tmp_path.

    Returns
    -------
    str
        path to the .env file
    """
    env = tmp_path / ".dbenv"
    env.write_text(f"DB_DIALECT=sqlite\nDB_NAME={tmp_path / 'sweeps.sqlite'}\n")
    return str(env)
