"""Contains fixtures for tests for the db_utils module."""

import pandas as pd
import pytest
import sqlalchemy as sa

from heraldsim.db_utils import db_access


@pytest.fixture(scope="module")
def config_file_path() -> str:
    """
    config_file_path returns a path to a .env file.

    The file configures a sqlite database inside tests/data.

    Returns
    -------
    str
        path to a .env file
    """
    return "tests/data/.testenv"


@pytest.fixture(scope="module")
def uri(config_file_path) -> str:
    """uri returns the URI of the test database."""
    config = db_access.load_db_config(config_file_path)
    return "sqlite:///{}".format(config["DB_NAME"])


@pytest.fixture(scope="module")
def engine(config_file_path) -> sa.engine.base.Engine:
    """
    engine returns an engine of a fresh test database with the sweep tables.

    The database is deleted after the module's tests.
    """
    db_access.delete_db(config_file_path)
    engine = db_access.create_db_with_tables(config_file_path)
    yield engine
    engine.dispose()
    db_access.delete_db(config_file_path)


@pytest.fixture(scope="module")
def tables_and_columns() -> dict:
    """tables_and_columns returns the columns of every sweep table."""
    return {
        "sweep_run": ["id", "scheme", "loss_mapping", "rel_tol", "d_max", "created_at"],
        "merit_record": [
            "id",
            "run_id",
            "eta1",
            "eta2",
            "probability",
            "fidelity",
            "wln",
            "d_used",
            "seconds",
        ],
    }


@pytest.fixture(scope="module")
def sweep_frame() -> pd.DataFrame:
    """sweep_frame returns a 2 x 1 sweep table."""
    return pd.DataFrame(
        {
            "eta1": [0.5, 1.0],
            "eta2": [1.0, 1.0],
            "p": [0.12, 0.243],
            "F": [0.7, 1.0],
            "wln": [0.1, 0.355],
            "d_used": [9, 2],
            "seconds": [0.2, 0.1],
        }
    )
