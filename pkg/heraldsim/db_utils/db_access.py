"""
Module for accessing the results database.

Module contains functions for creating and deleting the database, its tables as
defined in models.py, and for storing sweep tables in it.

"""

import datetime
import logging
import os
from typing import Any, Dict, List, Optional

import dotenv
import pandas as pd
import sqlalchemy as sa
import sqlalchemy_utils as sau
from sqlalchemy.orm import Session

from heraldsim.exceptions import DatabaseException
from heraldsim.scheme_utils import REPORT_COLUMNS

from . import DIALECTS, db_variables, record_columns
from .models import Base, MeritRecord, SweepRun


def create_uri(
    db_name: str,
    dialect: str = "sqlite",
    db_user: Optional[str] = None,
    db_password: Optional[str] = None,
    db_host: Optional[str] = None,
    db_port: Optional[str] = None,
) -> str:
    """
    Create a URI for a database connection using the specified parameters.

    Parameters
    ----------
    db_name : str
        the database file for sqlite, the database name for postgresql
    dialect : str, optional
        ``sqlite`` or ``postgresql``, by default "sqlite"
    db_user, db_password, db_host, db_port : Optional[str], optional
        postgresql connection settings

    Returns
    -------
    uri: str
        the URI for the database
    """
    assert dialect in DIALECTS, f"dialect must be one of {DIALECTS}"
    logging.info(f"Creating URI for {db_name} database")
    if dialect == "sqlite":
        return f"sqlite:///{db_name}"
    return f"postgresql://{db_user}:{db_password}@{db_host}:{db_port}/{db_name}"


def create_engine(uri: str, echo: bool = False) -> sa.engine.base.Engine:
    """
    Create a SQLAlchemy engine for the database specified by the URI.

    Parameters
    ----------
    uri : str
        URI for the database to connect to or create
    echo : bool, optional
        log every statement, by default False

    Returns
    -------
    engine: sa.engine.base.Engine
        SQLAlchemy engine for the database
    """
    engine = sa.create_engine(uri, echo=echo)
    logging.info(f"Engine created for database {engine.url.database}")
    return engine


def load_db_config(file_path: Optional[str] = None) -> Dict[str, str]:
    """
    Load the database variables from the env file ``file_path``.

    Parameters
    ----------
    file_path : Optional[str], optional
        Path to the .env file. If None, defaults to .env in the current directory,
        by default None

    Returns
    -------
    db_vars : Dict[str, str]
        Dictionary of the database variables, DB_DIALECT included

    Raises
    ------
    AssertionError :
        if the environment file specified does not exist, names an unknown
        dialect or misses a variable the dialect needs
    """
    if file_path is None:
        file_path = ".env"

    logging.info(f"Loading database variables from {file_path}")
    assert os.path.exists(file_path), f"{file_path} does not exist"
    values = dotenv.dotenv_values(file_path)

    dialect = values.get("DB_DIALECT") or "sqlite"
    assert dialect in DIALECTS, f"DB_DIALECT must be one of {DIALECTS}"
    db_vars: Dict[str, str] = {"DB_DIALECT": dialect}
    for var in db_variables[dialect]:
        assert values.get(var), f"{var} is not set in {file_path}"
        db_vars[var] = values[var]
    logging.info("Loaded database variables")
    return db_vars


def _config_uri(db_vars: Dict[str, str]) -> str:
    return create_uri(
        db_name=db_vars["DB_NAME"],
        dialect=db_vars["DB_DIALECT"],
        db_user=db_vars.get("DB_USER"),
        db_password=db_vars.get("DB_PASSWORD"),
        db_host=db_vars.get("DB_HOST"),
        db_port=db_vars.get("DB_PORT"),
    )


def create_db(config_file_path: Optional[str] = None) -> sa.engine.base.Engine:
    """
    Create a database if it does not already exist with the specified name.

    Parameters
    ----------
    config_file_path : Optional[str], optional
        Path to the .env file. If None, defaults to .env in the current directory,
        by default None

    Returns
    -------
    engine : sa.engine.base.Engine
        SQLAlchemy engine for the database created

    Raises
    ------
    DatabaseException
        if the database already exists
    """
    db_vars = load_db_config(config_file_path)
    logging.info(f"Creating {db_vars['DB_NAME']} database")
    uri = _config_uri(db_vars)

    if sau.database_exists(uri):
        logging.error(f"Failed to create {db_vars['DB_NAME']} database as it already exists")
        raise DatabaseException(f"{db_vars['DB_NAME']} database already exists")
    sau.create_database(uri)
    logging.info(f"Successfully created {db_vars['DB_NAME']} database")
    return create_engine(uri)


def delete_db(config_file_path: Optional[str] = None) -> bool:
    """
    Delete the database if it exists, do nothing otherwise.

    Parameters
    ----------
    config_file_path : Optional[str], optional
        Path to the .env file. If None, defaults to .env in the current directory,
        by default None

    Returns
    -------
    db_does_not_exist : bool
        True if the database does not exist afterwards
    """
    db_vars = load_db_config(config_file_path)
    logging.info(f"Deleting {db_vars['DB_NAME']} database")
    uri = _config_uri(db_vars)

    if sau.database_exists(uri):
        sau.drop_database(uri)
        logging.info(f"Successfully deleted {db_vars['DB_NAME']} database")
    else:
        logging.warning(f"{db_vars['DB_NAME']} database does not exist")

    return not sau.database_exists(uri)


def create_tables(engine: sa.engine.base.Engine, base: Any = Base) -> None:
    """
    Create the tables for the database.

    Parameters
    ----------
    engine : sa.engine.base.Engine
        SQLAlchemy engine for the database
    base : sqlalchemy.orm.DeclarativeMeta, optional
        Base class for the database schema, by default the sweep models
    """
    tables_created: List[str] = list(base.metadata.tables.keys())
    logging.info(f"Creating tables {tables_created} for database")
    base.metadata.create_all(engine)


def get_engine(config_file_path: Optional[str] = None) -> sa.engine.base.Engine:
    """
    Get the SQLAlchemy engine for an existing database.

    Parameters
    ----------
    config_file_path : Optional[str], optional
        Path to the .env  or equivalent file. If None, defaults to .env in
        the current directory.

    Returns
    -------
    engine : sa.engine.base.Engine
        SQLAlchemy engine for the database

    Raises
    ------
    DatabaseException
        if the database does not exist
    """
    db_vars = load_db_config(config_file_path)
    uri = _config_uri(db_vars)
    if not sau.database_exists(uri):
        logging.error(f"{db_vars['DB_NAME']} database does not exist")
        raise DatabaseException(f"{db_vars['DB_NAME']} database does not exist")
    return create_engine(uri)


def create_db_with_tables(config_file_path: Optional[str] = None) -> sa.engine.base.Engine:
    """
    Create the database unless it exists, then create the tables.

    Parameters
    ----------
    config_file_path : Optional[str], optional
        Path to the .env  or equivalent file. If None, defaults to .env in
        the current directory.

    Returns
    -------
    engine : sa.engine.base.Engine
        SQLAlchemy engine for the database
    """
    try:
        engine = create_db(config_file_path)
    except DatabaseException:
        logging.info("Database already exists. Creating tables")
        engine = get_engine(config_file_path)
    create_tables(engine, Base)
    return engine


def upload_sweep(
    frame: pd.DataFrame,
    engine: sa.engine.base.Engine,
    scheme: str,
    loss_mapping: str = "",
    rel_tol: Optional[float] = None,
    d_max: Optional[int] = None,
) -> int:
    """
    upload_sweep stores a sweep table as one SweepRun and its MeritRecords.

    Parameters
    ----------
    frame : pd.DataFrame
        table with the sweep columns eta1, eta2, p, F, wln, d_used, seconds
    engine : sa.engine.base.Engine
        engine of a database with the sweep tables
    scheme : str
        name of the swept circuit
    loss_mapping : str, optional
        the channels eta1 and eta2 stand for
    rel_tol, d_max : optional
        numerical settings of the sweep

    Returns
    -------
    int
        id of the new SweepRun
    """
    with Session(engine) as session:
        run = SweepRun(
            scheme=scheme,
            loss_mapping=loss_mapping,
            rel_tol=rel_tol,
            d_max=d_max,
            created_at=datetime.datetime.now(),
        )
        session.add(run)
        session.commit()
        run_id = run.id

    records = frame[REPORT_COLUMNS].rename(columns=record_columns)
    records.insert(0, "run_id", run_id)
    records.to_sql(MeritRecord.__tablename__, engine, if_exists="append", index=False)
    logging.info(f"Uploaded {len(records)} rows of {scheme} sweep {run_id}")
    return run_id


def read_sweep(engine: sa.engine.base.Engine, run_id: int) -> pd.DataFrame:
    """Load the grid points of sweep ``run_id`` with the sweep table columns."""
    query = (
        sa.select(MeritRecord.__table__)
        .where(MeritRecord.run_id == run_id)
        .order_by(MeritRecord.id)
    )
    with engine.connect() as connection:
        records = pd.read_sql(query, connection)
    inverse = {value: key for key, value in record_columns.items()}
    return records.rename(columns=inverse)[REPORT_COLUMNS]
