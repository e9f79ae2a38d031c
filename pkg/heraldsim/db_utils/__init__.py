"""Module for storing sweep results of heraldsim in a database."""

DIALECTS = ("sqlite", "postgresql")

# variables every database configuration needs, by dialect
db_variables = {
    "sqlite": ["DB_NAME"],
    "postgresql": ["DB_NAME", "DB_USER", "DB_PASSWORD", "DB_HOST", "DB_PORT"],
}

# sweep table columns renamed to their database names
record_columns = {"p": "probability", "F": "fidelity"}
