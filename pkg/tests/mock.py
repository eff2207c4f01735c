"""Fake CLI arguments and test data locations for testing."""

# COMPLETED
from os import path

from feasible_region import config


def get_test_dir():
    """Return the path of the folder containing test data.

    Returns:
        str
    """
    return path.join(path.dirname(path.abspath(__file__)), "test_data")


def get_test_path(itempath):
    """Return the full path of an item in the folder containing test data.

    Returns:
        str
    """
    return path.join(get_test_dir(), itempath)


def mock_cli_arguments(command, output_file, **params):
    """Configure fake CLI arguments.

    Args:
        command (str): Requested command.
        output_file (str): Location of the JSON output file.
        params: Command-specific arguments.
    """
    config.CLI = {
        "command": command,
        "output_file": output_file,
        "precision": config.DEFAULT_PRECISION,
        "debug": False,
    }
    config.CLI.update(params)
