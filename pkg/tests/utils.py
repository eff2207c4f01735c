"""General utility functions for test modules."""

from copy import deepcopy

from feasible_region import config


def update_cli(new_params):
    """Update and return the values of the CLI arguments.

    Args:
        new_params (dict): Values to update.

    Returns:
        dict
    """
    cli_config = deepcopy(config.CLI)
    cli_config.update(new_params)
    return cli_config
