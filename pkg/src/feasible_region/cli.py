"""Parse command-line interface arguments."""

import argparse
import logging
import sys

from feasible_region import config


def _check_positive_int(value: str) -> int:
    """Check that the argument value is an integer larger than 0."""
    try:
        int_value = int(value)
        if int_value <= 0:
            raise argparse.ArgumentTypeError(f"{value} must be larger than zero")
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"{value} is not an integer") from err
    return int_value


def _check_non_negative_int(value: str) -> int:
    """Check that the argument value is an integer larger than or equal to 0."""
    try:
        int_value = int(value)
        if int_value < 0:
            raise argparse.ArgumentTypeError(f"{value} must not be negative")
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"{value} is not an integer") from err
    return int_value


def _parse_cli_args() -> None:
    """Parse the CLI arguments and store them in the variable `config.CLI`."""

    # Initialize the parser and define global arguments
    parser = argparse.ArgumentParser(
        prog="feasible-region",
        description=(
            "Feasible Region: Compute conservative representations of the feasible"
            " region of systems of linear inequalities in two variables."
        ),
    )
    parser.add_argument(
        "-o",
        "--output-file",
        default=config.DEFAULT_OUTPUT_FILE,
        metavar="FILENAME",
        help=(
            "Location of the JSON file to which the command output details are written."
            f" Default is {config.DEFAULT_OUTPUT_FILE}"
        ),
    )
    parser.add_argument(
        "--precision",
        type=int,
        choices=[32, 64],
        default=config.DEFAULT_PRECISION,
        help=(
            "Width in bits of the floating-point scalars."
            f" Default is {config.DEFAULT_PRECISION}"
        ),
    )
    parser.add_argument(
        "-d",
        "--debug",
        action="store_true",
        help="Increase log verbosity for debugging",
    )
    subparsers = parser.add_subparsers(title="command", dest="command")
    subparsers.required = True

    # Clip command
    clip = subparsers.add_parser(
        "clip",
        help="Clip the start box of a constraint file by its constraints",
    )
    clip.add_argument(
        "constraint_file",
        metavar="FILE",
        help="Constraint file with a 'box MX MY' header and 'A B C' lines",
    )
    clip.add_argument(
        "--svg",
        metavar="FILENAME",
        help="Also render the resulting region as an SVG figure",
    )

    # Gen command
    gen = subparsers.add_parser("gen", help="Generate a test corpus")
    gen.add_argument(
        "--out",
        required=True,
        metavar="DIRNAME",
        help="Directory to which the corpus is written",
    )
    gen.add_argument(
        "--beta",
        type=_check_positive_int,
        default=config.DEFAULT_BETA,
        help=(
            "Size parameter of the generated polygons, at most"
            f" {config.MAX_BETA_64} in 64-bit and {config.MAX_BETA_32} in 32-bit."
            f" Default is {config.DEFAULT_BETA}"
        ),
    )
    gen.add_argument(
        "--seed",
        type=int,
        default=config.DEFAULT_SEED,
        help=f"Seed of the random generator. Default is {config.DEFAULT_SEED}",
    )
    gen.add_argument(
        "--set",
        type=int,
        choices=[32, 64],
        default=config.DEFAULT_PROBE_SET,
        help=(
            "Normal set from which probe constraints are drawn."
            f" Default is {config.DEFAULT_PROBE_SET}"
        ),
    )
    gen.add_argument(
        "--budget",
        type=_check_non_negative_int,
        default=config.DEFAULT_CORPUS_BUDGET,
        metavar="N",
        help=(
            "Number of polygons built from random valid subsets of normals."
            f" Default is {config.DEFAULT_CORPUS_BUDGET}"
        ),
    )
    gen.add_argument(
        "--exhaustive-size",
        type=_check_non_negative_int,
        default=0,
        metavar="N",
        help=(
            "Also build a polygon for every valid subset with at most N normals,"
            f" N being at most {config.MAX_EXHAUSTIVE_SUBSET_SIZE}. Default is 0"
        ),
    )
    gen.add_argument(
        "--degenerate",
        type=_check_non_negative_int,
        default=config.DEFAULT_DEGENERATE_CASES,
        metavar="N",
        help=(
            "Number of point, segment and empty cases."
            f" Default is {config.DEFAULT_DEGENERATE_CASES} of each"
        ),
    )
    gen.add_argument(
        "--orders",
        type=_check_positive_int,
        default=config.DEFAULT_ORDERS,
        metavar="N",
        help=(
            "Number of random insertion orders per case."
            f" Default is {config.DEFAULT_ORDERS}"
        ),
    )

    # Verify command
    verify = subparsers.add_parser(
        "verify", help="Verify the engine against the exact oracle on a corpus"
    )
    verify.add_argument(
        "corpus", metavar="CORPUS", help="Directory of a corpus written by 'gen'"
    )
    verify.add_argument(
        "--budget",
        type=_check_non_negative_int,
        default=0,  # 0 means that all probes are inserted
        metavar="N",
        help="Largest number of probe insertions per case. Default is 0 for all",
    )
    verify.add_argument(
        "--workers",
        type=_check_positive_int,
        default=config.DEFAULT_CONCURRENT_WORKERS,
        metavar="N",
        help=(
            "Number of concurrent threads verifying cases."
            f" Default is {config.DEFAULT_CONCURRENT_WORKERS}"
        ),
    )

    # Plot command
    plot = subparsers.add_parser("plot", help="Render a region report as SVG")
    plot.add_argument(
        "report", metavar="REPORT", help="Region report written by 'clip'"
    )
    plot.add_argument(
        "--svg", required=True, metavar="FILENAME", help="Location of the SVG file"
    )

    # Parse the arguments and store them as a dict for use by other modules
    config.CLI = vars(parser.parse_args())


def _create_cli_logger() -> logging.Logger:
    """Create and return a logger for the CLI that writes to stdout.

    Returns:
        CLI logger
    """
    logger = logging.getLogger("feasible_region")
    logger.setLevel(logging.DEBUG if config.CLI["debug"] is True else logging.INFO)
    stream_handler = logging.StreamHandler(sys.stdout)
    if config.CLI["debug"] is True:
        log_format = "%(levelname)s %(threadName)s:%(name)s:%(funcName)s %(message)s"
    else:
        log_format = "%(levelname)s %(message)s"
    formatter = logging.Formatter(log_format)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)
    return logger


def init_cli() -> logging.Logger:
    """Main function to parse CLI arguments and initialize a logger.

    Returns:
        CLI logger
    """
    _parse_cli_args()
    return _create_cli_logger()
