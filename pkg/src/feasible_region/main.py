"""Main program module."""

import os
import sys

from feasible_region import cli, config, plot, report, utils
from feasible_region.constraint_file import ConstraintFileError, load_constraint_file
from feasible_region.engine import (
    BoundViolation,
    ScalarFormatError,
    ZeroNormalError,
    get_format,
    new_box,
)
from feasible_region.engine.clip_engine import clip_all
from feasible_region.verification import corpus, runner
from feasible_region.verification.testgen import GeneratorError

# Exit codes
EXIT_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_CONTRACT_VIOLATION = 3


def _clip() -> None:
    """Clip the box of a constraint file and export the region report."""
    fmt = get_format(config.CLI["precision"])
    filename = config.CLI["constraint_file"]
    system = load_constraint_file(filename, fmt)
    region = clip_all(new_box(system.mx, system.my, fmt), system.constraints)
    utils.write_output_json(report.build_report(region), "the region report")
    if config.CLI["svg"]:
        plot.write_svg(
            config.CLI["svg"], region.snapshot(), os.path.basename(filename)
        )


def _gen() -> None:
    """Generate a corpus and write it to the output directory."""
    fmt = get_format(config.CLI["precision"])
    cases = corpus.generate_cases(
        fmt,
        config.CLI["beta"],
        config.CLI["seed"],
        budget=config.CLI["budget"],
        degenerate=config.CLI["degenerate"],
        orders=config.CLI["orders"],
        probe_set=config.CLI["set"],
        exhaustive_size=config.CLI["exhaustive_size"],
    )
    corpus.write_corpus(
        config.CLI["out"], fmt, config.CLI["beta"], config.CLI["seed"], cases
    )


def _verify() -> bool:
    """Verify a corpus, export the summary and return True if all cases pass."""
    loaded = corpus.load_corpus(config.CLI["corpus"])
    results = runner.verify_corpus(
        loaded, config.CLI["budget"], config.CLI["workers"]
    )
    summary = runner.summarize(results)
    utils.write_output_json(summary, "the verification summary")
    return summary["Passed"]


def _plot() -> None:
    """Render a region report as an SVG figure."""
    filename = config.CLI["report"]
    snapshot = report.snapshot_from_report(report.load_report(filename))
    plot.write_svg(config.CLI["svg"], snapshot, os.path.basename(filename))


def main() -> None:
    """Main function."""

    # pylint: disable=broad-exception-caught
    # We want to catch any exceptions that was uncatched before

    # Parse CLI arguments and retrieve a logger for this module
    logger = cli.init_cli()
    try:
        if config.CLI["command"] == "clip":
            _clip()
        elif config.CLI["command"] == "gen":
            _gen()
        elif config.CLI["command"] == "verify":
            if not _verify():
                logger.error("Some cases failed, see the verification summary")
                sys.exit(EXIT_FAILURE)
        elif config.CLI["command"] == "plot":
            _plot()
        sys.exit(0)

    except (ConstraintFileError, report.ReportError, corpus.CorpusError) as err:
        logger.critical(err, exc_info=config.CLI["debug"])
        sys.exit(EXIT_INVALID_INPUT)
    except (
        BoundViolation,
        ZeroNormalError,
        ScalarFormatError,
        GeneratorError,
    ) as err:
        logger.critical(err, exc_info=config.CLI["debug"])
        sys.exit(EXIT_CONTRACT_VIOLATION)
    except KeyboardInterrupt:
        logger.critical("Interrupted")
        sys.exit(EXIT_FAILURE)
    except Exception as err:
        logger.critical(err, exc_info=config.CLI["debug"])
        sys.exit(EXIT_FAILURE)


if __name__ == "__main__":
    main()
