"""
Linking Command

check-link compares the restricted Euler data with the balloon product for
every directed balloon and every multiplicity up to --delta-max.
"""

import logging

from hypergeom.localization import check_links
from hypergeom.models import CheckStatus, LinkReport, RunConfig

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    subparsers.add_parser(
        "check-link", parents=parents,
        help="Linking condition on all balloons at alpha = lambda/delta",
    )


def check_link_command(run: RunConfig) -> LinkReport:
    report = check_links(run.n, run.delta_max, run.jobs)
    poles = sum(1 for case in report.cases if case.status == CheckStatus.POLE)
    if poles:
        logger.warning(f"{poles} balloon cases hit a pole")
    logger.info(f"Linking sweep finished: {report.summary()}")
    return report


HANDLERS = {"check-link": check_link_command}
