"""
Euler-Data Commands

verify-euler-data sweeps every d up to the degree bound and every r <= d;
degree-audit records the exact alpha-degree of tau* j_0* Q_d per d.
"""

import logging

from hypergeom.euler_data import audit_degrees, sweep_euler_data
from hypergeom.flag_geometry import MultiDegree
from hypergeom.models import DegreeAuditReport, EulerDataReport, RunConfig

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    subparsers.add_parser(
        "verify-euler-data", parents=parents,
        help="Check Gamma * j_r* Q_d = bar(j_0* Q_r) * j_0* Q_{d-r} for all r <= d <= bound",
    )
    subparsers.add_parser(
        "degree-audit", parents=parents,
        help="Exact alpha-degree of tau* j_0* Q_d against <c_1(X), d>",
    )


def verify_euler_data_command(run: RunConfig) -> EulerDataReport:
    bound = MultiDegree(tuple(run.degree_bound()))
    report = sweep_euler_data(run.n, bound, run.jobs)
    logger.info(f"Euler-data sweep finished: {report.summary()}")
    return report


def degree_audit_command(run: RunConfig) -> DegreeAuditReport:
    bound = MultiDegree(tuple(run.degree_bound()))
    report = audit_degrees(run.n, bound, run.jobs)
    weak = [entry for entry in report.cases if not entry.bound_holds]
    if weak:
        logger.warning(f"Displayed degree bound fails for {len(weak)} of {len(report.cases)} degrees")
    return report


HANDLERS = {
    "verify-euler-data": verify_euler_data_command,
    "degree-audit": degree_audit_command,
}
