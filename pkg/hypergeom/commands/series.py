"""
Series Commands

assemble-series, euler-series-check and mirror-transform read I-data from
--idata; mirror-transform can instead run the synthetic round trip
(--source synthetic), which needs no input file.
"""

import logging
import time

from hypergeom.exceptions import IDataError, NonNormalizableError
from hypergeom.flag_geometry import MultiDegree
from hypergeom.models import (
    AssembleReport,
    EulerSeriesReport,
    MirrorReport,
    RunConfig,
    SeriesCoefficientModel,
)
from hypergeom.series import (
    MIRROR_SIGN_CONVENTION,
    Series,
    assemble_B,
    euler_series_check,
    ingest_I,
    mirror_report,
    mirror_transform,
    omega_class,
    reapply_is_trivial,
    synthetic_round_trip,
)

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    subparsers.add_parser(
        "assemble-series", parents=parents,
        help="B_d = tau* j_0* Q_d * I_d per fixed point for d <= bound",
    )
    subparsers.add_parser(
        "euler-series-check", parents=parents,
        help="Omega-Euler-series condition of B by localization",
    )
    subparsers.add_parser(
        "mirror-transform", parents=parents,
        help="Normalize B to deg_alpha A_d <= -2 and report f and g",
    )


def _load(run: RunConfig) -> Series:
    if run.idata_path is None:
        raise IDataError(f"{run.command} needs --idata")
    idata = ingest_I(run.idata_path)
    file_n = len(next(iter(idata))) + 1 if idata else None
    if file_n != run.n:
        raise IDataError(f"I-data file is for n={file_n}, run asks for n={run.n}")
    return idata


def _cutoff(run: RunConfig) -> MultiDegree:
    return MultiDegree(tuple(run.degree_bound()))


def assemble_series_command(run: RunConfig) -> AssembleReport:
    started = time.perf_counter()
    cutoff = _cutoff(run)
    B = assemble_B(run.n, _load(run), cutoff)
    coefficients = [
        SeriesCoefficientModel(
            d=list(d),
            restrictions={str(p): str(e) for p, e in sorted(c.value.restrictions.items())},
            alpha_degree=max(e.alpha_degree() for e in c.value.restrictions.values()),
        )
        for d, c in B.items()
    ]
    return AssembleReport(n=run.n, cutoff=list(cutoff), coefficients=coefficients,
                          elapsed_ms=(time.perf_counter() - started) * 1000)


def euler_series_check_command(run: RunConfig) -> EulerSeriesReport:
    cutoff = _cutoff(run)
    B = assemble_B(run.n, _load(run), cutoff)
    report = euler_series_check(B, omega_class(run.n), cutoff, run.zeta_order, run.jobs)
    logger.info(f"Euler-series check finished: {report.summary()}")
    return report


def mirror_transform_command(run: RunConfig) -> MirrorReport:
    started = time.perf_counter()
    cutoff = _cutoff(run)
    omega = omega_class(run.n)
    if run.source == "synthetic":
        trip = synthetic_round_trip(run.n, cutoff, run.seed)
        return mirror_report(
            trip.recovered, trip.A, "synthetic", started,
            recovered=trip.data_recovered and trip.series_recovered,
            idempotent=reapply_is_trivial(trip.A, omega, cutoff),
        )

    B = assemble_B(run.n, _load(run), cutoff)
    try:
        data, A = mirror_transform(B, omega, cutoff)
    except NonNormalizableError as e:
        logger.warning(f"Mirror transform stopped: {e}")
        return MirrorReport(n=run.n, cutoff=list(cutoff), source="idata", error=str(e),
                            assumptions=[MIRROR_SIGN_CONVENTION],
                            elapsed_ms=(time.perf_counter() - started) * 1000)
    return mirror_report(data, A, "idata", started, idempotent=reapply_is_trivial(A, omega, cutoff))


HANDLERS = {
    "assemble-series": assemble_series_command,
    "euler-series-check": euler_series_check_command,
    "mirror-transform": mirror_transform_command,
}
