"""
Subcommands of the hypergeom CLI.

Each module registers its argparse sub-parsers and maps command names to
handlers that take a validated RunConfig and return a report.
"""

from hypergeom.commands import euler, link, selftest, series

MODULES = (euler, link, series, selftest)
