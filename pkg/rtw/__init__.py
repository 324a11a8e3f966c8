"""
Rainbow Turán Workbench
=======================

Exact computation of rainbow generalized Turán numbers rb(n, H, F) on small
hosts, certified lower-bound constructions, and the matching machinery
(systems of distinct representatives, greedy picking, matching
decomposition) behind their bounds.

Modules:
    graphcore: Small graphs, named-graph catalog, isomorphism, graph6
    enumeration: Copy enumeration and counting, red-blue graphs
    rainbow: Rainbow detection, matchings, Berge view, heavy/light split
    extremal: Exact solvers and the sandwich check
    constructions: Lower-bound families with verifying reports
    checks: Seeded property suites
    io: Family documents and JSON payloads
    metadata: Run metadata and certificate digests
    utils: Configuration, logging and small helpers
    cli: Command-line driver
"""

__version__ = "0.1.0"
__license__ = "MIT"

from rtw import graphcore, enumeration, rainbow, extremal, constructions, io, metadata, utils

__all__ = [
    "graphcore",
    "enumeration",
    "rainbow",
    "extremal",
    "constructions",
    "io",
    "metadata",
    "utils",
]
