"""Anisotropic radial solutions, rearrangements and comparison checks."""

from ._wulff import (
    AnisoNorm,
    MembershipReport,
    ProblemParams,
    RadialSolution,
    RearrangementProfile,
    WulffError,
    branch_function,
    decreasing_rearrangement,
    distribution_function,
    hardy_quotient_radial,
    marcinkiewicz_norm,
    run_cli,
    solve_beta,
)

__all__ = [
    "AnisoNorm",
    "MembershipReport",
    "ProblemParams",
    "RadialSolution",
    "RearrangementProfile",
    "WulffError",
    "branch_function",
    "decreasing_rearrangement",
    "distribution_function",
    "hardy_quotient_radial",
    "marcinkiewicz_norm",
    "run_cli",
    "solve_beta",
]
