"""Python bindings for the degen mixed finite element solvers.

The heavy lifting lives in the compiled ``_degen`` extension; this package
re-exports it and adds a couple of conveniences for working with tables.
"""

from ._degen import (
    CSV_HEADER,
    AssembledForms,
    Benchmark,
    ExperimentResult,
    ManufacturedSolution,
    Mesh,
    Point,
    PowerLaw,
    Regularization,
    RegularizationKind,
    SchemeKind,
    TheoryConstants,
    accumulated_error_bound,
    assemble_forms,
    b,
    b_eps,
    b_eps_prime,
    c_alpha,
    contraction_factor,
    flux_norm,
    lipschitz_constants,
    project_scalar,
    regularization_gap_bound,
    scalar_norm,
    select_L_regularized,
    select_delta,
    solve_saddle,
    to_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]


def table_as_dicts(rows):
    """Turn a list of ExperimentResult into plain dicts (nc cells carry None)."""
    out = []
    for r in rows:
        out.append(
            {
                "scheme": r.scheme,
                "tol": r.tol,
                "eps": r.eps,
                "tau": r.tau,
                "L": r.L if r.scheme != "newton" else None,
                "total_iterations": r.total_iterations if r.converged else None,
                "per_step": r.per_step if r.converged else None,
                "converged": r.converged,
            }
        )
    return out
