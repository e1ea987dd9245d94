"""Exact division of piecewise-homogeneous cakes.

Cakes are finite lists of homogeneous slices (per-agent constant value
densities); divisions assign each agent a fraction of every slice. All
quantities cross the Python boundary as :class:`fractions.Fraction`, so
nothing is rounded.
"""

from ._core import (
    Allocation,
    AllocationFile,
    AxiomReport,
    Cake,
    CakeFile,
    FuzzConfig,
    FuzzFailure,
    FuzzReport,
    MonotonicityReport,
    ParseError,
    PriceVector,
    ReducedCake,
    Rule,
    Slice,
    SolveDiagnostics,
    SolveResult,
    SolverError,
    UtilityVector,
    __version__,
    absolute_utility,
    check_envy_free,
    check_esv_probe,
    check_pareto_optimal,
    check_proportional,
    check_weak_pareto_optimal,
    cut_and_choose,
    enlarge,
    fuzz,
    load_allocation,
    load_cake,
    load_slices,
    nash_brute_oracle,
    nash_product,
    nash_sceei_equivalence_check,
    parse_allocation,
    parse_cake,
    parse_slices,
    pm_experiment,
    relative_utility,
    remove_agent,
    rm_experiment,
    serialize_axiom_report,
    serialize_cake,
    serialize_fuzz_report,
    serialize_monotonicity_report,
    serialize_solve_record,
    solve,
    solve_leximin_absolute,
    solve_leximin_relative,
    solve_nash,
    solve_utilitarian_absolute,
    solve_utilitarian_relative,
    solve_wp_absolute,
    solve_wp_relative,
    standard_price_measure,
    utilities,
    value_of_piece,
    verify_ceei,
    verify_sceei,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
