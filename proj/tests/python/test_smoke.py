"""Smoke tests for the Python bindings: exact values come back as Fractions."""

from fractions import Fraction

import pytest

fairslice = pytest.importorskip("fairslice")


def test_version():
    assert fairslice.__version__


def test_cake_round_trips_fractions():
    cake = fairslice.Cake(
        ["a", "b"],
        [fairslice.Slice(Fraction(1), [Fraction(1, 3), Fraction(2, 3)])],
    )
    assert cake.num_agents == 2
    assert cake.slice_value(0, 0) == Fraction(1, 3)
    assert cake.total_value(1) == Fraction(2, 3)
    assert cake.agent_index("b") == 1


def test_floats_are_rejected_as_cake_data():
    with pytest.raises(TypeError):
        fairslice.Slice(0.5, [Fraction(1)])


def test_leximin_golden_values(fixtures_dir):
    file = fairslice.load_cake(str(fixtures_dir / "leximin_example.json"))
    res = fairslice.solve_leximin_absolute(file.cake)
    assert sorted(res.utility.absolute) == [Fraction(6), Fraction(6), Fraction(9)]
    rel = fairslice.solve_leximin_relative(file.cake)
    assert rel.utility.relative == [Fraction(5, 12)] * 3


def test_nash_market_equilibrium(fixtures_dir):
    file = fairslice.load_cake(str(fixtures_dir / "ceei_example.json"))
    res = fairslice.solve_nash(file.cake)
    assert res.utility.absolute == [Fraction(8), Fraction(8)]
    assert res.prices is not None
    assert res.prices.density == [
        Fraction(1, 4),
        Fraction(1, 4),
        Fraction(1, 2),
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(1, 4),
    ]
    assert fairslice.verify_ceei(file.cake, res.allocation, res.prices)
    assert fairslice.verify_sceei(file.cake, res.allocation, res.prices)


def test_axiom_checks(fixtures_dir):
    file = fairslice.load_cake(str(fixtures_dir / "leximin_example.json"))
    res = fairslice.solve_leximin_absolute(file.cake)
    prop = fairslice.check_proportional(file.cake, res.allocation)
    assert not prop
    assert prop.witness_agent == 2
    assert fairslice.check_pareto_optimal(file.cake, res.allocation)


def test_monotonicity_experiment(fixtures_dir):
    file = fairslice.load_cake(str(fixtures_dir / "cut_and_choose.json"))
    assert file.enlargement is not None
    rule = fairslice.Rule("cut-and-choose")
    rep = fairslice.rm_experiment(file.cake, file.enlargement, rule)
    assert not rep
    assert rep.losers == [1]
    assert rep.before_absolute[1] == Fraction(5)
    assert rep.after_absolute[1] == Fraction(3)


def test_solver_errors_surface_as_runtime_error():
    # Whole-slice enumeration for p > 1 refuses oversized instances.
    agents = [f"a{i}" for i in range(5)]
    slices = [
        fairslice.Slice(Fraction(1), [Fraction(i + j + 1) for i in range(5)])
        for j in range(12)
    ]
    cake = fairslice.Cake(agents, slices)
    with pytest.raises(fairslice.SolverError):
        fairslice.solve_wp_absolute(cake, 2.0)
