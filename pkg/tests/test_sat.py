"""SAT solver tests: brute-force differential checks, assumptions,
determinism."""

import itertools
import random

import pytest

from sketchsynth import sat


def brute_force(nvars, clauses, fixed=()):
    """All satisfying assignments as tuples of bools (index 0 = var 1)."""
    sols = []
    for bits in itertools.product([False, True], repeat=nvars):
        def val(lit):
            v = bits[abs(lit) - 1]
            return v if lit > 0 else not v
        if all(val(l) for l in fixed) and \
                all(any(val(l) for l in cl) for cl in clauses):
            sols.append(bits)
    return sols


def random_cnf(rng, nvars, nclauses):
    out = []
    for _ in range(nclauses):
        k = rng.randrange(1, 4)
        cl = [rng.randrange(1, nvars + 1) * rng.choice([1, -1])
              for _ in range(k)]
        out.append(cl)
    return out


def check_model(model, nvars, clauses, fixed=()):
    def val(lit):
        v = (abs(lit) in model)
        return v if lit > 0 else not v
    assert all(val(l) for l in fixed)
    for cl in clauses:
        assert any(val(l) for l in cl), f"clause {cl} falsified"


def test_verdict_matches_brute_force_on_random_instances():
    rng = random.Random(11)
    for trial in range(300):
        nvars = rng.randrange(1, 9)
        clauses = random_cnf(rng, nvars, rng.randrange(1, 26))
        s = sat.Solver()
        s.ensure_vars(nvars)
        for cl in clauses:
            s.add_clause(list(cl))
        model = s.solve()
        expected = brute_force(nvars, clauses)
        if model is None:
            assert not expected, f"trial {trial}: solver missed a solution"
        else:
            check_model(model, nvars, clauses)


def test_assumptions_match_brute_force():
    rng = random.Random(23)
    for trial in range(200):
        nvars = rng.randrange(2, 8)
        clauses = random_cnf(rng, nvars, rng.randrange(1, 20))
        s = sat.Solver()
        s.ensure_vars(nvars)
        for cl in clauses:
            s.add_clause(list(cl))
        for _ in range(3):
            k = rng.randrange(0, nvars)
            fixed = rng.sample(
                [v * rng.choice([1, -1]) for v in range(1, nvars + 1)], k)
            model = s.solve(assumptions=fixed)
            expected = brute_force(nvars, clauses, fixed)
            if model is None:
                assert not expected
            else:
                check_model(model, nvars, clauses, fixed)


def test_solver_reusable_across_calls_with_added_clauses():
    s = sat.Solver()
    s.ensure_vars(3)
    s.add_clause([1, 2])
    assert s.solve() is not None
    s.add_clause([-1])
    m = s.solve()
    assert m is not None and 2 in m
    s.add_clause([-2])
    assert s.solve() is None


def test_unit_and_empty_clauses():
    s = sat.Solver()
    s.add_clause([4])
    m = s.solve()
    assert m is not None and 4 in m
    s2 = sat.Solver()
    s2.add_clause([])
    assert s2.solve() is None


def test_deterministic_models():
    rng = random.Random(5)
    clauses = random_cnf(rng, 12, 30)
    models = []
    for _ in range(2):
        s = sat.Solver()
        s.ensure_vars(12)
        for cl in clauses:
            s.add_clause(list(cl))
        models.append(s.solve())
    assert models[0] == models[1]


def test_deadline_raises_timeout():
    # pigeonhole instance: guaranteed to run long enough to hit the
    # periodic deadline check
    pigeons, holes = 9, 8
    var = lambda p, h: p * holes + h + 1
    s = sat.Solver(deadline=0.0)  # already expired
    try:
        for p in range(pigeons):
            s.add_clause([var(p, h) for h in range(holes)])
        for h in range(holes):
            for p1 in range(pigeons):
                for p2 in range(p1 + 1, pigeons):
                    s.add_clause([-var(p1, h), -var(p2, h)])
    except sat.Timeout:
        return
    with pytest.raises(sat.Timeout):
        s.solve()
