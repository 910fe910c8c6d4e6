"""Search engine: complete within the configured bounds.

The outer loop deepens over repeat-count vectors in ascending total order.
For each vector the program is executed symbolically once, yielding a
constraint system over the hole/choice variables; a SAT check decides whether
any candidate passes every harness at that depth.  On the first satisfiable
depth, objectives are minimized lexicographically, then every unknown is
minimized in registry order (canonicalization), making the reported
assignment independent of solver internals.  The winner is replayed
concretely before being returned; a candidate rejected only by resource
limits is blocked and the search resumed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import bitvec as B
from . import sat
from .cnf import CnfBuilder
from .interp import (
    ConcreteUnknowns, HarnessFailure, Interp, StepLimitExceeded,
    SymbolicUnknowns,
)


@dataclass
class EngineConfig:
    hole_bits: int = 5
    unroll_max: int = 8
    loop_bound: int = 64
    step_limit: int = 100_000
    timeout: float = 600.0
    seed: int = 0
    jobs: int = 1


@dataclass
class Assignment:
    values: dict                 # unknown instance name -> int
    repeat_counts: dict          # repeat name -> count


@dataclass
class EvalOutcome:
    status: str                  # pass | assert_fail | trap | resource
    steps_used: int = 0
    reason: str = None
    span: object = None
    objective_values: dict = None


@dataclass
class Solution:
    assignment: Assignment
    objective_values: dict       # objective name -> int
    candidates: int = 0
    depth: int = 0
    wall_ms: int = 0


class Unsat:
    def __init__(self, candidates=0, depth_reached=0, wall_ms=0):
        self.candidates = candidates
        self.depth_reached = depth_reached
        self.wall_ms = wall_ms


class Timeout:
    def __init__(self, candidates=0, depth_reached=0, wall_ms=0):
        self.candidates = candidates
        self.depth_reached = depth_reached
        self.wall_ms = wall_ms


def effective_hole_width(program, cfg):
    """Holes widen beyond the configured bits when the program mentions
    literals that would not fit."""
    need = program.max_literal.bit_length()
    return max(cfg.hole_bits, need, 1)


# -- concrete evaluation ---------------------------------------------------


def eval_harness(program, harness, assignment, cfg):
    """Replay one harness under a total concrete assignment."""
    interp = Interp(program, ConcreteUnknowns(program.registry, assignment.values),
                    assignment.repeat_counts,
                    loop_bound=cfg.loop_bound, step_limit=cfg.step_limit)
    try:
        interp.run_harness(harness)
    except HarnessFailure as f:
        if f.reason == "assertion failed":
            kind = "assert_fail"
        elif "loop bound" in f.reason:
            kind = "resource"
        else:
            kind = "trap"
        return EvalOutcome(kind, steps_used=interp.steps,
                           reason=f.reason, span=f.span)
    except StepLimitExceeded:
        return EvalOutcome("resource", steps_used=interp.steps,
                           reason="step limit exceeded")
    objectives = {}
    for name, expr in program.objectives:
        v = interp.eval_objective(expr)
        objectives[name] = B.to_signed(B.const_value(v))
    return EvalOutcome("pass", steps_used=interp.steps,
                       objective_values=objectives)


def verify_solution(program, solution, cfg):
    """Independent replay of every harness; True iff all pass and the
    recorded objective values match."""
    for h in program.harnesses:
        out = eval_harness(program, h, solution.assignment, cfg)
        if out.status != "pass":
            return False
        for name, v in solution.objective_values.items():
            if out.objective_values.get(name) != v:
                return False
    return True


# -- depth iteration -------------------------------------------------------


def repeat_vectors(repeat_names, unroll_max):
    """Vectors in ascending total order, lexicographic within a total."""
    n = len(repeat_names)
    if n == 0:
        yield {}
        return
    for total in range(n * unroll_max + 1):
        for combo in _compositions(total, n, unroll_max):
            yield dict(zip(repeat_names, combo))


def _compositions(total, n, cap):
    if n == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap) + 1):
        for rest in _compositions(total - first, n - 1, cap):
            yield (first,) + rest


# -- solver wiring ---------------------------------------------------------


class _DepthProblem:
    """One repeat vector: symbolic execution, CNF, incremental SAT."""

    def __init__(self, program, vector, cfg, deadline):
        self.program = program
        self.registry = program.registry
        self.vector = vector
        self.cfg = cfg
        self.unknowns = SymbolicUnknowns(
            self.registry, effective_hole_width(program, cfg))
        self.hole_insts, self.choice_insts = \
            self.registry.instantiate(vector)
        self.cb = CnfBuilder()
        self.solver = sat.Solver(deadline=deadline)
        self._synced = 0
        self.objective_terms = []
        self.feasible = self._encode()

    def _encode(self):
        constraints = []
        try:
            for h in self.program.harnesses:
                interp = Interp(self.program, self.unknowns, self.vector,
                                loop_bound=self.cfg.loop_bound,
                                step_limit=self.cfg.step_limit)
                interp.run_harness(h)
                constraints.extend(interp.constraints)
            if self.program.objectives:
                interp = Interp(self.program, self.unknowns, self.vector,
                                loop_bound=self.cfg.loop_bound,
                                step_limit=self.cfg.step_limit)
                interp.init_statics()
                for name, expr in self.program.objectives:
                    self.objective_terms.append((name, interp.eval_objective(expr)))
                constraints.extend(interp.constraints)
        except (HarnessFailure, StepLimitExceeded):
            return False
        for inst in self.choice_insts:
            width = max(1, (inst.info.arity - 1).bit_length())
            self.cb.assert_term(
                B.ult(B.var(inst.name, width), B.const(inst.info.arity)))
        for c in constraints:
            self.cb.assert_term(c)
        return not self.cb.contradiction

    def _sync(self):
        self.solver.ensure_vars(self.cb.nvars)
        while self._synced < len(self.cb.clauses):
            self.solver.add_clause(self.cb.clauses[self._synced])
            self._synced += 1

    def solve(self, assumptions=()):
        if self.cb.contradiction:
            return None
        self._sync()
        return self.solver.solve(assumptions=list(assumptions))

    def model_assignment(self, model):
        values = {}
        for inst in self.hole_insts + self.choice_insts:
            values[inst.name] = self.cb.model_value(inst.name, model)
        return Assignment(values=values, repeat_counts=dict(self.vector))

    def block(self, model):
        """Exclude the exact current assignment of the unknown variables."""
        clause = []
        for inst in self.hole_insts + self.choice_insts:
            for bit in self.cb.var_bits.get(inst.name, []):
                if isinstance(bit, bool):
                    continue
                lit = abs(bit)
                true_now = (lit in model) == (bit > 0)
                clause.append(-bit if true_now else bit)
        if not clause:
            return False
        self.cb.add_clause(clause)
        return True

    def assert_hard(self, term):
        self.cb.assert_term(term)

    def gate_for(self, term):
        """Assumption literal implying ``term``."""
        gate = self.cb.new_var()
        self.cb.assert_term(term, gate=gate)
        return gate

    def retire(self, gate):
        self.cb.add_clause([-gate])

    def minimize_term(self, term, model, assumptions=()):
        """Minimum (signed) value of ``term`` over models satisfying the
        assumptions; returns (min_value, model attaining it).  Binary search
        with single-use assumption gates."""
        best = B.to_signed(B.evaluate(term, self._model_env(model)))
        best_model = model
        lo = -(1 << (B.WIDTH - 1))
        while lo < best:
            mid = lo + (best - lo) // 2
            gate = self.gate_for(B.sle(term, B.const(mid)))
            m = self.solve(assumptions=tuple(assumptions) + (gate,))
            self.retire(gate)
            if m is None:
                lo = mid + 1
            else:
                best = B.to_signed(B.evaluate(term, self._model_env(m)))
                best_model = m
        return best, best_model

    def _model_env(self, model):
        env = {}
        for inst in self.hole_insts + self.choice_insts:
            env[inst.name] = self.cb.model_value(inst.name, model)
        return env


# -- top level -------------------------------------------------------------


def solve(program, cfg):
    """Complete bounded search; Solution, Unsat or Timeout."""
    t0 = time.monotonic()
    deadline = t0 + cfg.timeout
    registry = program.registry
    repeat_names = [info.uid.name for info in registry.repeats]
    candidates = 0
    depth_reached = 0

    def ms():
        return int((time.monotonic() - t0) * 1000)

    try:
        for vector in repeat_vectors(repeat_names, cfg.unroll_max):
            depth = sum(vector.values())
            depth_reached = max(depth_reached, depth)
            if time.monotonic() > deadline:
                return Timeout(candidates, depth_reached, ms())
            prob = _DepthProblem(program, vector, cfg, deadline)
            if not prob.feasible:
                continue
            result = _solve_at_depth(program, prob, cfg)
            if result is None:
                continue
            assignment, objective_values, n_cand = result
            candidates += n_cand
            return Solution(assignment=assignment,
                            objective_values=objective_values,
                            candidates=candidates, depth=depth,
                            wall_ms=ms())
        return Unsat(candidates, depth_reached, ms())
    except sat.Timeout:
        return Timeout(candidates, depth_reached, ms())


def _solve_at_depth(program, prob, cfg):
    """None if no candidate survives at this depth; otherwise the canonical
    minimal assignment, objective values and candidate count."""
    candidates = 0
    width = effective_hole_width(program, cfg)
    while True:
        model = prob.solve()
        if model is None:
            return None
        # lexicographic objective minimization, then canonicalization
        # (smallest value for every unknown in registry order); all bounds
        # are assumption-gated so a later rejection can roll them back
        gates = []
        objective_values = {}
        for name, term in prob.objective_terms:
            v, model = prob.minimize_term(term, model, assumptions=gates)
            gates.append(prob.gate_for(B.sle(term, B.const(v))))
            objective_values[name] = v
        for inst in prob.hole_insts + prob.choice_insts:
            if inst.uid.kind == "choice":
                w = max(1, (inst.info.arity - 1).bit_length())
            elif getattr(inst.info, "is_bool", False):
                w = 1
            else:
                w = width
            term = B.var(inst.name, w)
            v, model = prob.minimize_term(term, model, assumptions=gates)
            gates.append(prob.gate_for(B.ule(term, B.const(v))))
        assignment = prob.model_assignment(model)
        candidates += 1
        outcome = _replay(program, assignment, cfg)
        if outcome == "pass":
            return assignment, objective_values, candidates
        for g in gates:
            prob.retire(g)
        # a resource-limit rejection is candidate-specific: block and retry;
        # a semantic failure would contradict the encoding, so fail loudly
        if outcome == "resource":
            if not prob.block(model):
                return None
            continue
        raise AssertionError(
            "replay contradicts the symbolic encoding; this is a bug")


def _replay(program, assignment, cfg):
    for h in program.harnesses:
        out = eval_harness(program, h, assignment, cfg)
        if out.status != "pass":
            return "resource" if out.status == "resource" else "fail"
    return "pass"


def minimize_objectives(program, prob, model):
    """Lexicographic objective minimization (exposed for tests); returns
    ({name: min}, model)."""
    out = {}
    for name, term in prob.objective_terms:
        v, model = prob.minimize_term(term, model)
        prob.assert_hard(B.sle(term, B.const(v)))
        out[name] = v
    return out, model
