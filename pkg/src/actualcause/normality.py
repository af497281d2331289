"""Ranking functions over worlds and the normality-gated cause definition.

A ranking function maps every world to a natural-number rank (or infinity),
lower meaning more normal, via an ordered clause list with first-match
semantics and a mandatory default. Extended models pair a causal model with
a ranking; typicality statements "if p then typically q" hold when q is
true at every minimum-rank p-world.

Causation in an extended model is the ordinary three-clause definition with
one extra admissibility requirement on witnesses. The contingency realized
by a witness must not make the situation less normal than it actually is:
the solved world under the full counterfactual setting [X<-x', W<-w], and
the solved world under every partial application [W''<-w] of the
contingency alone, must rank no higher than the actual solved world. The
subset quantification mirrors the side-effect clause AC2(b) and is what
keeps a contingency from smuggling in an abnormal change (for example,
reassigning a hospital case to a different doctor) on the way to a normal-
looking world. Under the experimental strict gate the full counterfactual
world must rank strictly lower; partial applications stay at "no higher".
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import FormulaError
from .formulas import (
    Formula,
    is_intervention_free,
    satisfied_by_world,
    unparse_formula,
)
from .hp import (
    Ac2bVariant,
    CauseConjunct,
    DEFAULT_CAPS,
    SearchCaps,
    Verdict,
    Witness,
    check_ac1,
    find_witness,
    _proper_subconjunctions,
)
from .model import CausalModel, Context, World, solve, solve_with

Rank = Union[int, float]  # non-negative int, or math.inf for impossible


@dataclass(frozen=True)
class RankingClause:
    condition: Formula
    rank: Rank


@dataclass(frozen=True)
class RankingFunction:
    """First matching clause wins; worlds matching nothing get the default."""

    clauses: tuple[RankingClause, ...]
    default_rank: Rank

    def __post_init__(self):
        for clause in self.clauses:
            if not is_intervention_free(clause.condition):
                raise FormulaError(
                    "ranking conditions must be intervention-free: "
                    + unparse_formula(clause.condition)
                )
            _check_rank(clause.rank)
        _check_rank(self.default_rank)

    def min_possible_rank(self) -> Rank:
        """Lower bound on any world's rank (some clauses may be unsatisfiable,
        so this is a bound, not necessarily attained)."""
        ranks = [c.rank for c in self.clauses] + [self.default_rank]
        return min(ranks)


def _check_rank(rank: Rank) -> None:
    if rank == math.inf:
        return
    if not isinstance(rank, int) or rank < 0:
        raise FormulaError(f"rank must be a natural number or inf, got {rank!r}")


CONSTANT_RANKING = RankingFunction(clauses=(), default_rank=0)


@dataclass(frozen=True, eq=False)
class ExtendedCausalModel:
    base: CausalModel
    ranking: RankingFunction


def rank_of(ext: ExtendedCausalModel, world: World) -> Rank:
    """Rank of the first matching clause, else the default. Total."""
    assignment = world.as_dict()
    for clause in ext.ranking.clauses:
        if satisfied_by_world(clause.condition, assignment):
            return clause.rank
    return ext.ranking.default_rank


def world_of_context(ext: ExtendedCausalModel, context: Context) -> World:
    """The world a context determines (the base model's solution)."""
    return solve(ext.base, context)


def enumerate_worlds(model: CausalModel) -> Iterator[World]:
    """Every total endogenous assignment, declaration-lexicographic."""
    names = [d.name for d in model.endogenous]
    ranges = [d.values for d in model.endogenous]
    for combo in itertools.product(*ranges):
        yield World(tuple(zip(names, combo)))


def check_typicality(ext: ExtendedCausalModel, p: Formula, q: Formula) -> bool:
    """True iff q holds at every minimum-rank world satisfying p.

    Vacuously true when no world satisfies p. Both formulas must be
    intervention-free.
    """
    for f in (p, q):
        if not is_intervention_free(f):
            raise FormulaError("typicality statements must be intervention-free")
    best: Rank = math.inf
    minimizers: list[World] = []
    for world in enumerate_worlds(ext.base):
        if not satisfied_by_world(p, world):
            continue
        r = rank_of(ext, world)
        if r < best:
            best = r
            minimizers = [world]
        elif r == best:
            minimizers.append(world)
    return all(satisfied_by_world(q, w) for w in minimizers)


def witness_admissible(
    ext: ExtendedCausalModel,
    context: Context,
    cause: CauseConjunct,
    witness: Witness,
    strict: bool = False,
) -> bool:
    """Re-check the normality gate for a reported witness certificate."""
    actual_rank = rank_of(ext, world_of_context(ext, context))
    gate = _admissibility_gate(ext, context, cause, actual_rank, strict)
    return gate(witness.w_set, witness.w_vals, witness.x_prime)


def _admissibility_gate(ext, context, cause, actual_rank, strict):
    base = ext.base
    cause_vars = cause.vars()

    def admissible(w_set, w_vals, x_prime) -> bool:
        overrides = dict(zip(cause_vars, x_prime))
        overrides.update(zip(w_set, w_vals))
        realized = solve_with(base, context, overrides)
        r = rank_of(ext, realized)
        if (r >= actual_rank) if strict else (r > actual_rank):
            return False
        w_items = list(zip(w_set, w_vals))
        for size in range(1, len(w_items) + 1):
            for sub in itertools.combinations(w_items, size):
                partial = solve_with(base, context, dict(sub))
                if rank_of(ext, partial) > actual_rank:
                    return False
        return True

    return admissible


def is_cause_extended(
    ext: ExtendedCausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    variant: Ac2bVariant = Ac2bVariant.UPDATED,
    caps: SearchCaps = DEFAULT_CAPS,
    strict: bool = False,
) -> Verdict:
    """Three-clause verdict where witnesses must pass the normality gate.

    With a constant ranking every witness is admissible and the verdict
    coincides with the plain definition. ``strict`` switches the realized
    witness-world comparison to strictly-more-normal (experimental, used to
    reproduce the equal-rank voting contrast).
    """
    if not check_ac1(ext.base, context, cause, effect):
        return Verdict("fails_AC1")
    actual_rank = rank_of(ext, world_of_context(ext, context))
    if strict and ext.ranking.min_possible_rank() >= actual_rank:
        # nothing can be strictly more normal, so no witness is admissible
        return Verdict("fails_AC2")
    gate = _admissibility_gate(ext, context, cause, actual_rank, strict)
    witness = find_witness(
        ext.base, context, cause, effect, variant, caps, admissible=gate
    )
    if witness is None:
        return Verdict("fails_AC2")
    for sub in _proper_subconjunctions(cause):
        sub_gate = _admissibility_gate(ext, context, sub, actual_rank, strict)
        if (
            find_witness(
                ext.base, context, sub, effect, variant, caps, admissible=sub_gate
            )
            is not None
        ):
            return Verdict("fails_AC3", witness=witness, smaller_cause=sub)
    return Verdict("cause", witness=witness)


def rank_admissible_contexts(
    ext: ExtendedCausalModel, context: Context, candidates
) -> list[Context]:
    """Contexts whose determined world is no less normal than the actual one
    (the default-aware filter shared with the necessity-test extension)."""
    actual_rank = rank_of(ext, world_of_context(ext, context))
    return [
        u for u in candidates if rank_of(ext, world_of_context(ext, u)) <= actual_rank
    ]
