"""Seeded random model generation for the property suites.

Models are small binary acyclic structures: each endogenous variable picks
parents among the exogenous variables and earlier endogenous variables, and
its equation is a uniformly random truth table, written out as a case
expression. Everything is a pure function of the seed.
"""

from __future__ import annotations

import itertools
import random

from .equations import Case, CAnd, Cmp, Num, ValueRef, Var
from .model import CausalModel, Context, StructuralEquation, VariableDecl

BINARY = ("0", "1")


def random_model(
    seed: int,
    max_endogenous: int = 4,
    max_exogenous: int = 2,
    max_parents: int = 3,
) -> CausalModel:
    rng = random.Random(seed)
    n_endo = rng.randint(2, max_endogenous)
    n_exo = rng.randint(1, max_exogenous)
    exo = [f"U{i + 1}" for i in range(n_exo)]
    endo = [f"V{i + 1}" for i in range(n_endo)]

    variables = [VariableDecl(u, BINARY, "exogenous") for u in exo]
    variables += [VariableDecl(v, BINARY, "endogenous") for v in endo]

    equations = []
    for i, name in enumerate(endo):
        pool = exo + endo[:i]
        parents = [p for p in pool if rng.random() < 0.5][:max_parents]
        if not parents and pool:
            parents = [rng.choice(pool)]
        equations.append(StructuralEquation(name, _truth_table(rng, parents)))
    return CausalModel(
        name=f"Random{seed}",
        variables=tuple(variables),
        equations=tuple(equations),
    )


def _truth_table(rng: random.Random, parents: list[str]):
    if not parents:
        return Num(rng.randint(0, 1))
    branches = []
    combos = list(itertools.product((0, 1), repeat=len(parents)))
    for combo in combos[:-1]:
        cond = None
        for parent, bit in zip(parents, combo):
            cmp_ = Cmp("=", Var(parent), ValueRef(str(bit), bit))
            cond = cmp_ if cond is None else CAnd(cond, cmp_)
        branches.append((cond, Num(rng.randint(0, 1))))
    default = Num(rng.randint(0, 1))
    return Case(tuple(branches), default)


def random_context(model: CausalModel, rng: random.Random) -> Context:
    items = tuple(
        (d.name, rng.choice(d.values)) for d in model.exogenous
    )
    return Context(items)
