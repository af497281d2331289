"""Actual causation: AC1-AC3 checking, witness search, cause enumeration.

A candidate cause is a conjunction of primitive events X1=x1 & ... & Xk=xk.
AC2 is certified by a witness: a partition (Z, W) of the endogenous
variables with the cause inside Z, a contingency setting w for W, an
alternative setting x' for the cause variables, and the actual solved values
z* of Z. Two variants of the side-effect clause AC2(b) are supported:

* ``UPDATED``  - the clause must hold for every subset W' of W,
* ``ORIGINAL`` - only for W' = W,

with Z' ranging over all subsets of Z minus the cause variables either way
(re-fixing cause variables at their actual values is a no-op, so this halves
the subset lattice without changing the relation).

Searches are exhaustive and deterministic: contingency sets W grow by size
and then declaration order, settings enumerate lexicographically over
declared value order, and the first success is reported. Exceeding the
configured caps raises, it never truncates.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Optional

from .errors import PreconditionError, SearchCapExceeded
from .formulas import (
    Formula,
    Intervened,
    Not,
    conjunction,
    eval_formula,
    formula_vars,
    validate_formula,
)
from .model import CausalModel, Context, solve

CAP_ENV_VAR = "CAUSAL_SEARCH_CAP"


class Ac2bVariant(Enum):
    UPDATED = "updated"
    ORIGINAL = "original"


@dataclass(frozen=True)
class SearchCaps:
    """Resource limits for exhaustive searches.

    ``max_vars`` bounds the number of endogenous variables a witness search
    will take on; ``max_conjuncts`` bounds candidate conjunction size during
    enumeration. The CAUSAL_SEARCH_CAP environment variable overrides
    ``max_vars``.
    """

    max_vars: int = 12
    max_conjuncts: int = 3

    @classmethod
    def from_env(cls, max_vars: int | None = None, max_conjuncts: int | None = None):
        env = os.environ.get(CAP_ENV_VAR)
        if max_vars is None:
            max_vars = int(env) if env else cls.max_vars
        if max_conjuncts is None:
            max_conjuncts = cls.max_conjuncts
        return cls(max_vars=max_vars, max_conjuncts=max_conjuncts)


DEFAULT_CAPS = SearchCaps()


@dataclass(frozen=True)
class CauseConjunct:
    """An ordered conjunction of primitive events over distinct variables."""

    assignments: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if not self.assignments:
            raise PreconditionError("a cause conjunction needs at least one event")
        names = [v for v, _ in self.assignments]
        if len(set(names)) != len(names):
            raise PreconditionError(f"repeated variable in cause: {names}")

    def vars(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.assignments)

    def values(self) -> tuple[str, ...]:
        return tuple(x for _, x in self.assignments)

    def formula(self) -> Formula:
        return conjunction(self.assignments)

    def unparse(self) -> str:
        return " & ".join(f"{v}={x}" for v, x in self.assignments)


@dataclass(frozen=True)
class Witness:
    """An AC2 certificate: partition (Z, W), contingency w, alternative x'.

    ``z_star`` holds the solved actual values of every Z variable (cause
    variables included), so the certificate can be re-verified without
    re-solving.
    """

    w_set: tuple[str, ...]
    z_set: tuple[str, ...]
    w_vals: tuple[str, ...]
    x_prime: tuple[str, ...]
    z_star: tuple[tuple[str, str], ...]

    def w_settings(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.w_set, self.w_vals))


@dataclass(frozen=True)
class Verdict:
    status: str  # 'cause' | 'fails_AC1' | 'fails_AC2' | 'fails_AC3'
    witness: Optional[Witness] = None
    smaller_cause: Optional[CauseConjunct] = None

    @property
    def is_cause(self) -> bool:
        return self.status == "cause"


# a gate consulted after AC2(a) and before AC2(b); used by the
# normality extension to rule out abnormal contingencies
AdmissibilityGate = Callable[[tuple[str, ...], tuple[str, ...], tuple[str, ...]], bool]


def check_ac1(
    model: CausalModel, context: Context, cause: CauseConjunct, effect: Formula
) -> bool:
    """Both the cause conjunction and the effect hold, uncounterfactually."""
    validate_formula(model, effect)
    return eval_formula(model, context, cause.formula()) and eval_formula(
        model, context, effect
    )


def check_ac2(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    witness: Witness,
    variant: Ac2bVariant = Ac2bVariant.UPDATED,
) -> bool:
    """Verify a given witness: the counterfactual clause plus the
    side-effect clause at every required (W', Z') pair."""
    _check_witness_shape(model, context, cause, witness)
    return _ac2a(model, context, cause, effect, witness) and _ac2b(
        model, context, cause, effect, witness, variant
    )


def _check_witness_shape(model, context, cause, witness):
    endo = {d.name for d in model.endogenous}
    zw = set(witness.z_set) | set(witness.w_set)
    if zw != endo or set(witness.z_set) & set(witness.w_set):
        raise PreconditionError("witness (Z, W) must partition the endogenous set")
    if not set(cause.vars()) <= set(witness.z_set):
        raise PreconditionError("cause variables must lie inside Z")
    actual = solve(model, context)
    if dict(witness.z_star) != dict(actual.restrict(witness.z_set)):
        raise PreconditionError("z_star must equal the solved world on Z")


def _ac2a(model, context, cause, effect, witness) -> bool:
    settings = tuple(zip(cause.vars(), witness.x_prime)) + witness.w_settings()
    return eval_formula(model, context, Intervened(settings, Not(effect)))


def _ac2b(model, context, cause, effect, witness, variant) -> bool:
    cause_settings = cause.assignments
    w_items = witness.w_settings()
    z_rest = [
        (var, val) for var, val in witness.z_star if var not in set(cause.vars())
    ]
    if variant is Ac2bVariant.UPDATED:
        w_subsets: Iterator = _subsets(w_items)
    else:
        w_subsets = iter([w_items])
    for w_sub in w_subsets:
        for z_sub in _subsets(tuple(z_rest)):
            settings = cause_settings + tuple(w_sub) + tuple(z_sub)
            if not eval_formula(model, context, Intervened(settings, effect)):
                return False
    return True


def _subsets(items: tuple):
    """All subsets, by size then left-to-right position (deterministic)."""
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def find_witness(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    variant: Ac2bVariant = Ac2bVariant.UPDATED,
    caps: SearchCaps = DEFAULT_CAPS,
    admissible: AdmissibilityGate | None = None,
) -> Optional[Witness]:
    """First witness in deterministic order satisfying AC2, if any.

    Returns None when AC1 fails (nothing to certify) or when the exhaustive
    search over partitions and settings comes up empty. The tuple x' equal
    to the actual x is skipped: AC2(a) and AC2(b) cannot both hold for it.
    """
    endo = [d.name for d in model.endogenous]
    if len(endo) > caps.max_vars:
        raise SearchCapExceeded(
            f"witness search over {len(endo)} endogenous variables exceeds the "
            f"cap of {caps.max_vars}; raise max_vars or {CAP_ENV_VAR}"
        )
    for var, _ in cause.assignments:
        if not model.is_endogenous(var):
            raise PreconditionError(f"cause variable {var!r} is not endogenous")
    if not check_ac1(model, context, cause, effect):
        return None

    actual = solve(model, context)
    cause_vars = list(cause.vars())
    actual_x = tuple(actual[v] for v in cause_vars)
    others = [v for v in endo if v not in set(cause_vars)]

    for w_size in range(len(others) + 1):
        for w_set in itertools.combinations(others, w_size):
            z_set = tuple(v for v in endo if v not in set(w_set))
            z_star = actual.restrict(z_set)
            for w_vals in itertools.product(*(model.range_of(v) for v in w_set)):
                for x_prime in itertools.product(
                    *(model.range_of(v) for v in cause_vars)
                ):
                    if x_prime == actual_x:
                        continue
                    witness = Witness(
                        w_set=w_set,
                        z_set=z_set,
                        w_vals=w_vals,
                        x_prime=x_prime,
                        z_star=z_star,
                    )
                    if not _ac2a(model, context, cause, effect, witness):
                        continue
                    if admissible is not None and not admissible(
                        w_set, w_vals, x_prime
                    ):
                        continue
                    if _ac2b(model, context, cause, effect, witness, variant):
                        return witness
    return None


def is_weak_cause(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    witness: Witness,
    variant: Ac2bVariant = Ac2bVariant.UPDATED,
) -> bool:
    """AC1 and AC2 under the given contingency; minimality is not checked."""
    return check_ac1(model, context, cause, effect) and check_ac2(
        model, context, cause, effect, witness, variant
    )


def _proper_subconjunctions(cause: CauseConjunct):
    items = cause.assignments
    for size in range(1, len(items)):
        for combo in itertools.combinations(items, size):
            yield CauseConjunct(combo)


def is_actual_cause(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    variant: Ac2bVariant = Ac2bVariant.UPDATED,
    caps: SearchCaps = DEFAULT_CAPS,
    admissible: AdmissibilityGate | None = None,
) -> Verdict:
    """Full three-clause verdict.

    ``fails_AC3`` reports the first (smallest, then lexicographic) proper
    sub-conjunction that itself passes AC1 and AC2.
    """
    if not check_ac1(model, context, cause, effect):
        return Verdict("fails_AC1")
    witness = find_witness(model, context, cause, effect, variant, caps, admissible)
    if witness is None:
        return Verdict("fails_AC2")
    for sub in _proper_subconjunctions(cause):
        sub_witness = find_witness(
            model, context, sub, effect, variant, caps, admissible
        )
        if sub_witness is not None:
            return Verdict("fails_AC3", witness=witness, smaller_cause=sub)
    return Verdict("cause", witness=witness)


def enumerate_causes(
    model: CausalModel,
    context: Context,
    effect: Formula,
    variant: Ac2bVariant = Ac2bVariant.UPDATED,
    caps: SearchCaps = DEFAULT_CAPS,
    admissible: AdmissibilityGate | None = None,
) -> list[tuple[CauseConjunct, Witness]]:
    """All minimal causes of the effect, each with its certifying witness.

    Candidates are conjunctions of solved actual values over endogenous
    variables not mentioned in the effect (a variable trivially causes its
    own value), up to ``caps.max_conjuncts`` conjuncts, in deterministic
    (size, declaration) order.
    """
    validate_formula(model, effect)
    actual = solve(model, context)
    excluded = formula_vars(effect)
    pool = [d.name for d in model.endogenous if d.name not in excluded]
    found: list[tuple[CauseConjunct, Witness]] = []
    for size in range(1, min(caps.max_conjuncts, len(pool)) + 1):
        for combo in itertools.combinations(pool, size):
            cause = CauseConjunct(tuple((v, actual[v]) for v in combo))
            verdict = is_actual_cause(
                model, context, cause, effect, variant, caps, admissible
            )
            if verdict.is_cause:
                found.append((cause, verdict.witness))
    return found


def check_independence_hypothesis(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    caps: SearchCaps = DEFAULT_CAPS,
) -> bool:
    """Whether every cause variable is insulated from the rest of the model.

    True iff for every subset Y of the non-cause endogenous variables and
    every setting y, intervening Y <- y leaves the truth of the cause
    conjunction unchanged. Always enumerates every subset; use
    ``independence_prefilter`` separately when a cheap necessary condition
    is wanted before paying for the sweep.
    """
    endo = [d.name for d in model.endogenous]
    if len(endo) > caps.max_vars:
        raise SearchCapExceeded(
            f"independence check over {len(endo)} variables exceeds the cap"
        )
    cause_vars = set(cause.vars())
    others = [v for v in endo if v not in cause_vars]
    baseline = eval_formula(model, context, cause.formula())
    target = cause.formula()
    for size in range(1, len(others) + 1):
        for combo in itertools.combinations(others, size):
            for vals in itertools.product(*(model.range_of(v) for v in combo)):
                settings = tuple(zip(combo, vals))
                if eval_formula(
                    model, context, Intervened(settings, target)
                ) != baseline:
                    return False
    return True


def independence_prefilter(model: CausalModel, cause: CauseConjunct) -> bool:
    """Graph-level necessary condition for dependence: some non-cause
    endogenous variable is an ancestor of a cause variable. When False the
    exhaustive check cannot fail; offered as a cheap pre-filter only."""
    endo = {d.name for d in model.endogenous}
    targets = set(cause.vars())
    parents = {
        eq.target: eq.reads() & endo for eq in model.equations if eq.target in endo
    }
    frontier = set(targets)
    seen = set()
    while frontier:
        node = frontier.pop()
        if node in seen:
            continue
        seen.add(node)
        frontier |= parents.get(node, set())
    return bool((seen - targets) & (endo - targets))
