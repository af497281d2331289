"""The causal necessity test: sufficiency, strong sufficiency, the
four-condition membership test, and the two bridge-theorem checkers.

An event set S is sufficient for an effect when forcing S makes the effect
true in every context under consideration (all of them, or an explicit
restricted set; the restricted form exists because quantifying over every
context is arguably too strong, as the weather-vote example shows).
Sufficiency is not monotone, so strong sufficiency re-checks it under every
augmentation of S by events that actually hold.

A conjunction passes the test when it is contained in an actually-true,
strongly sufficient event set whose remainder loses strong sufficiency
(NT1-NT3), and no proper sub-conjunction passes the same conditions (NT4).
Causes under this test are provably single conjuncts; the audit operation
rechecks that exhaustively.

The two theorem checkers verify a supplied premise by brute quantification:
``check_sh`` (four conditions) bridges from a necessity-test cause to the
counterfactual definition; ``check_sn`` (three conditions) bridges back,
relative to the two-context set {u, u'}.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

from .errors import PreconditionError, SearchCapExceeded
from .formulas import (
    EventSet,
    Formula,
    Intervened,
    Not,
    PrimitiveEvent,
    conjunction,
    eval_formula,
    formula_vars,
    validate_formula,
)
from .hp import (
    CauseConjunct,
    DEFAULT_CAPS,
    SearchCaps,
    Witness,
    _proper_subconjunctions,
)
from .model import CausalModel, Context, enumerate_contexts, solve

log = logging.getLogger(__name__)


class _AllContexts:
    """Distinguished context-set value: quantify over every context."""

    def __repr__(self):
        return "ALL_CONTEXTS"


ALL_CONTEXTS = _AllContexts()
ContextSet = Union[_AllContexts, tuple[Context, ...]]


def resolve_context_set(model: CausalModel, u_set: ContextSet) -> list[Context]:
    if isinstance(u_set, _AllContexts):
        return list(enumerate_contexts(model))
    contexts = list(u_set)
    if not contexts:
        raise PreconditionError("a restricted context set must be non-empty")
    return contexts


@dataclass(frozen=True)
class NessWitness:
    """Certificate: the sufficient set containing the cause, and the context
    exhibiting that the remainder is not strongly sufficient."""

    event_set: EventSet
    insufficiency_context: Context


@dataclass(frozen=True)
class ShPremise:
    t_set: tuple[str, ...]
    alt_context: Context


@dataclass(frozen=True)
class SnPremise:
    w_prime: tuple[str, ...]
    alt_context: Context


@dataclass(frozen=True)
class ShReport:
    sh1: bool
    sh2: bool
    sh3: bool
    sh4: bool
    sh2_appendix: Optional[bool] = None

    @property
    def overall(self) -> bool:
        return self.sh1 and self.sh2 and self.sh3 and self.sh4


@dataclass(frozen=True)
class SnReport:
    sn1: bool
    sn2: bool
    sn3: bool

    @property
    def overall(self) -> bool:
        return self.sn1 and self.sn2 and self.sn3


@dataclass(frozen=True)
class AuditReport:
    singleton_causes: tuple[str, ...]
    multi_checked: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def is_sufficient(
    model: CausalModel,
    s: EventSet,
    effect: Formula,
    u_set: ContextSet = ALL_CONTEXTS,
) -> bool:
    """Forcing the events of s yields the effect in every context of u_set."""
    validate_formula(model, effect)
    contexts = resolve_context_set(model, u_set)
    return all(_forced(model, u, s, effect) for u in contexts)


def _forced(model, context, s: EventSet, effect) -> bool:
    if not s.events:
        return eval_formula(model, context, effect)
    return eval_formula(model, context, Intervened(s.as_settings(), effect))


def _actual_events(model, context, exclude_vars) -> list[PrimitiveEvent]:
    world = solve(model, context)
    return [
        PrimitiveEvent(d.name, world[d.name])
        for d in model.endogenous
        if d.name not in exclude_vars
    ]


def is_strongly_sufficient(
    model: CausalModel,
    context: Context,
    s: EventSet,
    effect: Formula,
    u_set: ContextSet = ALL_CONTEXTS,
    context_filter: Callable[[Context], bool] | None = None,
) -> tuple[bool, Optional[tuple[EventSet, Context]]]:
    """Whether s stays sufficient under every augmentation by events that
    actually hold in (model, context).

    Augmentations range over subsets of the actually-true events of
    variables not already set by s, in (size, declaration) order; the first
    failing (augmentation, context) pair is returned as the counterexample.
    ``context_filter``, when given, restricts which contexts may witness a
    failure (the default-aware necessity test uses it); filtered-out
    failures do not count against sufficiency.
    """
    validate_formula(model, effect)
    contexts = resolve_context_set(model, u_set)
    if context_filter is not None:
        witness_contexts = [u for u in contexts if context_filter(u)]
    else:
        witness_contexts = contexts
    extras = _actual_events(model, context, s.vars())
    for size in range(len(extras) + 1):
        for combo in itertools.combinations(extras, size):
            augmented = s.union(EventSet(tuple(combo)))
            for u in witness_contexts:
                if not _forced(model, u, augmented, effect):
                    return False, (EventSet(tuple(combo)), u)
    return True, None


def is_ness_cause(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    u_set: ContextSet = ALL_CONTEXTS,
    caps: SearchCaps = DEFAULT_CAPS,
    context_filter: Callable[[Context], bool] | None = None,
) -> Optional[NessWitness]:
    """Membership certificate for the necessity test, or None.

    The witness event set is the smallest (size, then declaration order)
    extension of the cause's events by actually-true events satisfying
    NT1-NT3; NT4 is then verified by re-running the same search on every
    proper sub-conjunction. Both the cause conjunction and the effect must
    actually hold, mirroring the actuality clause of the counterfactual
    definition.
    """
    validate_formula(model, effect)
    if len(model.endogenous) > caps.max_vars:
        raise SearchCapExceeded(
            f"necessity-test search over {len(model.endogenous)} variables "
            f"exceeds the cap of {caps.max_vars}"
        )
    if not eval_formula(model, context, effect):
        return None
    if not eval_formula(model, context, cause.formula()):
        return None

    found = _find_nt123(model, context, cause, effect, u_set, context_filter)
    if found is None:
        return None
    for sub in _proper_subconjunctions(cause):
        if _find_nt123(model, context, sub, effect, u_set, context_filter) is not None:
            return None  # NT4: a smaller conjunction already qualifies
    return found


def _find_nt123(
    model, context, cause, effect, u_set, context_filter
) -> Optional[NessWitness]:
    cause_events = tuple(PrimitiveEvent(v, x) for v, x in cause.assignments)
    core = EventSet(cause_events)
    extras = _actual_events(model, context, set(cause.vars()))
    for size in range(len(extras) + 1):
        for combo in itertools.combinations(extras, size):
            s = core.union(EventSet(tuple(combo)))
            nt2, _ = is_strongly_sufficient(model, context, s, effect, u_set)
            if not nt2:
                continue
            remainder = s.minus_vars(cause.vars())
            nt3_holds, counterexample = is_strongly_sufficient(
                model,
                context,
                remainder,
                effect,
                u_set,
                context_filter=context_filter,
            )
            if nt3_holds:
                continue  # remainder still strongly sufficient: NT3 fails
            _, u_prime = counterexample
            return NessWitness(event_set=s, insufficiency_context=u_prime)
    return None


def is_ness_cause_default_aware(
    ext,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    u_set: ContextSet = ALL_CONTEXTS,
    caps: SearchCaps = DEFAULT_CAPS,
) -> Optional[NessWitness]:
    """Necessity test where the context exhibiting NT3's failure must
    determine a world no less normal than the actual one."""
    from .normality import rank_of, world_of_context

    actual_rank = rank_of(ext, world_of_context(ext, context))

    def admissible(u: Context) -> bool:
        return rank_of(ext, world_of_context(ext, u)) <= actual_rank

    return is_ness_cause(
        ext.base, context, cause, effect, u_set, caps, context_filter=admissible
    )


def enumerate_ness_causes(
    model: CausalModel,
    context: Context,
    effect: Formula,
    u_set: ContextSet = ALL_CONTEXTS,
    caps: SearchCaps = DEFAULT_CAPS,
) -> list[tuple[CauseConjunct, NessWitness]]:
    """All conjunctions (over variables outside the effect, actual values,
    up to the conjunct cap) passing the necessity test."""
    validate_formula(model, effect)
    actual = solve(model, context)
    excluded = formula_vars(effect)
    pool = [d.name for d in model.endogenous if d.name not in excluded]
    out = []
    for size in range(1, min(caps.max_conjuncts, len(pool)) + 1):
        for combo in itertools.combinations(pool, size):
            cause = CauseConjunct(tuple((v, actual[v]) for v in combo))
            witness = is_ness_cause(model, context, cause, effect, u_set, caps)
            if witness is not None:
                out.append((cause, witness))
    return out


def single_conjunct_audit(
    model: CausalModel,
    context: Context,
    effect: Formula,
    u_set: ContextSet = ALL_CONTEXTS,
    caps: SearchCaps = DEFAULT_CAPS,
) -> AuditReport:
    """Exhaustively confirm that only single conjuncts pass the test.

    Checks every multi-conjunct candidate up to the cap; any that passes is
    a violation (none is expected). Singleton causes found along the way are
    reported for context.
    """
    singles = []
    violations = []
    multi_checked = 0
    for cause, _ in enumerate_ness_causes(model, context, effect, u_set, caps):
        if len(cause.assignments) == 1:
            singles.append(cause.unparse())
        else:
            violations.append(cause.unparse())
    actual = solve(model, context)
    excluded = formula_vars(effect)
    pool = [d.name for d in model.endogenous if d.name not in excluded]
    for size in range(2, min(caps.max_conjuncts, len(pool)) + 1):
        for _ in itertools.combinations(pool, size):
            multi_checked += 1
    return AuditReport(
        singleton_causes=tuple(singles),
        multi_checked=multi_checked,
        violations=tuple(violations),
    )


# -- bridge checkers --------------------------------------------------------


def _settings_product(model, names) -> Iterator[tuple[tuple[str, str], ...]]:
    ranges = [model.range_of(v) for v in names]
    for combo in itertools.product(*ranges):
        yield tuple(zip(names, combo))


def _subsets(seq):
    items = list(seq)
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def _agree(model, u, u_prime, settings, effect) -> bool:
    f = Intervened(settings, effect) if settings else effect
    return eval_formula(model, u, f) == eval_formula(model, u_prime, f)


def check_sh(
    model: CausalModel,
    context: Context,
    sh: ShPremise,
    cause: CauseConjunct,
    effect: Formula,
    ness_witness: NessWitness,
    caps: SearchCaps = DEFAULT_CAPS,
    compare_appendix: bool = False,
) -> ShReport:
    """Verify a premise for the necessity-to-counterfactual bridge.

    The four conditions are checked by exhaustive quantification exactly as
    stated; ``compare_appendix`` additionally evaluates the alternative
    phrasing of the insulation condition (the side-variables depend only on
    the context) and logs a warning if the two disagree, without affecting
    the verdict.
    """
    if len(cause.assignments) != 1:
        raise PreconditionError("the bridge premise applies to single conjuncts")
    if len(model.endogenous) > caps.max_vars:
        raise SearchCapExceeded("bridge check exceeds the variable cap")
    s = ness_witness.event_set
    x_var, x_val = cause.assignments[0]
    if PrimitiveEvent(x_var, x_val) not in s.events:
        raise PreconditionError("the witness event set must contain the cause")
    blocked = formula_vars(effect) | s.vars()
    if set(sh.t_set) & blocked:
        raise PreconditionError(
            "side variables must avoid the effect and the witness set"
        )

    u, u_prime = context, sh.alt_context
    endo = [d.name for d in model.endogenous]

    # SH1: without the cause, the remainder does not force the effect at u'
    remainder = s.minus_vars({x_var})
    if remainder.events:
        sh1 = eval_formula(
            model, u_prime, Intervened(remainder.as_settings(), Not(effect))
        )
    else:
        sh1 = eval_formula(model, u_prime, Not(effect))

    sh2 = _sh2_body(model, u, u_prime, sh.t_set, endo)
    sh2_appendix = None
    if compare_appendix:
        sh2_appendix = _sh2_appendix(model, u, u_prime, sh.t_set, endo)
        if sh2_appendix != sh2:
            log.warning(
                "insulation condition phrasings disagree (main=%s, alt=%s) "
                "for T=%s at %s",
                sh2,
                sh2_appendix,
                sh.t_set,
                model.name,
            )

    # SH3: the effect is determined by T and X identically in both contexts
    sh3 = True
    rest = [v for v in endo if v not in set(sh.t_set) and v != x_var]
    for t_settings in _settings_product(model, sh.t_set):
        for t_rest in _subsets(rest):
            for rest_settings in _settings_product(model, t_rest):
                for x_alt in model.range_of(x_var):
                    settings = (
                        tuple(t_settings)
                        + tuple(rest_settings)
                        + ((x_var, x_alt),)
                    )
                    if not _agree(model, u, u_prime, settings, effect):
                        sh3 = False
                        break
                if not sh3:
                    break
            if not sh3:
                break
        if not sh3:
            break

    # SH4: at u, forcing only the cause keeps the whole witness set true
    sh4 = True
    s_formula = conjunction([(e.var, e.value) for e in s.events])
    outside = [v for v in endo if v not in s.vars()]
    for t_rest in _subsets(outside):
        for rest_settings in _settings_product(model, t_rest):
            settings = ((x_var, x_val),) + tuple(rest_settings)
            if not eval_formula(model, u, Intervened(settings, s_formula)):
                sh4 = False
                break
        if not sh4:
            break

    return ShReport(sh1=sh1, sh2=sh2, sh3=sh3, sh4=sh4, sh2_appendix=sh2_appendix)


def _sh2_body(model, u, u_prime, t_set, endo) -> bool:
    # each side variable is unmoved by any setting of all other endogenous
    # variables, in both contexts
    for t_var in t_set:
        others = [v for v in endo if v != t_var]
        for ctx in (u, u_prime):
            actual = solve(model, ctx)[t_var]
            for settings in _settings_product(model, others):
                f = Intervened(settings, PrimitiveEvent(t_var, actual))
                if not eval_formula(model, ctx, f):
                    return False
    return True


def _sh2_appendix(model, u, u_prime, t_set, endo) -> bool:
    # alternative phrasing: the side variables jointly depend only on the
    # context (any subset of the others, any setting)
    if not t_set:
        return True
    others = [v for v in endo if v not in set(t_set)]
    for ctx in (u, u_prime):
        world = solve(model, ctx)
        t_formula = conjunction([(v, world[v]) for v in t_set])
        for sub in _subsets(others):
            for settings in _settings_product(model, sub):
                f = Intervened(settings, t_formula) if settings else t_formula
                if not eval_formula(model, ctx, f):
                    return False
    return True


def search_sh(
    model: CausalModel,
    context: Context,
    cause: CauseConjunct,
    effect: Formula,
    ness_witness: NessWitness,
    caps: SearchCaps = DEFAULT_CAPS,
) -> Optional[ShPremise]:
    """First (side-variable set, alternative context) premise passing all
    four bridge conditions; sets grow by size then declaration order."""
    if len(cause.assignments) != 1:
        raise PreconditionError("the bridge premise applies to single conjuncts")
    blocked = formula_vars(effect) | ness_witness.event_set.vars()
    eligible = [d.name for d in model.endogenous if d.name not in blocked]
    for size in range(len(eligible) + 1):
        for t_set in itertools.combinations(eligible, size):
            for u_prime in enumerate_contexts(model):
                premise = ShPremise(t_set=t_set, alt_context=u_prime)
                if check_sh(
                    model, context, premise, cause, effect, ness_witness, caps
                ).overall:
                    return premise
    return None


def check_sn(
    model: CausalModel,
    context: Context,
    sn: SnPremise,
    cause: CauseConjunct,
    effect: Formula,
    hp_witness: Witness,
    caps: SearchCaps = DEFAULT_CAPS,
) -> SnReport:
    """Verify a premise for the counterfactual-to-necessity bridge.

    The kept contingency variables must hold their contingency values in
    the actual situation; the three conditions are then checked by
    exhaustive quantification over subsets and settings.
    """
    if len(cause.assignments) != 1:
        raise PreconditionError("the bridge premise applies to single conjuncts")
    if len(model.endogenous) > caps.max_vars:
        raise SearchCapExceeded("bridge check exceeds the variable cap")
    x_var, x_val = cause.assignments[0]
    w_map = dict(hp_witness.w_settings())
    if not set(sn.w_prime) <= set(hp_witness.w_set):
        raise PreconditionError("kept variables must come from the witness W")
    actual = solve(model, context)
    for v in sn.w_prime:
        if actual[v] != w_map[v]:
            raise PreconditionError(
                f"kept variable {v} does not hold its contingency value actually"
            )

    u, u_prime = context, sn.alt_context
    w_prime_settings = tuple((v, w_map[v]) for v in sn.w_prime)
    w_rest = [v for v in hp_witness.w_set if v not in set(sn.w_prime)]
    x_prime_val = hp_witness.x_prime[list(cause.vars()).index(x_var)]

    # SN1: at u', keeping W' makes the alternative x' and the rest of the
    # contingency come about on their own
    goal = conjunction([(x_var, x_prime_val)] + [(v, w_map[v]) for v in w_rest])
    sn1 = eval_formula(
        model,
        u_prime,
        Intervened(w_prime_settings, goal) if w_prime_settings else goal,
    )

    z_rest = [v for v in hp_witness.z_set if v != x_var]

    # SN2: the rest of the contingency is insulated from the causal path at u'
    sn2 = True
    if w_rest:
        w_rest_formula = conjunction([(v, w_map[v]) for v in w_rest])
        for z_sub in _subsets(z_rest):
            for z_settings in _settings_product(model, z_sub):
                settings = ((x_var, x_val),) + w_prime_settings + tuple(z_settings)
                if not eval_formula(
                    model, u_prime, Intervened(settings, w_rest_formula)
                ):
                    sn2 = False
                    break
            if not sn2:
                break

    # SN3: under the full contingency, the effect cannot tell u from u'
    sn3 = True
    full_w = hp_witness.w_settings()
    for z_sub in _subsets(z_rest):
        for z_settings in _settings_product(model, z_sub):
            for x_alt in model.range_of(x_var):
                settings = ((x_var, x_alt),) + full_w + tuple(z_settings)
                if not _agree(model, u, u_prime, settings, effect):
                    sn3 = False
                    break
            if not sn3:
                break
        if not sn3:
            break

    return SnReport(sn1=sn1, sn2=sn2, sn3=sn3)
