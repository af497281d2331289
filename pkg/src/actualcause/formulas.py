"""Causal formulas: Boolean combinations of primitive events under
stacked intervention prefixes, and consistent event sets.

``eval_formula`` is the single entry point for truth in a (model, context)
pair. Intervened subformulas are evaluated against the solved world of the
corresponding submodel; the solver cache on the model makes repeated
evaluation under the exponential witness searches cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import FormulaError, ModelError
from .model import CausalModel, Context, Intervention, World, solve_with

Formula = Union["PrimitiveEvent", "Not", "And", "Or", "Const", "Intervened"]


@dataclass(frozen=True)
class PrimitiveEvent:
    var: str
    value: str


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Intervened:
    settings: tuple[tuple[str, str], ...]
    body: Formula


@dataclass(frozen=True)
class EventSet:
    """A consistent set of primitive events (no variable set two ways)."""

    events: tuple[PrimitiveEvent, ...]

    def __post_init__(self):
        seen: dict[str, str] = {}
        for ev in self.events:
            if ev.var in seen and seen[ev.var] != ev.value:
                raise FormulaError(
                    f"inconsistent event set: {ev.var}={seen[ev.var]} and "
                    f"{ev.var}={ev.value}"
                )
            seen[ev.var] = ev.value

    def vars(self) -> set[str]:
        return {ev.var for ev in self.events}

    def as_settings(self) -> tuple[tuple[str, str], ...]:
        out: list[tuple[str, str]] = []
        for ev in self.events:
            if (ev.var, ev.value) not in out:
                out.append((ev.var, ev.value))
        return tuple(out)

    def minus_vars(self, names) -> "EventSet":
        drop = set(names)
        return EventSet(tuple(ev for ev in self.events if ev.var not in drop))

    def union(self, other: "EventSet") -> "EventSet":
        extra = [ev for ev in other.events if ev not in self.events]
        return EventSet(self.events + tuple(extra))

    def unparse(self) -> str:
        return "{" + ", ".join(f"{e.var}={e.value}" for e in self.events) + "}"


def conjunction(pairs) -> Formula:
    """Left-folded conjunction of primitive events; empty means true."""
    items = [PrimitiveEvent(var, val) for var, val in pairs]
    if not items:
        return Const(True)
    out: Formula = items[0]
    for ev in items[1:]:
        out = And(out, ev)
    return out


def formula_vars(f: Formula) -> set[str]:
    """Endogenous variables mentioned anywhere, including in prefixes."""
    if isinstance(f, PrimitiveEvent):
        return {f.var}
    if isinstance(f, Not):
        return formula_vars(f.body)
    if isinstance(f, (And, Or)):
        return formula_vars(f.left) | formula_vars(f.right)
    if isinstance(f, Const):
        return set()
    if isinstance(f, Intervened):
        return {v for v, _ in f.settings} | formula_vars(f.body)
    raise TypeError(f"not a formula node: {f!r}")


def is_intervention_free(f: Formula) -> bool:
    if isinstance(f, Intervened):
        return False
    if isinstance(f, Not):
        return is_intervention_free(f.body)
    if isinstance(f, (And, Or)):
        return is_intervention_free(f.left) and is_intervention_free(f.right)
    return True


def validate_formula(model: CausalModel, f: Formula) -> None:
    """Raise FormulaError unless all variables exist, are endogenous, and
    all values lie in their ranges."""
    if isinstance(f, PrimitiveEvent):
        if not model.has_variable(f.var):
            raise FormulaError(f"unknown variable {f.var!r} in formula")
        if model.decl(f.var).kind != "endogenous" and not model.is_pinned(f.var):
            raise FormulaError(f"formula mentions non-endogenous variable {f.var!r}")
        if f.value not in model.range_of(f.var):
            raise FormulaError(
                f"value {f.value!r} not in range of {f.var} "
                f"({{{', '.join(model.range_of(f.var))}}})"
            )
    elif isinstance(f, Not):
        validate_formula(model, f.body)
    elif isinstance(f, (And, Or)):
        validate_formula(model, f.left)
        validate_formula(model, f.right)
    elif isinstance(f, Const):
        pass
    elif isinstance(f, Intervened):
        seen = {}
        for var, val in f.settings:
            if not model.has_variable(var):
                raise FormulaError(f"unknown variable {var!r} in intervention prefix")
            if val not in model.range_of(var):
                raise FormulaError(f"value {val!r} not in range of {var}")
            if var in seen and seen[var] != val:
                raise FormulaError(f"conflicting settings for {var} in one prefix")
            seen[var] = val
        validate_formula(model, f.body)
    else:
        raise FormulaError(f"not a formula node: {f!r}")


def eval_formula(model: CausalModel, context: Context, f: Formula) -> bool:
    """Truth of a causal formula in (model, context)."""
    return _eval(model, context, f, {})


def _eval(model, context, f, overrides: dict) -> bool:
    if isinstance(f, PrimitiveEvent):
        world = solve_with(model, context, overrides)
        try:
            actual = world[f.var]
        except KeyError:
            raise FormulaError(f"unknown variable {f.var!r} in formula")
        if f.value not in model.range_of(f.var):
            raise FormulaError(f"value {f.value!r} not in range of {f.var}")
        return actual == f.value
    if isinstance(f, Not):
        return not _eval(model, context, f.body, overrides)
    if isinstance(f, And):
        return _eval(model, context, f.left, overrides) and _eval(
            model, context, f.right, overrides
        )
    if isinstance(f, Or):
        return _eval(model, context, f.left, overrides) or _eval(
            model, context, f.right, overrides
        )
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Intervened):
        merged = dict(overrides)
        for var, val in f.settings:
            if var in merged and merged[var] != val:
                raise ModelError(
                    f"variable {var!r} is already fixed by an enclosing prefix"
                )
            if model.is_pinned(var):
                raise ModelError(
                    f"variable {var!r} is already fixed by an intervention"
                )
            if not model.is_endogenous(var):
                raise FormulaError(f"cannot intervene on non-endogenous {var!r}")
            merged[var] = val
        return _eval(model, context, f.body, merged)
    raise FormulaError(f"not a formula node: {f!r}")


def holds_everywhere(model: CausalModel, f: Formula) -> bool:
    """Truth in every context (validity in the model)."""
    from .model import enumerate_contexts

    return all(eval_formula(model, u, f) for u in enumerate_contexts(model))


def apply_event_set(
    model: CausalModel, context: Context, s: EventSet, f: Formula
) -> bool:
    """Truth of the formula after forcing every event in the set.

    An empty set is a plain evaluation. The set's consistency is enforced by
    construction; conflicting duplicates cannot reach this point.
    """
    if not s.events:
        return eval_formula(model, context, f)
    return eval_formula(model, context, Intervened(s.as_settings(), f))


def satisfied_by_world(f: Formula, world: World | Mapping[str, str]) -> bool:
    """Evaluate an intervention-free formula directly against a world."""
    assignment = world.as_dict() if isinstance(world, World) else dict(world)
    return _world_eval(f, assignment)


def _world_eval(f: Formula, assignment: Mapping[str, str]) -> bool:
    if isinstance(f, PrimitiveEvent):
        if f.var not in assignment:
            raise FormulaError(f"world does not assign {f.var!r}")
        return assignment[f.var] == f.value
    if isinstance(f, Not):
        return not _world_eval(f.body, assignment)
    if isinstance(f, And):
        return _world_eval(f.left, assignment) and _world_eval(f.right, assignment)
    if isinstance(f, Or):
        return _world_eval(f.left, assignment) or _world_eval(f.right, assignment)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Intervened):
        raise FormulaError("intervention prefixes have no world-level truth")
    raise FormulaError(f"not a formula node: {f!r}")


def intervention_of(s: EventSet) -> Intervention:
    return Intervention(s.as_settings())


# -- printing ---------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_UNIT = 1, 2, 3


def unparse_formula(f: Formula, _prec: int = 0) -> str:
    if isinstance(f, PrimitiveEvent):
        return f"{f.var} = {f.value}"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        body = f.body
        # X != v sugar round-trips through Not(X = v)
        if isinstance(body, PrimitiveEvent):
            return f"{body.var} != {body.value}"
        return f"!{unparse_formula(body, _PREC_UNIT)}"
    if isinstance(f, And):
        text = (
            f"{unparse_formula(f.left, _PREC_AND)} & "
            f"{unparse_formula(f.right, _PREC_AND)}"
        )
        return f"({text})" if _prec > _PREC_AND else text
    if isinstance(f, Or):
        text = (
            f"{unparse_formula(f.left, _PREC_OR)} | "
            f"{unparse_formula(f.right, _PREC_OR)}"
        )
        return f"({text})" if _prec > _PREC_OR else text
    if isinstance(f, Intervened):
        settings = ", ".join(f"{v} <- {x}" for v, x in f.settings)
        return f"[{settings}] {unparse_formula(f.body, _PREC_UNIT)}"
    raise FormulaError(f"not a formula node: {f!r}")
