"""Finite acyclic structural causal models.

A model is a signature (exogenous and endogenous variables, each with a
finite ordered range of value symbols) plus one structural equation per
endogenous variable. A context assigns every exogenous variable; because
models are acyclic it determines a unique solved world. Interventions build
submodels in which the targeted variables are removed from the endogenous
set and substituted as constants into the remaining equations; the removed
variables are retained as pseudo-assignments so solved worlds stay total
over the original endogenous set.

All structures are immutable after construction; operations are pure, and
each model carries a private solve cache keyed by (context, overrides).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .equations import Expr, eval_expr, expr_reads, substitute, unparse_expr
from .errors import ModelError

EXOGENOUS = "exogenous"
ENDOGENOUS = "endogenous"


@dataclass(frozen=True)
class VariableDecl:
    name: str
    values: tuple[str, ...]
    kind: str  # EXOGENOUS | ENDOGENOUS


@dataclass(frozen=True)
class StructuralEquation:
    target: str
    body: Expr

    def reads(self) -> set[str]:
        return expr_reads(self.body)

    def unparse(self) -> str:
        return f"{self.target} := {unparse_expr(self.body)};"


@dataclass(frozen=True)
class Context:
    """Total assignment of value symbols to exogenous variables."""

    values: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict[str, str]:
        return dict(self.values)

    def __getitem__(self, name: str) -> str:
        for var, val in self.values:
            if var == name:
                return val
        raise KeyError(name)


@dataclass(frozen=True)
class World:
    """Total assignment of value symbols to endogenous variables."""

    values: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict[str, str]:
        return dict(self.values)

    def __getitem__(self, name: str) -> str:
        for var, val in self.values:
            if var == name:
                return val
        raise KeyError(name)

    def restrict(self, names) -> tuple[tuple[str, str], ...]:
        keep = set(names)
        return tuple((v, x) for v, x in self.values if v in keep)


@dataclass(frozen=True)
class Intervention:
    """A finite set of endogenous variables forced to fixed values."""

    settings: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict[str, str]:
        return dict(self.settings)


@dataclass(frozen=True, eq=False)
class CausalModel:
    name: str
    variables: tuple[VariableDecl, ...]
    equations: tuple[StructuralEquation, ...]
    # interventions already applied to produce this submodel (kept so solved
    # worlds remain total over the original endogenous set)
    pinned: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_decls", {d.name: d for d in self.variables})
        object.__setattr__(self, "_eqs", {e.target: e for e in self.equations})
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_stats", {"solves": 0})
        object.__setattr__(self, "_order", None)
        pinned_names = {v for v, _ in self.pinned}
        world_names = [d.name for d in self.variables if d.kind == ENDOGENOUS]
        world_names += [v for v in pinned_names if v not in world_names]
        object.__setattr__(self, "_world_names", tuple(world_names))

    # -- signature access -------------------------------------------------

    @property
    def exogenous(self) -> tuple[VariableDecl, ...]:
        return tuple(d for d in self.variables if d.kind == EXOGENOUS)

    @property
    def endogenous(self) -> tuple[VariableDecl, ...]:
        return tuple(d for d in self.variables if d.kind == ENDOGENOUS)

    def decl(self, name: str) -> VariableDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise ModelError(f"unknown variable {name!r} in model {self.name}")

    def has_variable(self, name: str) -> bool:
        return name in self._decls

    def is_endogenous(self, name: str) -> bool:
        return name in self._decls and self._decls[name].kind == ENDOGENOUS

    def is_pinned(self, name: str) -> bool:
        return any(v == name for v, _ in self.pinned)

    def range_of(self, name: str) -> tuple[str, ...]:
        return self.decl(name).values

    def ordinal(self, name: str, value: str) -> int:
        decl = self.decl(name)
        try:
            return decl.values.index(value)
        except ValueError:
            raise ModelError(
                f"value {value!r} not in range of {name} "
                f"({{{', '.join(decl.values)}}})"
            )

    def equation_for(self, name: str) -> StructuralEquation:
        try:
            return self._eqs[name]
        except KeyError:
            raise ModelError(f"no equation for variable {name!r}")

    # -- construction helpers ---------------------------------------------

    def context(self, **assignments) -> Context:
        """Build a validated Context from keyword assignments."""
        return make_context(self, assignments)

    def world(self, **assignments) -> World:
        """Build a validated World from keyword assignments."""
        values = {k: str(v) for k, v in assignments.items()}
        items = []
        for name in self._world_names:
            if name not in values:
                raise ModelError(f"world is missing endogenous variable {name}")
            self.ordinal(name, values[name])
            items.append((name, values[name]))
        extra = set(values) - set(self._world_names)
        if extra:
            raise ModelError(f"world assigns non-endogenous variables: {sorted(extra)}")
        return World(tuple(items))


def make_context(model: CausalModel, assignments: Mapping[str, str]) -> Context:
    values = {k: str(v) for k, v in assignments.items()}
    items = []
    for decl in model.exogenous:
        if decl.name not in values:
            raise ModelError(f"context is missing exogenous variable {decl.name}")
        model.ordinal(decl.name, values[decl.name])
        items.append((decl.name, values[decl.name]))
    extra = set(values) - {d.name for d in model.exogenous}
    if extra:
        raise ModelError(f"context assigns non-exogenous variables: {sorted(extra)}")
    return Context(tuple(items))


# -- validation -----------------------------------------------------------

# joint parent assignments above this are not exhaustively range-checked
_TOTALITY_LIMIT = 4096


def validate(model: CausalModel) -> list[str]:
    """Check every structural invariant; returns diagnostics, empty if sound.

    Covers: non-empty ranges, unique names and values, exactly one equation
    per endogenous variable, equation bodies reading only declared variables
    and never their own target, acyclicity of the endogenous dependency
    graph, and totality (every joint parent assignment maps into the
    target's range).
    """
    diags: list[str] = []
    seen: set[str] = set()
    for decl in model.variables:
        if decl.name in seen:
            diags.append(f"duplicate variable name: {decl.name}")
        seen.add(decl.name)
        if not decl.values:
            diags.append(f"empty range: {decl.name}")
        if len(set(decl.values)) != len(decl.values):
            diags.append(f"duplicate values in range of {decl.name}")
        if decl.kind not in (EXOGENOUS, ENDOGENOUS):
            diags.append(f"unknown kind {decl.kind!r} for {decl.name}")

    endo_names = {d.name for d in model.endogenous}
    eq_targets = [e.target for e in model.equations]
    for target in eq_targets:
        if target not in endo_names:
            diags.append(f"equation for non-endogenous variable: {target}")
    for name in endo_names:
        n = eq_targets.count(name)
        if n == 0:
            diags.append(f"missing equation: {name}")
        elif n > 1:
            diags.append(f"multiple equations: {name}")

    for eq in model.equations:
        reads = eq.reads()
        if eq.target in reads:
            diags.append(f"self-reference: equation for {eq.target} reads itself")
        for read in sorted(reads):
            if read not in seen:
                diags.append(
                    f"undeclared variable {read!r} read by equation for {eq.target}"
                )

    if not diags:
        cycle = _find_cycle(model)
        if cycle:
            diags.append("cycle: " + " -> ".join(cycle))
    if not diags:
        diags.extend(_totality_diagnostics(model))
    return diags


def _find_cycle(model: CausalModel) -> Optional[list[str]]:
    endo = {d.name for d in model.endogenous}
    edges = {
        eq.target: sorted(eq.reads() & endo)
        for eq in model.equations
        if eq.target in endo
    }
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(node):
        state[node] = 1
        stack.append(node)
        for nxt in edges.get(node, ()):
            if state.get(nxt) == 1:
                return stack[stack.index(nxt):] + [nxt]
            if state.get(nxt) is None:
                found = visit(nxt)
                if found:
                    return found
        stack.pop()
        state[node] = 2
        return None

    for name in sorted(edges):
        if state.get(name) is None:
            found = visit(name)
            if found:
                return found
    return None


def _totality_diagnostics(model: CausalModel) -> list[str]:
    diags = []
    for eq in model.equations:
        parents = sorted(eq.reads())
        ranges = [model.range_of(p) for p in parents]
        combos = 1
        for r in ranges:
            combos *= len(r)
        if combos > _TOTALITY_LIMIT:
            continue
        width = len(model.range_of(eq.target))
        for combo in itertools.product(*(range(len(r)) for r in ranges)):
            env = dict(zip(parents, combo))
            result = eval_expr(eq.body, env)
            if not 0 <= result < width:
                vals = ", ".join(f"{p}={model.range_of(p)[i]}" for p, i in env.items())
                diags.append(
                    f"equation for {eq.target} leaves its range at [{vals}] "
                    f"(got index {result}, range size {width})"
                )
                break
    return diags


# -- core operations ------------------------------------------------------


def topological_order(model: CausalModel) -> list[str]:
    """Endogenous variables ordered so each follows everything it reads.

    Deterministic: among ready variables the one declared first is emitted
    first. Raises ModelError on a dependency cycle.
    """
    if model._order is not None:
        return list(model._order)
    endo = [d.name for d in model.endogenous]
    endo_set = set(endo)
    remaining = {n: model.equation_for(n).reads() & endo_set for n in endo}
    order: list[str] = []
    while remaining:
        ready = [n for n in endo if n in remaining and not remaining[n]]
        if not ready:
            raise ModelError(f"cycle among endogenous variables: {sorted(remaining)}")
        nxt = ready[0]
        del remaining[nxt]
        for waits in remaining.values():
            waits.discard(nxt)
        order.append(nxt)
    object.__setattr__(model, "_order", tuple(order))
    return order


def solve(model: CausalModel, context: Context) -> World:
    """The unique world satisfying every equation under the context."""
    return solve_with(model, context, {})


def solve_with(
    model: CausalModel, context: Context, overrides: Mapping[str, str]
) -> World:
    """Solve while forcing some endogenous variables to fixed values.

    Equivalent to ``solve(intervene(model, iv), context)`` without building
    the submodel; forced variables keep their given values and everything
    else follows its equation. Results are cached per model.
    """
    key = (context.values, tuple(sorted(overrides.items())))
    cached = model._cache.get(key)
    if cached is not None:
        return cached

    ctx = context.as_dict()
    env: dict[str, int] = {}
    for decl in model.exogenous:
        if decl.name not in ctx:
            raise ModelError(f"context is missing exogenous variable {decl.name}")
        env[decl.name] = model.ordinal(decl.name, ctx[decl.name])

    forced: dict[str, str] = dict(model.pinned)
    for var, val in overrides.items():
        if model.is_pinned(var):
            raise ModelError(f"variable {var!r} is already fixed by an intervention")
        if not model.is_endogenous(var):
            raise ModelError(f"cannot force non-endogenous variable {var!r}")
        model.ordinal(var, val)
        forced[var] = val

    assignment: dict[str, str] = dict(model.pinned)
    for var, val in model.pinned:
        env[var] = model.ordinal(var, val)
    for name in topological_order(model):
        if name in forced:
            value = forced[name]
            env[name] = model.ordinal(name, value)
        else:
            eq = model.equation_for(name)
            idx = eval_expr(eq.body, env)
            values = model.range_of(name)
            if not 0 <= idx < len(values):
                raise ModelError(
                    f"equation for {name} produced index {idx}, outside its range"
                )
            value = values[idx]
            env[name] = idx
        assignment[name] = value

    world = World(tuple((name, assignment[name]) for name in model._world_names))
    model._cache[key] = world
    model._stats["solves"] += 1
    return world


def intervene(model: CausalModel, iv: Intervention) -> CausalModel:
    """Submodel with the intervened variables forced to constants.

    The variables leave the endogenous set (their equations are deleted) and
    every remaining equation has them substituted by the fixed value. They
    are recorded as pinned so solved worlds stay total. Idempotent for
    identical settings; order-independent for disjoint settings.
    """
    settings = iv.settings if isinstance(iv, Intervention) else tuple(iv.items())
    seen: dict[str, str] = {}
    for var, val in settings:
        if var in seen:
            if seen[var] != val:
                raise ModelError(f"conflicting settings for {var} in one intervention")
            continue
        seen[var] = val
    fixed: dict[str, int] = {}
    for var, val in seen.items():
        if not model.has_variable(var):
            raise ModelError(f"cannot intervene on unknown variable {var!r}")
        if model.is_pinned(var):
            if dict(model.pinned)[var] == val:
                continue  # identical re-intervention is a no-op
            raise ModelError(f"variable {var!r} is already fixed by an intervention")
        if not model.is_endogenous(var):
            raise ModelError(f"cannot intervene on exogenous variable {var!r}")
        fixed[var] = model.ordinal(var, val)
    if not fixed:
        return model

    variables = []
    for decl in model.variables:
        if decl.name in fixed and decl.kind == ENDOGENOUS:
            continue
        variables.append(decl)
    equations = tuple(
        StructuralEquation(eq.target, substitute(eq.body, fixed))
        for eq in model.equations
        if eq.target not in fixed
    )
    pinned = dict(model.pinned)
    pinned.update({var: model.range_of(var)[idx] for var, idx in fixed.items()})
    sub = CausalModel(
        name=model.name,
        variables=tuple(variables),
        equations=equations,
        pinned=tuple(pinned.items()),
    )
    # pinned variables keep their declaration for ordinal/range lookups, and
    # solved worlds keep the parent model's variable order
    object.__setattr__(
        sub, "_decls", {**sub._decls, **{v: model.decl(v) for v in pinned}}
    )
    object.__setattr__(sub, "_world_names", model._world_names)
    return sub


def enumerate_contexts(model: CausalModel) -> Iterator[Context]:
    """Every total exogenous assignment, exactly once, in declaration order.

    Lexicographic over declared value order; the first-declared variable
    varies slowest. A model without exogenous variables yields one empty
    context.
    """
    names = [d.name for d in model.exogenous]
    ranges = [d.values for d in model.exogenous]
    for combo in itertools.product(*ranges):
        yield Context(tuple(zip(names, combo)))


def solve_count(model: CausalModel) -> int:
    """Number of distinct solver evaluations performed on this model."""
    return model._stats["solves"]
