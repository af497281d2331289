"""Dispatch parsed queries to the engines and assemble reports.

One report per query: the query echo, the definition used, the verdict, a
machine-checkable certificate (counterfactual witness, necessity-test
witness, or nothing), solver statistics, and wall time. Reports serialize
to a versioned JSON schema; certificates embed enough detail to re-verify
without re-searching.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional

from .dsl import ModelDocument, Query
from .errors import UsageError
from .formulas import unparse_formula
from .hp import (
    Ac2bVariant,
    DEFAULT_CAPS,
    SearchCaps,
    Verdict,
    Witness,
    is_actual_cause,
)
from .model import Context, solve_count
from .ness import (
    ALL_CONTEXTS,
    NessWitness,
    is_ness_cause,
    is_ness_cause_default_aware,
)
from .normality import ExtendedCausalModel, is_cause_extended

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class QueryReport:
    query: str
    definition: str
    model: str
    context: str
    verdict: str
    certificate: Optional[object]  # Witness | NessWitness | None
    smaller_cause: Optional[str]
    stats: dict
    timing_ms: float

    @property
    def is_cause(self) -> bool:
        return self.verdict == "cause"


def run_query(
    doc: ModelDocument,
    query: Query,
    caps: SearchCaps = DEFAULT_CAPS,
    strict_normality: bool = False,
    ranking_name: str | None = None,
) -> QueryReport:
    model = doc.model(query.model)
    context = doc.context_for(query.context, query.model)
    ranking_name = query.ranking or ranking_name
    started = time.perf_counter()
    solves_before = solve_count(model)

    definition = query.definition
    certificate: Optional[object] = None
    smaller: Optional[str] = None

    if definition in ("hp-updated", "hp-original"):
        variant = (
            Ac2bVariant.UPDATED if definition == "hp-updated" else Ac2bVariant.ORIGINAL
        )
        verdict = is_actual_cause(
            model, context, query.cause, query.effect, variant, caps
        )
        verdict_str, certificate, smaller = _unpack_hp(verdict)
    elif definition == "hp-extended":
        ext = _extended(doc, query, model, ranking_name)
        verdict = is_cause_extended(
            ext,
            context,
            query.cause,
            query.effect,
            Ac2bVariant.UPDATED,
            caps,
            strict=strict_normality,
        )
        verdict_str, certificate, smaller = _unpack_hp(verdict)
    elif definition == "ness":
        witness = is_ness_cause(
            model, context, query.cause, query.effect, ALL_CONTEXTS, caps
        )
        verdict_str = "cause" if witness else "not_cause"
        certificate = witness
    elif definition == "ness-default":
        ext = _extended(doc, query, model, ranking_name)
        witness = is_ness_cause_default_aware(
            ext, context, query.cause, query.effect, ALL_CONTEXTS, caps
        )
        verdict_str = "cause" if witness else "not_cause"
        certificate = witness
    elif definition == "ness-restricted":
        if not query.context_names:
            raise UsageError("ness-restricted needs a non-empty contexts list")
        contexts = tuple(
            doc.context_for(name, query.model) for name in query.context_names
        )
        witness = is_ness_cause(
            model, context, query.cause, query.effect, contexts, caps
        )
        verdict_str = "cause" if witness else "not_cause"
        certificate = witness
    else:
        raise UsageError(f"unknown definition {definition!r}")

    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return QueryReport(
        query=f"cause {query.cause.unparse()} of ?",
        definition=definition,
        model=query.model,
        context=query.context,
        verdict=verdict_str,
        certificate=certificate,
        smaller_cause=smaller,
        stats={"solves": solve_count(model) - solves_before},
        timing_ms=elapsed_ms,
    )


def _unpack_hp(verdict: Verdict):
    smaller = verdict.smaller_cause.unparse() if verdict.smaller_cause else None
    return verdict.status, verdict.witness, smaller


def _extended(doc, query, model, ranking_name) -> ExtendedCausalModel:
    if ranking_name is None:
        raise UsageError(f"definition {query.definition!r} needs a ranking")
    ranking = doc.ranking_for(ranking_name, query.model)
    return ExtendedCausalModel(base=model, ranking=ranking)


# -- serialization -----------------------------------------------------------


def witness_to_dict(witness: Witness) -> dict:
    return {
        "kind": "counterfactual",
        "w_set": list(witness.w_set),
        "w_vals": list(witness.w_vals),
        "x_prime": list(witness.x_prime),
        "z_set": list(witness.z_set),
        "z_star": {var: val for var, val in witness.z_star},
    }


def witness_from_dict(data: dict) -> Witness:
    return Witness(
        w_set=tuple(data["w_set"]),
        z_set=tuple(data["z_set"]),
        w_vals=tuple(data["w_vals"]),
        x_prime=tuple(data["x_prime"]),
        z_star=tuple(sorted(data["z_star"].items())),
    )


def ness_witness_to_dict(witness: NessWitness) -> dict:
    return {
        "kind": "necessity",
        "event_set": [[e.var, e.value] for e in witness.event_set.events],
        "insufficiency_context": {
            var: val for var, val in witness.insufficiency_context.values
        },
    }


def certificate_to_dict(certificate) -> Optional[dict]:
    if certificate is None:
        return None
    if isinstance(certificate, Witness):
        return witness_to_dict(certificate)
    if isinstance(certificate, NessWitness):
        return ness_witness_to_dict(certificate)
    raise TypeError(f"unknown certificate type: {certificate!r}")


def report_to_dict(report: QueryReport, query_name: str | None = None) -> dict:
    data = {
        "schema": SCHEMA_VERSION,
        "query": query_name or report.query,
        "definition": report.definition,
        "model": report.model,
        "context": report.context,
        "verdict": report.verdict,
        "certificate": certificate_to_dict(report.certificate),
        "stats": report.stats,
        "timing_ms": round(report.timing_ms, 3),
    }
    if report.smaller_cause:
        data["smaller_cause"] = report.smaller_cause
    return data


def to_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
