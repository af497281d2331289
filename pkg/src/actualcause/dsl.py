"""Surface language for models, rankings, contexts, typicality statements,
and named queries, plus the canonical printer.

    model NAME { exogenous U1 : {0,1}; endogenous L : {0,1}; L := U1; }
    context NAME for MODEL { U1 = 1 }
    ranking NAME for MODEL { when <formula> rank N; default rank N; }
    typically <formula> -> <formula> under RANKING;
    query NAME : hp-updated cause L=1 of FF=1 in MODEL at CONTEXT;

Formulas: `X = 1`, `X != 1`, `!f`, `f & g`, `f | g`, `[X <- 1, Y <- 0] f`,
`true`, `false`. Equation bodies additionally allow `+`, `-`, `min`, `max`,
comparisons, and total `case { cond -> v; ...; else -> v; }` expressions.
`#` starts a line comment. Parsing is loss-free up to whitespace: printing
a parsed document reproduces the source token stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import equations as eq
from .errors import CausalError, ParseError
from .formulas import (
    And,
    Const,
    EventSet,
    Formula,
    Intervened,
    Not,
    Or,
    PrimitiveEvent,
    unparse_formula,
)
from .hp import CauseConjunct
from .model import (
    CausalModel,
    Context,
    StructuralEquation,
    VariableDecl,
    make_context,
)
from .normality import RankingClause, RankingFunction

DEFINITIONS = (
    "hp-updated",
    "hp-original",
    "hp-extended",
    "ness",
    "ness-default",
    "ness-restricted",
)

KEYWORDS = {
    "model", "exogenous", "endogenous", "ranking", "for", "when", "rank",
    "default", "context", "typically", "under", "case", "else", "min", "max",
    "query", "cause", "of", "in", "at", "with", "contexts", "true", "false",
    "inf",
}

_TWO_CHAR = (":=", "<-", "->", "!=", ">=", "<=")
_ONE_CHAR = "{}()[]:;,=&|!+-<>"


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'int' | 'op' | 'eof'
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token("op", two, line, col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token("op", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("ident", source[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class Query:
    name: str
    definition: str
    cause: CauseConjunct
    effect: Formula
    model: str
    context: str
    ranking: Optional[str] = None
    context_names: tuple[str, ...] = ()


@dataclass(frozen=True)
class TypicalityStatement:
    antecedent: Formula
    consequent: Formula
    ranking: str


@dataclass
class ModelDocument:
    """Everything parsed from one source file, cross-references resolved."""

    models: dict[str, CausalModel] = field(default_factory=dict)
    rankings: dict[str, tuple[str, RankingFunction]] = field(default_factory=dict)
    contexts: dict[str, tuple[str, Context]] = field(default_factory=dict)
    typicality: list[TypicalityStatement] = field(default_factory=list)
    queries: dict[str, Query] = field(default_factory=dict)
    # source order of top-level items, so printing is loss-free
    order: list[tuple[str, object]] = field(default_factory=list)

    def model(self, name: str) -> CausalModel:
        if name not in self.models:
            raise ParseError(f"unknown model {name!r}")
        return self.models[name]

    def context_for(self, name: str, model_name: str) -> Context:
        if name not in self.contexts:
            raise ParseError(f"unknown context {name!r}")
        owner, ctx = self.contexts[name]
        if owner != model_name:
            raise ParseError(
                f"context {name!r} belongs to {owner!r}, not {model_name!r}"
            )
        return ctx

    def ranking_for(self, name: str, model_name: str) -> RankingFunction:
        if name not in self.rankings:
            raise ParseError(f"unknown ranking {name!r}")
        owner, ranking = self.rankings[name]
        if owner != model_name:
            raise ParseError(
                f"ranking {name!r} belongs to {owner!r}, not {model_name!r}"
            )
        return ranking


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("op", "ident")

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise ParseError(
                f"found {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                tok.line,
                tok.column,
                expected=[text],
            )
        return self.advance()

    def expect_ident(self, what="identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(
                f"found {tok.text!r} where a {what} was needed",
                tok.line,
                tok.column,
                expected=[what],
            )
        if tok.text in KEYWORDS:
            raise ParseError(
                f"{tok.text!r} is a reserved word", tok.line, tok.column
            )
        return self.advance()

    def expect_value_token(self) -> Token:
        tok = self.peek()
        if tok.kind not in ("ident", "int") or tok.text in KEYWORDS:
            raise ParseError(
                f"found {tok.text!r} where a value was needed",
                tok.line,
                tok.column,
                expected=["value"],
            )
        return self.advance()

    def fail(self, message: str, tok: Token | None = None, expected=()):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column, expected=expected)

    # -- document ------------------------------------------------------------

    def parse_document(self) -> ModelDocument:
        doc = ModelDocument()
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "model":
                self.parse_model(doc)
            elif tok.text == "ranking":
                self.parse_ranking(doc)
            elif tok.text == "context":
                self.parse_context(doc)
            elif tok.text == "typically":
                self.parse_typicality(doc)
            elif tok.text == "query":
                self.parse_query(doc)
            else:
                self.fail(
                    f"found {tok.text!r} at the top level",
                    tok,
                    expected=["model", "ranking", "context", "typically", "query"],
                )
        return doc

    # -- models ----------------------------------------------------------------

    def parse_model(self, doc: ModelDocument) -> None:
        self.expect("model")
        name_tok = self.expect_ident("model name")
        if name_tok.text in doc.models:
            self.fail(f"model {name_tok.text!r} is declared twice", name_tok)
        self.expect("{")
        decls: list[VariableDecl] = []
        decl_names: dict[str, VariableDecl] = {}
        while self.peek().text in ("exogenous", "endogenous"):
            kind = self.advance().text
            var_tok = self.expect_ident("variable name")
            if var_tok.text in decl_names:
                self.fail(f"variable {var_tok.text!r} declared twice", var_tok)
            self.expect(":")
            self.expect("{")
            values = [self.expect_value_token().text]
            while self.at(","):
                self.advance()
                values.append(self.expect_value_token().text)
            self.expect("}")
            self.expect(";")
            if len(set(values)) != len(values):
                self.fail(f"duplicate values in range of {var_tok.text}", var_tok)
            decl = VariableDecl(var_tok.text, tuple(values), kind)
            decls.append(decl)
            decl_names[decl.name] = decl

        equations: list[StructuralEquation] = []
        targets: set[str] = set()
        while self.peek().kind == "ident" and self.peek().text not in KEYWORDS:
            target_tok = self.expect_ident("equation target")
            target = target_tok.text
            if target not in decl_names:
                self.fail(f"equation for undeclared variable {target!r}", target_tok)
            if decl_names[target].kind != "endogenous":
                self.fail(f"equation target {target!r} is exogenous", target_tok)
            if target in targets:
                self.fail(f"second equation for {target!r}", target_tok)
            targets.add(target)
            self.expect(":=")
            body = self.parse_expr(decl_names, decl_names[target])
            self.expect(";")
            equations.append(StructuralEquation(target, body))
        self.expect("}")
        for decl in decls:
            if decl.kind == "endogenous" and decl.name not in targets:
                self.fail(f"endogenous variable {decl.name!r} has no equation", name_tok)
        doc.models[name_tok.text] = CausalModel(
            name=name_tok.text, variables=tuple(decls), equations=tuple(equations)
        )
        doc.order.append(("model", name_tok.text))

    # -- equation expressions ---------------------------------------------------

    def parse_expr(self, decls, target: VariableDecl):
        left = self.parse_atom(decls, target)
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.advance().text
            right = self.parse_atom(decls, target)
            left = eq.BinOp(op, left, right)
        return left

    def parse_atom(self, decls, target: VariableDecl):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return eq.Num(int(tok.text))
        if tok.text in ("min", "max"):
            self.advance()
            self.expect("(")
            left = self.parse_expr(decls, target)
            self.expect(",")
            right = self.parse_expr(decls, target)
            self.expect(")")
            return eq.MinMax(tok.text, left, right)
        if tok.text == "case":
            return self.parse_case(decls, target)
        if tok.text == "(":
            self.advance()
            inner = self.parse_expr(decls, target)
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            if tok.text in decls:
                return eq.Var(tok.text)
            if tok.text in target.values:
                return eq.ValueRef(tok.text, target.values.index(tok.text))
            self.fail(
                f"{tok.text!r} is neither a variable nor a value of {target.name}",
                tok,
            )
        self.fail(f"found {tok.text!r} in an expression", tok, expected=["expression"])

    def parse_case(self, decls, target: VariableDecl):
        self.expect("case")
        self.expect("{")
        branches = []
        default = None
        while True:
            if self.at("else"):
                self.advance()
                self.expect("->")
                default = self.parse_expr(decls, target)
                self.expect(";")
                break
            cond = self.parse_cond(decls)
            self.expect("->")
            result = self.parse_expr(decls, target)
            self.expect(";")
            branches.append((cond, result))
        self.expect("}")
        if not branches:
            # a case with only an else is legal but pointless; keep it total
            pass
        return eq.Case(tuple(branches), default)

    def parse_cond(self, decls):
        left = self.parse_cond_and(decls)
        while self.at("|"):
            self.advance()
            left = eq.COr(left, self.parse_cond_and(decls))
        return left

    def parse_cond_and(self, decls):
        left = self.parse_cond_unit(decls)
        while self.at("&"):
            self.advance()
            left = eq.CAnd(left, self.parse_cond_unit(decls))
        return left

    def parse_cond_unit(self, decls):
        if self.at("!"):
            self.advance()
            return eq.CNot(self.parse_cond_unit(decls))
        if self.at("("):
            save = self.i
            try:
                self.advance()
                inner = self.parse_cond(decls)
                self.expect(")")
                return inner
            except ParseError:
                self.i = save  # it was a parenthesized arithmetic operand
        return self.parse_relation(decls)

    _RELOPS = ("=", "!=", ">=", "<=", ">", "<")

    def parse_relation(self, decls):
        left = self.parse_cond_operand(decls)
        tok = self.peek()
        if tok.text not in self._RELOPS or tok.kind != "op":
            self.fail(
                f"found {tok.text!r} where a comparison was needed",
                tok,
                expected=list(self._RELOPS),
            )
        op = self.advance().text
        if isinstance(left, eq.Var) and op in ("=", "!="):
            rhs_tok = self.expect_value_token()
            var_range = decls[left.name].values
            if rhs_tok.text in decls:
                right = eq.Var(rhs_tok.text)
            elif rhs_tok.text in var_range:
                right = eq.ValueRef(rhs_tok.text, var_range.index(rhs_tok.text))
            else:
                self.fail(
                    f"value {rhs_tok.text!r} is outside the range of {left.name}",
                    rhs_tok,
                )
            return eq.Cmp(op, left, right)
        right = self.parse_cond_operand(decls)
        return eq.Cmp(op, left, right)

    def parse_cond_operand(self, decls):
        # arithmetic operand inside a condition: variables and integers only
        left = self.parse_cond_atom(decls)
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.advance().text
            left = eq.BinOp(op, left, self.parse_cond_atom(decls))
        return left

    def parse_cond_atom(self, decls):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return eq.Num(int(tok.text))
        if tok.text == "(":
            self.advance()
            inner = self.parse_cond_operand(decls)
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.advance()
            if tok.text in decls:
                return eq.Var(tok.text)
            self.fail(f"undeclared variable {tok.text!r}", tok)
        self.fail(f"found {tok.text!r} in a condition", tok, expected=["operand"])

    # -- rankings, contexts, typicality ------------------------------------------

    def parse_ranking(self, doc: ModelDocument) -> None:
        self.expect("ranking")
        name_tok = self.expect_ident("ranking name")
        if name_tok.text in doc.rankings:
            self.fail(f"ranking {name_tok.text!r} is declared twice", name_tok)
        self.expect("for")
        model_tok = self.expect_ident("model name")
        if model_tok.text not in doc.models:
            self.fail(f"unknown model {model_tok.text!r}", model_tok)
        model = doc.models[model_tok.text]
        self.expect("{")
        clauses = []
        default = None
        while True:
            if self.at("when"):
                when_tok = self.advance()
                condition = self.parse_formula(model)
                self.expect("rank")
                rank = self.parse_rank()
                self.expect(";")
                try:
                    clauses.append(RankingClause(condition, rank))
                except CausalError as exc:
                    self.fail(str(exc), when_tok)
            elif self.at("default"):
                self.advance()
                self.expect("rank")
                default = self.parse_rank()
                self.expect(";")
                break
            else:
                self.fail(
                    f"found {self.peek().text!r} in a ranking block",
                    expected=["when", "default"],
                )
        self.expect("}")
        try:
            ranking = RankingFunction(tuple(clauses), default)
        except CausalError as exc:
            self.fail(str(exc), name_tok)
        doc.rankings[name_tok.text] = (model_tok.text, ranking)
        doc.order.append(("ranking", name_tok.text))

    def parse_rank(self):
        tok = self.peek()
        if tok.text == "inf":
            self.advance()
            return math.inf
        if tok.kind == "int":
            self.advance()
            return int(tok.text)
        self.fail("a rank is a natural number or inf", tok, expected=["int", "inf"])

    def parse_context(self, doc: ModelDocument) -> None:
        self.expect("context")
        name_tok = self.expect_ident("context name")
        if name_tok.text in doc.contexts:
            self.fail(f"context {name_tok.text!r} is declared twice", name_tok)
        self.expect("for")
        model_tok = self.expect_ident("model name")
        if model_tok.text not in doc.models:
            self.fail(f"unknown model {model_tok.text!r}", model_tok)
        model = doc.models[model_tok.text]
        self.expect("{")
        assignments = {}
        while True:
            var_tok = self.expect_ident("exogenous variable")
            self.expect("=")
            val_tok = self.expect_value_token()
            if var_tok.text in assignments:
                self.fail(f"{var_tok.text!r} assigned twice", var_tok)
            assignments[var_tok.text] = val_tok.text
            if self.at(","):
                self.advance()
                continue
            break
        self.expect("}")
        try:
            ctx = make_context(model, assignments)
        except CausalError as exc:
            self.fail(str(exc), name_tok)
        doc.contexts[name_tok.text] = (model_tok.text, ctx)
        doc.order.append(("context", name_tok.text))

    def parse_typicality(self, doc: ModelDocument) -> None:
        self.expect("typically")
        start = self.peek()
        # resolve against the ranking's model, which is named at the end
        save = self.i
        self._skip_until("under")
        self.expect("under")
        ranking_tok = self.expect_ident("ranking name")
        if ranking_tok.text not in doc.rankings:
            self.fail(f"unknown ranking {ranking_tok.text!r}", ranking_tok)
        model = doc.models[doc.rankings[ranking_tok.text][0]]
        end = self.i
        self.i = save
        antecedent = self.parse_formula(model)
        self.expect("->")
        consequent = self.parse_formula(model)
        if self.i != end - 2:
            self.fail("malformed typicality statement", start)
        self.i = end
        self.expect(";")
        doc.typicality.append(
            TypicalityStatement(antecedent, consequent, ranking_tok.text)
        )
        doc.order.append(("typicality", len(doc.typicality) - 1))

    def _skip_until(self, text: str) -> None:
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                self.fail(f"ran off the end looking for {text!r}", tok)
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                depth -= 1
            elif tok.text == text and depth == 0:
                return
            self.advance()

    # -- formulas -----------------------------------------------------------------

    def parse_formula(self, model: CausalModel) -> Formula:
        left = self.parse_formula_and(model)
        while self.at("|"):
            self.advance()
            left = Or(left, self.parse_formula_and(model))
        return left

    def parse_formula_and(self, model: CausalModel) -> Formula:
        left = self.parse_formula_unit(model)
        while self.at("&"):
            self.advance()
            left = And(left, self.parse_formula_unit(model))
        return left

    def parse_formula_unit(self, model: CausalModel) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.advance()
            return Not(self.parse_formula_unit(model))
        if tok.text == "true":
            self.advance()
            return Const(True)
        if tok.text == "false":
            self.advance()
            return Const(False)
        if tok.text == "[":
            self.advance()
            settings = [self.parse_setting(model)]
            while self.at(","):
                self.advance()
                settings.append(self.parse_setting(model))
            self.expect("]")
            body = self.parse_formula_unit(model)
            return Intervened(tuple(settings), body)
        if tok.text == "(":
            self.advance()
            inner = self.parse_formula(model)
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            var_tok = self.advance()
            op_tok = self.peek()
            if op_tok.text not in ("=", "!="):
                self.fail(
                    f"found {op_tok.text!r} after {var_tok.text!r}",
                    op_tok,
                    expected=["=", "!="],
                )
            self.advance()
            val_tok = self.expect_value_token()
            event = self._event(model, var_tok, val_tok)
            return event if op_tok.text == "=" else Not(event)
        self.fail(f"found {tok.text!r} in a formula", tok, expected=["formula"])

    def parse_setting(self, model: CausalModel) -> tuple[str, str]:
        var_tok = self.expect_ident("variable name")
        self.expect("<-")
        val_tok = self.expect_value_token()
        self._check_value(model, var_tok, val_tok)
        return (var_tok.text, val_tok.text)

    def _event(self, model, var_tok, val_tok) -> PrimitiveEvent:
        self._check_value(model, var_tok, val_tok)
        return PrimitiveEvent(var_tok.text, val_tok.text)

    def _check_value(self, model, var_tok, val_tok) -> None:
        if not model.has_variable(var_tok.text):
            self.fail(
                f"unknown variable {var_tok.text!r} in model {model.name}", var_tok
            )
        if val_tok.text not in model.range_of(var_tok.text):
            self.fail(
                f"value {val_tok.text!r} is outside the range of {var_tok.text}",
                val_tok,
            )

    # -- queries ---------------------------------------------------------------

    def parse_query(self, doc: ModelDocument) -> None:
        self.expect("query")
        name_tok = self.expect_ident("query name")
        if name_tok.text in doc.queries:
            self.fail(f"query {name_tok.text!r} is declared twice", name_tok)
        self.expect(":")
        definition = self.parse_definition_tag()
        self.expect("cause")
        # the model is named later; scan ahead for it so events can resolve
        save = self.i
        self._skip_until("in")
        self.expect("in")
        model_tok = self.expect_ident("model name")
        if model_tok.text not in doc.models:
            self.fail(f"unknown model {model_tok.text!r}", model_tok)
        model = doc.models[model_tok.text]
        self.i = save

        assignments = [self.parse_cause_event(model)]
        while self.at("&"):
            self.advance()
            assignments.append(self.parse_cause_event(model))
        self.expect("of")
        effect = self.parse_formula(model)
        self.expect("in")
        self.expect_ident("model name")
        self.expect("at")
        context_tok = self.expect_ident("context name")
        doc.context_for(context_tok.text, model_tok.text)

        ranking = None
        context_names: tuple[str, ...] = ()
        if self.at("with"):
            self.advance()
            ranking_tok = self.expect_ident("ranking name")
            doc.ranking_for(ranking_tok.text, model_tok.text)
            ranking = ranking_tok.text
        if self.at("contexts"):
            self.advance()
            names = [self.expect_ident("context name").text]
            while self.at(","):
                self.advance()
                names.append(self.expect_ident("context name").text)
            for n in names:
                doc.context_for(n, model_tok.text)
            context_names = tuple(names)
        self.expect(";")

        if definition == "ness-restricted" and not context_names:
            self.fail(
                f"definition {definition!r} needs a contexts list", name_tok
            )
        if definition in ("hp-extended", "ness-default") and ranking is None:
            self.fail(f"definition {definition!r} needs a ranking", name_tok)
        try:
            cause = CauseConjunct(tuple(assignments))
        except CausalError as exc:
            self.fail(str(exc), name_tok)
        doc.order.append(("query", name_tok.text))
        doc.queries[name_tok.text] = Query(
            name=name_tok.text,
            definition=definition,
            cause=cause,
            effect=effect,
            model=model_tok.text,
            context=context_tok.text,
            ranking=ranking,
            context_names=context_names,
        )

    def parse_definition_tag(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail("missing definition tag", tok, expected=list(DEFINITIONS))
        parts = [self.advance().text]
        while self.at("-"):
            self.advance()
            parts.append(self.advance().text)
        tag = "-".join(parts)
        if tag not in DEFINITIONS:
            self.fail(f"unknown definition {tag!r}", tok, expected=list(DEFINITIONS))
        return tag

    def parse_cause_event(self, model) -> tuple[str, str]:
        var_tok = self.expect_ident("variable name")
        self.expect("=")
        val_tok = self.expect_value_token()
        self._check_value(model, var_tok, val_tok)
        if not model.is_endogenous(var_tok.text):
            self.fail(f"cause variable {var_tok.text!r} is not endogenous", var_tok)
        return (var_tok.text, val_tok.text)


def parse(source: str) -> ModelDocument:
    """Parse one source text into a resolved document."""
    return Parser(source).parse_document()


# -- printing ------------------------------------------------------------------


def print_document(doc: ModelDocument) -> str:
    parts: list[str] = []
    order = doc.order or _default_order(doc)
    for kind, key in order:
        if kind == "model":
            parts.append(_print_model(doc.models[key]))
        elif kind == "context":
            owner, ctx = doc.contexts[key]
            assigns = ", ".join(f"{v} = {x}" for v, x in ctx.values)
            parts.append(f"context {key} for {owner} {{ {assigns} }}")
        elif kind == "ranking":
            owner, ranking = doc.rankings[key]
            parts.append(_print_ranking(key, owner, ranking))
        elif kind == "typicality":
            stmt = doc.typicality[key]
            parts.append(
                f"typically {unparse_formula(stmt.antecedent)} -> "
                f"{unparse_formula(stmt.consequent)} under {stmt.ranking};"
            )
        elif kind == "query":
            parts.append(_print_query(doc.queries[key]))
    return "\n\n".join(parts) + "\n"


def _default_order(doc: ModelDocument) -> list[tuple[str, object]]:
    order: list[tuple[str, object]] = []
    for name in doc.models:
        order.append(("model", name))
        for ctx_name, (owner, _) in doc.contexts.items():
            if owner == name:
                order.append(("context", ctx_name))
        for r_name, (owner, _) in doc.rankings.items():
            if owner == name:
                order.append(("ranking", r_name))
    order.extend(("typicality", i) for i in range(len(doc.typicality)))
    order.extend(("query", name) for name in doc.queries)
    return order


def _print_model(model: CausalModel) -> str:
    lines = [f"model {model.name} {{"]
    for decl in model.variables:
        values = ", ".join(decl.values)
        lines.append(f"  {decl.kind} {decl.name} : {{{values}}};")
    for equation in model.equations:
        lines.append(f"  {equation.unparse()}")
    lines.append("}")
    return "\n".join(lines)


def _print_ranking(name: str, owner: str, ranking: RankingFunction) -> str:
    lines = [f"ranking {name} for {owner} {{"]
    for clause in ranking.clauses:
        rank = "inf" if clause.rank == math.inf else str(clause.rank)
        lines.append(f"  when {unparse_formula(clause.condition)} rank {rank};")
    default = "inf" if ranking.default_rank == math.inf else str(ranking.default_rank)
    lines.append(f"  default rank {default};")
    lines.append("}")
    return "\n".join(lines)


def _print_query(query: Query) -> str:
    text = (
        f"query {query.name} : {query.definition} cause {query.cause.unparse()} "
        f"of {unparse_formula(query.effect)} in {query.model} at {query.context}"
    )
    if query.ranking:
        text += f" with {query.ranking}"
    if query.context_names:
        text += " contexts " + ", ".join(query.context_names)
    return text + ";"


def parse_formula_text(model: CausalModel, text: str) -> Formula:
    """Parse a standalone formula against a model (CLI --effect values)."""
    parser = Parser(text)
    formula = parser.parse_formula(model)
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return formula


def parse_cause_text(model: CausalModel, text: str) -> CauseConjunct:
    """Parse `X=1 & Y=0` style cause conjunctions (CLI --cause values)."""
    parser = Parser(text)
    assignments = [parser.parse_cause_event(model)]
    while parser.at("&"):
        parser.advance()
        assignments.append(parser.parse_cause_event(model))
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return CauseConjunct(tuple(assignments))


def parse_event_set_text(model: CausalModel, text: str) -> EventSet:
    """Parse `X=1, Y=0` event lists (sufficiency checks)."""
    parser = Parser(text)
    events = []
    while True:
        var_tok = parser.expect_ident("variable name")
        parser.expect("=")
        val_tok = parser.expect_value_token()
        parser._check_value(model, var_tok, val_tok)
        events.append(PrimitiveEvent(var_tok.text, val_tok.text))
        if parser.at(","):
            parser.advance()
            continue
        break
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.column)
    return EventSet(tuple(events))
