"""Graded template modal logic: syntax, parsing, printing, model checking,
and construction of (bounded) characteristic formulae.

The core AST has exactly four node kinds: propositions, negation, binary
conjunction, and the counting template modality. Disjunction and
implication are accepted by the parser as sugar and desugared immediately,
so the depth measures see only core connectives.

Concrete grammar (whitespace insignificant):

    formula  := implication
    implication := disjunction ("->" implication)?
    disjunction := conjunction ("|" conjunction)*
    conjunction := unary ("&" unary)*
    unary    := "!" unary | atom
    atom     := NAME | "(" formula ")" | modal
    modal    := "<" NAME ">=" INT ">" "(" formula ("," formula)* ")"

A modality over a template of size n+1 takes exactly n arguments; argument
i talks about the node assigned to template vertex i.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Union

from .embeddings import Assignment, enumerate_embeddings
from .errors import FormulaParseError
from .graphs import LabelledGraph
from .templates import Template, TemplateRegistry


@dataclass(frozen=True)
class Prop:
    """Atomic proposition, stored as an index into the proposition list."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("proposition index must be >= 0")


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    """Counting modality: at least `threshold` embeddings of `template`
    whose non-root images satisfy the argument formulae pointwise."""

    template: Template
    threshold: int
    args: tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.threshold < 1:
            raise ValueError("modality threshold must be >= 1")
        if len(self.args) != self.template.arity:
            raise ValueError(
                f"template {self.template.name!r} takes {self.template.arity} "
                f"arguments, got {len(self.args)}"
            )


Formula = Union[Prop, Not, And, Diamond]


def or_(left: Formula, right: Formula) -> Formula:
    """Disjunction, desugared into the core connectives."""
    return Not(And(Not(left), Not(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def top(ap: list[str]) -> Formula:
    """The canonical tautology over the first proposition."""
    if not ap:
        raise ValueError("at least one proposition is required")
    return Not(And(Prop(0), Not(Prop(0))))


def bottom(ap: list[str]) -> Formula:
    """The canonical contradiction over the first proposition."""
    if not ap:
        raise ValueError("at least one proposition is required")
    return And(Prop(0), Not(Prop(0)))


_TOKEN = re.compile(r"->|>=|\d+|[A-Za-z_][A-Za-z0-9_]*|[()<>,&|!]")
_SPACE = re.compile(r"\s*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        pos = _SPACE.match(text, pos).end()
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaParseError(f"unexpected character {text[pos]!r}", pos)
        lexeme = m.group()
        if lexeme.isdigit():
            kind = "int"
        elif lexeme[0].isalpha() or lexeme[0] == "_":
            kind = "name"
        else:
            kind = lexeme
        tokens.append((kind, lexeme, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, registry: TemplateRegistry, ap: list[str]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.registry = registry
        self.ap = list(ap)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise FormulaParseError(f"expected {kind!r}, found {shown!r}", tok[2])
        return self.take()

    def parse(self) -> Formula:
        phi = self.implication()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaParseError(f"trailing input {tok[1]!r}", tok[2])
        return phi

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.take()
            return implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[0] == "|":
            self.take()
            left = or_(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.peek()[0] == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, lexeme, pos = self.peek()
        if kind == "(":
            self.take()
            phi = self.implication()
            self.expect(")")
            return phi
        if kind == "<":
            return self.modal()
        if kind == "name":
            self.take()
            if lexeme not in self.ap:
                raise FormulaParseError(f"unknown proposition {lexeme!r}", pos)
            return Prop(self.ap.index(lexeme))
        shown = lexeme or "end of input"
        raise FormulaParseError(f"expected a formula, found {shown!r}", pos)

    def modal(self) -> Formula:
        self.expect("<")
        kind, name, pos = self.expect("name")
        if name not in self.registry:
            raise FormulaParseError(f"unknown template {name!r}", pos)
        template = self.registry.get(name)
        self.expect(">=")
        _, digits, jpos = self.expect("int")
        threshold = int(digits)
        if threshold < 1:
            raise FormulaParseError("modality threshold must be >= 1", jpos)
        self.expect(">")
        _, _, apos = self.expect("(")
        args: list[Formula] = []
        if self.peek()[0] != ")":
            args.append(self.implication())
            while self.peek()[0] == ",":
                self.take()
                args.append(self.implication())
        self.expect(")")
        if len(args) != template.arity:
            raise FormulaParseError(
                f"template {name!r} takes {template.arity} arguments, "
                f"got {len(args)}",
                apos,
            )
        return Diamond(template, threshold, tuple(args))


def parse_formula(text: str, registry: TemplateRegistry, ap: list[str]) -> Formula:
    """Parse concrete syntax against a registry and proposition list."""
    return _Parser(text, registry, ap).parse()


def format_formula(phi: Formula, ap: list[str]) -> str:
    """Concrete-syntax text; parse_formula(format_formula(phi)) == phi."""
    if isinstance(phi, Prop):
        return ap[phi.index]
    if isinstance(phi, Not):
        inner = format_formula(phi.operand, ap)
        if isinstance(phi.operand, And):
            inner = f"({inner})"
        return f"!{inner}"
    if isinstance(phi, And):
        left = format_formula(phi.left, ap)
        right = format_formula(phi.right, ap)
        if isinstance(phi.right, And):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(phi, Diamond):
        args = ", ".join(format_formula(a, ap) for a in phi.args)
        return f"<{phi.template.name}>={phi.threshold}>({args})"
    raise TypeError(f"not a formula: {phi!r}")


def modal_depth(phi: Formula) -> int:
    """Nesting depth of modalities; boolean connectives are transparent."""
    if isinstance(phi, Prop):
        return 0
    if isinstance(phi, Not):
        return modal_depth(phi.operand)
    if isinstance(phi, And):
        return max(modal_depth(phi.left), modal_depth(phi.right))
    return 1 + max((modal_depth(a) for a in phi.args), default=0)


def syntactic_depth(phi: Formula) -> int:
    """Tree depth where every connective, including modalities, adds 1."""
    if isinstance(phi, Prop):
        return 0
    if isinstance(phi, Not):
        return 1 + syntactic_depth(phi.operand)
    if isinstance(phi, And):
        return 1 + max(syntactic_depth(phi.left), syntactic_depth(phi.right))
    return 1 + max((syntactic_depth(a) for a in phi.args), default=0)


def counting_bound(phi: Formula) -> int:
    """Largest modality threshold occurring in the formula, 0 if none."""
    if isinstance(phi, Prop):
        return 0
    if isinstance(phi, Not):
        return counting_bound(phi.operand)
    if isinstance(phi, And):
        return max(counting_bound(phi.left), counting_bound(phi.right))
    return max(phi.threshold, *(counting_bound(a) for a in phi.args), 0)


def _check_boolean(g: LabelledGraph) -> None:
    for row in g.labels:
        for x in row:
            if x not in (0.0, 1.0):
                raise ValueError(f"non-Boolean label entry {x!r}")


class _Evaluator:
    """Memoized model checker for one graph.

    The memo is keyed by subformula object identity; evaluated formulae are
    pinned so ids stay unique for the evaluator's lifetime.
    """

    def __init__(self, g: LabelledGraph):
        self.g = g
        self.memo: dict[tuple[int, int], bool] = {}
        self._pins: list[Formula] = []
        self._emb: dict[tuple, list[Assignment]] = {}

    def embeddings(self, t: Template, v: int) -> list[Assignment]:
        key = (t.structure(), v)
        if key not in self._emb:
            self._emb[key] = enumerate_embeddings(t, self.g, v)
        return self._emb[key]

    def eval(self, phi: Formula, v: int) -> bool:
        key = (id(phi), v)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if isinstance(phi, Prop):
            if phi.index >= self.g.dimension:
                raise ValueError(
                    f"proposition index {phi.index} exceeds label dimension "
                    f"{self.g.dimension}"
                )
            result = self.g.labels[v][phi.index] == 1.0
        elif isinstance(phi, Not):
            result = not self.eval(phi.operand, v)
        elif isinstance(phi, And):
            result = self.eval(phi.left, v) and self.eval(phi.right, v)
        elif isinstance(phi, Diamond):
            count = 0
            for f in self.embeddings(phi.template, v):
                if all(self.eval(arg, f[i + 1]) for i, arg in enumerate(phi.args)):
                    count += 1
                    if count >= phi.threshold:
                        break
            result = count >= phi.threshold
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self.memo[key] = result
        self._pins.append(phi)
        return result

    def satisfying(self, t: Template, args: tuple[Formula, ...], v: int
                   ) -> list[Assignment]:
        out = []
        for f in self.embeddings(t, v):
            if all(self.eval(arg, f[i + 1]) for i, arg in enumerate(args)):
                out.append(f)
        return out


def evaluate(phi: Formula, g: LabelledGraph, v: int) -> bool:
    """Truth of `phi` at node v of a Boolean-labelled graph."""
    _check_boolean(g)
    if not (0 <= v < g.num_nodes):
        raise ValueError(f"node {v} is not in the graph")
    return _Evaluator(g).eval(phi, v)


def satisfying_embeddings(
    t: Template, args: tuple[Formula, ...], g: LabelledGraph, v: int
) -> list[Assignment]:
    """The embeddings of `t` at (g, v) whose images satisfy `args` pointwise."""
    _check_boolean(g)
    return _Evaluator(g).satisfying(t, tuple(args), v)


def _and_all(conjuncts: list[Formula]) -> Formula:
    if not conjuncts:
        raise ValueError("empty conjunction")
    return reduce(And, conjuncts)


def _or_all(disjuncts: list[Formula], ap: list[str]) -> Formula:
    if not disjuncts:
        return bottom(ap)
    return reduce(or_, disjuncts)


def _dedup(conjuncts: list[Formula]) -> list[Formula]:
    return list(dict.fromkeys(conjuncts))


def _literal_profile(g: LabelledGraph, v: int, ap: list[str]) -> Formula:
    if not ap:
        raise ValueError("at least one proposition is required")
    if g.dimension != len(ap):
        raise ValueError(
            f"graph dimension {g.dimension} does not match {len(ap)} propositions"
        )
    positive = [Prop(i) for i in range(len(ap)) if g.labels[v][i] == 1.0]
    negative = [Not(Prop(i)) for i in range(len(ap)) if g.labels[v][i] != 1.0]
    return _and_all(positive + negative)


def char_formula_unbounded(
    g: LabelledGraph, v: int, level: int, templates, ap: list[str]
) -> Formula:
    """Level-l characteristic formula of (g, v), without counting bound.

    Level 0 is the literal profile of the node. Each further level conjoins,
    per template: one positive counting conjunct per embedding (arguments
    are the previous-level formulae of the image nodes, threshold the exact
    satisfier count) and one negative conjunct excluding any additional
    embedding at all. Syntactically equal conjuncts are collapsed.
    """
    _check_boolean(g)
    templates = list(templates)
    if level < 0:
        raise ValueError("level must be >= 0")
    prev = {u: _literal_profile(g, u, ap) for u in g.nodes}
    verum = top(ap)
    for _ in range(level):
        ev = _Evaluator(g)
        cur: dict[int, Formula] = {}
        for u in g.nodes:
            conjuncts: list[Formula] = [prev[u]]
            for t in templates:
                embs = ev.embeddings(t, u)
                for f in embs:
                    args = tuple(prev[f[i]] for i in range(1, t.size))
                    k = len(ev.satisfying(t, args, u))
                    conjuncts.append(Diamond(t, k, args))
                top_args = tuple(verum for _ in range(t.arity))
                conjuncts.append(Not(Diamond(t, len(embs) + 1, top_args)))
            cur[u] = _and_all(_dedup(conjuncts))
        prev = cur
    return prev[v]


def char_formula_bounded(
    g: LabelledGraph,
    v: int,
    level: int,
    bound: int,
    templates,
    corpus: list,
    ap: list[str],
) -> Formula:
    """Level-l characteristic formula with counting bound c, corpus-relative.

    Positive conjuncts cap thresholds at the bound; negative conjuncts range
    over argument tuples built from one representative formula per
    bisimulation class of the corpus at the previous level, kept only while
    their excluded threshold stays within the bound. The subject pointed
    graph must be a corpus member.
    """
    from .bisim import bisim_classes  # local import to avoid a cycle

    if bound < 1:
        raise ValueError("bound must be >= 1")
    if level < 0:
        raise ValueError("level must be >= 0")
    templates = list(templates)
    if (g, v) not in [(pg.graph, pg.point) for pg in corpus]:
        raise ValueError("corpus missing the subject pointed graph")

    graph_objs: list[LabelledGraph] = []
    for pg in corpus:
        if pg.graph not in graph_objs:
            graph_objs.append(pg.graph)
    for graph in graph_objs:
        _check_boolean(graph)
    gindex = {i: graph_objs.index(corpus[i].graph) for i in range(len(corpus))}
    subject_gi = graph_objs.index(g)

    chi: dict[tuple[int, int], Formula] = {
        (gi, u): _literal_profile(graph, u, ap)
        for gi, graph in enumerate(graph_objs)
        for u in graph.nodes
    }
    for lvl in range(1, level + 1):
        classes = bisim_classes(corpus, templates, lvl - 1, bound)
        rep_formulas = [
            chi[(gindex[cls[0]], corpus[cls[0]].point)] for cls in classes
        ]
        nxt: dict[tuple[int, int], Formula] = {}
        for gi, graph in enumerate(graph_objs):
            ev = _Evaluator(graph)
            for u in graph.nodes:
                conjuncts: list[Formula] = [chi[(gi, u)]]
                for t in templates:
                    embs = ev.embeddings(t, u)
                    for f in embs:
                        args = tuple(chi[(gi, f[i])] for i in range(1, t.size))
                        k = min(bound, len(ev.satisfying(t, args, u)))
                        conjuncts.append(Diamond(t, k, args))
                    for psi in product(rep_formulas, repeat=t.arity):
                        excluded = len(ev.satisfying(t, psi, u)) + 1
                        if excluded <= bound:
                            conjuncts.append(Not(Diamond(t, excluded, psi)))
                nxt[(gi, u)] = _and_all(_dedup(conjuncts))
        chi = nxt
    return chi[(subject_gi, v)]


def class_defining_formula(
    target,
    corpus: list,
    level: int,
    bound: int,
    templates,
    ap: list[str],
) -> Formula:
    """Disjunction of characteristic formulae covering the target classes.

    `target` must be a union of corpus bisimulation classes; the empty
    target yields the canonical contradiction.
    """
    from .bisim import bisim_classes

    templates = list(templates)
    member_keys = [(pg.graph, pg.point) for pg in corpus]
    target_idx = set()
    for pg in target:
        key = (pg.graph, pg.point)
        if key not in member_keys:
            raise ValueError("target contains a pointed graph outside the corpus")
        target_idx.add(member_keys.index(key))

    classes = bisim_classes(corpus, templates, level, bound)
    chosen = []
    for cls in classes:
        inside = [i for i in cls if i in target_idx]
        if inside and len(inside) != len(cls):
            raise ValueError("target is not a union of bisimulation classes")
        if inside:
            chosen.append(cls)

    parts = [
        char_formula_bounded(
            corpus[cls[0]].graph, corpus[cls[0]].point, level, bound, templates,
            corpus, ap,
        )
        for cls in chosen
    ]
    return _or_all(parts, ap)
