"""Template-driven color refinement (T-WL), unbounded and c-bounded.

Colors are interned integers: within one run, two nodes (possibly in
different graphs) receive the same color at a round exactly when their
refinement signatures match. Deterministic interning of canonical signature
strings stands in for the injective hash of the textbook formulation; when
two graphs are compared they share one interning session.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embeddings import enumerate_embeddings
from .graphs import LabelledGraph
from .multisets import Multiset
from .templates import Template


@dataclass(frozen=True)
class TwlConfig:
    """Refinement parameters: template list, round count, multiplicity bound.

    `bound=None` means unbounded; `bound=c` caps every per-template
    embedding multiset at multiplicity c before hashing.
    """

    templates: tuple[Template, ...]
    rounds: int
    bound: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "templates", tuple(self.templates))
        if not self.templates:
            raise ValueError("template list must be non-empty")
        structures = [t.structure() for t in self.templates]
        if len(set(structures)) != len(structures):
            raise ValueError("template list contains structural duplicates")
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        if self.bound is not None and self.bound < 1:
            raise ValueError("bound must be >= 1 or None")


@dataclass(frozen=True)
class Coloring:
    """Per-round node colors for every graph of a run.

    by_round[l][graph_index][node] is the color id at round l. Equal colors
    at round l imply equal colors at round l-1 (each signature embeds the
    previous color).
    """

    by_round: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def num_rounds(self) -> int:
        return len(self.by_round) - 1

    def color(self, rnd: int, graph: int, node: int) -> int:
        return self.by_round[rnd][graph][node]

    def partition_at(self, rnd: int) -> frozenset[frozenset[tuple[int, int]]]:
        groups: dict[int, list[tuple[int, int]]] = {}
        for gi, row in enumerate(self.by_round[rnd]):
            for node, col in enumerate(row):
                groups.setdefault(col, []).append((gi, node))
        return frozenset(frozenset(members) for members in groups.values())

    def class_count(self, rnd: int) -> int:
        return len({col for row in self.by_round[rnd] for col in row})


class _Session:
    """One interning session over a fixed list of graphs."""

    def __init__(self, graphs: list[LabelledGraph], templates: tuple[Template, ...],
                 bound: int | None):
        dims = {g.dimension for g in graphs}
        if len(dims) > 1:
            raise ValueError(f"graphs have mixed label dimensions {sorted(dims)}")
        self.graphs = graphs
        self.templates = templates
        self.bound = bound
        self._intern: dict[str, int] = {}
        # embeddings are round-independent; enumerate once
        self._emb = [
            [[enumerate_embeddings(t, g, v) for v in g.nodes] for t in templates]
            for g in graphs
        ]

    def _intern_sig(self, signature: str) -> int:
        table = self._intern
        if signature not in table:
            table[signature] = len(table)
        return table[signature]

    def initial(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self._intern_sig(repr(("init", g.labels[v]))) for v in g.nodes)
            for g in self.graphs
        )

    def refine(self, prev: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        out = []
        for gi, g in enumerate(self.graphs):
            row = []
            for v in g.nodes:
                parts = []
                for ti, t in enumerate(self.templates):
                    fingerprints = Multiset(
                        tuple(prev[gi][f[u]] for u in range(1, t.size))
                        for f in self._emb[gi][ti][v]
                    )
                    if self.bound is not None:
                        fingerprints = fingerprints.restrict(self.bound)
                    parts.append((t.name, fingerprints.canonical()))
                signature = repr(("refine", prev[gi][v], tuple(parts)))
                row.append(self._intern_sig(signature))
            out.append(tuple(row))
        return tuple(out)


def run_twl(graphs, cfg: TwlConfig) -> Coloring:
    """Run `cfg.rounds` refinement rounds over the graphs in one session.

    Round 0 colors are interned label vectors (exact equality). Fresh color
    ids are assigned in deterministic order: graphs in input order, nodes
    ascending.
    """
    session = _Session(list(graphs), cfg.templates, cfg.bound)
    rounds = [session.initial()]
    for _ in range(cfg.rounds):
        rounds.append(session.refine(rounds[-1]))
    return Coloring(tuple(rounds))


def stabilization_round(graphs, templates, bound: int | None = None) -> int:
    """Smallest l >= 1 whose partition equals the round-(l-1) partition."""
    graphs = list(graphs)
    session = _Session(graphs, TwlConfig(tuple(templates), 0, bound).templates, bound)
    prev = session.initial()
    prev_classes = len({c for row in prev for c in row})
    total = sum(g.num_nodes for g in graphs)
    for l in range(1, total + 2):
        cur = session.refine(prev)
        cur_classes = len({c for row in cur for c in row})
        # refinement is monotone, so equal class counts mean equal partitions
        if cur_classes == prev_classes:
            return l
        prev, prev_classes = cur, cur_classes
    raise AssertionError("refinement failed to stabilize within the node count")


def distinguishes(
    g1: LabelledGraph, v1: int, g2: LabelledGraph, v2: int, cfg: TwlConfig
) -> bool:
    """True when the shared run assigns v1 and v2 different final colors."""
    coloring = run_twl([g1, g2], cfg)
    return coloring.color(cfg.rounds, 0, v1) != coloring.color(cfg.rounds, 1, v2)
