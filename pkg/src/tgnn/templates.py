"""Rooted pattern templates: validation, radius, isomorphism, registries,
and exhaustive generation of all templates of a given radius."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path

from .errors import GraphFormatError, ResourceLimitError

GENERATION_NODE_LIMIT = 5


@dataclass(frozen=True)
class Template:
    """Rooted pattern with mandatory edges and mandatory non-edges.

    Vertices are 0..size-1 and vertex 0 is the root. `pos_edges` must be
    present in a host graph, `neg_edges` must be absent. Structural
    invariants are reported by `validate_template`, not enforced here.
    """

    name: str
    size: int
    pos_edges: frozenset[tuple[int, int]]
    neg_edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("template size must be >= 1")
        object.__setattr__(
            self, "pos_edges", frozenset((int(u), int(v)) for u, v in self.pos_edges)
        )
        object.__setattr__(
            self, "neg_edges", frozenset((int(u), int(v)) for u, v in self.neg_edges)
        )

    @property
    def root(self) -> int:
        return 0

    @property
    def arity(self) -> int:
        """Number of non-root vertices (argument count in modal formulae)."""
        return self.size - 1

    def structure(self) -> tuple:
        """Name-independent identity used for duplicate detection."""
        return (self.size, self.pos_edges, self.neg_edges)


@dataclass(frozen=True)
class LabelledTemplate:
    """A template whose vertices carry real feature vectors."""

    template: Template
    labels: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        labels = tuple(tuple(float(x) for x in row) for row in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) != self.template.size:
            raise ValueError(
                f"expected {self.template.size} label vectors, got {len(labels)}"
            )
        if len({len(row) for row in labels}) > 1:
            raise ValueError("label vectors have mixed dimensions")


def validate_template(t: Template) -> list[str]:
    """Empty list when all invariants hold, otherwise one message per breach."""
    violations = []
    for u, v in sorted(t.pos_edges & t.neg_edges):
        violations.append(f"overlapping edge ({u}, {v}) in both edge sets")
    for u, v in sorted(t.pos_edges | t.neg_edges):
        if not (0 <= u < t.size and 0 <= v < t.size):
            violations.append(f"vertex out of range in edge ({u}, {v})")
    return violations


def _pos_radius(size: int, pos_edges: frozenset[tuple[int, int]]) -> int | float:
    adj: list[list[int]] = [[] for _ in range(size)]
    for u, v in sorted(pos_edges):
        adj[u].append(v)
    dist: list[int | float] = [math.inf] * size
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] == math.inf:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return max(dist)


def template_radius(t: Template) -> int | float:
    """Max shortest-path distance from the root along positive edges.

    Returns math.inf when some vertex is unreachable through `pos_edges`.
    """
    r = _pos_radius(t.size, t.pos_edges)
    return r if r == math.inf else int(r)


def _as_parts(t: Template | LabelledTemplate):
    if isinstance(t, LabelledTemplate):
        return t.template, t.labels
    return t, tuple(() for _ in range(t.size))


def _root_fixing_bijections(size: int):
    for perm in permutations(range(1, size)):
        yield (0,) + perm


def _mapped(edges: frozenset[tuple[int, int]], perm: tuple[int, ...]):
    return frozenset((perm[u], perm[v]) for u, v in edges)


def template_isomorphic(
    a: Template | LabelledTemplate, b: Template | LabelledTemplate
) -> bool:
    """Root-preserving bijection matching edges, non-edges, and non-root labels.

    Decided by exhaustive search over root-fixing bijections. A bare
    Template is treated as labelled with zero-dimensional vectors.
    """
    ta, la = _as_parts(a)
    tb, lb = _as_parts(b)
    if ta.size != tb.size:
        return False
    for perm in _root_fixing_bijections(ta.size):
        if _mapped(ta.pos_edges, perm) != tb.pos_edges:
            continue
        if _mapped(ta.neg_edges, perm) != tb.neg_edges:
            continue
        if all(la[u] == lb[perm[u]] for u in range(1, ta.size)):
            return True
    return False


def template_automorphisms(
    t: Template | LabelledTemplate,
) -> list[tuple[int, ...]]:
    """All root-fixing bijections witnessing isomorphism of `t` with itself."""
    tt, labels = _as_parts(t)
    out = []
    for perm in _root_fixing_bijections(tt.size):
        if (
            _mapped(tt.pos_edges, perm) == tt.pos_edges
            and _mapped(tt.neg_edges, perm) == tt.neg_edges
            and all(labels[u] == labels[perm[u]] for u in range(1, tt.size))
        ):
            out.append(perm)
    return out


class TemplateRegistry:
    """Named template collection, optionally carrying a proposition list."""

    def __init__(self, templates=(), propositions=()):
        self._templates: dict[str, Template] = {}
        self.propositions: list[str] = list(propositions)
        for t in templates:
            self.add(t)

    def add(self, t: Template) -> None:
        violations = validate_template(t)
        if violations:
            raise ValueError(f"invalid template {t.name!r}: " + "; ".join(violations))
        if t.name in self._templates:
            raise ValueError(f"duplicate template name {t.name!r}")
        self._templates[t.name] = t

    def get(self, name: str) -> Template:
        try:
            return self._templates[name]
        except KeyError:
            raise KeyError(f"unknown template {name!r}") from None

    def names(self) -> list[str]:
        return list(self._templates)

    def templates(self) -> list[Template]:
        return list(self._templates.values())

    def __contains__(self, name: str) -> bool:
        return name in self._templates

    def __len__(self) -> int:
        return len(self._templates)


def builtin_registry() -> TemplateRegistry:
    """The stock templates: edge, non-edge, directed triangle, open path.

    T1 alone reproduces plain neighbour aggregation; T1+T2 the
    neighbour/non-neighbour variant; Ttri and Tp are the 3-vertex patterns
    used to tell directed 3-cycles from longer cycles.
    """
    return TemplateRegistry(
        [
            Template("T1", 2, frozenset({(0, 1)}), frozenset()),
            Template("T2", 2, frozenset(), frozenset({(0, 1)})),
            Template("Ttri", 3, frozenset({(0, 1), (1, 2), (2, 0)}), frozenset()),
            Template("Tp", 3, frozenset({(0, 1), (1, 2)}), frozenset({(2, 0)})),
        ]
    )


def _canonical_key(size, pos_edges, neg_edges):
    best = None
    for perm in _root_fixing_bijections(size):
        key = (
            tuple(sorted(_mapped(pos_edges, perm))),
            tuple(sorted(_mapped(neg_edges, perm))),
        )
        if best is None or key < best:
            best = key
    return (size, best)


def generate_radius_k_templates(k: int, max_nodes: int) -> list[Template]:
    """All pairwise non-isomorphic complete templates of radius exactly `k`.

    Complete means every ordered pair of distinct vertices lies in exactly
    one of the two edge sets; self-loops are excluded. Refuses more than
    GENERATION_NODE_LIMIT nodes (the candidate space is 2^(n(n-1))).
    """
    if k < 1:
        raise ValueError("radius k must be >= 1")
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    if max_nodes > GENERATION_NODE_LIMIT:
        raise ResourceLimitError(
            f"template generation limited to {GENERATION_NODE_LIMIT} nodes"
        )

    found: list[Template] = []
    seen: set = set()
    for size in range(1, max_nodes + 1):
        pairs = [(u, v) for u in range(size) for v in range(size) if u != v]
        for mask in range(1 << len(pairs)):
            pos = frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
            if _pos_radius(size, pos) != k:
                continue
            neg = frozenset(p for i, p in enumerate(pairs) if not mask >> i & 1)
            key = _canonical_key(size, pos, neg)
            if key in seen:
                continue
            seen.add(key)
            found.append(Template(f"T_k{k}_{len(found)}", size, pos, neg))
    return found


def template_from_json(obj: object) -> Template:
    if not isinstance(obj, dict):
        raise GraphFormatError("template entry must be a JSON object")
    for field in ("name", "size", "pos_edges", "neg_edges"):
        if field not in obj:
            raise GraphFormatError(f'template entry missing "{field}"')
    name = obj["name"]
    size = obj["size"]
    if not isinstance(name, str) or isinstance(size, bool) or not isinstance(size, int):
        raise GraphFormatError("template name must be a string and size an integer")

    def edge_list(field):
        raw = obj[field]
        if not isinstance(raw, list):
            raise GraphFormatError(f'"{field}" must be an array of [u, v] pairs')
        out = []
        for entry in raw:
            if (
                not isinstance(entry, (list, tuple))
                or len(entry) != 2
                or any(isinstance(x, bool) or not isinstance(x, int) for x in entry)
            ):
                raise GraphFormatError(f"bad edge entry {entry!r} in {field}")
            pair = (entry[0], entry[1])
            if pair in out:
                raise GraphFormatError(f"duplicate edge {entry!r} in {field}")
            out.append(pair)
        return frozenset(out)

    t = Template(name, size, edge_list("pos_edges"), edge_list("neg_edges"))
    violations = validate_template(t)
    if violations:
        raise GraphFormatError(f"template {name!r}: " + "; ".join(violations))
    return t


def template_to_json(t: Template) -> dict:
    return {
        "name": t.name,
        "size": t.size,
        "pos_edges": [list(e) for e in sorted(t.pos_edges)],
        "neg_edges": [list(e) for e in sorted(t.neg_edges)],
    }


def load_registry(path: str | Path) -> TemplateRegistry:
    """Registry file: either an array of templates, or an object with
    "templates" and an optional "propositions" list."""
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: invalid JSON ({exc})") from exc

    propositions: list[str] = []
    if isinstance(obj, list):
        entries = obj
    elif isinstance(obj, dict):
        entries = obj.get("templates", [])
        propositions = obj.get("propositions", [])
        if not isinstance(entries, list) or not isinstance(propositions, list):
            raise GraphFormatError(f"{path}: bad registry structure")
        if any(not isinstance(p, str) for p in propositions):
            raise GraphFormatError(f"{path}: propositions must be strings")
    else:
        raise GraphFormatError(f"{path}: registry must be an array or object")

    reg = TemplateRegistry(propositions=propositions)
    for entry in entries:
        try:
            reg.add(template_from_json(entry))
        except ValueError as exc:
            raise GraphFormatError(f"{path}: {exc}") from exc
    return reg
