"""Forward execution of template GNNs and the formula-to-network compiler.

A model is a stack of homogeneous-shape layers. Each layer carries slots
(template, template aggregator, outer aggregator); the update at node v is

    act(x @ C + z @ A + b)

where x is the previous feature row of v and z concatenates the outer
aggregations of per-embedding template-aggregator values. Outer aggregators
reduce the value multiset in canonical element order, so nodes with equal
(capped) multisets produce bit-identical results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .embeddings import enumerate_embeddings
from .errors import GraphFormatError
from .graphs import LabelledGraph
from .logic import And, Diamond, Formula, Not, Prop, counting_bound, syntactic_depth
from .multisets import Multiset
from .templates import (
    Template,
    builtin_registry,
    template_automorphisms,
    template_from_json,
    template_to_json,
    validate_template,
)


def _identity(x: np.ndarray) -> np.ndarray:
    return x


def _relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def _truncated_relu(x: np.ndarray) -> np.ndarray:
    return np.minimum(np.maximum(x, 0.0), 1.0)


ACTIVATIONS = {
    "identity": _identity,
    "relu": _relu,
    "truncated_relu": _truncated_relu,
}

OUTER_KINDS = ("sum", "mean", "max", "bounded_sum")


@dataclass(frozen=True)
class ProjectAgg:
    """Template aggregator reading one vertex's features (or one component)."""

    vertex: int
    feature: int | None = None

    def output_dim(self, template: Template, d: int) -> int:
        return d if self.feature is None else 1


@dataclass(frozen=True)
class AndGateAgg:
    """Soft conjunction over one feature component per non-root vertex:
    truncated-relu of (sum of the designated components - arity + 1)."""

    feature_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "feature_indices", tuple(self.feature_indices))

    def output_dim(self, template: Template, d: int) -> int:
        return 1


@dataclass(frozen=True)
class AffineAgg:
    """Affine map over the concatenated vertex features of the labelled
    template (root included), followed by a named activation."""

    weights: tuple[tuple[float, ...], ...]
    bias: tuple[float, ...]
    activation: str = "identity"

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(tuple(float(x) for x in row) for row in self.weights)
        )
        object.__setattr__(self, "bias", tuple(float(x) for x in self.bias))
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")

    def output_dim(self, template: Template, d: int) -> int:
        return len(self.bias)


TemplateAgg = Union[ProjectAgg, AndGateAgg, AffineAgg]


@dataclass(frozen=True)
class OuterAgg:
    """Multiset reduction: sum, mean, max, or multiplicity-capped sum."""

    kind: str
    bound: int | None = None

    def __post_init__(self):
        if self.kind not in OUTER_KINDS:
            raise ValueError(f"unknown aggregator kind {self.kind!r}")
        if self.kind == "bounded_sum":
            if self.bound is None or self.bound < 1:
                raise ValueError("bounded_sum needs a bound >= 1")
        elif self.bound is not None:
            raise ValueError(f"aggregator {self.kind!r} takes no bound")

    @property
    def is_bounded(self) -> bool:
        return self.kind == "bounded_sum"


@dataclass(frozen=True)
class Slot:
    template: Template
    template_agg: TemplateAgg
    outer_agg: OuterAgg

    def output_dim(self, d: int) -> int:
        return self.template_agg.output_dim(self.template, d)


@dataclass(frozen=True)
class Layer:
    slots: tuple[Slot, ...]
    C: tuple[tuple[float, ...], ...]
    A: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    activation: str = "truncated_relu"

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(
            self, "C", tuple(tuple(float(x) for x in row) for row in self.C)
        )
        object.__setattr__(
            self, "A", tuple(tuple(float(x) for x in row) for row in self.A)
        )
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))


@dataclass(frozen=True)
class GnnModel:
    """Layered template GNN with an affine combination per layer and a
    thresholded single-component classification at the end.

    `input_dimension` is the label width the model consumes; feature rows
    are zero-padded from it to `dimension` before layer 1 (compiled models
    reserve the extra components for subformula truth values).
    """

    dimension: int
    layers: tuple[Layer, ...]
    cls_component: int
    cls_threshold: float = 0.5
    input_dimension: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.input_dimension == self.dimension:
            object.__setattr__(self, "input_dimension", None)

    @property
    def in_dim(self) -> int:
        return self.dimension if self.input_dimension is None else self.input_dimension

    @property
    def is_bounded(self) -> bool:
        return all(
            slot.outer_agg.is_bounded for layer in self.layers for slot in layer.slots
        )

    @property
    def bound(self) -> int | None:
        """Smallest c such that the model is c-bounded, None when unbounded."""
        if not self.is_bounded:
            return None
        bounds = [
            slot.outer_agg.bound for layer in self.layers for slot in layer.slots
        ]
        return max(bounds) if bounds else 1


def validate_model(model: GnnModel) -> list[str]:
    """Raise ValueError on structural defects; return informational notices.

    The one expected notice flags and-gates whose per-vertex component
    choices are not constant on the orbits of a template automorphism (the
    aggregate is then not automorphism-invariant; compiled models still
    match their formulae because embedding sets are automorphism-closed).
    """
    errors: list[str] = []
    notices: list[str] = []
    d = model.dimension
    if d < 1:
        errors.append("model dimension must be >= 1")
    if model.input_dimension is not None and not (0 <= model.input_dimension <= d):
        errors.append("input_dimension must lie between 0 and dimension")
    if not (0 <= model.cls_component < max(d, 1)):
        errors.append(f"cls component {model.cls_component} outside 0..{d - 1}")
    for li, layer in enumerate(model.layers):
        if layer.activation not in ACTIVATIONS:
            errors.append(f"layer {li}: unknown activation {layer.activation!r}")
        if len(layer.C) != d or any(len(row) != d for row in layer.C):
            errors.append(f"layer {li}: C must be {d}x{d}")
        if len(layer.b) != d:
            errors.append(f"layer {li}: b must have length {d}")
        z_dim = 0
        for si, slot in enumerate(layer.slots):
            t = slot.template
            bad = validate_template(t)
            if bad:
                errors.append(f"layer {li} slot {si}: " + "; ".join(bad))
            agg = slot.template_agg
            if isinstance(agg, ProjectAgg):
                if not (0 <= agg.vertex < t.size):
                    errors.append(f"layer {li} slot {si}: project vertex out of range")
                if agg.feature is not None and not (0 <= agg.feature < d):
                    errors.append(f"layer {li} slot {si}: project feature out of range")
            elif isinstance(agg, AndGateAgg):
                if len(agg.feature_indices) != t.arity:
                    errors.append(
                        f"layer {li} slot {si}: and_gate needs {t.arity} indices"
                    )
                elif any(not (0 <= i < d) for i in agg.feature_indices):
                    errors.append(f"layer {li} slot {si}: and_gate index out of range")
                else:
                    for perm in template_automorphisms(t):
                        if any(
                            agg.feature_indices[perm[i] - 1] != agg.feature_indices[i - 1]
                            for i in range(1, t.size)
                        ):
                            notices.append(
                                f"layer {li} slot {si}: and_gate over {t.name!r} is "
                                "not invariant under its template automorphisms"
                            )
                            break
            elif isinstance(agg, AffineAgg):
                if len(agg.weights) != t.size * d or any(
                    len(row) != len(agg.bias) for row in agg.weights
                ):
                    errors.append(
                        f"layer {li} slot {si}: affine weights must be "
                        f"{t.size * d}x{len(agg.bias)}"
                    )
            else:
                errors.append(f"layer {li} slot {si}: unknown template aggregator")
            z_dim += slot.output_dim(d)
        if len(layer.A) != z_dim or any(len(row) != d for row in layer.A):
            errors.append(f"layer {li}: A must be {z_dim}x{d}")
    if errors:
        raise ValueError("; ".join(errors))
    return notices


def _apply_template_agg(
    agg: TemplateAgg, template: Template, feats: np.ndarray, assignment
) -> np.ndarray:
    if isinstance(agg, ProjectAgg):
        row = feats[assignment[agg.vertex]]
        if agg.feature is None:
            return row.copy()
        return np.array([row[agg.feature]])
    if isinstance(agg, AndGateAgg):
        n = template.arity
        s = 0.0
        for i in range(1, template.size):
            s += feats[assignment[i]][agg.feature_indices[i - 1]]
        return np.array([min(max(s - n + 1.0, 0.0), 1.0)])
    if isinstance(agg, AffineAgg):
        x = np.concatenate([feats[assignment[u]] for u in range(template.size)])
        w = np.asarray(agg.weights, dtype=float)
        out = x @ w + np.asarray(agg.bias, dtype=float)
        return ACTIVATIONS[agg.activation](out)
    raise TypeError(f"unknown template aggregator {agg!r}")


def _apply_outer(agg: OuterAgg, values: list[np.ndarray], width: int) -> np.ndarray:
    """Reduce a multiset of equal-length vectors; empty multisets give zero."""
    if not values:
        return np.zeros(width)
    ms = Multiset(tuple(v.tolist()) for v in values)
    pairs = ms.canonical()
    if agg.kind == "max":
        acc = np.array(pairs[0][0], dtype=float)
        for value, _ in pairs[1:]:
            acc = np.maximum(acc, np.array(value, dtype=float))
        return acc
    acc = np.zeros(width)
    for value, mult in pairs:
        if agg.kind == "bounded_sum":
            mult = min(mult, agg.bound)
        acc = acc + np.array(value, dtype=float) * mult
    if agg.kind == "mean":
        acc = acc / len(values)
    return acc


@dataclass
class GnnRun:
    """Per-layer feature matrices (num_nodes x dimension) and final labels."""

    features: list[np.ndarray]
    classification: list[int]


def run_gnn(model: GnnModel, g: LabelledGraph) -> GnnRun:
    """Forward pass; raises ValueError when the label width does not match."""
    validate_model(model)
    if g.dimension != model.in_dim:
        raise ValueError(
            f"graph dimension {g.dimension} does not match model input "
            f"dimension {model.in_dim}"
        )
    n, d = g.num_nodes, model.dimension
    x = np.zeros((n, d))
    for v in g.nodes:
        for i, val in enumerate(g.labels[v]):
            x[v, i] = val
    features = [x]

    emb_cache: dict[tuple, list] = {}

    def embeddings(t: Template, v: int):
        key = (t.structure(), v)
        if key not in emb_cache:
            emb_cache[key] = enumerate_embeddings(t, g, v)
        return emb_cache[key]

    for layer in model.layers:
        prev = features[-1]
        widths = [slot.output_dim(d) for slot in layer.slots]
        z_dim = sum(widths)
        z = np.zeros((n, z_dim))
        for v in range(n):
            offset = 0
            for slot, width in zip(layer.slots, widths):
                values = [
                    _apply_template_agg(slot.template_agg, slot.template, prev, f)
                    for f in embeddings(slot.template, v)
                ]
                z[v, offset : offset + width] = _apply_outer(
                    slot.outer_agg, values, width
                )
                offset += width
        C = np.asarray(layer.C, dtype=float).reshape(d, d)
        A = (
            np.asarray(layer.A, dtype=float).reshape(z_dim, d)
            if z_dim
            else np.zeros((0, d))
        )
        b = np.asarray(layer.b, dtype=float)
        features.append(ACTIVATIONS[layer.activation](prev @ C + z @ A + b))

    final = features[-1]
    classification = [
        int(final[v, model.cls_component] >= model.cls_threshold) for v in range(n)
    ]
    return GnnRun(features, classification)


def _subformula_order(phi: Formula, ap_count: int) -> list[Formula]:
    """Distinct subformulae, children before parents, with every proposition
    of the alphabet placed first at its own index."""
    order: list[Formula] = [Prop(i) for i in range(ap_count)]
    seen: dict[Formula, int] = {f: i for i, f in enumerate(order)}

    def visit(f: Formula) -> None:
        if f in seen:
            return
        if isinstance(f, Prop):
            raise ValueError(
                f"proposition index {f.index} outside the {ap_count}-letter alphabet"
            )
        if isinstance(f, Not):
            visit(f.operand)
        elif isinstance(f, And):
            visit(f.left)
            visit(f.right)
        elif isinstance(f, Diamond):
            for arg in f.args:
                visit(arg)
        else:
            raise TypeError(f"not a formula: {f!r}")
        seen[f] = len(order)
        order.append(f)

    visit(phi)
    return order


def compile_formula(phi: Formula, ap: list[str]) -> GnnModel:
    """Translate a formula into a bounded model that captures it exactly.

    One feature component per distinct subformula; layers are homogeneous
    with truncated-relu activation; each modal subformula gets a slot whose
    and-gate tests its argument components and whose outer aggregation is a
    sum capped at the formula's counting bound. After syntactic-depth many
    layers the component of the whole formula holds its truth value.
    """
    if not ap:
        raise ValueError("at least one proposition is required")
    sub = _subformula_order(phi, len(ap))
    index = {f: i for i, f in enumerate(sub)}
    d = len(sub)
    depth = syntactic_depth(phi)
    modal_indices = [k for k, f in enumerate(sub) if isinstance(f, Diamond)]
    c_max = counting_bound(phi)

    C = [[0.0] * d for _ in range(d)]
    A = [[0.0] * d for _ in range(len(modal_indices))]
    b = [0.0] * d
    for k, f in enumerate(sub):
        if isinstance(f, Prop):
            C[k][k] = 1.0
        elif isinstance(f, Not):
            C[index[f.operand]][k] += -1.0
            b[k] = 1.0
        elif isinstance(f, And):
            C[index[f.left]][k] += 1.0
            C[index[f.right]][k] += 1.0
            b[k] = -1.0
        else:
            A[modal_indices.index(k)][k] = 1.0
            b[k] = -float(f.threshold) + 1.0

    slots = tuple(
        Slot(
            sub[k].template,
            AndGateAgg(tuple(index[arg] for arg in sub[k].args)),
            OuterAgg("bounded_sum", c_max),
        )
        for k in modal_indices
    )
    layer = Layer(
        slots,
        tuple(tuple(row) for row in C),
        tuple(tuple(row) for row in A),
        tuple(b),
        "truncated_relu",
    )
    return GnnModel(
        dimension=d,
        layers=(layer,) * depth,
        cls_component=index[phi],
        cls_threshold=0.5,
        input_dimension=len(ap),
    )


# AC-style networks and their template interpretations


@dataclass(frozen=True)
class AcLayer:
    """Plain aggregate-combine layer: act(x @ C + agg(neighbours) @ W + b)."""

    C: tuple[tuple[float, ...], ...]
    W: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    activation: str
    agg: OuterAgg


@dataclass(frozen=True)
class AcGnn:
    dimension: int
    layers: tuple[AcLayer, ...]
    cls_component: int
    cls_threshold: float = 0.5


@dataclass(frozen=True)
class AcPlusLayer:
    """Aggregate-combine layer with separate neighbour and non-neighbour
    aggregations."""

    C: tuple[tuple[float, ...], ...]
    W_nbr: tuple[tuple[float, ...], ...]
    W_non: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    activation: str
    agg_nbr: OuterAgg
    agg_non: OuterAgg


@dataclass(frozen=True)
class AcPlusGnn:
    dimension: int
    layers: tuple[AcPlusLayer, ...]
    cls_component: int
    cls_threshold: float = 0.5


def ac_gnn_adapter(ac: AcGnn) -> GnnModel:
    """View a plain aggregate-combine network as an edge-template model.

    Each layer becomes one slot over the edge template projecting the
    non-root vertex; embedding multisets then coincide with neighbour
    multisets, so the update rules agree value for value.
    """
    t1 = builtin_registry().get("T1")
    layers = tuple(
        Layer(
            (Slot(t1, ProjectAgg(vertex=1), layer.agg),),
            layer.C,
            layer.W,
            layer.b,
            layer.activation,
        )
        for layer in ac.layers
    )
    return GnnModel(ac.dimension, layers, ac.cls_component, ac.cls_threshold)


def ac_plus_adapter(ac: AcPlusGnn) -> GnnModel:
    """View a neighbour/non-neighbour network as a two-slot template model
    over the edge and non-edge templates."""
    reg = builtin_registry()
    t1, t2 = reg.get("T1"), reg.get("T2")
    layers = []
    for layer in ac.layers:
        A = tuple(layer.W_nbr) + tuple(layer.W_non)
        layers.append(
            Layer(
                (
                    Slot(t1, ProjectAgg(vertex=1), layer.agg_nbr),
                    Slot(t2, ProjectAgg(vertex=1), layer.agg_non),
                ),
                layer.C,
                A,
                layer.b,
                layer.activation,
            )
        )
    return GnnModel(ac.dimension, tuple(layers), ac.cls_component, ac.cls_threshold)


# JSON model format


def _template_agg_to_json(agg: TemplateAgg) -> dict:
    if isinstance(agg, ProjectAgg):
        return {"kind": "project", "vertex": agg.vertex, "feature": agg.feature}
    if isinstance(agg, AndGateAgg):
        return {"kind": "and_gate", "feature_indices": list(agg.feature_indices)}
    return {
        "kind": "affine",
        "weights": [list(row) for row in agg.weights],
        "bias": list(agg.bias),
        "activation": agg.activation,
    }


def _template_agg_from_json(obj: dict) -> TemplateAgg:
    kind = obj.get("kind")
    if kind == "project":
        return ProjectAgg(obj["vertex"], obj.get("feature"))
    if kind == "and_gate":
        return AndGateAgg(tuple(obj["feature_indices"]))
    if kind == "affine":
        return AffineAgg(
            tuple(tuple(row) for row in obj["weights"]),
            tuple(obj["bias"]),
            obj.get("activation", "identity"),
        )
    raise GraphFormatError(f"unknown template aggregator kind {kind!r}")


def _outer_agg_to_json(agg: OuterAgg) -> dict:
    out: dict = {"kind": agg.kind}
    if agg.bound is not None:
        out["bound"] = agg.bound
    return out


def _outer_agg_from_json(obj: dict) -> OuterAgg:
    try:
        return OuterAgg(obj["kind"], obj.get("bound"))
    except (ValueError, KeyError, TypeError) as exc:
        raise GraphFormatError(f"bad outer aggregator {obj!r}: {exc}") from exc


def model_to_json(model: GnnModel) -> dict:
    return {
        "dimension": model.dimension,
        "input_dimension": model.in_dim,
        "layers": [
            {
                "slots": [
                    {
                        "template": template_to_json(slot.template),
                        "template_agg": _template_agg_to_json(slot.template_agg),
                        "outer_agg": _outer_agg_to_json(slot.outer_agg),
                    }
                    for slot in layer.slots
                ],
                "C": [list(row) for row in layer.C],
                "A": [list(row) for row in layer.A],
                "b": list(layer.b),
                "activation": layer.activation,
            }
            for layer in model.layers
        ],
        "cls": {"component": model.cls_component, "threshold": model.cls_threshold},
    }


def model_from_json(obj: object) -> GnnModel:
    if not isinstance(obj, dict):
        raise GraphFormatError("model file must be a JSON object")
    try:
        layers = []
        for layer in obj["layers"]:
            slots = tuple(
                Slot(
                    template_from_json(slot["template"]),
                    _template_agg_from_json(slot["template_agg"]),
                    _outer_agg_from_json(slot["outer_agg"]),
                )
                for slot in layer["slots"]
            )
            layers.append(
                Layer(
                    slots,
                    tuple(tuple(row) for row in layer["C"]),
                    tuple(tuple(row) for row in layer["A"]),
                    tuple(layer["b"]),
                    layer.get("activation", "truncated_relu"),
                )
            )
        cls = obj["cls"]
        model = GnnModel(
            dimension=obj["dimension"],
            layers=tuple(layers),
            cls_component=cls["component"],
            cls_threshold=cls.get("threshold", 0.5),
            input_dimension=obj.get("input_dimension"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad model structure: {exc}") from exc
    try:
        validate_model(model)
    except ValueError as exc:
        raise GraphFormatError(f"invalid model: {exc}") from exc
    return model


def load_model(path: str | Path) -> GnnModel:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return model_from_json(obj)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def save_model(model: GnnModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_json(model), indent=2) + "\n")
