"""Verification toolkit for template-based graph neural networks.

Enumerates template embeddings, runs template color refinement (T-WL),
decides graded template bisimulation, model-checks graded template modal
logic, constructs characteristic formulae, executes template GNNs, and
compiles formulae into equivalent bounded template GNNs.
"""

from .bisim import bisim_classes, bisim_oracle, bisimilar_via_twl
from .embeddings import count_embeddings, enumerate_embeddings
from .errors import FormulaParseError, GraphFormatError, ResourceLimitError
from .generators import (
    cycle_graph,
    permuted_copy,
    random_formula,
    random_graph,
    star_graph,
)
from .gnn import (
    AcGnn,
    AcLayer,
    AcPlusGnn,
    AcPlusLayer,
    AffineAgg,
    AndGateAgg,
    GnnModel,
    GnnRun,
    Layer,
    OuterAgg,
    ProjectAgg,
    Slot,
    ac_gnn_adapter,
    ac_plus_adapter,
    compile_formula,
    load_model,
    model_from_json,
    model_to_json,
    run_gnn,
    save_model,
    validate_model,
)
from .graphs import (
    LabelledGraph,
    PointedGraph,
    dumps_graph,
    graph_from_json,
    graph_to_json,
    load_graph,
    save_graph,
)
from .logic import (
    And,
    Diamond,
    Formula,
    Not,
    Prop,
    char_formula_bounded,
    char_formula_unbounded,
    class_defining_formula,
    counting_bound,
    evaluate,
    format_formula,
    modal_depth,
    parse_formula,
    satisfying_embeddings,
    syntactic_depth,
)
from .multisets import Multiset, restrict_multiset, restricted_equal
from .refinement import Coloring, TwlConfig, distinguishes, run_twl, stabilization_round
from .templates import (
    LabelledTemplate,
    Template,
    TemplateRegistry,
    builtin_registry,
    generate_radius_k_templates,
    load_registry,
    template_automorphisms,
    template_from_json,
    template_isomorphic,
    template_radius,
    template_to_json,
    validate_template,
)

__all__ = [name for name in dir() if not name.startswith("_")]
