"""JSON schemas for the file formats and the CLI run reports.

Kept as plain dicts so tests (and downstream harnesses) can validate every
emitted document with jsonschema without shipping separate data files.
"""

_EDGE_PAIR = {
    "type": "array",
    "minItems": 2,
    "maxItems": 2,
}

GRAPH_FILE_SCHEMA = {
    "type": "object",
    "required": ["nodes", "edges"],
    "properties": {
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "label"],
                "properties": {
                    "id": {"type": "string"},
                    "label": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {**_EDGE_PAIR, "items": {"type": "string"}},
        },
    },
}

TEMPLATE_SCHEMA = {
    "type": "object",
    "required": ["name", "size", "pos_edges", "neg_edges"],
    "properties": {
        "name": {"type": "string"},
        "size": {"type": "integer", "minimum": 1},
        "pos_edges": {
            "type": "array",
            "items": {**_EDGE_PAIR, "items": {"type": "integer"}},
        },
        "neg_edges": {
            "type": "array",
            "items": {**_EDGE_PAIR, "items": {"type": "integer"}},
        },
    },
}

REGISTRY_SCHEMA = {
    "oneOf": [
        {"type": "array", "items": TEMPLATE_SCHEMA},
        {
            "type": "object",
            "properties": {
                "templates": {"type": "array", "items": TEMPLATE_SCHEMA},
                "propositions": {"type": "array", "items": {"type": "string"}},
            },
        },
    ]
}

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}

MODEL_FILE_SCHEMA = {
    "type": "object",
    "required": ["dimension", "layers", "cls"],
    "properties": {
        "dimension": {"type": "integer", "minimum": 1},
        "input_dimension": {"type": "integer", "minimum": 0},
        "layers": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["slots", "C", "A", "b", "activation"],
                "properties": {
                    "slots": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["template", "template_agg", "outer_agg"],
                            "properties": {
                                "template": TEMPLATE_SCHEMA,
                                "template_agg": {
                                    "type": "object",
                                    "required": ["kind"],
                                },
                                "outer_agg": {
                                    "type": "object",
                                    "required": ["kind"],
                                    "properties": {
                                        "kind": {
                                            "enum": [
                                                "sum",
                                                "mean",
                                                "max",
                                                "bounded_sum",
                                            ]
                                        },
                                        "bound": {"type": "integer", "minimum": 1},
                                    },
                                },
                            },
                        },
                    },
                    "C": _MATRIX,
                    "A": _MATRIX,
                    "b": {"type": "array", "items": {"type": "number"}},
                    "activation": {
                        "enum": ["identity", "relu", "truncated_relu"]
                    },
                },
            },
        },
        "cls": {
            "type": "object",
            "required": ["component", "threshold"],
            "properties": {
                "component": {"type": "integer", "minimum": 0},
                "threshold": {"type": "number"},
            },
        },
    },
}

_BOUND = {"oneOf": [{"type": "integer", "minimum": 1}, {"const": "inf"}]}

_INPUT_DIGESTS = {
    "type": "object",
    "additionalProperties": {
        "type": "object",
        "required": ["path", "sha256"],
        "properties": {
            "path": {"type": "string"},
            "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        },
    },
}


def _report(command: str, required: list[str], payload: dict) -> dict:
    return {
        "type": "object",
        "required": ["command", "argv", "inputs", "elapsed_s", *required],
        "properties": {
            "command": {"const": command},
            "argv": {"type": "array", "items": {"type": "string"}},
            "inputs": _INPUT_DIGESTS,
            "elapsed_s": {"type": "number"},
            **payload,
        },
    }


_NODE_REF = {
    "type": "object",
    "required": ["graph", "node"],
    "properties": {"graph": {"type": "string"}, "node": {"type": "string"}},
}

_COLOR_ENTRY = {
    "type": "object",
    "required": ["graph", "node", "color"],
    "properties": {
        "graph": {"type": "integer"},
        "node": {"type": "string"},
        "color": {"type": "integer"},
    },
}

DISTINGUISH_REPORT_SCHEMA = _report(
    "distinguish",
    ["templates", "rounds", "bound", "distinguished"],
    {
        "templates": {"type": "array", "items": {"type": "string"}},
        "rounds": {"type": "array", "items": {"type": "array", "items": _COLOR_ENTRY}},
        "bound": _BOUND,
        "distinguished": {"type": "boolean"},
    },
)

BISIM_REPORT_SCHEMA = _report(
    "bisim",
    ["bisimilar", "level", "bound", "method"],
    {
        "bisimilar": {"type": "boolean"},
        "level": {"type": "integer", "minimum": 0},
        "bound": _BOUND,
        "method": {"enum": ["twl", "oracle"]},
    },
)

MODELCHECK_REPORT_SCHEMA = _report(
    "modelcheck",
    ["formula", "results"],
    {
        "formula": {"type": "string"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["node", "value"],
                "properties": {
                    "node": {"type": "string"},
                    "value": {"type": "boolean"},
                },
            },
        },
    },
)

COMPILE_REPORT_SCHEMA = _report(
    "compile",
    ["formula", "dimension", "input_dimension", "layers", "slots"],
    {
        "formula": {"type": "string"},
        "dimension": {"type": "integer"},
        "input_dimension": {"type": "integer"},
        "layers": {"type": "integer"},
        "slots": {"type": "integer"},
        "model": MODEL_FILE_SCHEMA,
        "out": {"type": "string"},
    },
)

RUNGNN_REPORT_SCHEMA = _report(
    "rungnn",
    ["classification"],
    {
        "classification": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["node", "value"],
                "properties": {
                    "node": {"type": "string"},
                    "value": {"type": "integer", "enum": [0, 1]},
                },
            },
        },
        "features": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "number"}},
            },
        },
    },
)

CROSSCHECK_REPORT_SCHEMA = _report(
    "crosscheck",
    ["formula", "graphs", "nodes_checked", "disagreements", "agree"],
    {
        "formula": {"type": "string"},
        "graphs": {"type": "integer"},
        "nodes_checked": {"type": "integer"},
        "disagreements": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["graph", "node", "gnn", "logic"],
                "properties": {
                    "graph": {"type": "string"},
                    "node": {"type": "string"},
                    "gnn": {"type": "integer"},
                    "logic": {"type": "boolean"},
                },
            },
        },
        "agree": {"type": "boolean"},
    },
)

CHARFORM_REPORT_SCHEMA = _report(
    "charform",
    ["formula", "level", "bound", "modal_depth", "counting_bound"],
    {
        "formula": {"type": "string"},
        "level": {"type": "integer", "minimum": 0},
        "bound": _BOUND,
        "modal_depth": {"type": "integer"},
        "counting_bound": {"type": "integer"},
        "subject": _NODE_REF,
    },
)

CLASSES_REPORT_SCHEMA = _report(
    "classes",
    ["count", "classes"],
    {
        "count": {"type": "integer", "minimum": 0},
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["representative", "members"],
                "properties": {
                    "representative": _NODE_REF,
                    "members": {"type": "array", "items": _NODE_REF},
                },
            },
        },
    },
)

GEN_REPORT_SCHEMA = _report(
    "gen",
    ["kind", "n", "out", "sha256"],
    {
        "kind": {"enum": ["cycle", "star", "random"]},
        "n": {"type": "integer", "minimum": 0},
        "dim": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "out": {"type": "string"},
        "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
    },
)

REPORT_SCHEMAS = {
    "distinguish": DISTINGUISH_REPORT_SCHEMA,
    "bisim": BISIM_REPORT_SCHEMA,
    "modelcheck": MODELCHECK_REPORT_SCHEMA,
    "compile": COMPILE_REPORT_SCHEMA,
    "rungnn": RUNGNN_REPORT_SCHEMA,
    "crosscheck": CROSSCHECK_REPORT_SCHEMA,
    "charform": CHARFORM_REPORT_SCHEMA,
    "classes": CLASSES_REPORT_SCHEMA,
    "gen": GEN_REPORT_SCHEMA,
}
