"""Command-line surface for batch verification runs.

Every command prints one JSON report to stdout. Verdicts are encoded in the
exit code so shell harnesses need no JSON parsing:

    0   success / indistinguishable / bisimilar / all agree
    10  distinguished / not bisimilar
    11  compiled network disagrees with the model checker somewhere
    2   file, format, or usage error

Reports are deterministic for fixed inputs and --seed except for the
`elapsed_s` timing field.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from pathlib import Path

from .bisim import bisim_classes, bisim_oracle, bisimilar_via_twl
from .errors import FormulaParseError, GraphFormatError, ResourceLimitError
from .generators import cycle_graph, random_graph, star_graph
from .gnn import compile_formula, load_model, model_to_json, run_gnn, save_model
from .graphs import LabelledGraph, PointedGraph, dumps_graph, load_graph, save_graph
from .logic import (
    char_formula_bounded,
    char_formula_unbounded,
    counting_bound,
    evaluate,
    format_formula,
    modal_depth,
    parse_formula,
)
from .refinement import TwlConfig, run_twl
from .templates import TemplateRegistry, builtin_registry, load_registry

REGISTRY_ENV_VAR = "TGNN_REGISTRY"

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_DISTINGUISHED = 10
EXIT_MISMATCH = 11


class _CliError(Exception):
    pass


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _digest_file(path: str | Path) -> dict:
    return {"path": str(path), "sha256": _sha256(Path(path).read_bytes())}


class _Report:
    def __init__(self, command: str, argv: list[str]):
        self.command = command
        self.argv = argv
        self.inputs: dict[str, dict] = {}
        self.started = time.perf_counter()

    def add_input(self, name: str, path: str | Path) -> None:
        self.inputs[name] = _digest_file(path)

    def emit(self, payload: dict) -> None:
        doc = {
            "command": self.command,
            "argv": self.argv,
            "inputs": self.inputs,
            **payload,
            "elapsed_s": round(time.perf_counter() - self.started, 6),
        }
        print(json.dumps(doc, indent=2))


def _load_graph_file(report: _Report, name: str, path: str):
    graph, ids = load_graph(path)
    report.add_input(name, path)
    return graph, ids


def _registry_for(args) -> TemplateRegistry:
    path = getattr(args, "registry", None) or os.environ.get(REGISTRY_ENV_VAR)
    if path:
        return load_registry(path)
    return builtin_registry()


def _templates_for(args, registry: TemplateRegistry):
    spec = getattr(args, "templates", None)
    if not spec:
        templates = registry.templates()
        if not templates:
            raise _CliError("registry contains no templates")
        return templates
    return [registry.get(name.strip()) for name in spec.split(",") if name.strip()]


def _ap_for(registry: TemplateRegistry, dimension: int) -> list[str]:
    if registry.propositions:
        if len(registry.propositions) != dimension:
            raise _CliError(
                f"registry lists {len(registry.propositions)} propositions but the "
                f"graph has dimension {dimension}"
            )
        return list(registry.propositions)
    if dimension < 1:
        raise _CliError("graphs must carry at least one label component")
    return [f"p{i + 1}" for i in range(dimension)]


def _formula_text(args, report: _Report) -> str:
    if getattr(args, "formula", None) is not None:
        return args.formula
    if getattr(args, "formula_file", None):
        report.add_input("formula", args.formula_file)
        return Path(args.formula_file).read_text().strip()
    raise _CliError("a formula is required (--formula or --formula-file)")


def _node_index(ids: list[str], node: str, what: str) -> int:
    try:
        return ids.index(node)
    except ValueError:
        raise _CliError(f"{what}: unknown node id {node!r}") from None


def _bound_arg(text: str | None) -> int | None:
    if text is None or text in ("inf", "unbounded"):
        return None
    value = int(text)
    if value < 1:
        raise _CliError("--bound must be a positive integer or 'inf'")
    return value


def _bound_json(bound: int | None):
    return "inf" if bound is None else bound


def _load_corpus(report: _Report, directory: str):
    """Every node of every graph in the directory, as pointed graphs."""
    root = Path(directory)
    if not root.is_dir():
        raise _CliError(f"corpus directory {directory!r} does not exist")
    paths = sorted(root.glob("*.json"))
    if not paths:
        raise _CliError(f"corpus directory {directory!r} has no .json graphs")
    corpus: list[PointedGraph] = []
    names: list[tuple[str, str]] = []
    for path in paths:
        graph, ids = load_graph(path)
        report.add_input(f"corpus:{path.name}", path)
        for v in graph.nodes:
            corpus.append(PointedGraph(graph, v))
            names.append((path.name, ids[v]))
    return corpus, names


def cmd_distinguish(args, argv) -> int:
    report = _Report("distinguish", argv)
    g1, ids1 = _load_graph_file(report, "graph_a", args.graph_a)
    g2, ids2 = _load_graph_file(report, "graph_b", args.graph_b)
    v1 = _node_index(ids1, args.node_a, "graph_a")
    v2 = _node_index(ids2, args.node_b, "graph_b")
    registry = _registry_for(args)
    templates = _templates_for(args, registry)
    bound = _bound_arg(args.bound)
    cfg = TwlConfig(tuple(templates), args.rounds, bound)
    coloring = run_twl([g1, g2], cfg)

    all_ids = [ids1, ids2]
    rounds = [
        [
            {"graph": gi, "node": all_ids[gi][v], "color": coloring.color(rnd, gi, v)}
            for gi in range(2)
            for v in range(len(all_ids[gi]))
        ]
        for rnd in range(coloring.num_rounds + 1)
    ]
    distinguished = coloring.color(args.rounds, 0, v1) != coloring.color(
        args.rounds, 1, v2
    )
    report.emit(
        {
            "templates": [t.name for t in templates],
            "rounds": rounds,
            "bound": _bound_json(bound),
            "distinguished": distinguished,
        }
    )
    return EXIT_DISTINGUISHED if distinguished else EXIT_OK


def cmd_bisim(args, argv) -> int:
    report = _Report("bisim", argv)
    g1, ids1 = _load_graph_file(report, "graph_a", args.graph_a)
    g2, ids2 = _load_graph_file(report, "graph_b", args.graph_b)
    v1 = _node_index(ids1, args.node_a, "graph_a")
    v2 = _node_index(ids2, args.node_b, "graph_b")
    registry = _registry_for(args)
    templates = _templates_for(args, registry)
    bound = _bound_arg(args.bound)
    if args.method == "twl":
        verdict = bisimilar_via_twl(g1, v1, g2, v2, templates, args.level, bound)
    else:
        verdict = bisim_oracle(g1, v1, g2, v2, templates, args.level, bound)
    report.emit(
        {
            "bisimilar": verdict,
            "level": args.level,
            "bound": _bound_json(bound),
            "method": args.method,
        }
    )
    return EXIT_OK if verdict else EXIT_DISTINGUISHED


def cmd_modelcheck(args, argv) -> int:
    report = _Report("modelcheck", argv)
    graph, ids = _load_graph_file(report, "graph", args.graph)
    registry = _registry_for(args)
    ap = _ap_for(registry, graph.dimension)
    text = _formula_text(args, report)
    phi = parse_formula(text, registry, ap)
    if args.node is not None:
        nodes = [_node_index(ids, args.node, "graph")]
    else:
        nodes = list(graph.nodes)
    results = [
        {"node": ids[v], "value": evaluate(phi, graph, v)} for v in nodes
    ]
    report.emit({"formula": text, "results": results})
    return EXIT_OK


def cmd_compile(args, argv) -> int:
    report = _Report("compile", argv)
    registry = _registry_for(args)
    if registry.propositions:
        ap = list(registry.propositions)
    elif args.propositions:
        ap = [p.strip() for p in args.propositions.split(",") if p.strip()]
    else:
        raise _CliError(
            "an alphabet is required: registry propositions or --propositions"
        )
    text = _formula_text(args, report)
    phi = parse_formula(text, registry, ap)
    model = compile_formula(phi, ap)
    payload = {
        "formula": text,
        "dimension": model.dimension,
        "input_dimension": model.in_dim,
        "layers": len(model.layers),
        "slots": len(model.layers[0].slots) if model.layers else 0,
        "counting_bound": counting_bound(phi),
    }
    if args.out:
        save_model(model, args.out)
        payload["out"] = args.out
    else:
        payload["model"] = model_to_json(model)
    report.emit(payload)
    return EXIT_OK


def cmd_rungnn(args, argv) -> int:
    report = _Report("rungnn", argv)
    model = load_model(args.model)
    report.add_input("model", args.model)
    graph, ids = _load_graph_file(report, "graph", args.graph)
    run = run_gnn(model, graph)
    payload = {
        "classification": [
            {"node": ids[v], "value": run.classification[v]} for v in graph.nodes
        ]
    }
    if args.features:
        payload["features"] = [layer.tolist() for layer in run.features]
    report.emit(payload)
    return EXIT_OK


def cmd_crosscheck(args, argv) -> int:
    report = _Report("crosscheck", argv)
    registry = _registry_for(args)

    graphs: list[tuple[str, LabelledGraph, list[str]]] = []
    if args.graphs:
        root = Path(args.graphs)
        if not root.is_dir():
            raise _CliError(f"graph directory {args.graphs!r} does not exist")
        paths = sorted(root.glob("*.json"))
        if not paths:
            raise _CliError(f"graph directory {args.graphs!r} has no .json graphs")
        for path in paths:
            graph, ids = load_graph(path)
            report.add_input(f"graph:{path.name}", path)
            graphs.append((path.name, graph, ids))
        dimension = graphs[0][1].dimension
    elif args.random:
        dimension = args.dim
        rng = random.Random(args.seed)
        for i in range(args.random):
            graph = random_graph(rng, rng.randint(1, args.size), dimension, args.p)
            graphs.append((f"random-{i}", graph, [str(v) for v in graph.nodes]))
    else:
        raise _CliError("either --graphs or --random is required")

    ap = _ap_for(registry, dimension)
    text = _formula_text(args, report)
    phi = parse_formula(text, registry, ap)
    if args.model:
        model = load_model(args.model)
        report.add_input("model", args.model)
    else:
        model = compile_formula(phi, ap)

    disagreements = []
    nodes_checked = 0
    for name, graph, ids in graphs:
        run = run_gnn(model, graph)
        for v in graph.nodes:
            nodes_checked += 1
            truth = evaluate(phi, graph, v)
            if run.classification[v] != int(truth):
                disagreements.append(
                    {
                        "graph": name,
                        "node": ids[v],
                        "gnn": run.classification[v],
                        "logic": truth,
                    }
                )
    report.emit(
        {
            "formula": text,
            "graphs": len(graphs),
            "nodes_checked": nodes_checked,
            "disagreements": disagreements,
            "agree": not disagreements,
        }
    )
    return EXIT_OK if not disagreements else EXIT_MISMATCH


def cmd_charform(args, argv) -> int:
    report = _Report("charform", argv)
    graph, ids = _load_graph_file(report, "graph", args.graph)
    v = _node_index(ids, args.node, "graph")
    registry = _registry_for(args)
    templates = _templates_for(args, registry)
    ap = _ap_for(registry, graph.dimension)
    bound = _bound_arg(args.bound)
    if bound is None:
        phi = char_formula_unbounded(graph, v, args.level, templates, ap)
    else:
        if not args.corpus:
            raise _CliError("bounded characteristic formulae need --corpus")
        corpus, _names = _load_corpus(report, args.corpus)
        phi = char_formula_bounded(graph, v, args.level, bound, templates, corpus, ap)
    text = format_formula(phi, ap)
    report.emit(
        {
            "formula": text,
            "level": args.level,
            "bound": _bound_json(bound),
            "modal_depth": modal_depth(phi),
            "counting_bound": counting_bound(phi),
            "subject": {"graph": args.graph, "node": args.node},
        }
    )
    return EXIT_OK


def cmd_classes(args, argv) -> int:
    report = _Report("classes", argv)
    registry = _registry_for(args)
    templates = _templates_for(args, registry)
    bound = _bound_arg(args.bound)
    corpus, names = _load_corpus(report, args.corpus)
    classes = bisim_classes(corpus, templates, args.level, bound)
    payload_classes = []
    for cls in classes:
        members = [{"graph": names[i][0], "node": names[i][1]} for i in cls]
        payload_classes.append({"representative": members[0], "members": members})
    report.emit({"count": len(classes), "classes": payload_classes})
    return EXIT_OK


def cmd_gen(args, argv) -> int:
    report = _Report("gen", argv)
    if args.kind == "cycle":
        graph = cycle_graph(args.n, args.dim)
    elif args.kind == "star":
        graph = star_graph(args.n, args.dim)
    else:
        graph = random_graph(random.Random(args.seed), args.n, args.dim, args.p)
    text = dumps_graph(graph)
    if args.out:
        Path(args.out).write_text(text)
        report.emit(
            {
                "kind": args.kind,
                "n": args.n,
                "dim": args.dim,
                "seed": args.seed,
                "out": args.out,
                "sha256": _sha256(text.encode()),
            }
        )
    else:
        print(text, end="")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgnn",
        description="Template-GNN verification toolkit",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, registry=True, templates=False):
        if registry:
            p.add_argument("--registry", help="registry file (default: builtin)")
        if templates:
            p.add_argument(
                "--templates",
                help="comma-separated template names (default: whole registry)",
            )

    p = sub.add_parser("distinguish", help="compare two pointed graphs by refinement")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("node_a")
    p.add_argument("node_b")
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--bound", default=None, help="multiplicity cap or 'inf'")
    common(p, templates=True)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("bisim", help="decide graded template bisimilarity")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("node_a")
    p.add_argument("node_b")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--bound", default=None)
    p.add_argument("--method", choices=["twl", "oracle"], default="twl")
    common(p, templates=True)
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("modelcheck", help="evaluate a formula on graph nodes")
    p.add_argument("graph")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--node")
    group.add_argument("--all-nodes", action="store_true")
    p.add_argument("--formula")
    p.add_argument("--formula-file")
    common(p)
    p.set_defaults(func=cmd_modelcheck)

    p = sub.add_parser("compile", help="compile a formula into a bounded model")
    p.add_argument("--formula")
    p.add_argument("--formula-file")
    p.add_argument("--out", help="model file to write (default: inline in report)")
    p.add_argument(
        "--propositions",
        help="comma-separated alphabet when the registry lists none",
    )
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("rungnn", help="run a model file on a graph")
    p.add_argument("model")
    p.add_argument("graph")
    p.add_argument("--features", action="store_true", help="include per-layer features")
    p.set_defaults(func=cmd_rungnn)

    p = sub.add_parser(
        "crosscheck",
        help="compare compiled-model classification against the model checker",
    )
    p.add_argument("--formula")
    p.add_argument("--formula-file")
    p.add_argument("--graphs", help="directory of graph files")
    p.add_argument("--random", type=int, help="number of random graphs")
    p.add_argument("--size", type=int, default=6, help="max random graph size")
    p.add_argument("--dim", type=int, default=1, help="random graph label width")
    p.add_argument("--p", type=float, default=0.3, help="random edge probability")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", help="check this model file instead of compiling")
    common(p)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("charform", help="characteristic formula of a pointed graph")
    p.add_argument("graph")
    p.add_argument("node")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--bound", default=None, help="counting bound or 'inf'")
    p.add_argument("--corpus", help="directory of graphs forming the class corpus")
    common(p, templates=True)
    p.set_defaults(func=cmd_charform)

    p = sub.add_parser("classes", help="bisimulation classes over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--bound", default=None)
    common(p, templates=True)
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("gen", help="write a generated graph file")
    p.add_argument("--kind", choices=["cycle", "star", "random"], required=True)
    p.add_argument("--n", type=int, required=True, help="cycle/random nodes or star leaves")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args, list(argv))
    except (
        _CliError,
        GraphFormatError,
        FormulaParseError,
        ResourceLimitError,
        FileNotFoundError,
        NotADirectoryError,
        KeyError,
        ValueError,
    ) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_ERROR


def entry() -> None:
    raise SystemExit(main())
