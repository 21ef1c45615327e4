"""Command-line entry point.

Exit status: 0 on success, 1 when an operation fails (I/O, parse or module
error), 2 for usage errors, 3 when a theory check reports a violated statement.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import os
import sys

from . import io
from .errors import MetaSpectralError
from .generators import parse_template, sbm_meta
from .metagraph import build_meta_graph
from .metrics import accuracy, pair_indices, symdiff_volume
from .pipeline import spectral_cluster, spectral_embed
from .similarity import gaussian_graph, knn_graph, read_feature_csv
from .sweep import ExperimentConfig, load_config, rows_to_csv, run_sweep

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_VIOLATED = 0, 1, 2, 3
EVAL_HEADER = ("seed", "k", "l", "accuracy", "rand", "ari", "nmi", "symdiff_volume")


def _emit(text: str, out: str | None) -> None:
    if out:
        io.write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        template = cfg.meta_template()
        n, p = cfg.n_per_cluster, cfg.p
        q = p / cfg.ratios[0] if args.q is None else args.q
        seed = cfg.seed if args.seed is None else args.seed
    else:
        if args.template is None or args.n is None or args.p is None or args.q is None:
            raise SystemExit("generate needs --config or all of --template, --n, --p, --q")
        template = parse_template(args.template)
        n, p, q = args.n, args.p, args.q
        seed = args.seed or 0
    inst = sbm_meta(template, n, p, q, seed=seed)
    io.write_edge_list(inst.graph, args.graph,
                       comment=f"sbm template={template.spec()} n={n} p={p!r} q={q!r} seed={seed}"
                               f" repaired={len(inst.repaired)}")
    io.write_labels(inst.truth, args.labels)
    return EXIT_OK


def cmd_cluster(args) -> int:
    G = io.read_edge_list(args.graph)
    res = spectral_cluster(G, args.k, args.l, seed=args.seed or 0, restarts=args.restarts,
                           drop_trivial=args.drop_trivial_eigenvector)
    if args.out:
        io.write_labels(res, args.out)
    else:
        sys.stdout.writelines(f"{x}\n" for x in res.labels)
    return EXIT_OK


def cmd_eval(args) -> int:
    G = io.read_edge_list(args.graph)
    truth = io.read_labels(args.labels)
    pred = io.read_labels(args.pred, k=truth.k)
    if truth.n != G.n or pred.n != G.n:
        raise MetaSpectralError("label files must have one line per graph vertex")
    rand, ari, nmi = pair_indices(pred, truth)
    row = [args.seed if args.seed is not None else "", truth.k,
           args.l if args.l is not None else "", repr(accuracy(pred, truth)), repr(rand),
           repr(ari), repr(nmi), repr(symdiff_volume(pred, truth, G))]
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EVAL_HEADER)
    w.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .theory import full_report

    G = io.read_edge_list(args.graph)
    truth = io.read_labels(args.labels)
    l = truth.k if args.l is None else args.l
    pred = io.read_labels(args.pred, k=truth.k) if args.pred else None
    report = full_report(G, truth, l, output=pred, seed=args.seed or 0, restarts=args.restarts)
    _emit(report.to_json() + "\n", args.out)
    bad = report.violated()
    for r in bad:
        print(f"violated: {r.id} lhs={r.lhs!r} bound={r.bound!r}", file=sys.stderr)
    return EXIT_VIOLATED if bad else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        d = cfg.to_dict()
        d["seed"] = args.seed
        cfg = ExperimentConfig.from_dict(d)
    rows = run_sweep(cfg, workers=args.workers)
    _emit(rows_to_csv(rows), args.out or cfg.out)
    return EXIT_OK


def cmd_embed(args) -> int:
    G = io.read_edge_list(args.graph)
    emb = spectral_embed(G, args.l, seed=args.seed or 0,
                         drop_trivial=args.drop_trivial_eigenvector)
    labels = io.read_labels(args.labels).labels if args.labels else None
    io.write_embedding(emb.points, args.out or sys.stdout, labels)
    return EXIT_OK


def cmd_meta(args) -> int:
    G = io.read_edge_list(args.graph)
    truth = io.read_labels(args.labels)
    io.write_meta_graph(build_meta_graph(G, truth), args.out)
    return EXIT_OK


def cmd_similarity(args) -> int:
    ft = read_feature_csv(args.features)
    if args.kind == "gaussian":
        if args.sigma is None:
            raise SystemExit("gaussian graphs need --sigma")
        G = gaussian_graph(ft, args.sigma, weight_floor=args.floor)
    else:
        G = knn_graph(ft, args.neighbours, weighted=args.sigma is not None, sigma=args.sigma)
    io.write_edge_list(G, args.graph)
    if args.labels and ft.labels is not None:
        io.write_labels(ft.labels, args.labels)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metaspectral",
                                     description="Spectral clustering with l eigenvectors.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a planted-partition graph")
    g.add_argument("--config", help="experiment config JSON (template, n, p, first ratio)")
    g.add_argument("--template", help="cycle:K, path:K, complete:K or grid:RxC")
    g.add_argument("--n", type=int, help="vertices per cluster")
    g.add_argument("--p", type=float, help="intra-cluster edge probability")
    g.add_argument("--q", type=float, help="inter-cluster edge probability")
    g.add_argument("--seed", type=int)
    g.add_argument("--graph", required=True, help="edge-list output path")
    g.add_argument("--labels", required=True, help="ground-truth labels output path")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("cluster", help="spectral clustering of an edge list")
    c.add_argument("--graph", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--l", type=int, help="number of eigenvectors (default k)")
    c.add_argument("--seed", type=int)
    c.add_argument("--restarts", type=int, default=10)
    c.add_argument("--drop-trivial-eigenvector", action="store_true")
    c.add_argument("--out", help="labels output path (default stdout)")
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("eval", help="compare predicted labels with ground truth")
    e.add_argument("--graph", required=True)
    e.add_argument("--labels", required=True, help="ground-truth labels")
    e.add_argument("--pred", required=True, help="predicted labels")
    e.add_argument("--seed", type=int, help="recorded in the output row")
    e.add_argument("--l", type=int, help="recorded in the output row")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="check the structure bounds on an instance")
    v.add_argument("--graph", required=True)
    v.add_argument("--labels", required=True, help="ground-truth labels")
    v.add_argument("--l", type=int)
    v.add_argument("--pred", help="output labels (default: run spectral clustering)")
    v.add_argument("--seed", type=int)
    v.add_argument("--restarts", type=int, default=10)
    v.add_argument("--out", help="JSON report path (default stdout)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="run an experiment grid from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, help="override the config's master seed")
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="results CSV path (default: config 'out' or stdout)")
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("embed", help="dump the spectral embedding as CSV")
    m.add_argument("--graph", required=True)
    m.add_argument("--l", type=int, required=True)
    m.add_argument("--labels", help="optional labels to append as a column")
    m.add_argument("--seed", type=int)
    m.add_argument("--drop-trivial-eigenvector", action="store_true")
    m.add_argument("--out")
    m.set_defaults(func=cmd_embed)

    mg = sub.add_parser("meta", help="dump the meta-graph of a labelling")
    mg.add_argument("--graph", required=True)
    mg.add_argument("--labels", required=True)
    mg.add_argument("--out", required=True)
    mg.set_defaults(func=cmd_meta)

    f = sub.add_parser("similarity", help="build a graph from a feature CSV")
    f.add_argument("--features", required=True)
    f.add_argument("--kind", choices=("gaussian", "knn"), default="knn")
    f.add_argument("--sigma", type=float, help="kernel width (knn: switches to kernel weights)")
    f.add_argument("--floor", type=float, default=0.0, help="drop Gaussian weights at or below")
    f.add_argument("--neighbours", type=int, default=3)
    f.add_argument("--graph", required=True, help="edge-list output path")
    f.add_argument("--labels", help="write the label column here, if present")
    f.set_defaults(func=cmd_similarity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            parser.error(exc.code)
        raise
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except (MetaSpectralError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
