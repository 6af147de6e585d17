"""Command-line entry point.

Execution (``run``) is strictly separated from analysis: every other
subcommand consumes the canonical relation JSON, never a raw corpus.  All
outputs are canonical (sorted keys, fixed order, newline-terminated) so reruns
with identical inputs are byte-identical.

Exit codes: 0 success, 1 runtime/partial failure, 2 usage or validation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classify import evaluate, load_ground_truth, report_json, score_rule_classifier, vote_classifier
from .diagram import build_diagram, diagram_report, is_consistent
from .distill import (
    distill,
    histogram_csv,
    inconsistency_scores,
    scores_csv,
    select_inputs,
    selection_report_csv,
    trace_json,
)
from .dowker import betti_numbers, build_complex, build_graph, consistent_core, graph_dot, inconsistent_inputs
from .errors import TdtError
from .features import attribution_json
from .harness import (
    keyword_table,
    keyword_table_csv,
    load_run_config,
    results_jsonl,
    run_corpus,
    run_summary,
)
from .relation import (
    load_feature_relation,
    load_relation,
    mask_from_names,
    relation_pgm,
    restrict_inputs,
    save_relation,
)
from .sheaf import display_vector, stalk_json
from .util import canonical_dumps, write_text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdt",
        description="Extract the consensus input format of a set of programs from "
        "their accept/reject behavior on a corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run configured parsers over a corpus")
    p.add_argument("--config", required=True, help="run configuration JSON")
    p.add_argument("--out", required=True, help="relation JSON to write")
    p.add_argument("--results", help="JSONL result store to write")
    p.add_argument("--keywords-out", help="keyword-match table CSV to write")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analyze", help="diagram weights, Dowker graph, inconsistent inputs")
    p.add_argument("relation")
    p.add_argument("--weights", help="weights/deficiency report JSON to write")
    p.add_argument("--dot", help="Dowker graph DOT file to write")
    p.add_argument("--inconsistent", help="inconsistent-input list JSON to write")
    p.add_argument("--betti", type=int, metavar="MAXDIM", help="also report Betti numbers")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("distill", help="remove programs until the diagram is consistent")
    p.add_argument("relation")
    p.add_argument("--trace", help="distillation trace JSON to write")
    p.add_argument("--out", help="restricted relation to write")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="format for --out and --restricted-out style relation files")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("score", help="per-input inconsistency scores")
    p.add_argument("relation")
    p.add_argument("--min-size", type=int, default=2, help="smallest swept subset size")
    p.add_argument("--mode", choices=["subset", "pairs"], default="subset")
    p.add_argument("--scores", help="scores CSV to write")
    p.add_argument("--hist", help="score histogram CSV to write")
    p.add_argument("--restrict-below", type=int, metavar="N",
                   help="also restrict the corpus to inputs with score < N")
    p.add_argument("--restricted-out", help="restricted relation to write")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("select", help="keep inputs whose region weight clears a threshold")
    p.add_argument("relation")
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--out", help="selected relation to write")
    p.add_argument("--report", help="per-threshold report CSV to write")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("sheaf", help="acceptance-pattern stalk over a program subset")
    p.add_argument("relation")
    p.add_argument("--sigma", required=True, help="comma-separated program names")
    p.add_argument("--out", help="stalk JSON to write")
    p.add_argument("--display", action="store_true",
                   help="print the ordered region-count display vector")
    p.set_defaults(func=cmd_sheaf)

    p = sub.add_parser("features", help="attribute inconsistency to input features")
    p.add_argument("relation")
    p.add_argument("--features", required=True, help="feature relation CSV")
    p.add_argument("--out", help="attribution report JSON to write")
    p.add_argument("--strict", action="store_true",
                   help="require features to be absent from consistent inputs")
    p.add_argument("--max-removed", type=int,
                   help="largest number of dropped programs to sweep")
    p.add_argument("--prune", type=int, default=0, metavar="ROUNDS",
                   help="greedy feature-pruning rounds")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("classify", help="flag non-compliant inputs and score against truth")
    p.add_argument("relation")
    p.add_argument("--vote", type=int, metavar="K",
                   help="flag inputs rejected by at least K programs")
    p.add_argument("--below", type=int, help="flag inputs with inconsistency score < BELOW")
    p.add_argument("--equal", type=int, help="also flag inputs with score == EQUAL")
    p.add_argument("--min-size", type=int, default=2, help="score sweep floor (rule mode)")
    p.add_argument("--truth", help="ground-truth CSV (input,compliant)")
    p.add_argument("--out", help="report JSON to write")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("export-pgm", help="write the accept matrix as an ASCII PGM image")
    p.add_argument("relation")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_pgm)

    return parser


def cmd_run(args) -> int:
    cfg = load_run_config(args.config)
    relation, results = run_corpus(cfg)
    save_relation(relation, args.out, fmt="json")
    if args.results:
        write_text(args.results, results_jsonl(results))
    if args.keywords_out:
        keywords = {p.name: p.keywords for p in cfg.parsers}
        table = keyword_table(results, keywords)
        write_text(args.keywords_out, keyword_table_csv(table))
    print(run_summary(relation, results))
    failures = sum(1 for r in results if r.error)
    return 1 if failures else 0


def cmd_analyze(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    diag = build_diagram(rel)
    graph = build_graph(build_complex(rel))
    core = consistent_core(graph)
    inconsistent = sorted(inconsistent_inputs(rel))
    if args.weights:
        write_text(args.weights, diagram_report(rel, diag))
    if args.dot:
        write_text(args.dot, graph_dot(graph))
    if args.inconsistent:
        write_text(args.inconsistent, canonical_dumps([rel.inputs[k] for k in inconsistent]))
    red = sum(1 for e in graph.edges if not e.consistent)
    print(
        f"{rel.m} programs, {rel.n} inputs: "
        f"{len(graph.nodes)} faces, {red} inconsistent edges, "
        f"{len(core)} faces in the consistent core, "
        f"{len(inconsistent)} inconsistent inputs"
    )
    print(f"diagram consistent: {is_consistent(diag)}")
    if args.betti is not None:
        betti = betti_numbers(build_complex(rel), args.betti)
        print("betti: " + " ".join(str(b) for b in betti))
    return 0


def cmd_distill(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    trace = distill(rel)
    if args.trace:
        write_text(args.trace, trace_json(trace))
    if args.out:
        save_relation(trace.final_relation, args.out, fmt=args.format)
    screened = ", ".join(r.program for r in trace.initial_removals) or "none"
    stepped = ", ".join(s.removed for s in trace.steps) or "none"
    print(f"screened out: {screened}")
    print(f"removed stepwise: {stepped}")
    print(f"surviving programs: {', '.join(trace.final_programs)}")
    return 0


def cmd_score(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    vec = inconsistency_scores(rel, min_subset_size=args.min_size, mode=args.mode)
    if args.scores:
        write_text(args.scores, scores_csv(vec))
    if args.hist:
        write_text(args.hist, histogram_csv(vec))
    if args.restrict_below is not None:
        kept = [k for k, s in enumerate(vec.scores) if s < args.restrict_below]
        restricted = restrict_inputs(rel, kept)
        if args.restricted_out:
            save_relation(restricted, args.restricted_out, fmt=args.format)
        print(f"restricted to score < {args.restrict_below}: kept {len(kept)} / {rel.n}")
    top = max(vec.scores) if vec.scores else 0
    print(f"scored {rel.n} inputs over {len(vec.swept)} subsets; max score {top}")
    return 0


def cmd_select(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    kept, report = select_inputs(rel, args.threshold)
    if args.out:
        save_relation(restrict_inputs(rel, kept), args.out, fmt=args.format)
    if args.report:
        write_text(args.report, selection_report_csv(report))
    print(f"kept {len(kept)} / {rel.n}")
    return 0


def cmd_sheaf(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    names = [s for s in args.sigma.split(",") if s]
    sigma = mask_from_names(rel, names)
    text = stalk_json(rel, sigma)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    if args.display:
        print(json.dumps(list(display_vector(rel, sigma))))
    return 0


def cmd_features(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    feats = load_feature_relation(args.features)
    text = attribution_json(
        rel,
        feats,
        max_removed=args.max_removed,
        strict=args.strict,
        prune_rounds=args.prune,
    )
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_classify(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    if args.vote is not None:
        predicted = vote_classifier(rel, args.vote)
    elif args.below is not None or args.equal is not None:
        below = args.below if args.below is not None else 0
        equal = args.equal if args.equal is not None else -1
        vec = inconsistency_scores(rel, min_subset_size=args.min_size)
        predicted = score_rule_classifier(vec, below=below, equal=equal)
    else:
        print("error: choose --vote K or a score rule (--below/--equal)", file=sys.stderr)
        return 2
    flagged = sorted(predicted)
    print(f"flagged {len(flagged)} / {rel.n} inputs as non-compliant")
    if args.truth:
        truth = load_ground_truth(args.truth, rel)
        report = evaluate(predicted, truth)
        text = report_json(report, rel.inputs)
        if args.out:
            write_text(args.out, text)
        else:
            sys.stdout.write(text)
        for label in ("precision", "recall", "f1"):
            value = getattr(report, label)
            print(f"{label}: " + ("undefined" if value is None else f"{float(value):.4f}"))
    elif args.out:
        write_text(args.out, canonical_dumps([rel.inputs[k] for k in flagged]))
    return 0


def cmd_export_pgm(args) -> int:
    rel = load_relation(args.relation, fmt="json")
    write_text(args.out, relation_pgm(rel))
    print(f"wrote {rel.m}x{rel.n} matrix image to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
