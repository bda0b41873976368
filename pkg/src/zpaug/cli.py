"""Command-line driver: one subcommand per pipeline stage, file-based handoff.

Exit status: 0 on success, 1 on invalid input or usage, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from types import SimpleNamespace

from . import alignment, augment, classifier, evaluation, zp_analysis
from .corpus_io import attach_parses, load_conllu, load_parallel, write_parallel

log = logging.getLogger("zpaug")

# Flags naming files that must exist before a subcommand starts.
INPUT_FLAGS = (
    "ja", "en", "docs", "ja_pos", "en_conllu", "table", "alignments", "instances",
    "model", "lexicon", "hyp", "ref", "corpus", "lm", "triples", "scores",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _csv(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _close_out(f):
    if f is not sys.stdout:
        f.close()


def _corpus(args, need_pos=False, need_parse=False):
    corpus = load_parallel(args.ja, args.en, getattr(args, "docs", None), getattr(args, "ja_pos", None))
    if need_pos and getattr(args, "ja_pos", None) is None:
        raise UsageError("--ja-pos is required")
    conllu = getattr(args, "en_conllu", None)
    if conllu is not None:
        corpus = attach_parses(corpus, load_conllu(conllu))
    elif need_parse:
        raise UsageError("--en-conllu is required")
    return corpus


def _lr_config(args) -> classifier.LRConfig:
    return classifier.LRConfig(args.learning_rate, args.epochs, args.l2, args.seed)


def _classifier_data(args):
    instances = zp_analysis.read_instances(args.instances)
    data = classifier.classifier_data(instances, not args.all_instances, args.include_empty)
    labels = [p.lower() for p in _csv(args.pronouns)]
    extra = sorted({lab for _, lab in data} - set(labels))
    return data, labels + extra


# ---- subcommands -----------------------------------------------------------

def cmd_align_train(args):
    corpus = _corpus(args)
    history: list[float] = []
    table = alignment.train_ibm1(corpus, args.iterations, history)
    for it, ll in enumerate(history):
        log.info("iteration %d log-likelihood %.6f", it, ll)
    alignment.write_table(args.out, table)


def cmd_align(args):
    corpus = _corpus(args)
    table = alignment.read_table(args.table)
    alignment.write_alignments(args.out, alignment.align_corpus(corpus, table))


def cmd_detect(args):
    corpus = _corpus(args)
    aligns = alignment.read_alignments(args.alignments, corpus)
    lex = zp_analysis.PronounLexicon(tuple(p.lower() for p in _csv(args.pronouns)))
    zp_analysis.write_instances(args.out, zp_analysis.detect_corpus(corpus, aligns, lex))


def cmd_extract(args):
    corpus = _corpus(args, need_pos=True, need_parse=True)
    aligns = alignment.read_alignments(args.alignments, corpus)
    instances = zp_analysis.read_instances(args.instances)
    fpos = zp_analysis.FunctionalPosSet(frozenset(_csv(args.functional_pos)))
    zp_analysis.write_instances(args.out, zp_analysis.extract_corpus(corpus, aligns, instances, fpos))


def cmd_classify_cv(args):
    data, labels = _classifier_data(args)
    if len(data) < args.folds:
        raise ValueError(f"{len(data)} usable instances for {args.folds} folds")
    result = classifier.cross_validate(data, args.folds, _lr_config(args), args.seed, labels)
    baseline = classifier.random_baseline([lab for _, lab in data], labels)
    f = _open_out(args.out)
    try:
        classifier.write_cv_report(f, result, baseline)
    finally:
        _close_out(f)


def cmd_classify_train(args):
    data, labels = _classifier_data(args)
    model = classifier.fit_contexts([c for c, _ in data], [lab for _, lab in data], _lr_config(args), labels)
    classifier.write_model(args.out, model)


def cmd_top_features(args):
    model = classifier.read_model(args.model)
    if args.label not in model.labels:
        raise ValueError(f"label {args.label!r} not in model labels {list(model.labels)}")
    for g, w in classifier.top_features(model, args.label, args.k):
        print(f"{g}\t{w:.6f}")


def cmd_report(args):
    instances = zp_analysis.read_instances(args.instances)
    lex = zp_analysis.PronounLexicon(tuple(p.lower() for p in _csv(args.pronouns)))
    f = _open_out(args.out)
    try:
        zp_analysis.write_report(f, zp_analysis.build_report(instances, lex))
    finally:
        _close_out(f)


def _lexicon(args):
    return augment.read_lexicon(args.lexicon) if args.lexicon else augment.default_lexicon()


def _patterns(args):
    groups = _csv(args.groups) if args.groups else None
    return augment.compile_patterns(_lexicon(args), groups)


def cmd_compile_patterns(args):
    patterns = _patterns(args)
    f = _open_out(args.out)
    try:
        f.writelines(p + "\n" for p in patterns)
    finally:
        _close_out(f)


def cmd_augment(args):
    corpus = _corpus(args)
    patterns = _patterns(args)
    emitted, stats, prov = augment.augment_corpus(corpus, patterns)
    pairs = (list(corpus) if args.append else []) + emitted
    write_parallel(args.out_prefix, pairs, with_pos=args.ja_pos is not None)
    augment.write_provenance(args.out_prefix + ".prov.tsv", prov)
    for key in ("input_pairs", "matched_pairs", "emitted_pairs", "deletions_total"):
        print(f"{key}\t{getattr(stats, key)}")


def cmd_concat_2to1(args):
    corpus = _corpus(args)
    write_parallel(args.out_prefix, augment.make_2to1(corpus, args.separator), with_pos=args.ja_pos is not None)


def _read_token_lines(path):
    with open(path, encoding="utf-8") as f:
        return [line.split() for line in f.read().splitlines()]


def cmd_bleu(args):
    hyp = _read_token_lines(args.hyp)
    ref = _read_token_lines(args.ref)
    print(f"{100 * evaluation.corpus_bleu(hyp, ref, args.max_n):.2f}")


def cmd_lm_train(args):
    corpus = [s for s in _read_token_lines(args.corpus) if s]
    evaluation.write_lm(args.out, evaluation.train_ngram_lm(corpus, args.order, args.add_k))


def cmd_score_triples(args):
    lm = evaluation.read_lm(args.lm)
    triples = evaluation.read_triples(args.triples)
    evaluation.write_scores(args.out, evaluation.score_triples(lm, triples))


def cmd_zp_eval(args):
    triples = evaluation.read_triples(args.triples)
    scores = evaluation.read_scores(args.scores)
    acc, outcomes = evaluation.zp_accuracy(triples, scores)
    if args.outcomes:
        with open(args.outcomes, "w", encoding="utf-8", newline="\n") as f:
            f.writelines(f"{i}\t{int(ok)}\n" for i, ok in outcomes)
    print(f"{acc:.4f}")


def cmd_pipeline(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {k: str(out / name) for k, name in [
        ("table", "table.tsv"), ("alignments", "alignments.txt"), ("instances", "instances.tsv"),
        ("contexts", "contexts.tsv"), ("cv", "cv.tsv"), ("report", "report.tsv"),
    ]}
    base = vars(args).copy()

    def stage(fn, **kw):
        ns = SimpleNamespace(**{**base, **kw})
        log.info("pipeline: %s", fn.__name__[4:])
        fn(ns)

    stage(cmd_align_train, out=files["table"])
    stage(cmd_align, table=files["table"], out=files["alignments"])
    stage(cmd_detect, alignments=files["alignments"], out=files["instances"])
    stage(cmd_extract, alignments=files["alignments"], instances=files["instances"], out=files["contexts"])
    stage(cmd_classify_cv, instances=files["contexts"], out=files["cv"])
    stage(cmd_report, instances=files["instances"], out=files["report"])


# ---- argument parsing -------------------------------------------------------

def _add_corpus(p, docs=True, annotations=False):
    p.add_argument("--ja", required=True, help="tokenized Japanese file, one sentence per line")
    p.add_argument("--en", required=True, help="tokenized English file, one sentence per line")
    if docs:
        p.add_argument("--docs", help="document id per line (default: a single document)")
    p.add_argument("--ja-pos", help="space-separated Japanese POS tags per line")
    if annotations:
        p.add_argument("--en-conllu", help="CoNLL-U parses of the English side")


def _add_classifier(p, instances=True):
    if instances:
        p.add_argument("--instances", required=True, help="instances TSV with contexts")
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--l2", type=float, default=1e-4, help="L2 strength (bias not penalized)")
    p.add_argument("--all-instances", action="store_true", help="use non-zero pronouns too")
    p.add_argument("--include-empty", action="store_true", help="keep instances with empty context")


def _add_pronouns(p):
    p.add_argument("--pronouns", default=",".join(zp_analysis.DEFAULT_PRONOUNS),
                   help="comma-separated English pronoun list")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zpaug", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file setting flag defaults; flags override")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help, description=help, parents=[common])
        p.set_defaults(func=fn)
        return p

    p = add("align-train", cmd_align_train, "train IBM Model 1 translation probabilities")
    _add_corpus(p)
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--out", required=True, help="translation table TSV")

    p = add("align", cmd_align, "Viterbi-align English tokens to Japanese tokens or NULL")
    _add_corpus(p)
    p.add_argument("--table", required=True)
    p.add_argument("--out", required=True, help="Pharaoh-style en-ja links per line")

    p = add("detect", cmd_detect, "flag English pronouns aligned to NULL as zero pronouns")
    _add_corpus(p)
    p.add_argument("--alignments", required=True)
    _add_pronouns(p)
    p.add_argument("--out", required=True)

    p = add("extract", cmd_extract, "extract Japanese local context for each pronoun")
    _add_corpus(p, annotations=True)
    p.add_argument("--alignments", required=True)
    p.add_argument("--instances", required=True)
    p.add_argument("--functional-pos", default=",".join(zp_analysis.DEFAULT_FUNCTIONAL_POS),
                   help="comma-separated POS tags counted as functional words")
    p.add_argument("--out", required=True)

    p = add("classify-cv", cmd_classify_cv, "cross-validated pronoun recall vs random baseline")
    _add_classifier(p)
    _add_pronouns(p)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--out", help="CV report TSV (default: stdout)")

    p = add("classify-train", cmd_classify_train, "train the pronoun classifier on all instances")
    _add_classifier(p)
    _add_pronouns(p)
    p.add_argument("--out", required=True, help="model file")

    p = add("top-features", cmd_top_features, "highest-weighted n-grams for one pronoun")
    p.add_argument("--model", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--k", type=int, default=10)

    p = add("report", cmd_report, "pronoun and zero-pronoun counts")
    p.add_argument("--instances", required=True)
    _add_pronouns(p)
    p.add_argument("--out", help="report TSV (default: stdout)")

    p = add("compile-patterns", cmd_compile_patterns, "list pronoun+particle deletion patterns")
    p.add_argument("--lexicon", help="lexicon file (default: built-in lists)")
    p.add_argument("--groups", help="comma-separated pronoun groups to use")
    p.add_argument("--out", help="default: stdout")

    p = add("augment", cmd_augment, "zero-pronoun data augmentation by pronoun+particle deletion")
    _add_corpus(p)
    p.add_argument("--lexicon", help="lexicon file (default: built-in lists)")
    p.add_argument("--groups", help="comma-separated pronoun groups, e.g. first_singular,second_singular")
    p.add_argument("--append", action="store_true", help="write originals followed by augmented pairs")
    p.add_argument("--out-prefix", required=True, help="writes PREFIX.ja/.en/.docs and PREFIX.prov.tsv")

    p = add("concat-2to1", cmd_concat_2to1, "prepend the previous sentence of the same document")
    _add_corpus(p)
    p.add_argument("--separator", default="<SEP>")
    p.add_argument("--out-prefix", required=True)

    p = add("bleu", cmd_bleu, "corpus BLEU x100 of tokenized hypotheses against references")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--max-n", type=int, default=4)

    p = add("lm-train", cmd_lm_train, "train an add-k n-gram language model")
    p.add_argument("--corpus", required=True, help="tokenized sentences, one per line")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--add-k", type=float, default=0.1)
    p.add_argument("--out", required=True)

    p = add("score-triples", cmd_score_triples, "perplexities of both targets of each triple")
    p.add_argument("--lm", required=True)
    p.add_argument("--triples", required=True)
    p.add_argument("--out", required=True)

    p = add("zp-eval", cmd_zp_eval, "contrastive zero-pronoun accuracy from perplexity scores")
    p.add_argument("--triples", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--outcomes", help="per-triple outcome TSV (id, 1/0)")

    p = add("pipeline", cmd_pipeline, "align-train, align, detect, extract, classify-cv, report")
    _add_corpus(p, annotations=True)
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--functional-pos", default=",".join(zp_analysis.DEFAULT_FUNCTIONAL_POS))
    p.add_argument("--folds", type=int, default=5)
    _add_classifier(p, instances=False)
    _add_pronouns(p)
    p.add_argument("--out-dir", required=True)
    return parser


def _read_config(path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _apply_config(parser, argv, config):
    """Re-parse with config values as defaults so explicit flags still win."""
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    targets = [parser] + list(sub.choices.values())
    for p in targets:
        for action in p._actions:
            if action.dest in config:
                value = config[action.dest]
                if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
                    value = value.lower() in ("1", "true", "yes", "on")
                p.set_defaults(**{action.dest: value})
    return parser.parse_args(argv)


def _validate_paths(args):
    for dest in INPUT_FLAGS:
        path = getattr(args, dest, None)
        if path is not None and not os.path.isfile(path):
            raise FileNotFoundError(f"--{dest.replace('_', '-')}: no such file: {path}")
    for dest in ("out",):
        path = getattr(args, dest, None)
        if path not in (None, "-"):
            parent = os.path.dirname(os.path.abspath(path))
            if not os.path.isdir(parent):
                raise FileNotFoundError(f"--out: directory does not exist: {parent}")
    prefix = getattr(args, "out_prefix", None)
    if prefix is not None and not os.path.isdir(os.path.dirname(os.path.abspath(prefix))):
        raise FileNotFoundError(f"--out-prefix: directory does not exist for {prefix}")


def run(argv=None) -> int:
    try:
        return _run(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else 1


def _run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.config:
            args = _apply_config(parser, argv, _read_config(args.config))
        if args.command is None:
            parser.print_usage(sys.stderr)
            print("zpaug: error: a command is required", file=sys.stderr)
            return 1
        _validate_paths(args)
        args.func(args)
    except (UsageError, ValueError, FloatingPointError) as exc:
        print(f"zpaug {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"zpaug {args.command}: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
