"""Augmentation yield per pronoun group on the synthetic corpus.

For each group of the built-in lexicon, and for all groups together, counts
how many source sentences match a pronoun+particle pattern and how many
deletions are made.  Also reports how many pairs the 2to1 concatenation
changes.
"""

import argparse

from zpaug.augment import augment_corpus, compile_patterns, default_lexicon, make_2to1
from zpaug.synthetic import synthetic_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--drop-rate", type=float, default=0.7)
    args = ap.parse_args()
    corpus = synthetic_corpus(args.n, args.seed, args.drop_rate)
    lexicon = default_lexicon()

    print("groups\tpatterns\tmatched\temitted\tdeletions")
    for groups in [[g] for g in lexicon.pronoun_groups] + [None]:
        patterns = compile_patterns(lexicon, groups)
        _, stats, _ = augment_corpus(corpus, patterns)
        name = groups[0] if groups else "all"
        print(f"{name}\t{len(patterns)}\t{stats.matched_pairs}\t{stats.emitted_pairs}\t{stats.deletions_total}")

    concatenated = make_2to1(corpus)
    changed = sum(a.ja_raw != b.ja_raw for a, b in zip(corpus, concatenated))
    print(f"2to1: {changed} of {len(corpus)} pairs receive a previous sentence")


if __name__ == "__main__":
    main()
