"""Write a seeded synthetic parallel corpus in the CLI's input formats.

    python scripts/make_synthetic_corpus.py --out-prefix data/synth --n 1000

produces data/synth.{ja,en,docs,ja.pos,en.conllu}.
"""

import argparse
from pathlib import Path

from zpaug.synthetic import synthetic_corpus, write_synthetic_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-prefix", required=True)
    ap.add_argument("--n", type=int, default=1000, help="sentence pairs")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--drop-rate", type=float, default=0.7, help="probability a Japanese subject is omitted")
    args = ap.parse_args()
    Path(args.out_prefix).parent.mkdir(parents=True, exist_ok=True)
    paths = write_synthetic_corpus(args.out_prefix, synthetic_corpus(args.n, args.seed, args.drop_rate))
    for key, path in paths.items():
        print(f"{key}\t{path}")


if __name__ == "__main__":
    main()
