"""Corpus BLEU and contrastive zero-pronoun evaluation.

The add-k n-gram LM here only stands in for an NMT model's perplexities so the
contrastive harness can run end to end; real scores can be read from a file.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .corpus_io import CorpusFormatError, _read_lines

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_stats(hypotheses, references, max_n: int = 4):
    """Clipped matches and totals per order, plus hypothesis and reference length."""
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses for {len(references)} references")
    if not hypotheses:
        raise ValueError("no hypotheses")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            h = _ngram_counts(hyp, n)
            r = _ngram_counts(ref, n)
            matches[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            totals[n - 1] += max(len(hyp) - n + 1, 0)
    return matches, totals, hyp_len, ref_len


def corpus_bleu(hypotheses, references, max_n: int = 4) -> float:
    """Unsmoothed corpus BLEU in [0, 1]."""
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    matches, totals, hyp_len, ref_len = bleu_stats(hypotheses, references, max_n)
    if any(m == 0 for m in matches):
        return 0.0
    log_p = sum(math.log(m / t) for m, t in zip(matches, totals)) / max_n
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return min(1.0, bp * math.exp(log_p))


@dataclass
class NGramLM:
    order: int
    add_k: float
    vocab: frozenset[str]  # training words plus UNK
    counts: dict[tuple[str, ...], Counter] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if not self.add_k > 0:
            raise ValueError("add_k must be > 0")
        self.vocab = frozenset(self.vocab) | {UNK}
        self._totals = {h: sum(c.values()) for h, c in self.counts.items()}

    @property
    def outcomes(self) -> int:
        return len(self.vocab) + 1  # + EOS

    def map(self, w: str) -> str:
        return w if w in self.vocab else UNK

    def prob(self, word: str, context: Sequence[str]) -> float:
        h = tuple(context)[-(self.order - 1) :] if self.order > 1 else ()
        c = self.counts.get(h)
        num = (c[word] if c else 0) + self.add_k
        return num / (self._totals.get(h, 0) + self.add_k * self.outcomes)

    def events(self, sentence: Sequence[str]):
        """(context, word) pairs for a sentence, EOS included."""
        toks = [BOS] * (self.order - 1) + [self.map(w) for w in sentence] + [EOS]
        for i in range(self.order - 1, len(toks)):
            yield tuple(toks[i - self.order + 1 : i]), toks[i]


def train_ngram_lm(corpus: Sequence[Sequence[str]], order: int = 3, add_k: float = 0.1) -> NGramLM:
    if order < 1 or not add_k > 0:
        raise ValueError("order must be >= 1 and add_k > 0")
    if not corpus:
        raise ValueError("empty training corpus")
    vocab = set()
    for sent in corpus:
        for w in sent:
            if w in (BOS, EOS):
                raise ValueError(f"reserved symbol {w!r} in training data")
            vocab.add(w)
    lm = NGramLM(order, add_k, frozenset(vocab))
    counts: dict[tuple[str, ...], Counter] = defaultdict(Counter)
    for sent in corpus:
        for h, w in lm.events(sent):
            counts[h][w] += 1
    return NGramLM(order, add_k, frozenset(vocab), dict(counts))


def perplexity(lm: NGramLM, sentence: Sequence[str]) -> float:
    """exp of the mean negative log-probability over the tokens and EOS."""
    if not sentence:
        raise ValueError("empty sentence")
    logp = [math.log(lm.prob(w, h)) for h, w in lm.events(sentence)]
    return math.exp(-math.fsum(logp) / len(logp))


@dataclass(frozen=True)
class EvalTriple:
    id: int
    source: str
    target_correct: tuple[str, ...]
    target_incorrect: tuple[str, ...]

    def __post_init__(self):
        if not self.target_correct or not self.target_incorrect:
            raise ValueError(f"triple {self.id}: empty target")
        if tuple(self.target_correct) == tuple(self.target_incorrect):
            raise ValueError(f"triple {self.id}: targets are identical")


@dataclass(frozen=True)
class ScoreRecord:
    id: int
    ppl_correct: float
    ppl_incorrect: float


def score_triples(lm: NGramLM, triples: Sequence[EvalTriple]) -> list[ScoreRecord]:
    return [
        ScoreRecord(t.id, perplexity(lm, t.target_correct), perplexity(lm, t.target_incorrect))
        for t in triples
    ]


def zp_accuracy(triples: Sequence[EvalTriple], scores: Sequence[ScoreRecord]):
    """Fraction of triples whose correct target has strictly lower perplexity.

    Ties count as incorrect.  Returns (accuracy, [(id, correct?), ...]).
    """
    by_id: dict[int, ScoreRecord] = {}
    dup = set()
    for s in scores:
        if s.id in by_id:
            dup.add(s.id)
        by_id[s.id] = s
    if dup:
        dup = sorted(dup)
        raise ValueError(f"duplicate score records for ids {dup}")
    ids = [t.id for t in triples]
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise ValueError(f"missing score records for ids {missing}")
    extra = sorted(set(by_id) - set(ids))
    if extra:
        raise ValueError(f"score records for unknown ids {extra}")
    outcomes = [(i, by_id[i].ppl_correct < by_id[i].ppl_incorrect) for i in ids]
    acc = sum(ok for _, ok in outcomes) / len(outcomes) if outcomes else 0.0
    return acc, outcomes


def read_triples(path) -> list[EvalTriple]:
    out = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        cols = line.split("\t")
        if len(cols) != 4:
            raise CorpusFormatError(f"{path}:{lineno}: expected 4 columns")
        try:
            out.append(EvalTriple(int(cols[0]), cols[1], tuple(cols[2].split()), tuple(cols[3].split())))
        except ValueError as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from None
    return out


def write_triples(path, triples: Sequence[EvalTriple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for t in triples:
            f.write(f"{t.id}\t{t.source}\t{' '.join(t.target_correct)}\t{' '.join(t.target_incorrect)}\n")


def read_scores(path) -> list[ScoreRecord]:
    out = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(f"{path}:{lineno}: expected 3 columns")
        try:
            rec = ScoreRecord(int(cols[0]), float(cols[1]), float(cols[2]))
        except ValueError:
            raise CorpusFormatError(f"{path}:{lineno}: malformed score row") from None
        if not (rec.ppl_correct > 0 and rec.ppl_incorrect > 0):
            raise CorpusFormatError(f"{path}:{lineno}: perplexities must be positive")
        out.append(rec)
    return out


def write_scores(path, scores: Sequence[ScoreRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s in scores:
            f.write(f"{s.id}\t{s.ppl_correct:.6f}\t{s.ppl_incorrect:.6f}\n")


def write_lm(path, lm: NGramLM) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"zpaug-ngram v1\t{lm.order}\t{lm.add_k!r}\n")
        f.write("\t".join(sorted(lm.vocab)) + "\n")
        for h in sorted(lm.counts):
            for w, c in sorted(lm.counts[h].items()):
                f.write(f"{' '.join(h)}\t{w}\t{c}\n")


def read_lm(path) -> NGramLM:
    lines = _read_lines(path)
    if len(lines) < 2 or not lines[0].startswith("zpaug-ngram v1\t"):
        raise CorpusFormatError(f"{path}: missing LM header")
    try:
        _, order, k = lines[0].split("\t")
        order, k = int(order), float(k)
    except ValueError:
        raise CorpusFormatError(f"{path}: malformed LM header") from None
    vocab = frozenset(lines[1].split("\t"))
    counts: dict[tuple[str, ...], Counter] = defaultdict(Counter)
    for lineno, line in enumerate(lines[2:], start=3):
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(f"{path}:{lineno}: expected 3 columns")
        counts[tuple(cols[0].split())][cols[1]] = int(cols[2])
    return NGramLM(order, k, vocab, dict(counts))
