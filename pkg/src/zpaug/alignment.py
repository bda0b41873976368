"""IBM Model 1 lexical translation and Viterbi word alignment.

English tokens pick a generating Japanese token or NULL, so an English
pronoun with no Japanese counterpart shows up as a NULL link.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .corpus_io import Corpus, CorpusFormatError, SentencePair, _read_lines

log = logging.getLogger(__name__)

NULL = "<NULL>"


@dataclass(frozen=True)
class TranslationTable:
    """t(e | j) for every co-occurring (Japanese or NULL, English) word pair."""

    t: dict[str, dict[str, float]]
    ja_vocab: frozenset[str] = field(default_factory=frozenset)
    en_vocab: frozenset[str] = field(default_factory=frozenset)

    def prob(self, e: str, j: str) -> float:
        return self.t.get(j, {}).get(e, 0.0)


@dataclass(frozen=True)
class SentenceAlignment:
    """links[i] is the Japanese index generating English token i, or None for NULL."""

    links: tuple[Optional[int], ...]
    unseen: tuple[int, ...] = ()

    def __len__(self):
        return len(self.links)


def _check_corpus(corpus: Corpus):
    if len(corpus) == 0:
        raise ValueError("cannot train on an empty corpus")
    for p in corpus:
        if not p.ja_tokens or not p.en_tokens:
            raise ValueError(f"pair {p.id} has an empty side")


def _sentences(corpus: Corpus):
    for p in corpus:
        yield [NULL] + p.ja_words, p.en_words


def initial_table(corpus: Corpus) -> TranslationTable:
    ja_vocab, en_vocab = set(), set()
    cooc: dict[str, set[str]] = defaultdict(set)
    for ja, en in _sentences(corpus):
        ja_vocab.update(ja[1:])
        en_vocab.update(en)
        for j in ja:
            cooc[j].update(en)
    u = 1.0 / len(en_vocab)
    t = {j: {e: u for e in sorted(es)} for j, es in sorted(cooc.items())}
    return TranslationTable(t, frozenset(ja_vocab), frozenset(en_vocab))


def expected_counts(corpus: Corpus, table: TranslationTable) -> dict[tuple[str, str], float]:
    """E-step: expected link counts c(j, e) summed over the corpus in pair order."""
    counts: dict[tuple[str, str], float] = defaultdict(float)
    for ja, en in _sentences(corpus):
        for e in en:
            row = [table.prob(e, j) for j in ja]
            z = math.fsum(row)
            if z <= 0.0:
                raise ValueError(f"English word {e!r} has zero probability under the table")
            for j, p in zip(ja, row):
                counts[(j, e)] += p / z
    return dict(counts)


def maximize(counts: dict[tuple[str, str], float], ja_vocab, en_vocab) -> TranslationTable:
    totals: dict[str, float] = defaultdict(float)
    for (j, _), c in sorted(counts.items()):
        totals[j] += c
    t: dict[str, dict[str, float]] = {}
    for (j, e), c in sorted(counts.items()):
        t.setdefault(j, {})[e] = c / totals[j]
    return TranslationTable(t, frozenset(ja_vocab), frozenset(en_vocab))


def train_ibm1(corpus: Corpus, iterations: int = 5, history: Optional[list] = None) -> TranslationTable:
    """Train t(e|j) with EM from a uniform start.

    If ``history`` is a list, the corpus log-likelihood before training and
    after every iteration is appended to it.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    _check_corpus(corpus)
    table = initial_table(corpus)
    if history is not None:
        history.append(log_likelihood(corpus, table))
    for it in range(iterations):
        counts = expected_counts(corpus, table)
        table = maximize(counts, table.ja_vocab, table.en_vocab)
        if history is not None:
            history.append(log_likelihood(corpus, table))
        log.debug("IBM1 iteration %d done", it + 1)
    return table


def log_likelihood(corpus: Corpus, table: TranslationTable) -> float:
    """Sum over English tokens of log( 1/(L_ja+1) * sum_j t(e|j) )."""
    total = 0.0
    for ja, en in _sentences(corpus):
        norm = 1.0 / len(ja)
        for e in en:
            if e not in table.en_vocab:
                raise ValueError(f"unseen English word {e!r}")
            s = math.fsum(table.prob(e, j) for j in ja)
            if s <= 0.0:
                raise ValueError(f"English word {e!r} has zero probability under the table")
            total += math.log(norm * s)
    return total


def viterbi_align(pair: SentencePair, table: TranslationTable) -> SentenceAlignment:
    ja = pair.ja_words
    links: list[Optional[int]] = []
    unseen = []
    for i, e in enumerate(pair.en_words):
        if e not in table.en_vocab:
            log.warning("pair %s: unseen English word %r at %d aligned to NULL", pair.id, e, i)
            unseen.append(i)
            links.append(None)
            continue
        best, best_p = None, table.prob(e, NULL)
        for k, j in enumerate(ja):
            p = table.prob(e, j)
            # Strict > keeps the lowest index on ties; a real token beats NULL on ties.
            if p > best_p or (best is None and p == best_p and p > 0.0):
                best, best_p = k, p
        links.append(best)
    return SentenceAlignment(tuple(links), tuple(unseen))


def align_corpus(corpus: Corpus, table: TranslationTable) -> list[SentenceAlignment]:
    return [viterbi_align(p, table) for p in corpus]


def write_table(path, table: TranslationTable) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for j in sorted(table.t):
            row = table.t[j]
            for e in sorted(row):
                f.write(f"{j}\t{e}\t{row[e]:.12g}\n")


def read_table(path) -> TranslationTable:
    t: dict[str, dict[str, float]] = {}
    ja_vocab, en_vocab = set(), set()
    for lineno, line in enumerate(_read_lines(path), start=1):
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(f"{path}:{lineno}: expected 3 columns")
        j, e, p = cols
        try:
            prob = float(p)
        except ValueError:
            raise CorpusFormatError(f"{path}:{lineno}: bad probability {p!r}") from None
        if not 0.0 <= prob <= 1.0:
            raise CorpusFormatError(f"{path}:{lineno}: probability {prob} outside [0, 1]")
        t.setdefault(j, {})[e] = prob
        if j != NULL:
            ja_vocab.add(j)
        en_vocab.add(e)
    return TranslationTable(t, frozenset(ja_vocab), frozenset(en_vocab))


def format_alignment(alignment: SentenceAlignment) -> str:
    return " ".join(f"{i}-{k}" for i, k in enumerate(alignment.links) if k is not None)


def write_alignments(path, alignments: Iterable[SentenceAlignment]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for a in alignments:
            f.write(format_alignment(a) + "\n")


def read_alignments(path, corpus: Corpus) -> list[SentenceAlignment]:
    """Read Pharaoh-style "en-ja" links; English tokens without a link are NULL."""
    lines = _read_lines(path)
    if len(lines) != len(corpus):
        raise CorpusFormatError(f"{path}: {len(lines)} lines for {len(corpus)} pairs")
    out = []
    for lineno, (line, pair) in enumerate(zip(lines, corpus), start=1):
        links: list[Optional[int]] = [None] * len(pair.en_tokens)
        for item in line.split():
            try:
                i, k = (int(x) for x in item.split("-"))
            except ValueError:
                raise CorpusFormatError(f"{path}:{lineno}: bad link {item!r}") from None
            if not (0 <= i < len(links) and 0 <= k < len(pair.ja_tokens)):
                raise CorpusFormatError(f"{path}:{lineno}: link {item} out of range")
            if links[i] is not None:
                raise CorpusFormatError(f"{path}:{lineno}: English token {i} linked twice")
            links[i] = k
        out.append(SentenceAlignment(tuple(links)))
    return out
