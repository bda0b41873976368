"""Zero-pronoun detection from alignments and local-context extraction."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .alignment import SentenceAlignment
from .corpus_io import CorpusFormatError, SentencePair, _read_lines, normalize_pos

DEFAULT_PRONOUNS = ("i", "you", "we", "they", "he", "she", "us", "them", "him", "her")
DEFAULT_FUNCTIONAL_POS = ("particle", "auxiliary verb", "symbol")
# MeCab (IPADIC) names for the same three classes.
MECAB_FUNCTIONAL_POS = ("助詞", "助動詞", "記号")


@dataclass(frozen=True)
class PronounLexicon:
    pronouns: tuple[str, ...] = DEFAULT_PRONOUNS

    def __post_init__(self):
        if not self.pronouns:
            raise ValueError("pronoun lexicon is empty")
        for p in self.pronouns:
            if p != p.lower():
                raise ValueError(f"pronoun {p!r} is not lowercase")
        object.__setattr__(self, "pronouns", tuple(dict.fromkeys(self.pronouns)))

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.pronouns


def _pos_key(tag: str) -> str:
    return normalize_pos(tag.strip()).lower()


@dataclass(frozen=True)
class FunctionalPosSet:
    pos_tags: frozenset[str] = frozenset(DEFAULT_FUNCTIONAL_POS)

    def __post_init__(self):
        if not self.pos_tags:
            raise ValueError("functional POS set is empty")
        object.__setattr__(self, "pos_tags", frozenset(_pos_key(t) for t in self.pos_tags))

    def __contains__(self, tag) -> bool:
        return tag is not None and _pos_key(tag) in self.pos_tags


@dataclass(frozen=True)
class ZPInstance:
    pair_id: int
    en_index: int
    pronoun: str
    is_zero: bool
    context: tuple[str, ...] = ()
    # Set by extract_local_context when the pronoun is the root or its head links to NULL.
    context_less: bool = False


@dataclass
class ZPReport:
    counts: dict[str, list[int]] = field(default_factory=dict)  # pronoun -> [total, zero]

    def rows(self):
        """(pronoun, total, zero, ratio) sorted by total descending, then pronoun."""
        items = sorted(self.counts.items(), key=lambda kv: (-kv[1][0], kv[0]))
        return [(p, tot, zero, zero / tot if tot else 0.0) for p, (tot, zero) in items]

    def total(self, pronoun: str) -> int:
        return self.counts.get(pronoun, [0, 0])[0]

    def zero(self, pronoun: str) -> int:
        return self.counts.get(pronoun, [0, 0])[1]


def detect_zp(
    pair: SentencePair, alignment: SentenceAlignment, lexicon: PronounLexicon = PronounLexicon()
) -> list[ZPInstance]:
    if len(alignment) != len(pair.en_tokens):
        raise ValueError(
            f"pair {pair.id}: alignment length {len(alignment)} != {len(pair.en_tokens)} English tokens"
        )
    out = []
    for i, tok in enumerate(pair.en_tokens):
        word = tok.surface.lower()
        if word in lexicon.pronouns:
            out.append(ZPInstance(pair.id, i, word, alignment.links[i] is None))
    return out


def extract_local_context(
    pair: SentencePair,
    alignment: SentenceAlignment,
    instance: ZPInstance,
    fpos: FunctionalPosSet = FunctionalPosSet(),
) -> ZPInstance:
    """Japanese word aligned to the pronoun's English head plus the functional words after it."""
    if pair.en_parse is None:
        raise ValueError(f"pair {pair.id}: no English parse")
    if any(t.pos is None for t in pair.ja_tokens):
        raise ValueError(f"pair {pair.id}: Japanese tokens lack POS tags")
    if len(alignment) != len(pair.en_tokens):
        raise ValueError(f"pair {pair.id}: alignment length mismatch")
    head = pair.en_parse.heads[instance.en_index]
    if head == 0:
        return replace(instance, context=(), context_less=True)
    k = alignment.links[head - 1]
    if k is None:
        return replace(instance, context=(), context_less=True)
    ja = pair.ja_tokens
    end = k + 1
    while end < len(ja) and ja[end].pos in fpos:
        end += 1
    return replace(instance, context=tuple(t.surface for t in ja[k:end]), context_less=False)


def build_report(instances: Iterable[ZPInstance], lexicon: PronounLexicon = PronounLexicon()) -> ZPReport:
    totals: Counter = Counter()
    zeros: Counter = Counter()
    for inst in instances:
        totals[inst.pronoun] += 1
        zeros[inst.pronoun] += inst.is_zero
    report = ZPReport({p: [0, 0] for p in lexicon.pronouns})
    for p in totals:
        report.counts[p] = [totals[p], zeros[p]]
    return report


def write_report(path_or_file, report: ZPReport) -> None:
    lines = [f"{p}\t{tot}\t{zero}\t{ratio:.4f}\n" for p, tot, zero, ratio in report.rows()]
    if hasattr(path_or_file, "write"):
        path_or_file.writelines(lines)
        return
    with open(path_or_file, "w", encoding="utf-8", newline="\n") as f:
        f.writelines(lines)


def write_instances(path, instances: Iterable[ZPInstance]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for x in instances:
            f.write(f"{x.pair_id}\t{x.en_index}\t{x.pronoun}\t{int(x.is_zero)}\t{' '.join(x.context)}\n")


def read_instances(path) -> list[ZPInstance]:
    """Read instances; an empty context column marks the instance context-less."""
    out = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        cols = line.split("\t")
        if len(cols) != 5 or cols[3] not in ("0", "1"):
            raise CorpusFormatError(f"{path}:{lineno}: malformed instance row")
        try:
            pair_id, en_index = int(cols[0]), int(cols[1])
        except ValueError:
            raise CorpusFormatError(f"{path}:{lineno}: non-integer id") from None
        context = tuple(cols[4].split())
        out.append(ZPInstance(pair_id, en_index, cols[2], cols[3] == "1", context, not context))
    return out


def detect_corpus(corpus: Sequence[SentencePair], alignments, lexicon=PronounLexicon()) -> list[ZPInstance]:
    if len(alignments) != len(corpus):
        raise ValueError(f"{len(alignments)} alignments for {len(corpus)} pairs")
    out = []
    for pair, a in zip(corpus, alignments):
        out.extend(detect_zp(pair, a, lexicon))
    return out


def extract_corpus(corpus, alignments, instances, fpos=FunctionalPosSet()) -> list[ZPInstance]:
    by_id = {p.id: (p, a) for p, a in zip(corpus, alignments)}
    out = []
    for inst in instances:
        if inst.pair_id not in by_id:
            raise ValueError(f"instance refers to unknown pair {inst.pair_id}")
        pair, a = by_id[inst.pair_id]
        if not 0 <= inst.en_index < len(pair.en_tokens):
            raise ValueError(f"pair {pair.id}: en_index {inst.en_index} out of range")
        out.append(extract_local_context(pair, a, inst, fpos))
    return out
