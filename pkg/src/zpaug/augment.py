"""Zero-pronoun data augmentation and previous-sentence (2to1) concatenation.

Augmentation deletes every "pronoun + particle" string found in the raw
Japanese sentence, producing a copy whose pronouns are omitted while the
English side stays untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from itertools import product
from typing import Iterable, Optional, Sequence

from .corpus_io import Corpus, CorpusFormatError, SentencePair, Token, _read_lines

DEFAULT_PRONOUN_GROUPS: dict[str, tuple[str, ...]] = {
    "first_singular": ("私", "わたし", "僕", "ぼく", "俺", "おれ", "わたくし", "オレ", "ウチ"),
    "first_plural": ("我々", "僕ら", "われわれ", "僕達", "僕たち", "私達"),
    "second_singular": ("貴方", "貴女", "あなた", "お前", "おまえ", "君", "あんた"),
    "second_plural": ("君たち", "みなさま"),
    "third_singular": ("彼", "彼女", "あいつ"),
    "third_plural": ("彼ら", "彼女ら", "みんな", "皆", "皆んな", "みなさん", "奴ら"),
}

DEFAULT_PARTICLES: tuple[str, ...] = (
    "は", "が", "を", "に", "の", "も",
    "の方から", "のほうから", "の方に", "のほうに", "の方で",
    "のこと", "の事", "のほうで", "から", "、",
)


@dataclass(frozen=True)
class AugLexicon:
    pronoun_groups: dict[str, tuple[str, ...]]
    particles: tuple[str, ...]

    def __post_init__(self):
        if not self.pronoun_groups or not self.particles:
            raise ValueError("lexicon needs at least one pronoun group and one particle")
        groups = {g: tuple(ws) for g, ws in self.pronoun_groups.items()}
        for name, words in [*groups.items(), ("particles", tuple(self.particles))]:
            if not words:
                raise ValueError(f"{name}: empty list")
            if len(set(words)) != len(words):
                raise ValueError(f"{name}: duplicate entries")
            for w in words:
                if not w or any(ch.isspace() for ch in w):
                    raise ValueError(f"{name}: invalid entry {w!r}")
        object.__setattr__(self, "pronoun_groups", groups)
        object.__setattr__(self, "particles", tuple(self.particles))

    def pronouns(self, groups: Optional[Iterable[str]] = None) -> list[str]:
        names = list(self.pronoun_groups) if groups is None else list(groups)
        out = []
        for g in names:
            if g not in self.pronoun_groups:
                raise ValueError(f"unknown pronoun group {g!r}")
            out.extend(self.pronoun_groups[g])
        return out


def default_lexicon() -> AugLexicon:
    return AugLexicon(dict(DEFAULT_PRONOUN_GROUPS), DEFAULT_PARTICLES)


def read_lexicon(path) -> AugLexicon:
    """Parse "[pronouns:<group>]" / "[particles]" sections, one entry per line."""
    groups: dict[str, list[str]] = {}
    particles: list[str] = []
    current: Optional[list[str]] = None
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"\[pronouns:([^\]]+)\]", line)
        if m:
            current = groups.setdefault(m.group(1).strip(), [])
        elif line == "[particles]":
            current = particles
        elif line.startswith("["):
            raise CorpusFormatError(f"{path}:{lineno}: unknown section {line}")
        elif current is None:
            raise CorpusFormatError(f"{path}:{lineno}: entry outside a section")
        else:
            current.append(line)
    try:
        return AugLexicon({g: tuple(ws) for g, ws in groups.items()}, tuple(particles))
    except ValueError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from None


def format_lexicon(lexicon: AugLexicon) -> str:
    parts = []
    for g, words in lexicon.pronoun_groups.items():
        parts.append(f"[pronouns:{g}]\n" + "".join(w + "\n" for w in words))
    parts.append("[particles]\n" + "".join(p + "\n" for p in lexicon.particles))
    return "\n".join(parts)


@dataclass(frozen=True)
class PatternSet:
    patterns: tuple[str, ...]

    def __post_init__(self):
        if not self.patterns:
            raise ValueError("empty pattern set")
        # Alternation is tried left to right, so at each position the longest pattern wins.
        object.__setattr__(self, "_regex", re.compile("|".join(map(re.escape, self.patterns))))

    def __len__(self):
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)


def compile_patterns(lexicon: AugLexicon, groups: Optional[Iterable[str]] = None) -> PatternSet:
    pronouns = lexicon.pronouns(groups)
    if not pronouns:
        raise ValueError("no pronoun groups selected")
    pats = {p + q for p, q in product(pronouns, lexicon.particles)}
    return PatternSet(tuple(sorted(pats, key=lambda s: (-len(s), s))))


@dataclass(frozen=True)
class Deletion:
    offset: int  # in the original string
    text: str


def augment_sentence(ja_raw: str, patterns: PatternSet) -> Optional[tuple[str, list[Deletion]]]:
    """Delete every leftmost, longest-first, non-overlapping pattern match.

    Returns the shortened string and the deletions (whose count is the number
    of matches), or None when nothing matched or nothing would remain.
    """
    deletions = [Deletion(m.start(), m.group()) for m in patterns._regex.finditer(ja_raw)]
    if not deletions:
        return None
    pieces, pos = [], 0
    for d in deletions:
        pieces.append(ja_raw[pos : d.offset])
        pos = d.offset + len(d.text)
    pieces.append(ja_raw[pos:])
    out = "".join(pieces)
    if not out.strip():
        return None
    return out, deletions


def restore(augmented: str, deletions: Sequence[Deletion]) -> str:
    """Re-insert logged deletions at their original offsets."""
    out, src, orig = [], 0, 0
    for d in sorted(deletions, key=lambda d: d.offset):
        take = d.offset - orig
        out.append(augmented[src : src + take])
        src += take
        out.append(d.text)
        orig = d.offset + len(d.text)
    out.append(augmented[src:])
    return "".join(out)


def _delete_from_tokens(tokens: Sequence[Token], deletions: Sequence[Deletion]) -> tuple[Token, ...]:
    # Character-level deletion keeps the original segmentation of what survives.
    removed = set()
    for d in deletions:
        removed.update(range(d.offset, d.offset + len(d.text)))
    out, pos = [], 0
    for tok in tokens:
        kept = "".join(ch for i, ch in enumerate(tok.surface, start=pos) if i not in removed)
        pos += len(tok.surface)
        if kept:
            out.append(Token(kept, tok.pos))
    return tuple(out)


@dataclass
class AugStats:
    input_pairs: int = 0
    matched_pairs: int = 0
    emitted_pairs: int = 0
    deletions_total: int = 0


@dataclass(frozen=True)
class Provenance:
    new_id: int
    source_id: int
    deletions: tuple[Deletion, ...]


def augment_corpus(
    corpus: Corpus, patterns: PatternSet
) -> tuple[list[SentencePair], AugStats, list[Provenance]]:
    """One augmented copy per matching pair, with fresh ids from max(id)+1."""
    stats = AugStats(input_pairs=len(corpus))
    next_id = max((p.id for p in corpus), default=-1) + 1
    emitted, prov = [], []
    for pair in corpus:
        res = augment_sentence(pair.ja_raw, patterns)
        if res is None:
            if patterns._regex.search(pair.ja_raw):
                stats.matched_pairs += 1
            continue
        text, dels = res
        stats.matched_pairs += 1
        if text == pair.ja_raw:
            continue
        ja_tokens = _delete_from_tokens(pair.ja_tokens, dels)
        emitted.append(replace(pair, id=next_id, ja_raw=text, ja_tokens=ja_tokens))
        prov.append(Provenance(next_id, pair.id, tuple(dels)))
        stats.emitted_pairs += 1
        stats.deletions_total += len(dels)
        next_id += 1
    return emitted, stats, prov


def write_provenance(path, provenance: Iterable[Provenance]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for p in provenance:
            dels = " ".join(f"{d.offset}:{d.text}" for d in p.deletions)
            f.write(f"{p.new_id}\t{p.source_id}\t{dels}\n")


def read_provenance(path) -> list[Provenance]:
    out = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(f"{path}:{lineno}: expected 3 columns")
        try:
            dels = []
            for item in cols[2].split():
                off, text = item.split(":", 1)
                dels.append(Deletion(int(off), text))
            out.append(Provenance(int(cols[0]), int(cols[1]), tuple(dels)))
        except ValueError:
            raise CorpusFormatError(f"{path}:{lineno}: malformed provenance row") from None
    return out


def make_2to1(corpus: Corpus, separator: str = "<SEP>") -> Corpus:
    """Prefix each pair's Japanese side with the previous pair of the same document."""
    sep = separator.strip()
    prev: dict[str, SentencePair] = {}
    out = []
    for pair in corpus:
        before = prev.get(pair.doc_id)
        prev[pair.doc_id] = pair
        if before is None:
            out.append(pair)
            continue
        tokens = list(before.ja_tokens)
        if sep:
            has_pos = all(t.pos is not None for t in tokens + list(pair.ja_tokens))
            tokens.append(Token(sep, "symbol" if has_pos else None))
        tokens.extend(pair.ja_tokens)
        out.append(
            replace(
                pair,
                ja_raw=before.ja_raw + sep + pair.ja_raw,
                ja_tokens=tuple(tokens),
            )
        )
    return Corpus(tuple(out))
