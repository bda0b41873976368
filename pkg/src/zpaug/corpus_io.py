"""Parallel corpus loading, validation and serialization.

Japanese and English sides arrive pre-tokenized (one sentence per line,
space-separated tokens).  Japanese POS tags and English dependency parses
come from separate annotation files produced by external tools.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

_WS = re.compile(r"\s")


class CorpusFormatError(ValueError):
    """Malformed input file; message carries the file and line number."""


def normalize_pos(tag: str) -> str:
    # Tags with internal spaces ("auxiliary verb") are stored as "auxiliary_verb"
    # so they survive space-separated file formats.
    return "_".join(tag.split())


@dataclass(frozen=True)
class Token:
    surface: str
    pos: Optional[str] = None

    def __post_init__(self):
        if not self.surface or _WS.search(self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")
        if self.pos is not None:
            pos = normalize_pos(self.pos)
            if not pos:
                raise ValueError("empty POS tag")
            object.__setattr__(self, "pos", pos)


@dataclass(frozen=True)
class DepTree:
    """Dependency heads, 1-based, with 0 marking the root."""

    heads: tuple[int, ...]

    def __post_init__(self):
        heads = tuple(int(h) for h in self.heads)
        object.__setattr__(self, "heads", heads)
        n = len(heads)
        for i, h in enumerate(heads, start=1):
            if not 0 <= h <= n:
                raise ValueError(f"head {h} of token {i} out of range [0, {n}]")
            if h == i:
                raise ValueError(f"token {i} is its own head")
        if n and 0 not in heads:
            raise ValueError("no root token (head 0)")
        for i in range(1, n + 1):
            node, steps = i, 0
            while node != 0:
                node = heads[node - 1]
                steps += 1
                if steps > n:
                    raise ValueError(f"cycle reachable from token {i}")

    def __len__(self):
        return len(self.heads)


@dataclass(frozen=True)
class SentencePair:
    id: int
    doc_id: str
    pos_in_doc: int
    ja_raw: str
    ja_tokens: tuple[Token, ...]
    en_tokens: tuple[Token, ...]
    en_parse: Optional[DepTree] = None

    def __post_init__(self):
        object.__setattr__(self, "ja_tokens", tuple(self.ja_tokens))
        object.__setattr__(self, "en_tokens", tuple(self.en_tokens))
        if self.pos_in_doc < 0:
            raise ValueError(f"pair {self.id}: negative pos_in_doc")
        if self.en_parse is not None and len(self.en_parse) != len(self.en_tokens):
            raise ValueError(
                f"pair {self.id}: parse has {len(self.en_parse)} tokens, "
                f"sentence has {len(self.en_tokens)}"
            )
        joined = "".join(t.surface for t in self.ja_tokens)
        if joined != "".join(self.ja_raw.split()):
            raise ValueError(f"pair {self.id}: ja_tokens do not reconstruct ja_raw")

    @property
    def en_words(self) -> list[str]:
        return [t.surface for t in self.en_tokens]

    @property
    def ja_words(self) -> list[str]:
        return [t.surface for t in self.ja_tokens]


@dataclass(frozen=True)
class Corpus:
    pairs: tuple[SentencePair, ...] = field(default_factory=tuple)

    def __post_init__(self):
        pairs = tuple(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen: set[int] = set()
        last_pos: dict[str, int] = {}
        for p in pairs:
            if p.id in seen:
                raise ValueError(f"duplicate pair id {p.id}")
            seen.add(p.id)
            prev = last_pos.get(p.doc_id)
            if prev is not None and p.pos_in_doc <= prev:
                raise ValueError(
                    f"pair {p.id}: pos_in_doc {p.pos_in_doc} not increasing in doc {p.doc_id!r}"
                )
            last_pos[p.doc_id] = p.pos_in_doc

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def by_id(self) -> dict[int, SentencePair]:
        return {p.id: p for p in self.pairs}


def _read_lines(path) -> list[str]:
    path = Path(path)
    data = path.read_bytes()
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    out = []
    for lineno, raw in enumerate(lines, start=1):
        try:
            out.append(raw.decode("utf-8").rstrip("\r"))
        except UnicodeDecodeError as exc:
            raise CorpusFormatError(f"{path}:{lineno}: invalid UTF-8 ({exc.reason})") from None
    return out


def _tokens(line: str, path, lineno: int, pos_line: Optional[str] = None) -> tuple[Token, ...]:
    surfaces = line.split()
    if not surfaces:
        raise CorpusFormatError(f"{path}:{lineno}: empty line")
    if pos_line is None:
        return tuple(Token(s) for s in surfaces)
    tags = pos_line.split()
    if len(tags) != len(surfaces):
        raise CorpusFormatError(
            f"{path}:{lineno}: {len(surfaces)} tokens but {len(tags)} POS tags"
        )
    return tuple(Token(s, t) for s, t in zip(surfaces, tags))


def load_parallel(ja_path, en_path, doc_path=None, ja_pos_path=None) -> Corpus:
    """Load a sentence-aligned, tokenized parallel corpus.

    ``ja_pos_path``, when given, holds one line of space-separated POS tags per
    Japanese sentence.  Without a doc file all pairs share the document "doc".
    A doc_id that reappears after another document continues its numbering.
    """
    ja_lines = _read_lines(ja_path)
    en_lines = _read_lines(en_path)
    if len(ja_lines) != len(en_lines):
        raise CorpusFormatError(
            f"line count mismatch: {ja_path} has {len(ja_lines)}, {en_path} has {len(en_lines)}"
        )
    n = len(ja_lines)
    doc_ids = _read_lines(doc_path) if doc_path is not None else ["doc"] * n
    if len(doc_ids) != n:
        raise CorpusFormatError(f"line count mismatch: {doc_path} has {len(doc_ids)}, expected {n}")
    pos_lines: Sequence[Optional[str]] = [None] * n
    if ja_pos_path is not None:
        pos_lines = _read_lines(ja_pos_path)
        if len(pos_lines) != n:
            raise CorpusFormatError(
                f"line count mismatch: {ja_pos_path} has {len(pos_lines)}, expected {n}"
            )

    pairs = []
    counters: dict[str, int] = {}
    for i in range(n):
        lineno = i + 1
        doc = doc_ids[i].strip()
        if not doc:
            raise CorpusFormatError(f"{doc_path}:{lineno}: empty line")
        ja = _tokens(ja_lines[i], ja_path, lineno, pos_lines[i])
        en = _tokens(en_lines[i], en_path, lineno)
        pos = counters.get(doc, 0)
        counters[doc] = pos + 1
        pairs.append(
            SentencePair(
                id=i,
                doc_id=doc,
                pos_in_doc=pos,
                ja_raw="".join(t.surface for t in ja),
                ja_tokens=ja,
                en_tokens=en,
            )
        )
    return Corpus(tuple(pairs))


def load_conllu(path) -> list[tuple[tuple[Token, ...], DepTree]]:
    """Read sentences from a CoNLL-U file as (tokens, tree) pairs.

    Multiword-token ranges (``3-4``) and empty nodes (``5.1``) are skipped.
    """
    sentences = []
    tokens: list[Token] = []
    heads: list[int] = []
    start = 1

    def flush():
        if not tokens:
            return
        try:
            tree = DepTree(tuple(heads))
        except ValueError as exc:
            raise CorpusFormatError(f"{path}:{start}: {exc}") from None
        sentences.append((tuple(tokens), tree))
        tokens.clear()
        heads.clear()

    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            flush()
            start = lineno + 1
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusFormatError(f"{path}:{lineno}: expected 10 columns, got {len(cols)}")
        if "-" in cols[0] or "." in cols[0]:
            continue
        try:
            head = int(cols[6])
        except ValueError:
            raise CorpusFormatError(f"{path}:{lineno}: non-integer head {cols[6]!r}") from None
        pos = cols[3] if cols[3] not in ("", "_") else None
        tokens.append(Token(cols[1], pos))
        heads.append(head)
    flush()
    if not sentences:
        raise CorpusFormatError(f"{path}: no sentences")
    return sentences


def write_conllu(path, parses: Iterable[tuple[Sequence[Token], DepTree]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for tokens, tree in parses:
            for i, (tok, head) in enumerate(zip(tokens, tree.heads), start=1):
                cols = [str(i), tok.surface, "_", tok.pos or "_", "_", "_", str(head), "_", "_", "_"]
                f.write("\t".join(cols) + "\n")
            f.write("\n")


def attach_parses(corpus: Corpus, parses) -> Corpus:
    parses = list(parses)
    if len(parses) != len(corpus):
        raise ValueError(f"parse count {len(parses)} != pair count {len(corpus)}")
    out = []
    for pair, (tokens, tree) in zip(corpus, parses):
        if len(tokens) != len(pair.en_tokens):
            raise ValueError(
                f"pair {pair.id}: parse has {len(tokens)} tokens, sentence has {len(pair.en_tokens)}"
            )
        for i, (a, b) in enumerate(zip(tokens, pair.en_tokens)):
            if a.surface != b.surface:
                raise ValueError(
                    f"pair {pair.id}: token {i} surface mismatch {a.surface!r} != {b.surface!r}"
                )
        out.append(replace(pair, en_parse=tree))
    return Corpus(tuple(out))


# Corpus TSV: id, doc_id, pos_in_doc, ja_raw, ja_tokens, en_tokens, and, when any pair
# carries annotations, two more columns: ja_pos and en_heads.

def write_corpus_tsv(path, corpus: Corpus) -> None:
    annotated = any(
        p.en_parse is not None or any(t.pos is not None for t in p.ja_tokens) for p in corpus
    )
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for p in corpus:
            cols = [
                str(p.id),
                p.doc_id,
                str(p.pos_in_doc),
                p.ja_raw,
                " ".join(p.ja_words),
                " ".join(p.en_words),
            ]
            if annotated:
                if any(t.pos is None for t in p.ja_tokens):
                    cols.append("")
                else:
                    cols.append(" ".join(t.pos for t in p.ja_tokens))
                cols.append(" ".join(map(str, p.en_parse.heads)) if p.en_parse else "")
            f.write("\t".join(cols) + "\n")


def read_corpus_tsv(path) -> Corpus:
    pairs = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        cols = line.split("\t")
        if len(cols) not in (6, 8):
            raise CorpusFormatError(f"{path}:{lineno}: expected 6 or 8 columns, got {len(cols)}")
        try:
            ja_pos = cols[6].split() if len(cols) == 8 and cols[6] else None
            ja = cols[4].split()
            if ja_pos is not None and len(ja_pos) != len(ja):
                raise ValueError("POS count does not match token count")
            ja_tokens = tuple(
                Token(s, ja_pos[i] if ja_pos else None) for i, s in enumerate(ja)
            )
            parse = None
            if len(cols) == 8 and cols[7]:
                parse = DepTree(tuple(int(h) for h in cols[7].split()))
            pairs.append(
                SentencePair(
                    id=int(cols[0]),
                    doc_id=cols[1],
                    pos_in_doc=int(cols[2]),
                    ja_raw=cols[3],
                    ja_tokens=ja_tokens,
                    en_tokens=tuple(Token(s) for s in cols[5].split()),
                    en_parse=parse,
                )
            )
        except ValueError as exc:
            raise CorpusFormatError(f"{path}:{lineno}: {exc}") from None
    return Corpus(tuple(pairs))


def write_parallel(prefix, pairs: Iterable[SentencePair], with_pos: bool = False) -> dict[str, Path]:
    """Write ``<prefix>.ja``, ``<prefix>.en`` and ``<prefix>.docs``."""
    prefix = str(prefix)
    paths = {"ja": Path(prefix + ".ja"), "en": Path(prefix + ".en"), "docs": Path(prefix + ".docs")}
    if with_pos:
        paths["ja_pos"] = Path(prefix + ".ja.pos")
    pairs = list(pairs)
    files = {k: open(v, "w", encoding="utf-8", newline="\n") for k, v in paths.items()}
    try:
        for p in pairs:
            files["ja"].write(" ".join(p.ja_words) + "\n")
            files["en"].write(" ".join(p.en_words) + "\n")
            files["docs"].write(p.doc_id + "\n")
            if with_pos:
                files["ja_pos"].write(" ".join(t.pos or "_" for t in p.ja_tokens) + "\n")
    finally:
        for f in files.values():
            f.close()
    return paths
