"""Seeded synthetic data for experiments and tests.

Nothing here resembles the real corpora in size or distribution; it only
plants known correlations so the analysis pipeline has something to find.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus_io import Corpus, DepTree, SentencePair, Token, write_conllu, write_parallel

VERBS = ["思い", "食べ", "行き", "見", "書き", "読み", "買い", "作り", "話し", "聞き"]
NEUTRAL_TAILS = [("ます",), ("た",), ("ます", "ね"), ("まし", "た"), ("ます", "よ")]
QUESTION_TAILS = [("まし", "た", "か", "？"), ("ます", "か", "？"), ("かな", "？"), ("でしょ", "う", "？")]
LABEL_DIST = {"i": 0.40, "you": 0.30, "we": 0.12, "they": 0.08, "he": 0.05, "she": 0.05}


def synthetic_zp_instances(n: int = 2000, seed: int = 0, cue_rate: float = 0.9):
    """(context, pronoun) pairs where たい marks "i" and question suffixes mark "you".

    With probability ``cue_rate`` an "i" context ends in the desire auxiliary
    and a "you" context in a question suffix; every other context gets a
    neutral ending.  "we" carries an obligation cue half of the time.
    """
    rng = np.random.default_rng(seed)
    labels = list(LABEL_DIST)
    probs = np.array([LABEL_DIST[k] for k in labels])
    out = []
    for li in rng.choice(len(labels), size=n, p=probs):
        label = labels[li]
        verb = VERBS[rng.integers(len(VERBS))]
        cue = rng.random() < cue_rate
        if label == "i" and cue:
            tail = ("たい",) + (("です",) if rng.random() < 0.5 else ())
        elif label == "you" and cue:
            tail = QUESTION_TAILS[rng.integers(len(QUESTION_TAILS))]
        elif label == "we" and rng.random() < 0.5:
            tail = ("なきゃ",)
        else:
            tail = NEUTRAL_TAILS[rng.integers(len(NEUTRAL_TAILS))]
        out.append(((verb,) + tail, label))
    return out


NOUNS = [("うなぎ", "eel"), ("寿司", "sushi"), ("本", "book"), ("映画", "movie"),
         ("車", "car"), ("手紙", "letter"), ("ケーキ", "cake"), ("写真", "photo")]
# (Japanese stem, English base, English past)
VERB_FORMS = [("食べ", "eat", "ate"), ("読み", "read", "read"), ("買い", "buy", "bought"),
              ("見", "see", "saw"), ("作り", "make", "made")]
JA_PRONOUNS = {"i": "私", "you": "あなた", "we": "私達", "they": "彼ら", "he": "彼", "she": "彼女"}

# Predicate type given the subject.  No Japanese token accompanies any one
# pronoun in all of its sentences, which is what lets IBM Model 1 link dropped
# subjects to NULL instead of to a co-occurring function word.  Case
# particles are left out for the same reason (colloquial speech drops them).
PREDICATES = {
    "i": {"want": 0.5, "past": 0.2, "like": 0.15, "plain": 0.15},
    "you": {"question": 0.5, "like": 0.25, "plain": 0.25},
    "we": {"must": 0.5, "past": 0.2, "like": 0.15, "plain": 0.15},
    "they": {"plain": 0.5, "past": 0.3, "like": 0.2},
    "he": {"plain": 0.5, "past": 0.3, "like": 0.2},
    "she": {"plain": 0.5, "past": 0.3, "like": 0.2},
}

P, AUX, N, V = "particle", "auxiliary_verb", "noun", "verb"


def _sentence(subject, kind, noun, verb, explicit):
    """Japanese (surface, POS) list and English tokens with 1-based heads."""
    nj, ne = noun
    vj, base, past = verb
    s = subject
    if kind == "want":
        ja = [(nj, N), (vj, V), ("たい", AUX), ("です", AUX)]
        en, heads = [s, "want", "to", base, ne], [2, 0, 4, 2, 4]
    elif kind == "past":
        ja = [(nj, N), (vj, V), ("まし", AUX), ("た", AUX)]
        en, heads = [s, past, ne], [2, 0, 2]
    elif kind == "question":
        ja = [(nj, N), (vj, V), ("まし", AUX), ("た", AUX), ("か", P)]
        en, heads = ["did", s, base, ne], [3, 3, 0, 3]
    elif kind == "like":
        ja = [(nj, N), ("好き", N), ("です", AUX)]
        en, heads = [s, "likes" if subject in ("he", "she") else "like", ne], [2, 0, 2]
    elif kind == "must":
        ja = [(nj, N), (vj, V), ("なきゃ", AUX)]
        en, heads = [s, "must", base, ne], [3, 3, 0, 3]
    else:  # plain present
        ja = [(nj, N), (vj, V), ("ます", AUX)]
        en, heads = [s, base + "s" if subject in ("he", "she") else base, ne], [2, 0, 2]
    if explicit:
        ja = [(JA_PRONOUNS[subject], N), ("は", P)] + ja
    return ja, en, heads


def synthetic_corpus(n: int = 200, seed: int = 0, drop_rate: float = 0.7) -> Corpus:
    """Annotated parallel corpus (Japanese POS, English parses) in short documents.

    Each sentence has one pronoun subject, omitted on the Japanese side with
    probability ``drop_rate``.  English sides are lowercased and carry no
    punctuation so that every English token but the subject has a
    consistent Japanese partner.
    """
    rng = np.random.default_rng(seed)
    subjects = list(LABEL_DIST)
    sprobs = np.array([LABEL_DIST[k] for k in subjects])
    pairs = []
    doc, pos, doc_len = 0, 0, int(rng.integers(3, 7))
    for i in range(n):
        subject = subjects[rng.choice(len(subjects), p=sprobs)]
        kinds = list(PREDICATES[subject])
        kind = kinds[rng.choice(len(kinds), p=np.array(list(PREDICATES[subject].values())))]
        noun = NOUNS[rng.integers(len(NOUNS))]
        verb = VERB_FORMS[rng.integers(len(VERB_FORMS))]
        ja, en, heads = _sentence(subject, kind, noun, verb, rng.random() >= drop_rate)
        pairs.append(
            SentencePair(
                id=i,
                doc_id=f"d{doc:04d}",
                pos_in_doc=pos,
                ja_raw="".join(s for s, _ in ja),
                ja_tokens=tuple(Token(s, p) for s, p in ja),
                en_tokens=tuple(Token(w) for w in en),
                en_parse=DepTree(tuple(heads)),
            )
        )
        pos += 1
        if pos == doc_len:
            doc, pos, doc_len = doc + 1, 0, int(rng.integers(3, 7))
    return Corpus(tuple(pairs))


def write_synthetic_corpus(prefix, corpus: Corpus) -> dict[str, Path]:
    """Write the corpus as CLI inputs: .ja, .en, .docs, .ja.pos and .en.conllu."""
    paths = write_parallel(prefix, corpus, with_pos=True)
    paths["en_conllu"] = Path(str(prefix) + ".en.conllu")
    write_conllu(paths["en_conllu"], ((p.en_tokens, p.en_parse) for p in corpus))
    return paths
