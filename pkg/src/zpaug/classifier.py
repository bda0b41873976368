"""Multinomial logistic regression over n-gram features of local context.

Features are binary presence indicators of the contiguous 1-, 2- and 3-grams
of a context.  The bias is implicit: it is the last column of the weight
matrix and is always on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus_io import CorpusFormatError, _read_lines

# Tokens never contain whitespace, so a space is a safe n-gram separator.
NGRAM_SEP = " "
BIAS = "<BIAS>"
MODEL_HEADER = "zpaug-logreg v1"


class FeatureVocab:
    """Dense n-gram -> index map.  Grows until frozen."""

    def __init__(self, ngrams: Iterable[str] = ()):
        self.index: dict[str, int] = {}
        self.frozen = False
        for g in ngrams:
            self.add(g)

    def add(self, ngram: str) -> int:
        if ngram not in self.index:
            if self.frozen:
                raise ValueError("vocabulary is frozen")
            self.index[ngram] = len(self.index)
        return self.index[ngram]

    def freeze(self) -> "FeatureVocab":
        self.frozen = True
        return self

    def ngrams(self) -> list[str]:
        return list(self.index)  # dicts keep insertion order == index order

    def __len__(self):
        return len(self.index)

    def __contains__(self, ngram):
        return ngram in self.index


def ngrams(context: Sequence[str], max_n: int = 3) -> list[str]:
    out = []
    for n in range(1, max_n + 1):
        for i in range(len(context) - n + 1):
            out.append(NGRAM_SEP.join(context[i : i + n]))
    return out


def featurize(context: Sequence[str], vocab: FeatureVocab, frozen: bool = True) -> tuple[int, ...]:
    """Sorted indices of the context's n-grams; the bias is implicit.

    Unknown n-grams are added to ``vocab`` unless ``frozen`` (or the vocab
    itself is frozen), in which case they are dropped.
    """
    idx = set()
    for g in ngrams(context):
        if g in vocab.index:
            idx.add(vocab.index[g])
        elif not (frozen or vocab.frozen):
            idx.add(vocab.add(g))
    return tuple(sorted(idx))


@dataclass
class LRConfig:
    learning_rate: float = 0.5
    epochs: int = 500
    l2_strength: float = 1e-4
    seed: int = 0


@dataclass
class LRModel:
    labels: tuple[str, ...]
    weights: np.ndarray  # (n_labels, n_features + 1); last column is the bias
    vocab: FeatureVocab

    def __post_init__(self):
        if self.weights.shape != (len(self.labels), len(self.vocab) + 1):
            raise ValueError(
                f"weights shape {self.weights.shape} inconsistent with "
                f"{len(self.labels)} labels and {len(self.vocab)} features"
            )
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("non-finite weights")


def design_matrix(feature_sets: Sequence[Sequence[int]], n_features: int) -> sp.csr_matrix:
    """Binary CSR matrix with an all-ones bias column appended."""
    rows, cols = [], []
    for r, feats in enumerate(feature_sets):
        for c in feats:
            rows.append(r)
            cols.append(c)
        rows.append(r)
        cols.append(n_features)
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(len(feature_sets), n_features + 1))


def log_softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def loss_and_grad(W: np.ndarray, X, y: np.ndarray, l2: float) -> tuple[float, np.ndarray]:
    """Mean cross-entropy plus (l2/2)*||W||^2 over non-bias weights, and its gradient."""
    n = X.shape[0]
    logp = log_softmax(np.asarray(X @ W.T))
    loss = -logp[np.arange(n), y].mean()
    P = np.exp(logp)
    P[np.arange(n), y] -= 1.0
    grad = np.asarray((X.T @ P).T) / n
    Wp = W[:, :-1]
    loss += 0.5 * l2 * float(np.sum(Wp * Wp))
    grad[:, :-1] += l2 * Wp
    return float(loss), grad


def train_logreg(
    instances: Sequence[tuple[Sequence[int], str]],
    vocab: FeatureVocab,
    config: LRConfig = LRConfig(),
    labels: Optional[Sequence[str]] = None,
    history: Optional[list] = None,
) -> LRModel:
    """Full-batch gradient descent from zero weights.

    ``labels`` fixes the label order; by default it is the sorted set of
    observed labels.  ``history`` collects the loss before each step.
    """
    if not instances:
        raise ValueError("no training instances")
    if labels is None:
        labels = sorted({lab for _, lab in instances})
    labels = tuple(labels)
    if len(set(labels)) < 2:
        raise ValueError("need at least two distinct labels")
    pos = {lab: i for i, lab in enumerate(labels)}
    try:
        y = np.array([pos[lab] for _, lab in instances])
    except KeyError as exc:
        raise ValueError(f"instance label {exc.args[0]!r} not among declared labels") from None
    X = design_matrix([f for f, _ in instances], len(vocab))
    W = np.zeros((len(labels), len(vocab) + 1))
    for epoch in range(config.epochs):
        loss, grad = loss_and_grad(W, X, y, config.l2_strength)
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite loss at epoch {epoch}")
        if history is not None:
            history.append(loss)
        with np.errstate(invalid="ignore", over="ignore"):
            W -= config.learning_rate * grad
    return LRModel(labels, W, vocab)


def predict_proba(model: LRModel, features: Sequence[int]) -> np.ndarray:
    z = model.weights[:, list(features)].sum(axis=1) + model.weights[:, -1]
    return np.exp(log_softmax(z[None, :])[0])


def predict(model: LRModel, features: Sequence[int]) -> tuple[str, np.ndarray]:
    p = predict_proba(model, features)
    return model.labels[int(np.argmax(p))], p  # argmax returns the first maximum


def fit_contexts(
    contexts: Sequence[Sequence[str]],
    labels_y: Sequence[str],
    config: LRConfig = LRConfig(),
    labels: Optional[Sequence[str]] = None,
) -> LRModel:
    vocab = FeatureVocab()
    feats = [featurize(c, vocab, frozen=False) for c in contexts]
    vocab.freeze()
    return train_logreg(list(zip(feats, labels_y)), vocab, config, labels)


@dataclass
class CVResult:
    labels: tuple[str, ...]
    recall: dict[str, float]
    support: dict[str, int]
    absent: frozenset[str]
    folds: list[list[int]]
    seed: int
    predictions: list[str] = field(default_factory=list)


def fold_indices(n: int, k: int, seed: int) -> list[list[int]]:
    """Seeded shuffle split into k folds whose sizes differ by at most one."""
    if n < k:
        raise ValueError(f"{n} instances for {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    return [sorted(int(i) for i in chunk) for chunk in np.array_split(perm, k)]


def cross_validate(
    instances: Sequence[tuple[Sequence[str], str]],
    k: int = 5,
    config: LRConfig = LRConfig(),
    seed: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
) -> CVResult:
    """k-fold CV over (context, label) pairs, pooling held-out predictions for recall."""
    seed = config.seed if seed is None else seed
    if k < 2:
        raise ValueError("k must be >= 2")
    folds = fold_indices(len(instances), k, seed)
    if labels is None:
        labels = sorted({lab for _, lab in instances})
    labels = tuple(labels)
    predictions: list[Optional[str]] = [None] * len(instances)
    for held in folds:
        held_set = set(held)
        train = [instances[i] for i in range(len(instances)) if i not in held_set]
        model = fit_contexts([c for c, _ in train], [lab for _, lab in train], config, labels)
        for i in held:
            feats = featurize(instances[i][0], model.vocab, frozen=True)
            predictions[i] = predict(model, feats)[0]
    support = Counter(lab for _, lab in instances)
    correct = Counter(lab for (_, lab), pred in zip(instances, predictions) if lab == pred)
    recall = {lab: (correct[lab] / support[lab] if support[lab] else 0.0) for lab in labels}
    absent = frozenset(lab for lab in labels if not support[lab])
    return CVResult(
        labels, recall, {lab: support[lab] for lab in labels}, absent, folds, seed, predictions
    )


def random_baseline(labels_y: Sequence[str], labels: Optional[Sequence[str]] = None) -> dict[str, float]:
    """Expected recall of guessing labels at their empirical frequency: p(label)."""
    if not labels_y:
        raise ValueError("no instances")
    counts = Counter(labels_y)
    n = len(labels_y)
    keys = labels if labels is not None else sorted(counts)
    return {lab: counts[lab] / n for lab in keys}


def top_features(model: LRModel, label: str, k: int) -> list[tuple[str, float]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    row = model.weights[model.labels.index(label), :-1]
    ranked = sorted(zip(model.vocab.ngrams(), row.tolist()), key=lambda gw: (-gw[1], gw[0]))
    return ranked[:k]


def classifier_data(instances, zero_only: bool = True, include_empty: bool = False):
    """(context, pronoun) pairs from ZP instances."""
    return [
        (x.context, x.pronoun)
        for x in instances
        if (x.is_zero or not zero_only) and (x.context or include_empty)
    ]


def write_model(path, model: LRModel) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(MODEL_HEADER + "\t" + "\t".join(model.labels) + "\n")
        names = model.vocab.ngrams() + [BIAS]
        for li, lab in enumerate(model.labels):
            for gi, g in enumerate(names):
                f.write(f"{lab}\t{g}\t{model.weights[li, gi]:.12g}\n")


def read_model(path) -> LRModel:
    lines = _read_lines(path)
    if not lines or not lines[0].startswith(MODEL_HEADER + "\t"):
        raise CorpusFormatError(f"{path}: missing model header")
    labels = tuple(lines[0].split("\t")[1:])
    vocab = FeatureVocab()
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        cols = line.split("\t")
        if len(cols) != 3 or cols[0] not in labels:
            raise CorpusFormatError(f"{path}:{lineno}: malformed weight row")
        lab, g, w = cols
        if g != BIAS and g not in vocab:
            vocab.add(g)
        entries.append((lab, g, float(w)))
    vocab.freeze()
    W = np.zeros((len(labels), len(vocab) + 1))
    for lab, g, w in entries:
        W[labels.index(lab), -1 if g == BIAS else vocab.index[g]] = w
    return LRModel(labels, W, vocab)


def write_cv_report(path_or_file, result: CVResult, baseline: dict[str, float]) -> None:
    lines = ["label\trecall\tbaseline_recall\tsupport\n"]
    for lab in result.labels:
        lines.append(
            f"{lab}\t{result.recall[lab]:.4f}\t{baseline.get(lab, 0.0):.4f}\t{result.support[lab]}\n"
        )
    if hasattr(path_or_file, "write"):
        path_or_file.writelines(lines)
        return
    with open(path_or_file, "w", encoding="utf-8", newline="\n") as f:
        f.writelines(lines)
