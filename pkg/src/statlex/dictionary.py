"""Polarity dictionaries: packaging a fitted model as a term/weight list,
scoring documents and document halves, and lossless serialization.

A dictionary entry stores, besides the penalized coefficient and its
Post-LASSO standard error, the term's idf and standardization constants from
the training matrix. Scoring a new document therefore reproduces in-sample
fitted values exactly: each term contributes

    coefficient * ((count * idf) - mean) / sd

and terms absent from the document contribute the standardized-zero offset
(-mean / sd) * coefficient rather than literal zero.

Serialization is a CSV table plus a JSON metadata sidecar
(``<name>.meta.json``), both byte-stable: floats use the shortest
round-trip decimal representation.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .dtm import RAW_TF, DocumentTermMatrix, ResponseVector
from .errors import InputError, ParseError
from .inference import PostLassoResult
from .lasso import LassoPath
from .text import TokenizedDocument, split_halves

log = logging.getLogger(__name__)

CSV_HEADER = [
    "term", "coefficient", "std_error", "t_stat", "rel_doc_freq",
    "pos_share", "neg_share", "term_mean", "term_sd", "term_idf",
]

FORMAT_VERSION = 1

_METADATA_KEYS = {
    "format_version", "intercept", "lambda", "adjusted_r2", "n_documents",
    "n_candidate_terms", "weighting", "response_mean", "response_sd",
    "n_positive_terms", "n_negative_terms", "n_positive_docs",
    "n_negative_docs", "positive_threshold_kind", "positive_threshold_value",
    "pipeline", "rank_dropped_terms",
}


@dataclass
class DictionaryEntry:
    term: str
    coefficient: float
    standard_error: float
    t_statistic: float
    relative_doc_frequency: float
    share_in_positive_docs: float
    share_in_negative_docs: float
    term_mean: float
    term_sd: float
    term_idf: float


@dataclass
class PolarityDictionary:
    entries: list[DictionaryEntry]
    intercept: float
    lam: float
    adjusted_r2: float
    n_documents: int
    n_candidate_terms: int
    weighting: str
    response_mean: float
    response_sd: float
    positive_threshold_kind: str = "median"
    positive_threshold_value: float = 0.0
    pipeline: dict | None = None
    rank_dropped_terms: list[str] = field(default_factory=list)

    def __post_init__(self):
        self._by_term = {}
        for e in self.entries:
            if e.term in self._by_term:
                raise InputError(f"duplicate dictionary term: {e.term!r}")
            self._by_term[e.term] = e

    @property
    def terms(self) -> list[str]:
        return [e.term for e in self.entries]

    @property
    def n_positive_terms(self) -> int:
        return sum(1 for e in self.entries if e.coefficient > 0)

    @property
    def n_negative_terms(self) -> int:
        return sum(1 for e in self.entries if e.coefficient < 0)

    def entry(self, term: str) -> DictionaryEntry:
        return self._by_term[term]

    def __contains__(self, term: str) -> bool:
        return term in self._by_term


@dataclass
class DocumentScore:
    doc_id: str
    score: float
    contributing_terms: list[tuple[str, float]]


def classify_positive(values: np.ndarray, kind: str = "median") -> tuple[np.ndarray, float]:
    """Classify documents as positive (strictly above the cut) or negative.
    ``kind`` selects the cut: corpus median, or zero (natural for abnormal
    returns)."""
    if kind == "median":
        cut = float(np.median(values))
    elif kind == "zero":
        cut = 0.0
    else:
        raise InputError(f"unknown positive-document threshold: {kind!r}")
    return values > cut, cut


def build_dictionary(
    path: LassoPath,
    post: PostLassoResult,
    matrix: DocumentTermMatrix,
    responses: ResponseVector,
    positive_threshold: str = "median",
    pipeline: dict | None = None,
) -> PolarityDictionary:
    """Package the selected fit as a polarity dictionary.

    ``matrix`` must be the standardized matrix the model was fitted on;
    ``responses`` may be the raw or the standardized response vector (the
    standardized one carries the constants needed to reconstruct raw values).
    An empty active set yields a valid dictionary with zero entries.
    """
    if not matrix.standardized:
        raise InputError("build_dictionary needs the standardized matrix")
    fit = path.selected_fit
    active = sorted(fit.active_set)

    if responses.standardized:
        resp_mean = float(responses.mean)
        resp_sd = float(responses.sd)
        raw_values = responses.values * resp_sd + resp_mean
    else:
        raw_values = responses.values
        resp_mean = float(np.mean(raw_values))
        resp_sd = float(np.std(raw_values, ddof=1))

    positive_mask, cut = classify_positive(raw_values, positive_threshold)

    se_by_index = dict(zip(post.support, post.standard_errors)) if active else {}
    t_by_index = dict(zip(post.support, post.t_statistics)) if active else {}
    rank_dropped = [matrix.vocabulary[j] for j in (post.dropped if active else [])]

    n_docs = matrix.n_docs
    idf = matrix.idf if matrix.idf is not None else np.ones(matrix.n_terms)
    dense = matrix.to_dense()

    entries = []
    for j in active:
        mean_j = float(matrix.standardize_mean[j])
        sd_j = float(matrix.standardize_sd[j])
        # reconstruct pre-standardization weights; presence <=> weight > 0
        weights = dense[:, j] * sd_j + mean_j
        present = weights > 1e-9
        n_present = int(np.sum(present))
        pos = int(np.sum(positive_mask & present))
        entries.append(
            DictionaryEntry(
                term=matrix.vocabulary[j],
                coefficient=float(fit.coefficients[j]),
                standard_error=float(se_by_index.get(j, math.nan)),
                t_statistic=float(t_by_index.get(j, math.nan)),
                relative_doc_frequency=int(matrix.doc_frequency[j]) / n_docs,
                share_in_positive_docs=pos / n_present if n_present else 0.0,
                share_in_negative_docs=(n_present - pos) / n_present if n_present else 0.0,
                term_mean=mean_j,
                term_sd=sd_j,
                term_idf=float(idf[j]),
            )
        )
    entries.sort(key=lambda e: (-e.coefficient, e.term))

    if not entries:
        log.warning("empty active set: dictionary has no entries (lambda too large?)")

    return PolarityDictionary(
        entries=entries,
        intercept=float(fit.intercept),
        lam=float(fit.lam),
        adjusted_r2=float(post.adjusted_r2) if active else 0.0,
        n_documents=n_docs,
        n_candidate_terms=matrix.n_terms,
        weighting=matrix.weighting,
        response_mean=resp_mean,
        response_sd=resp_sd,
        positive_threshold_kind=positive_threshold,
        positive_threshold_value=cut,
        pipeline=pipeline,
        rank_dropped_terms=rank_dropped,
    )


def _term_counts(tokens: Iterable[str], wanted) -> dict[str, int]:
    counts: dict[str, int] = {}
    for t in tokens:
        if t in wanted:
            counts[t] = counts.get(t, 0) + 1
    return counts


def score_document(dictionary: PolarityDictionary, tokens, doc_id: str = "") -> DocumentScore:
    """Score a term stream against the dictionary.

    Scores live on the standardized-response scale of the training corpus;
    scoring a training document reproduces its in-sample fitted value.
    """
    counts = _term_counts(tokens, dictionary._by_term)
    contributions = []
    total = dictionary.intercept
    for e in dictionary.entries:
        weighted = counts.get(e.term, 0) * e.term_idf
        z = (weighted - e.term_mean) / e.term_sd
        contribution = e.coefficient * z
        contributions.append((e.term, contribution))
        total += contribution
    return DocumentScore(doc_id=doc_id, score=total, contributing_terms=contributions)


def _contribution_sum(dictionary: PolarityDictionary, tokens) -> float:
    counts = _term_counts(tokens, dictionary._by_term)
    return sum(
        e.coefficient * ((counts.get(e.term, 0) * e.term_idf) - e.term_mean) / e.term_sd
        for e in dictionary.entries
    )


def score_halves(dictionary: PolarityDictionary, doc: TokenizedDocument) -> tuple[float, float, float]:
    """Sentiment of the first half, second half, and the whole document.

    All three are contribution sums without the intercept; each half is
    counted, weighted and standardized exactly like a full document.
    Intended for unigram term streams, where splitting by token position is
    meaningful.
    """
    first, second = split_halves(doc)
    mu1 = _contribution_sum(dictionary, first)
    mu2 = _contribution_sum(dictionary, second)
    mu = _contribution_sum(dictionary, doc.tokens)
    return mu1, mu2, mu


def _format_float(x: float) -> str:
    return repr(float(x))


def _parse_float(text: str, path, lineno: int, column: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: field {column!r}: not a number: {text!r}") from None


def sidecar_path(path: str | Path) -> Path:
    return Path(path).with_suffix(".meta.json")


def save(dictionary: PolarityDictionary, path: str | Path) -> None:
    """Write the dictionary CSV at ``path`` and its metadata sidecar.
    Output is canonical: saving a loaded dictionary is byte-identical."""
    path = Path(path)
    lines = [",".join(CSV_HEADER)]
    for e in dictionary.entries:
        lines.append(
            ",".join(
                [
                    e.term,
                    _format_float(e.coefficient),
                    _format_float(e.standard_error),
                    _format_float(e.t_statistic),
                    _format_float(e.relative_doc_frequency),
                    _format_float(e.share_in_positive_docs),
                    _format_float(e.share_in_negative_docs),
                    _format_float(e.term_mean),
                    _format_float(e.term_sd),
                    _format_float(e.term_idf),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    metadata = {
        "format_version": FORMAT_VERSION,
        "intercept": dictionary.intercept,
        "lambda": dictionary.lam,
        "adjusted_r2": dictionary.adjusted_r2,
        "n_documents": dictionary.n_documents,
        "n_candidate_terms": dictionary.n_candidate_terms,
        "weighting": dictionary.weighting,
        "response_mean": dictionary.response_mean,
        "response_sd": dictionary.response_sd,
        "n_positive_terms": dictionary.n_positive_terms,
        "n_negative_terms": dictionary.n_negative_terms,
        "n_positive_docs": None,
        "n_negative_docs": None,
        "positive_threshold_kind": dictionary.positive_threshold_kind,
        "positive_threshold_value": dictionary.positive_threshold_value,
        "pipeline": dictionary.pipeline,
        "rank_dropped_terms": dictionary.rank_dropped_terms,
    }
    sidecar_path(path).write_text(
        json.dumps(metadata, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def load(path: str | Path) -> PolarityDictionary:
    """Load a dictionary saved by :func:`save`. The CSV schema is strict:
    unknown or missing columns and duplicate terms are errors."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise ParseError(f"{path}: empty dictionary file")
    header = lines[0].split(",")
    if header != CSV_HEADER:
        raise ParseError(
            f"{path}:1: header mismatch: expected {','.join(CSV_HEADER)!r}, got {lines[0]!r}"
        )
    entries = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != len(CSV_HEADER):
            raise ParseError(
                f"{path}:{lineno}: expected {len(CSV_HEADER)} fields, got {len(fields)}"
            )
        term = fields[0]
        if term in seen:
            raise ParseError(f"{path}:{lineno}: duplicate term: {term!r}")
        seen.add(term)
        values = [
            _parse_float(fields[i], path, lineno, CSV_HEADER[i])
            for i in range(1, len(CSV_HEADER))
        ]
        entries.append(DictionaryEntry(term, *values))

    meta_path = sidecar_path(path)
    if not meta_path.exists():
        raise ParseError(f"{meta_path}: metadata sidecar not found")
    try:
        metadata = json.loads(meta_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{meta_path}: invalid JSON: {exc}") from None
    unknown = set(metadata) - _METADATA_KEYS
    if unknown:
        raise ParseError(f"{meta_path}: unknown metadata keys: {sorted(unknown)}")
    missing = _METADATA_KEYS - {"n_positive_docs", "n_negative_docs"} - set(metadata)
    if missing:
        raise ParseError(f"{meta_path}: missing metadata keys: {sorted(missing)}")

    return PolarityDictionary(
        entries=entries,
        intercept=float(metadata["intercept"]),
        lam=float(metadata["lambda"]),
        adjusted_r2=float(metadata["adjusted_r2"]),
        n_documents=int(metadata["n_documents"]),
        n_candidate_terms=int(metadata["n_candidate_terms"]),
        weighting=str(metadata["weighting"]),
        response_mean=float(metadata["response_mean"]),
        response_sd=float(metadata["response_sd"]),
        positive_threshold_kind=str(metadata["positive_threshold_kind"]),
        positive_threshold_value=float(metadata["positive_threshold_value"]),
        pipeline=metadata["pipeline"],
        rank_dropped_terms=list(metadata["rank_dropped_terms"]),
    )
