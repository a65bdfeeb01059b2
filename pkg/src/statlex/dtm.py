"""Sparse document-term matrices: raw counts, tf-idf weighting, standardization.

The tf-idf weight of term t in document d is

    x_hat[d, t] = x[d, t] * ln(|D| / df(t))

with natural log. Terms occurring in every document receive weight 0 and are
dropped. Standardization transforms each column to mean 0 and sample standard
deviation 1 (n-1 denominator); the standardized matrix is dense.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import CorpusError, InputError, InvalidStateError
from .text import TokenizedDocument

log = logging.getLogger(__name__)

RAW_TF = "raw_tf"
TFIDF = "tfidf"


@dataclass
class DocumentTermMatrix:
    """Documents x terms weight matrix with per-column statistics.

    ``matrix`` is a CSR matrix while weights are raw counts or tf-idf and a
    dense ndarray once standardized. ``standardize_mean``/``standardize_sd``
    hold the constants applied by :func:`standardize` (the pre-transform
    column means and sds), which later serve to score new documents.
    """

    doc_ids: list[str]
    vocabulary: list[str]
    matrix: sp.csr_matrix | np.ndarray
    weighting: str = RAW_TF
    standardized: bool = False
    doc_frequency: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    idf: np.ndarray | None = None
    standardize_mean: np.ndarray | None = None
    standardize_sd: np.ndarray | None = None
    dropped_terms: list[str] = field(default_factory=list)

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def n_terms(self) -> int:
        return len(self.vocabulary)

    def term_index(self, term: str) -> int:
        return self.vocabulary.index(term)

    def to_dense(self) -> np.ndarray:
        if isinstance(self.matrix, np.ndarray):
            return self.matrix
        return self.matrix.toarray()

    def column_means(self) -> np.ndarray:
        return np.asarray(self.to_dense().mean(axis=0)).ravel()

    def column_sds(self) -> np.ndarray:
        return np.asarray(self.to_dense().std(axis=0, ddof=1)).ravel()

    def export_triplets(self, path: str | Path) -> None:
        """Write the stored entries as (doc_id, term, weight) CSV plus a
        vocabulary sidecar ``<path>.vocab.txt``. Byte-stable across runs."""
        path = Path(path)
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["doc_id", "term", "weight"])
            coo = sp.coo_matrix(self.matrix)
            order = np.lexsort((coo.col, coo.row))
            for k in order:
                writer.writerow(
                    [self.doc_ids[coo.row[k]], self.vocabulary[coo.col[k]], repr(float(coo.data[k]))]
                )
        vocab_path = path.with_name(path.name + ".vocab.txt")
        vocab_path.write_text("".join(t + "\n" for t in self.vocabulary), encoding="utf-8")


@dataclass
class ResponseVector:
    """Per-document response values aligned with a matrix's doc_ids."""

    values: np.ndarray
    standardized: bool = False
    mean: float | None = None
    sd: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(self.values)):
            raise InputError("response contains non-finite values")


def build_matrix(tokenized_docs: list[TokenizedDocument], min_doc_frequency: int = 1) -> DocumentTermMatrix:
    """Count terms into a sparse matrix, keeping terms that occur in at least
    ``min_doc_frequency`` distinct documents. Vocabulary is sorted
    lexicographically; document order follows the input."""
    if len(tokenized_docs) < 2:
        raise CorpusError("need at least 2 documents to build a matrix")
    if min_doc_frequency < 1:
        raise InputError("min_doc_frequency must be >= 1")

    df_counter: dict[str, int] = {}
    doc_counts: list[dict[str, int]] = []
    for doc in tokenized_docs:
        counts: dict[str, int] = {}
        for term in doc.tokens:
            counts[term] = counts.get(term, 0) + 1
        doc_counts.append(counts)
        for term in counts:
            df_counter[term] = df_counter.get(term, 0) + 1

    vocabulary = sorted(t for t, df in df_counter.items() if df >= min_doc_frequency)
    term_to_col = {t: j for j, t in enumerate(vocabulary)}

    rows, cols, data = [], [], []
    for i, counts in enumerate(doc_counts):
        for term, count in counts.items():
            j = term_to_col.get(term)
            if j is not None:
                rows.append(i)
                cols.append(j)
                data.append(float(count))
    matrix = sp.csr_matrix(
        (data, (rows, cols)), shape=(len(tokenized_docs), len(vocabulary))
    )
    matrix.eliminate_zeros()
    doc_frequency = np.array([df_counter[t] for t in vocabulary], dtype=np.int64)
    return DocumentTermMatrix(
        doc_ids=[d.doc_id for d in tokenized_docs],
        vocabulary=vocabulary,
        matrix=matrix,
        weighting=RAW_TF,
        doc_frequency=doc_frequency,
    )


def apply_tfidf(m: DocumentTermMatrix) -> DocumentTermMatrix:
    """Re-weight raw counts to tf-idf. Terms present in every document get
    idf 0 and are dropped from the vocabulary."""
    if m.weighting != RAW_TF or m.standardized:
        raise InvalidStateError("tf-idf requires a raw-count matrix")
    n = m.n_docs
    idf = np.log(n / m.doc_frequency.astype(float))
    keep = m.doc_frequency < n
    dropped = [t for t, k in zip(m.vocabulary, keep) if not k]
    if dropped:
        log.warning("dropping %d all-document terms with idf 0", len(dropped))
    csc = sp.csc_matrix(m.matrix)[:, keep]
    idf_kept = idf[keep]
    weighted = csc.multiply(idf_kept[np.newaxis, :]).tocsr()
    weighted.eliminate_zeros()
    return DocumentTermMatrix(
        doc_ids=list(m.doc_ids),
        vocabulary=[t for t, k in zip(m.vocabulary, keep) if k],
        matrix=weighted,
        weighting=TFIDF,
        doc_frequency=m.doc_frequency[keep],
        idf=idf_kept,
        dropped_terms=dropped,
    )


def standardize(m: DocumentTermMatrix) -> DocumentTermMatrix:
    """Center and scale every column to sample mean 0 and sample sd 1
    (n-1 denominator). Zero-variance columns are dropped with a warning.
    The result is dense."""
    if m.standardized:
        raise InvalidStateError("matrix is already standardized")
    dense = m.to_dense().astype(float)
    mean = dense.mean(axis=0)
    sd = dense.std(axis=0, ddof=1)
    keep = sd > 0.0
    dropped = [t for t, k in zip(m.vocabulary, keep) if not k]
    if dropped:
        log.warning("dropping %d zero-variance columns: %s", len(dropped), dropped[:10])
    standardized = (dense[:, keep] - mean[keep]) / sd[keep]
    return DocumentTermMatrix(
        doc_ids=list(m.doc_ids),
        vocabulary=[t for t, k in zip(m.vocabulary, keep) if k],
        matrix=standardized,
        weighting=m.weighting,
        standardized=True,
        doc_frequency=m.doc_frequency[keep],
        idf=None if m.idf is None else m.idf[keep],
        standardize_mean=mean[keep],
        standardize_sd=sd[keep],
        dropped_terms=dropped,
    )


def standardize_response(y: ResponseVector) -> ResponseVector:
    """Center and scale the response with the sample standard deviation."""
    if y.standardized:
        raise InvalidStateError("response is already standardized")
    mean = float(np.mean(y.values))
    sd = float(np.std(y.values, ddof=1))
    if sd == 0.0:
        raise InputError("response has zero variance")
    return ResponseVector(values=(y.values - mean) / sd, standardized=True, mean=mean, sd=sd)


def default_min_doc_frequency(n_docs: int) -> int:
    """Rare-term cutoff: 1% of documents, rounded up, at least 1."""
    return max(1, int(np.ceil(0.01 * n_docs)))
