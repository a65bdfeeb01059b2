"""Text preprocessing: tokenization, stemming, stop-word removal, n-grams.

The unigram pipeline applies, in order: lowercasing, punctuation/digit
stripping, whitespace splitting, stop-word removal (on the surface form),
minimum-length filtering, and stemming. Higher-order terms are produced by
:func:`ngrams` from the stemmed unigram stream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import porter
from .errors import ConfigError, ParseError

NGRAM_SEPARATOR = "_"

# everything that is not a Unicode letter becomes a space
_NON_ALPHA = re.compile(r"[\W\d_]+")


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load a stop-word list (one lowercase word per line, '#' comments).

    With no path, returns the bundled default English list.
    """
    if path is None:
        text = (
            resources.files("statlex").joinpath("data/stopwords_en.txt").read_text("utf-8")
        )
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        if " " in word or "\t" in word:
            raise ParseError(f"stop-word list line {lineno}: entry contains whitespace: {word!r}")
        words.add(word.lower())
    return frozenset(words)


@dataclass(frozen=True)
class PipelineConfig:
    """Preprocessing choices for turning raw text into term streams."""

    lowercase: bool = True
    strip_punctuation_and_digits: bool = True
    stopwords: frozenset[str] = field(default_factory=frozenset)
    stemmer: str = "porter"  # "porter" or "none"
    ngram_orders: frozenset[int] = frozenset({1})
    min_token_length: int = 1

    def __post_init__(self):
        if self.stemmer not in ("porter", "none"):
            raise ConfigError(f"unknown stemmer: {self.stemmer!r}")
        if not self.ngram_orders:
            raise ConfigError("ngram_orders must be non-empty")
        if any(k not in (1, 2, 3) for k in self.ngram_orders):
            raise ConfigError("ngram_orders must be a subset of {1, 2, 3}")
        if self.min_token_length < 1:
            raise ConfigError("min_token_length must be >= 1")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "ngram_orders", frozenset(self.ngram_orders))


@dataclass(frozen=True)
class TokenizedDocument:
    """A document reduced to its ordered term stream.

    ``half_split_index`` = floor(len(tokens)/2); the first half is
    tokens[:half_split_index], the rest (including the extra token for odd
    lengths) belongs to the second half.
    """

    doc_id: str
    tokens: tuple[str, ...]
    half_split_index: int

    @classmethod
    def from_tokens(cls, doc_id: str, tokens) -> "TokenizedDocument":
        toks = tuple(tokens)
        return cls(doc_id=doc_id, tokens=toks, half_split_index=len(toks) // 2)


def stem_token(token: str, stemmer: str) -> str:
    if stemmer == "porter":
        return porter.stem(token)
    return token


def tokenize(raw_text: str, config: PipelineConfig) -> list[str]:
    """Produce the ordered stemmed unigram stream for one document.

    Stop-word removal applies to the surface form, before stemming.
    """
    text = raw_text
    if config.lowercase:
        text = text.lower()
    if config.strip_punctuation_and_digits:
        text = _NON_ALPHA.sub(" ", text)
    out = []
    for token in text.split():
        if token in config.stopwords:
            continue
        if len(token) < config.min_token_length:
            continue
        out.append(stem_token(token, config.stemmer))
    return out


def ngrams(tokens, orders) -> list[str]:
    """All contiguous k-token windows for each k in ``orders``.

    Output is deterministic: all order-1 terms in position order, then
    order-2, and so on. Windows are joined with ``NGRAM_SEPARATOR``.
    """
    if not orders:
        raise ConfigError("orders must be non-empty")
    toks = list(tokens)
    out = []
    for k in sorted(orders):
        if k == 1:
            out.extend(toks)
        else:
            out.extend(
                NGRAM_SEPARATOR.join(toks[i : i + k])
                for i in range(len(toks) - k + 1)
            )
    return out


def split_halves(doc: TokenizedDocument) -> tuple[list[str], list[str]]:
    """Split tokens at floor(n/2); odd lengths put the extra token in the
    second half. Concatenation restores the original stream."""
    cut = doc.half_split_index
    return list(doc.tokens[:cut]), list(doc.tokens[cut:])


def prepare_document(doc_id: str, raw_text: str, config: PipelineConfig) -> TokenizedDocument:
    """Tokenize one document and expand n-grams per the config."""
    unigrams = tokenize(raw_text, config)
    if config.ngram_orders == frozenset({1}):
        terms = unigrams
    else:
        terms = ngrams(unigrams, config.ngram_orders)
    return TokenizedDocument.from_tokens(doc_id, terms)
