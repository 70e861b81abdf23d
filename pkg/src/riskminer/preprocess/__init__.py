"""Text cleaning, segmentation, stopword removal and Porter stemming."""

from .pipeline import (
    PreprocessConfig,
    TokenizedDocument,
    default_stopwords,
    preprocess_corpus,
    preprocess_pipeline,
    read_word_list,
    remove_stopwords,
    segment,
    strip_markup,
    tokenize,
)
from .porter import stem

__all__ = [
    "PreprocessConfig", "TokenizedDocument", "default_stopwords", "preprocess_corpus",
    "preprocess_pipeline", "read_word_list", "remove_stopwords", "segment", "stem",
    "strip_markup", "tokenize",
]
