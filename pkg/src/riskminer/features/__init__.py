"""Numerical document representations: BoW, TF-IDF, word2vec embeddings."""

from .embeddings import (
    EmbeddingModel,
    Word2VecConfig,
    cosine_similarity,
    doc_embedding,
    fuse_features,
    train_word2vec,
)
from .text import (
    SparseVector,
    TfidfModel,
    Vocabulary,
    bow,
    bow_matrix,
    build_vocabulary,
    fit_idf,
    tfidf,
    tfidf_matrix,
)

__all__ = [
    "EmbeddingModel", "SparseVector", "TfidfModel", "Vocabulary", "Word2VecConfig",
    "bow", "bow_matrix", "build_vocabulary", "cosine_similarity", "doc_embedding",
    "fit_idf", "fuse_features", "tfidf", "tfidf_matrix", "train_word2vec",
]
