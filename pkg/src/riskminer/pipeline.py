"""End-to-end classification runs and the model comparison table.

``run_comparison`` takes a labeled corpus through preprocessing, a
stratified split, vocabulary/IDF fitting on the training part only, and
trains every requested model kind on the representation that suits it:
counts for Naive Bayes, TF-IDF for the SVM and the forest, token-id
sequences for the recurrent models.
"""

from dataclasses import dataclass, field

from .errors import ConfigError, DataError
from .evaluation import DEFAULT_RATIOS, confusion, metrics, split
from .features import bow_matrix, build_vocabulary, fit_idf, tfidf_matrix
from .models import (
    MODEL_KINDS,
    ForestConfig,
    OptimizerConfig,
    RecurrentConfig,
    train_forest,
    train_nb,
    train_recurrent,
    train_svm,
)
from .preprocess import PreprocessConfig, preprocess_corpus

UNKNOWN_ID = 0  # sequence id for tokens outside the training vocabulary


def token_sequences(docs, vocab):
    """Vocabulary index + 1 per token; unknown tokens map to 0.

    ``docs`` holds processed documents or plain token lists.
    """
    return [[vocab.index.get(t, -1) + 1 for t in getattr(d, "tokens", d)] for d in docs]


@dataclass
class ComparisonSettings:
    kinds: tuple = MODEL_KINDS
    ratios: tuple = DEFAULT_RATIOS
    seed: int = 0
    nb_alpha: float = 1.0
    svm_lambda: float = 1e-3
    svm_epochs: int = 20
    forest: ForestConfig = field(default_factory=lambda: ForestConfig(n_trees=50))
    recurrent: RecurrentConfig = field(default_factory=lambda: RecurrentConfig(
        hidden=32, dim=32, t_max=60, epochs=15, batch_size=32,
        optimizer=OptimizerConfig("adam", 0.005), clip_norm=1.0))
    evaluate_on: str = "test"


@dataclass
class ModelResult:
    kind: str
    report: object       # MetricsReport
    model: object
    predictions: list


@dataclass
class Comparison:
    results: dict        # kind -> ModelResult, in the order trained
    provenance: dict


def _fit(kind, settings, data):
    s = settings
    if kind == "nb":
        return train_nb(data["bow"], data["labels"], alpha=s.nb_alpha), "bow"
    if kind == "svm":
        return train_svm(data["tfidf"], data["labels"], lam=s.svm_lambda,
                         epochs=s.svm_epochs, seed=s.seed), "tfidf"
    if kind == "forest":
        cfg = ForestConfig(**{**s.forest.__dict__, "seed": s.seed})
        return train_forest(data["tfidf"], data["labels"], cfg), "tfidf"
    if kind in ("rnn", "lstm"):
        cfg = RecurrentConfig(**{**s.recurrent.__dict__, "seed": s.seed})
        model = train_recurrent(data["seqs"], data["labels"], kind, cfg,
                                vocab_size=data["vocab_size"], seq_ids=data["ids"])
        return model, "seqs"
    raise ConfigError(f"unknown model kind {kind!r}")


def run_comparison(corpus, settings=None, preprocess=PreprocessConfig(), dataset="corpus"):
    settings = settings or ComparisonSettings()
    if settings.evaluate_on not in ("val", "test"):
        raise ConfigError("evaluate_on must be 'val' or 'test'")
    docs = preprocess_corpus(corpus, preprocess)
    labels = [d.label for d in docs]
    if any(lab is None for lab in labels):
        raise DataError("every document needs a label for a model comparison")
    parts = split(len(docs), settings.ratios, settings.seed, stratify_labels=labels)
    train_idx = parts.train
    eval_idx = parts.test if settings.evaluate_on == "test" else parts.val

    train_docs = [docs[i] for i in train_idx]
    eval_docs = [docs[i] for i in eval_idx]
    vocab = build_vocabulary(train_docs)
    idf = fit_idf(vocab)

    def views(subset):
        return {
            "bow": bow_matrix(subset, vocab),
            "tfidf": tfidf_matrix(subset, idf),
            "seqs": token_sequences(subset, vocab),
            "labels": [d.label for d in subset],
            "ids": [d.doc_id for d in subset],
            "vocab_size": len(vocab) + 1,
        }

    train, held = views(train_docs), views(eval_docs)
    classes = sorted(set(labels))
    results = {}
    for kind in settings.kinds:
        model, view = _fit(kind, settings, train)
        pred = model.predict(held[view])
        cm = confusion(held["labels"], pred, labels=classes)
        results[kind] = ModelResult(kind, metrics(cm), model, list(pred))
    provenance = {
        "dataset": dataset,
        "documents": len(docs),
        "split": "stratified " + "/".join(f"{r:g}" for r in settings.ratios)
                 + f" (train {len(train_idx)}, evaluated on {settings.evaluate_on} {len(eval_idx)})",
        "seed": settings.seed,
    }
    return Comparison(results, provenance)


TABLE3_COLUMNS = ("Model", "Accuracy", "Precision", "Recall", "F1 Score")
MODEL_NAMES = {"nb": "Naive Bayes", "svm": "SVM", "forest": "Random Forest",
               "rnn": "RNN", "lstm": "LSTM"}


def report_table3(reports, provenance=None):
    """Model comparison table: one row per model, macro metrics in percent.

    ``reports`` maps model kind to a ``MetricsReport``.
    """
    if not reports:
        raise ConfigError("no evaluated models to report")
    rows = [list(TABLE3_COLUMNS)]
    for kind, rep in reports.items():
        rows.append([MODEL_NAMES.get(kind, kind)]
                    + [f"{100 * v:.1f}%" for v in (rep.accuracy, rep.precision, rep.recall, rep.f1)])
    widths = [max(len(r[i]) for r in rows) for i in range(len(TABLE3_COLUMNS))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells))
    lines.append("")
    lines.append("precision, recall and F1 are macro-averaged over classes")
    for key, value in (provenance or {}).items():
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def comparison_table(comparison):
    return report_table3({k: r.report for k, r in comparison.results.items()},
                         comparison.provenance)


def accuracies(comparison):
    return {k: r.report.accuracy for k, r in comparison.results.items()}


__all__ = ["Comparison", "ComparisonSettings", "ModelResult", "accuracies", "comparison_table",
           "report_table3", "run_comparison", "token_sequences"]
