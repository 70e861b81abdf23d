"""Confusion matrices, classification/regression metrics and ROC curves.

Precision, recall and F1 are macro-averaged (unweighted mean over
classes).  A class that is never predicted has precision 0 and a class
absent from the ground truth has recall 0; both cases are listed on the
report so the convention is visible wherever a metric is printed.
"""

import io
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConstantTarget, EmptyMatrix, LengthMismatch, SingleClass, UnknownLabel


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple
    counts: np.ndarray  # rows = true label, columns = predicted label

    @property
    def total(self):
        return int(self.counts.sum())

    def format(self):
        width = max([len(str(lab)) for lab in self.labels] + [len(str(self.counts.max(initial=0))), 4])
        head = "true\\pred".ljust(width + 2) + " ".join(str(lab).rjust(width) for lab in self.labels)
        rows = [head]
        for lab, row in zip(self.labels, self.counts):
            rows.append(str(lab).ljust(width + 2) + " ".join(str(int(v)).rjust(width) for v in row))
        return "\n".join(rows) + "\n"


def confusion(y_true, y_pred, labels=None):
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"{len(y_true)} truths but {len(y_pred)} predictions")
    if labels is None:
        labels = sorted(set(y_true) | set(y_pred))
    labels = tuple(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        try:
            counts[index[t], index[p]] += 1
        except KeyError as exc:
            raise UnknownLabel(f"label {exc.args[0]!r} not in label order {labels}") from None
    return ConfusionMatrix(labels, counts)


@dataclass
class MetricsReport:
    labels: tuple
    accuracy: float
    precision: float
    recall: float
    f1: float
    per_class: dict                    # label -> (precision, recall, f1, support)
    never_predicted: list = field(default_factory=list)
    absent_from_truth: list = field(default_factory=list)
    n: int = 0

    def format(self, title=None):
        out = io.StringIO()
        if title:
            out.write(f"{title}\n")
        out.write(f"accuracy          {self.accuracy:.4f}  (n={self.n})\n")
        out.write(f"macro precision   {self.precision:.4f}\n")
        out.write(f"macro recall      {self.recall:.4f}\n")
        out.write(f"macro F1          {self.f1:.4f}\n\n")
        width = max([len(str(lab)) for lab in self.labels] + [5])
        out.write(f"{'class'.ljust(width)}  precision  recall     f1  support\n")
        for lab in self.labels:
            p, r, f, s = self.per_class[lab]
            out.write(f"{str(lab).ljust(width)}  {p:9.4f}  {r:6.4f} {f:6.4f}  {s:7d}\n")
        if self.never_predicted:
            out.write("precision set to 0 for never-predicted: " + ", ".join(self.never_predicted) + "\n")
        if self.absent_from_truth:
            out.write("recall set to 0 for classes absent from truth: "
                      + ", ".join(self.absent_from_truth) + "\n")
        return out.getvalue()

    def to_kv(self):
        """Machine-readable ``key=value`` lines (floats round-trip exactly)."""
        lines = [f"n={self.n}", "averaging=macro", f"accuracy={self.accuracy!r}",
                 f"precision={self.precision!r}", f"recall={self.recall!r}", f"f1={self.f1!r}"]
        for lab in self.labels:
            p, r, f, s = self.per_class[lab]
            lines += [f"class.{lab}.precision={p!r}", f"class.{lab}.recall={r!r}",
                      f"class.{lab}.f1={f!r}", f"class.{lab}.support={s}"]
        lines.append("never_predicted=" + ",".join(self.never_predicted))
        lines.append("absent_from_truth=" + ",".join(self.absent_from_truth))
        return "\n".join(lines) + "\n"


def _ratio(num, den):
    return float(num) / float(den) if den else 0.0


def metrics(cm):
    counts = np.asarray(cm.counts)
    total = int(counts.sum())
    if total == 0:
        raise EmptyMatrix("cannot compute metrics from an empty confusion matrix")
    diag = np.diag(counts)
    col, row = counts.sum(axis=0), counts.sum(axis=1)
    per_class, ps, rs, fs = {}, [], [], []
    never, absent = [], []
    for i, lab in enumerate(cm.labels):
        p = _ratio(diag[i], col[i])
        r = _ratio(diag[i], row[i])
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        if col[i] == 0:
            never.append(str(lab))
        if row[i] == 0:
            absent.append(str(lab))
        per_class[lab] = (p, r, f, int(row[i]))
        ps.append(p)
        rs.append(r)
        fs.append(f)
    return MetricsReport(
        labels=tuple(cm.labels),
        accuracy=_ratio(diag.sum(), total),
        precision=float(np.mean(ps)),
        recall=float(np.mean(rs)),
        f1=float(np.mean(fs)),
        per_class=per_class,
        never_predicted=never,
        absent_from_truth=absent,
        n=total,
    )


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray  # thresholds[0] = +inf for the (0, 0) point
    auc: float

    def to_csv(self):
        lines = ["fpr,tpr"]
        lines += [f"{f!r},{t!r}" for f, t in zip(self.fpr.tolist(), self.tpr.tolist())]
        return "\n".join(lines) + "\n"


def roc(truths, scores):
    """ROC of a binary scorer; samples with equal scores enter as one step."""
    truths = np.asarray(truths).astype(bool)
    scores = np.asarray(scores, dtype=np.float64)
    if truths.shape != scores.shape:
        raise LengthMismatch(f"{truths.size} truths but {scores.size} scores")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    n_pos = int(truths.sum())
    n_neg = len(truths) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both positive and negative samples")
    order = np.argsort(-scores, kind="stable")
    s, t = scores[order], truths[order]
    # last index of every run of equal scores
    ends = np.nonzero(np.r_[s[1:] != s[:-1], True])[0]
    tp = np.cumsum(t)[ends]
    fp = (ends + 1) - tp
    tp, fp = np.r_[0, tp], np.r_[0, fp]
    # trapezoids summed in integer counts, so the area is exact up to one division
    twice_area = int(np.sum((fp[1:] - fp[:-1]) * (tp[1:] + tp[:-1])))
    auc = twice_area / (2 * n_pos * n_neg)
    tpr, fpr = tp / n_pos, fp / n_neg
    return RocCurve(fpr, tpr, np.r_[np.inf, s[ends]], auc)


def roc_one_vs_rest(y_true, score_matrix, classes):
    """Per-class ROC curves (class vs rest) and their unweighted mean AUC.

    Classes missing from ``y_true`` (or covering all of it) are skipped.
    """
    score_matrix = np.asarray(score_matrix, dtype=np.float64)
    y_true = np.asarray(y_true, dtype=object)
    curves = {}
    for j, c in enumerate(classes):
        truth = y_true == c
        if 0 < truth.sum() < len(truth):
            curves[c] = roc(truth, score_matrix[:, j])
    macro = float(np.mean([cv.auc for cv in curves.values()])) if curves else float("nan")
    return curves, macro


def regression_metrics(y_true, y_pred):
    """``(mse, r_squared)``."""
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise LengthMismatch("y_true and y_pred must have equal, nonzero lengths")
    resid = y_true - y_pred
    mse = float(np.mean(resid ** 2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0:
        raise ConstantTarget("R-squared is undefined for a constant target")
    return mse, 1.0 - float(np.sum(resid ** 2)) / ss_tot
