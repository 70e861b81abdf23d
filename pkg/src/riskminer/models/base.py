import numpy as np


class Classifier:
    """Shared prediction contract.

    Subclasses set ``classes`` (sorted labels) and implement ``scores``,
    returning an ``(n, n_classes)`` array where larger means more likely.
    Ties go to the first column, i.e. the lexicographically smallest label.
    """

    kind = ""
    classes: list

    def scores(self, X):
        raise NotImplementedError

    def ranking_scores(self, X):
        """Scores comparable across samples, for ranking-based metrics such as ROC."""
        return self.scores(X)

    def predict(self, X):
        return [self.classes[i] for i in np.argmax(self.scores(X), axis=1)]

    def predict_one(self, x):
        s = self.scores([x])[0]
        return self.classes[int(np.argmax(s))], s


def class_index(labels):
    classes = sorted(set(labels))
    lookup = {c: i for i, c in enumerate(classes)}
    return classes, np.array([lookup[y] for y in labels], dtype=np.int64)
