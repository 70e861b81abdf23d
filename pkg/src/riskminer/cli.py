"""Command line front end: one pipeline stage per subcommand, files in between.

Every artifact starts with ``#`` provenance lines (tool version, schema
version, command, seed, SHA-256 of each input read, resolved parameters),
so two runs over identical inputs with the same seed write identical bytes.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal error.
"""

import argparse
import csv
import io
import os
import re
import sys

import numpy as np

from . import __version__
from ._io import atomic_write, file_digest, header_line, lines_of, parse_header
from .corpus import (
    FINANCIAL_COLUMNS,
    dump_corpus,
    parse_corpus,
    parse_financial_records,
    records_to_corpus,
    validate_corpus,
)
from .errors import ConfigError, DataError, MalformedRecord
from .evaluation import (
    choice,
    confusion,
    draw_configs,
    fold_pairs,
    kfold,
    log_uniform,
    metrics,
    roc_one_vs_rest,
    split,
    uniform,
    uniform_int,
)
from .evaluation.search import evaluate_configs, grid_configs
from .features import (
    TfidfModel,
    Word2VecConfig,
    bow_matrix,
    build_vocabulary,
    fit_idf,
    tfidf_matrix,
    train_word2vec,
)
from .finance import ScreenConfig, match_periods, results_csv, results_table, screen, trend_report
from .models import (
    ForestConfig,
    OptimizerConfig,
    RecurrentConfig,
    loads_model,
    train_forest,
    train_nb,
    train_recurrent,
    train_svm,
)
from .pipeline import ComparisonSettings, report_table3, run_comparison, token_sequences
from .preprocess import PreprocessConfig, TokenizedDocument, default_stopwords, preprocess_corpus
from .preprocess import read_word_list
from .synthetic import risk_corpus
from .topics import LdaConfig, extract_keywords, fit_lda

SCHEMA_VERSION = 1
TRIPLET_FORMAT = "riskminer-triplets"
FEATURE_VIEW = {"nb": "bow", "svm": "tfidf", "forest": "tfidf", "rnn": "seqs", "lstm": "seqs"}


class UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage mistakes exit 1 (argparse's own default is 2, which is reserved for data errors)
    def error(self, message):
        raise UsageError(f"{self.format_usage().rstrip()}\n{self.prog}: error: {message}")


# --- provenance and file handling ------------------------------------------

class Run:
    """Tracks the inputs a command reads and stamps everything it writes."""

    def __init__(self, args):
        self.args = args
        self.inputs = []

    def read(self, path):
        path = os.fspath(path)
        if not os.path.isfile(path):
            raise DataError(f"cannot read input file {path!r}")
        self.inputs.append((os.path.basename(path), file_digest(path)))
        with open(path, encoding="utf-8") as fh:
            return fh.read()

    def header(self):
        a = self.args
        lines = [f"# riskminer {__version__} schema_version={SCHEMA_VERSION} "
                 f"command={a.command} seed={a.seed}"]
        lines += [f"# input {name} sha256={digest}" for name, digest in self.inputs]
        params = [f"{k}={_show(v)}" for k, v in sorted(vars(a).items())
                  if k not in ("command", "seed", "inp", "out", "config", "handler")]
        if params:
            lines.append("# params " + " ".join(params))
        return "\n".join(lines) + "\n"

    def write(self, name, body):
        atomic_write(os.path.join(self.args.out, name), self.header() + body)


def _show(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_show(x) for x in v)
    return str(v).replace(" ", "_")


def strip_comments(text):
    """Drop the leading ``#`` lines an artifact starts with."""
    lines = text.splitlines(keepends=True)
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        i += 1
    return "".join(lines[i:])


def _one_input(args):
    if not args.inp or len(args.inp) != 1:
        raise UsageError(f"{args.command} takes exactly one --in path")
    return args.inp[0]


# --- tokenized corpus ------------------------------------------------------

def dump_tokens(docs):
    out = io.StringIO()
    out.write("id\tlabel\ttokens\n")
    for d in docs:
        out.write(f"{d.doc_id}\t{d.label or ''}\t{' '.join(d.tokens)}\n")
    return out.getvalue()


def parse_tokens(text):
    lines = lines_of(strip_comments(text))
    if not lines or lines[0] != "id\tlabel\ttokens":
        raise MalformedRecord(1, "tokenized corpus must start with the header id, label, tokens")
    docs = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 3:
            raise MalformedRecord(lineno, "expected id, label, tokens")
        docs.append(TokenizedDocument(parts[0], tuple(parts[2].split()), parts[1] or None))
    return docs


# --- sparse triplet matrices -----------------------------------------------

def dump_triplets(matrix):
    rows, cols = np.nonzero(matrix)
    lines = [header_line(TRIPLET_FORMAT, SCHEMA_VERSION, rows=matrix.shape[0], cols=matrix.shape[1])]
    values = matrix[rows, cols].tolist()
    lines += [f"{r} {c} {v!r}" for r, c, v in zip(rows.tolist(), cols.tolist(), values)]
    return "\n".join(lines) + "\n"


def parse_triplets(text):
    lines = lines_of(strip_comments(text))
    if not lines:
        raise MalformedRecord(1, "empty matrix file")
    head = parse_header(lines[0], TRIPLET_FORMAT, SCHEMA_VERSION)
    out = np.zeros((int(head["rows"]), int(head["cols"])))
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise MalformedRecord(lineno, "expected row col value")
        r, c = int(parts[0]), int(parts[1])
        if not (0 <= r < out.shape[0] and 0 <= c < out.shape[1]):
            raise MalformedRecord(lineno, f"cell ({r}, {c}) outside the declared shape")
        out[r, c] = float(parts[2])
    return out


class FeatureSet:
    """Rows of a featurize output directory restricted to some split parts."""

    def __init__(self, run, directory, parts):
        self.run, self.dir = run, directory
        text = run.read(os.path.join(directory, "rows.tsv"))
        lines = lines_of(strip_comments(text))
        if not lines or lines[0] != "row\tid\tlabel\tpart":
            raise MalformedRecord(1, "rows.tsv must start with the header row, id, label, part")
        wanted = set(parts)
        self.rows, self.ids, self.labels = [], [], []
        for lineno, line in enumerate(lines[1:], start=2):
            fields = line.split("\t")
            if len(fields) != 4:
                raise MalformedRecord(lineno, "expected row, id, label, part")
            if "all" in wanted or fields[3] in wanted or fields[3] == "all":
                self.rows.append(int(fields[0]))
                self.ids.append(fields[1])
                self.labels.append(fields[2] or None)
        if not self.rows:
            raise DataError(f"no rows in split part(s) {','.join(parts)}")
        self._cache = {}

    def view(self, name):
        if name not in self._cache:
            if name == "seqs":
                text = strip_comments(self.run.read(os.path.join(self.dir, "sequences.txt")))
                head, *body = lines_of(text)
                meta = parse_header(head, "riskminer-sequences", SCHEMA_VERSION)
                seqs = [[int(t) for t in line.split()] for line in body]
                self._cache[name] = ([seqs[r] for r in self.rows], int(meta["vocab_size"]))
            else:
                m = parse_triplets(self.run.read(os.path.join(self.dir, f"{name}.txt")))
                self._cache[name] = m[self.rows]
        return self._cache[name]

    def labeled(self):
        if any(lab is None for lab in self.labels):
            raise DataError("training and evaluation need every selected row to be labeled")
        return self.labels


# --- model construction from flags -----------------------------------------

def _train(kind, args, data, idx=None, params=None):
    """Fit ``kind`` on the feature rows ``idx`` (all rows by default)."""
    p = {**_hyper(args), **(params or {})}
    labels = data.labeled()
    idx = list(range(len(labels))) if idx is None else list(idx)
    y = [labels[i] for i in idx]
    view = FEATURE_VIEW[kind]
    if view == "seqs":
        seqs, vocab_size = data.view("seqs")
        cfg = RecurrentConfig(
            hidden=int(p["hidden"]), dim=int(p["dim"]), t_max=int(p["t_max"]),
            epochs=int(p["epochs"] or 15), batch_size=int(p["batch_size"]),
            optimizer=OptimizerConfig(p["optimizer"], float(p["lr"])),
            clip_norm=float(p["clip_norm"]), l2=float(p["l2"]), seed=args.seed)
        ids = [data.ids[i] for i in idx]
        return train_recurrent([seqs[i] for i in idx], y, kind, cfg, vocab_size=vocab_size,
                               seq_ids=ids)
    X = data.view(view)[idx]
    if kind == "nb":
        return train_nb(X, y, alpha=float(p["alpha"]))
    if kind == "svm":
        return train_svm(X, y, lam=float(p["lam"]), epochs=int(p["epochs"] or 20), seed=args.seed,
                         mode=p["svm_mode"])
    cfg = ForestConfig(n_trees=int(p["n_trees"]), max_depth=_opt_int(p["max_depth"]),
                       min_leaf=int(p["min_leaf"]), mtry=_opt_int(p["mtry"]), seed=args.seed)
    return train_forest(X, y, cfg, n_jobs=int(p["jobs"]))


def _opt_int(v):
    return None if v in (None, "", "none", "None") else int(v)


HYPER_KEYS = ("alpha", "lam", "epochs", "svm_mode", "n_trees", "max_depth", "min_leaf", "mtry",
              "jobs", "hidden", "dim", "t_max", "batch_size", "optimizer", "lr", "clip_norm", "l2")


def _hyper(args):
    return {k: getattr(args, k) for k in HYPER_KEYS}


def _features_for(model, data):
    view = FEATURE_VIEW[model.kind]
    if view == "seqs":
        return data.view("seqs")[0]
    return data.view(view)


def _score(model, data, idx):
    view = FEATURE_VIEW[model.kind]
    if view == "seqs":
        seqs = data.view("seqs")[0]
        X = [seqs[i] for i in idx]
    else:
        X = data.view(view)[list(idx)]
    pred = model.predict(X)
    truth = [data.labels[i] for i in idx]
    return float(np.mean([a == b for a, b in zip(pred, truth)]))


# --- subcommands -----------------------------------------------------------

def cmd_ingest(args, run):
    if args.generate:
        if args.inp:
            raise UsageError("ingest takes either --in or --generate, not both")
        corpus = risk_corpus(args.generate, seed=args.seed)
    else:
        path = _one_input(args)
        text = run.read(path)
        fmt = args.format
        if fmt == "auto":
            first = lines_of(text)[0] if text else ""
            if path.lower().endswith(".csv"):
                fields = tuple(h.strip() for h in next(csv.reader([first]), []))
                fmt = "financial" if fields == FINANCIAL_COLUMNS else "csv"
            else:
                fmt = "jsonl"
        if fmt == "financial":
            corpus = records_to_corpus(parse_financial_records(text))
        else:
            corpus = parse_corpus(text, fmt)
    run.write("corpus.jsonl", dump_corpus(corpus))
    run.write("validation.txt", validate_corpus(corpus).format())


def _preprocess_config(args, run):
    if args.stopwords == "default":
        stopwords = default_stopwords()
    elif args.stopwords == "none":
        stopwords = frozenset()
    else:
        run.read(args.stopwords)
        stopwords = read_word_list(args.stopwords)
    lexicon = None
    if args.lexicon:
        run.read(args.lexicon)
        lexicon = read_word_list(args.lexicon)
    return PreprocessConfig(lowercase=args.lowercase, strip_markup=args.strip_markup,
                            stopwords=stopwords, keep_pattern=args.keep, stemming=args.stem,
                            segmenter=args.segmenter, lexicon=lexicon)


def cmd_preprocess(args, run):
    corpus = parse_corpus(run.read(_one_input(args)), "jsonl")
    docs = preprocess_corpus(corpus, _preprocess_config(args, run))
    run.write("tokens.tsv", dump_tokens(docs))


def _ratios(text):
    try:
        values = tuple(float(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError(f"ratios must be three comma-separated numbers, got {text!r}") from None
    return values


def cmd_featurize(args, run):
    docs = parse_tokens(run.read(_one_input(args)))
    if not docs:
        raise DataError("tokenized corpus is empty")
    n = len(docs)
    if args.split == "none" or args.tfidf_model:
        parts = ["all"] * n
    else:
        labels = [d.label for d in docs]
        strat = labels if args.split == "stratified" else None
        if strat is not None and any(lab is None for lab in labels):
            raise DataError("stratified split needs every document labeled; use --split random")
        s = split(n, _ratios(args.ratios), args.seed, stratify_labels=strat)
        parts = [""] * n
        for name, idx in (("train", s.train), ("val", s.val), ("test", s.test)):
            for i in idx:
                parts[i] = name
    if args.tfidf_model:
        model = TfidfModel.loads(strip_comments(run.read(args.tfidf_model)))
    else:
        fit_on = [d for d, p in zip(docs, parts) if p in ("train", "all")]
        model = fit_idf(build_vocabulary(fit_on, args.min_df, args.max_df_ratio))
    vocab = model.vocab
    seqs = token_sequences(docs, vocab)

    rows = ["row\tid\tlabel\tpart"]
    rows += [f"{i}\t{d.doc_id}\t{d.label or ''}\t{p}" for i, (d, p) in enumerate(zip(docs, parts))]
    run.write("rows.tsv", "\n".join(rows) + "\n")
    run.write("bow.txt", dump_triplets(bow_matrix(docs, vocab)))
    run.write("tfidf.txt", dump_triplets(tfidf_matrix(docs, model)))
    seq_lines = [header_line("riskminer-sequences", SCHEMA_VERSION, vocab_size=len(vocab) + 1,
                             unknown=0)]
    seq_lines += [" ".join(str(t) for t in s) for s in seqs]
    run.write("sequences.txt", "\n".join(seq_lines) + "\n")
    run.write("tfidf_model.txt", model.dumps())


def cmd_embed(args, run):
    docs = parse_tokens(run.read(_one_input(args)))
    cfg = Word2VecConfig(mode=args.mode, dim=args.dim, window=args.window,
                         negatives=args.negatives, epochs=args.epochs or 5,
                         learning_rate=args.lr or 0.025, min_count=args.min_count, seed=args.seed)
    model = train_word2vec(docs, cfg)
    run.write("embeddings.txt", model.dumps())


def cmd_topics(args, run):
    docs = parse_tokens(run.read(_one_input(args)))
    vocab = build_vocabulary(docs, args.min_df, args.max_df_ratio)
    kept = [[t for t in d.tokens if t in vocab] for d in docs]
    keep = [i for i, toks in enumerate(kept) if toks]
    cfg = LdaConfig(K=args.k, alpha=args.lda_alpha, beta=args.beta, iterations=args.iterations,
                    seed=args.seed)
    model = fit_lda([kept[i] for i in keep], vocab, cfg, doc_ids=[docs[i].doc_id for i in keep])
    run.write("topics.txt", model.format_report(args.top_n))
    lines = ["id\t" + "\t".join(f"topic{k}" for k in range(model.K))]
    lines += [f"{did}\t" + "\t".join(repr(float(v)) for v in row)
              for did, row in zip(model.doc_ids, model.theta)]
    run.write("doc_topics.tsv", "\n".join(lines) + "\n")
    lines = ["token\t" + "\t".join(f"topic{k}" for k in range(model.K))]
    lines += [f"{tok}\t" + "\t".join(repr(float(v)) for v in model.phi[:, i])
              for i, tok in enumerate(vocab.tokens)]
    run.write("topic_words.tsv", "\n".join(lines) + "\n")


def cmd_keywords(args, run):
    docs = parse_tokens(run.read(_one_input(args)))
    if not args.tfidf_model:
        raise UsageError("keywords needs --tfidf-model (written by featurize)")
    model = TfidfModel.loads(strip_comments(run.read(args.tfidf_model)))
    lines = ["id\tkeywords"]
    for d in docs:
        kws = extract_keywords(d.tokens, model, args.top_n)
        lines.append(f"{d.doc_id}\t" + " ".join(f"{t}:{w!r}" for t, w in kws))
    run.write("keywords.tsv", "\n".join(lines) + "\n")


def _parts(text):
    return [p.strip() for p in str(text).split(",") if p.strip()]


def cmd_train(args, run):
    data = FeatureSet(run, _one_input(args), _parts(args.part))
    model = _train(args.kind, args, data)
    run.write("model.txt", model.dumps())


def _predict_rows(model, data):
    X = _features_for(model, data)
    scores = model.ranking_scores(X)
    pred = [model.classes[i] for i in np.argmax(scores, axis=1)]
    return pred, scores


def _predictions_text(model, data, part):
    pred, scores = _predict_rows(model, data)
    lines = [f"# predictions kind={model.kind} part={part}"]
    lines.append("row\tid\ttrue\tpredicted\t" + "\t".join(f"score:{c}" for c in model.classes))
    for r, did, t, p, s in zip(data.rows, data.ids, data.labels, pred, scores):
        lines.append(f"{r}\t{did}\t{t or ''}\t{p}\t" + "\t".join(repr(float(v)) for v in s))
    return "\n".join(lines) + "\n"


def _load_model(run, path):
    return loads_model(strip_comments(run.read(path)))


def cmd_predict(args, run):
    if not args.model:
        raise UsageError("predict needs --model")
    model = _load_model(run, args.model)
    data = FeatureSet(run, _one_input(args), _parts(args.part))
    run.write("predictions.tsv", _predictions_text(model, data, args.part))


def parse_predictions(text):
    meta = {}
    body = []
    for line in lines_of(text):
        if line.startswith("# predictions"):
            meta = dict(p.split("=", 1) for p in line.split()[2:])
        elif not line.startswith("#"):
            body.append(line)
    if not body:
        raise MalformedRecord(1, "predictions file has no header row")
    head = body[0].split("\t")
    if head[:4] != ["row", "id", "true", "predicted"]:
        raise MalformedRecord(1, "predictions header must start with row, id, true, predicted")
    classes = [h[len("score:"):] for h in head[4:]]
    truth, pred, scores = [], [], []
    for lineno, line in enumerate(body[1:], start=2):
        f = line.split("\t")
        if len(f) != 4 + len(classes):
            raise MalformedRecord(lineno, "wrong number of prediction fields")
        if not f[2]:
            raise DataError(f"row {f[0]} ({f[1]}) has no true label to evaluate against")
        truth.append(f[2])
        pred.append(f[3])
        scores.append([float(v) for v in f[4:]])
    return meta, classes, truth, pred, np.array(scores).reshape(len(truth), len(classes))


def _safe_name(label):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", str(label))


def cmd_evaluate(args, run):
    if args.model:
        model = _load_model(run, args.model)
        data = FeatureSet(run, _one_input(args), _parts(args.part))
        text = _predictions_text(model, data, args.part)
    else:
        text = run.read(_one_input(args))
    meta, classes, truth, pred, scores = parse_predictions(text)
    labels = sorted(set(classes) | set(truth) | set(pred))
    cm = confusion(truth, pred, labels=labels)
    rep = metrics(cm)
    kind = meta.get("kind", "model")
    curves, macro_auc = roc_one_vs_rest(truth, scores, classes)
    title = f"{kind} evaluated on {meta.get('part', '?')} ({rep.n} samples; macro-averaged)"
    run.write("metrics.txt", rep.format(title) + "\nconfusion matrix\n" + cm.format()
              + f"\none-vs-rest macro AUC {macro_auc:.4f}\n")
    kv = [f"kind={kind}", f"part={meta.get('part', '')}"] + lines_of(rep.to_kv())
    kv.append(f"macro_auc={macro_auc!r}")
    run.write("metrics.kv", "\n".join(kv) + "\n")
    for label, curve in curves.items():
        run.write(f"roc_{_safe_name(label)}.csv", curve.to_csv())


def cmd_cv(args, run):
    data = FeatureSet(run, _one_input(args), _parts(args.part))
    data.labeled()
    folds = kfold(len(data.rows), args.k, args.seed)
    lines = ["fold\tn_train\tn_test\taccuracy"]
    scores = []
    for f, (tr, te) in enumerate(fold_pairs(folds)):
        model = _train(args.kind, args, data, tr)
        acc = _score(model, data, te)
        scores.append(acc)
        lines.append(f"{f}\t{len(tr)}\t{len(te)}\t{acc!r}")
    lines.append(f"mean\t\t\t{float(np.mean(scores))!r}")
    run.write("cv.tsv", "\n".join(lines) + "\n")


def _search_space(specs, random):
    space = {}
    for spec in specs or []:
        if "=" not in spec:
            raise UsageError(f"--param expects name=values, got {spec!r}")
        name, values = spec.split("=", 1)
        name = name.strip().replace("-", "_")
        if name not in HYPER_KEYS:
            raise UsageError(f"unknown hyperparameter {name!r}")
        head, _, rest = values.partition(":")
        if random and head in ("int", "uniform", "log"):
            lo, hi = rest.split(":")
            space[name] = {"int": lambda a, b: uniform_int(int(a), int(b)),
                           "uniform": lambda a, b: uniform(float(a), float(b)),
                           "log": lambda a, b: log_uniform(float(a), float(b))}[head](lo, hi)
        else:
            vals = [v for v in values.split(",") if v != ""]
            space[name] = choice(vals) if random else vals
    return space


def cmd_search(args, run):
    data = FeatureSet(run, _one_input(args), _parts(args.part))
    data.labeled()
    random = args.random > 0
    space = _search_space(args.param, random)
    configs = draw_configs(space, args.random, args.seed) if random else grid_configs(space)

    def trainer(config, idx):
        return _train(args.kind, args, data, idx, config)

    def scorer(model, idx):
        return _score(model, data, idx)

    best, table = evaluate_configs(configs, trainer, scorer, len(data.rows), args.k, args.seed, 1)
    names = list(space)
    lines = ["index\t" + "\t".join(names) + "\tmean_accuracy\tfold_accuracies"]
    for row in table:
        lines.append(f"{row.index}\t" + "\t".join(_show(row.config[n]) for n in names)
                     + f"\t{row.mean_score!r}\t" + ",".join(repr(s) for s in row.fold_scores))
    run.write("search.tsv", "\n".join(lines) + "\n")
    run.write("best.txt", "".join(f"{n}={_show(best[n])}\n" for n in names))


def cmd_finance(args, run):
    records = parse_financial_records(run.read(_one_input(args)))
    config = ScreenConfig(args.liquidity_floor, args.debt_ceiling)
    reports = screen(records, config)
    trends = None
    if args.previous:
        previous = parse_financial_records(run.read(args.previous))
        trends = trend_report(match_periods(previous, records))
    run.write("screen.txt", results_table(reports, trends, config=config))
    run.write("screen.csv", results_csv(reports, trends))


class _KvReport:
    def __init__(self, kv):
        self.accuracy = float(kv["accuracy"])
        self.precision = float(kv["precision"])
        self.recall = float(kv["recall"])
        self.f1 = float(kv["f1"])


def cmd_report(args, run):
    if not args.inp:
        raise UsageError("report needs --in (metrics.kv files or one corpus)")
    if all(p.endswith(".kv") for p in args.inp):
        reports, parts = {}, set()
        for path in args.inp:
            kv = dict(line.split("=", 1) for line in lines_of(strip_comments(run.read(path)))
                      if "=" in line)
            reports[kv.get("kind", os.path.basename(os.path.dirname(path)))] = _KvReport(kv)
            parts.add(kv.get("part", ""))
        names = [os.path.join(os.path.basename(os.path.dirname(os.path.abspath(p))),
                              os.path.basename(p)) for p in args.inp]
        provenance = {"dataset": "metrics files " + ", ".join(names),
                      "split": "evaluated on " + ",".join(sorted(parts)), "seed": args.seed}
        run.write("table3.txt", report_table3(reports, provenance))
        return
    corpus = parse_corpus(run.read(_one_input(args)), "jsonl")
    settings = ComparisonSettings(ratios=_ratios(args.ratios), seed=args.seed)
    comparison = run_comparison(corpus, settings, dataset=os.path.basename(args.inp[0]))
    reports = {k: r.report for k, r in comparison.results.items()}
    run.write("table3.txt", report_table3(reports, comparison.provenance))
    for kind, r in comparison.results.items():
        run.write(f"metrics_{kind}.kv", f"kind={kind}\n" + r.report.to_kv())


# --- parser ----------------------------------------------------------------

def _add_common(p):
    p.add_argument("--in", dest="inp", action="append", metavar="PATH", help="input path (repeatable)")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", metavar="PATH", help="key=value file; flags win on conflict")


def _add_preprocess(p):
    p.add_argument("--lowercase", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--strip-markup", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--stem", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--stopwords", default="default", help="'default', 'none' or a word-list file")
    p.add_argument("--keep", choices=("alnum", "alpha", "any"), default="alnum")
    p.add_argument("--segmenter", choices=("delimited", "maximal_match"), default="delimited")
    p.add_argument("--lexicon", help="word list for maximal_match segmentation")


def _add_vocab(p):
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--max-df-ratio", type=float, default=1.0)


def _add_model(p, kind_required=True):
    p.add_argument("--kind", choices=tuple(FEATURE_VIEW), required=kind_required)
    p.add_argument("--part", default="train", help="split part(s) to use, comma separated")
    p.add_argument("--alpha", type=float, default=1.0, help="Naive Bayes smoothing")
    p.add_argument("--lam", type=float, default=1e-3, help="SVM regularization")
    p.add_argument("--epochs", type=int, default=None, help="SVM / recurrent epochs")
    p.add_argument("--svm-mode", choices=("stochastic", "batch"), default="stochastic")
    p.add_argument("--n-trees", type=int, default=50)
    p.add_argument("--max-depth", default=None)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--mtry", default=None)
    p.add_argument("--jobs", type=int, default=1, help="forest worker threads")
    p.add_argument("--hidden", type=int, default=32)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--t-max", type=int, default=60)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--optimizer", choices=("sgd", "adam", "rmsprop"), default="adam")
    p.add_argument("--lr", type=float, default=0.005)
    p.add_argument("--clip-norm", type=float, default=1.0)
    p.add_argument("--l2", type=float, default=0.0)


def build_parser():
    parser = _Parser(prog="riskminer", description="Financial risk text mining pipeline.")
    parser.add_argument("--version", action="version", version=f"riskminer {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, handler, help):
        p = sub.add_parser(name, help=help)
        _add_common(p)
        p.set_defaults(handler=handler)
        return p

    p = command("ingest", cmd_ingest, "validate and normalize a corpus or financial table")
    p.add_argument("--format", choices=("auto", "jsonl", "csv", "financial"), default="auto")
    p.add_argument("--generate", type=int, default=0, metavar="N",
                   help="write a synthetic N-document risk corpus instead of reading --in")

    p = command("preprocess", cmd_preprocess, "tokenize a corpus")
    _add_preprocess(p)

    p = command("featurize", cmd_featurize, "split, fit vocabulary/IDF, write feature matrices")
    _add_vocab(p)
    p.add_argument("--split", choices=("stratified", "random", "none"), default="stratified")
    p.add_argument("--ratios", default="0.7,0.15,0.15")
    p.add_argument("--tfidf-model", help="apply an existing TF-IDF model instead of fitting one")

    p = command("embed", cmd_embed, "train word2vec embeddings")
    p.add_argument("--mode", choices=("skipgram", "cbow"), default="skipgram")
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--lr", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=1)

    p = command("topics", cmd_topics, "fit an LDA topic model")
    _add_vocab(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--lda-alpha", type=float, default=None, help="default 50/k")
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--top-n", type=int, default=10)

    p = command("keywords", cmd_keywords, "rank each document's terms by TF-IDF")
    p.add_argument("--tfidf-model")
    p.add_argument("--top-n", type=int, default=10)

    p = command("train", cmd_train, "train one classifier on featurize output")
    _add_model(p)

    p = command("predict", cmd_predict, "predict with a trained model")
    p.add_argument("--model")
    p.add_argument("--part", default="test")

    p = command("evaluate", cmd_evaluate, "metrics, confusion matrix and ROC data")
    p.add_argument("--model", help="evaluate a model on featurize output instead of predictions")
    p.add_argument("--part", default="test")

    p = command("cv", cmd_cv, "k-fold cross-validation")
    _add_model(p)
    p.set_defaults(part="train,val")
    p.add_argument("--k", type=int, default=5)

    p = command("search", cmd_search, "grid or random hyperparameter search")
    _add_model(p)
    p.set_defaults(part="train,val")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--param", action="append", metavar="NAME=VALUES",
                   help="grid values 'a,b,c'; with --random also int:lo:hi, uniform:lo:hi, log:lo:hi")
    p.add_argument("--random", type=int, default=0, metavar="N", help="draw N random configurations")

    p = command("finance", cmd_finance, "ratio screen and period-over-period trends")
    p.add_argument("--previous", help="previous-period financial table for trend columns")
    p.add_argument("--liquidity-floor", type=float, default=1.5)
    p.add_argument("--debt-ceiling", type=float, default=0.7)

    p = command("report", cmd_report, "model comparison table")
    p.add_argument("--ratios", default="0.7,0.15,0.15")
    return parser, sub


def _parse_bool(key, value):
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"config key {key!r} expects true/false, got {value!r}")


def read_config(path):
    """``key=value`` lines; blank lines and ``#`` comments ignored."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc.strerror}") from None
    out = {}
    for lineno, line in enumerate(lines_of(text), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv):
    parser, sub = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sp = sub.choices[args.command]
        actions = {a.dest: a for a in sp._actions
                   if a.dest not in ("help", "config", "handler", "out", "inp")}
        defaults = {}
        for key, value in read_config(args.config).items():
            if key not in actions:
                raise UsageError(f"unknown config key {key!r} for {args.command}")
            action = actions[key]
            if isinstance(action, argparse.BooleanOptionalAction):
                defaults[key] = _parse_bool(key, value)
            elif action.type is not None:
                try:
                    defaults[key] = action.type(value)
                except ValueError:
                    raise UsageError(f"config key {key!r}: bad value {value!r}") from None
            else:
                if action.choices and value not in action.choices:
                    raise UsageError(f"config key {key!r} must be one of {sorted(action.choices)}")
                defaults[key] = value
        sp.set_defaults(**defaults)
        args = parser.parse_args(argv)  # explicit flags still override the file
    return args


def run(argv=None):
    """Run one subcommand; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        args.handler(args, Run(args))
        return 0
    except SystemExit as exc:  # --help / --version
        return 0 if exc.code in (0, None) else 1
    except UsageError as exc:
        text = str(exc)
        print(text if text.startswith("usage:") else f"riskminer: error: {text}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"riskminer: configuration error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"riskminer: data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - reported and mapped to exit 3
        print(f"riskminer: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
