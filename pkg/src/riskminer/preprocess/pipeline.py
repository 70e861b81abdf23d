import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .._io import lines_of
from ..errors import ConfigError, MissingLexicon
from .porter import stem

_TAG = re.compile(r"<[^>]*>")
_UNCLOSED_TAG = re.compile(r"<[^>]*\Z")
_DELIMITED_TOKEN = re.compile(r"\w+|[^\w\s]", re.UNICODE)

KEEP_POLICIES = ("alnum", "alpha", "any")


def strip_markup(text):
    """Remove ``<...>`` tag spans.

    An unclosed ``<`` swallows the rest of the text, so a stray less-than
    sign in plain prose truncates it.
    """
    text = _TAG.sub("", text)
    return _UNCLOSED_TAG.sub("", text)


def _maximal_match(text, lexicon):
    entries = frozenset(lexicon)
    longest = max(len(e) for e in entries)
    tokens, i, n = [], 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        for size in range(min(longest, n - i), 0, -1):
            if text[i:i + size] in entries:
                tokens.append(text[i:i + size])
                i += size
                break
        else:
            tokens.append(text[i])
            i += 1
    return tokens


def segment(text, mode="delimited", lexicon=None):
    """Split text into tokens.

    ``delimited`` splits on whitespace and breaks punctuation into its own
    tokens.  ``maximal_match`` scans left to right taking the longest
    lexicon entry at each position (a single character when none matches),
    for scripts written without spaces.
    """
    if mode == "delimited":
        return _DELIMITED_TOKEN.findall(text)
    if mode == "maximal_match":
        if not lexicon:
            raise MissingLexicon("maximal_match segmentation needs a nonempty lexicon")
        return _maximal_match(text, lexicon)
    raise ConfigError(f"unknown segmentation mode {mode!r}")


def remove_stopwords(tokens, stopwords, lowercase=True):
    if lowercase:
        return [t for t in tokens if t.lower() not in stopwords]
    return [t for t in tokens if t not in stopwords]


def read_word_list(path):
    """One entry per line; blank lines and ``#`` comments skipped."""
    with open(path, encoding="utf-8") as fh:
        return _parse_word_list(fh.read())


def _parse_word_list(text):
    words = []
    for line in lines_of(text):
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return words


@lru_cache(maxsize=None)
def default_stopwords():
    text = resources.files(__package__).joinpath("data/stopwords_en.txt").read_text("utf-8")
    return frozenset(w.lower() for w in _parse_word_list(text))


def _keep(token, policy):
    if policy == "alnum":
        return any(ch.isalnum() for ch in token)
    if policy == "alpha":
        return token.isalpha()
    return True


@dataclass(frozen=True)
class PreprocessConfig:
    lowercase: bool = True
    strip_markup: bool = True
    stopwords: frozenset = field(default_factory=default_stopwords)
    keep_pattern: str = "alnum"
    stemming: bool = True
    segmenter: str = "delimited"
    lexicon: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))
        if self.lexicon is not None:
            object.__setattr__(self, "lexicon", tuple(self.lexicon))
        if self.keep_pattern not in KEEP_POLICIES:
            raise ConfigError(f"keep_pattern must be one of {KEEP_POLICIES}")
        if self.segmenter == "maximal_match" and not self.lexicon:
            raise MissingLexicon("maximal_match segmentation needs a nonempty lexicon")


@dataclass(frozen=True)
class TokenizedDocument:
    doc_id: str
    tokens: tuple
    label: str | None = None


def tokenize(text, config=PreprocessConfig()):
    """Token list for raw ``text`` under ``config``."""
    if config.strip_markup:
        text = strip_markup(text)
    tokens = segment(text, config.segmenter, config.lexicon)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    tokens = [t for t in tokens if _keep(t, config.keep_pattern)]
    tokens = remove_stopwords(tokens, config.stopwords, lowercase=config.lowercase)
    if config.stemming:
        tokens = [stem(t) for t in tokens]
    return tokens


def preprocess_pipeline(doc, config=PreprocessConfig()):
    """Run the fixed stage order on a ``Document`` (or a bare string).

    strip markup, segment, lowercase, character filter, stopwords, stem.
    """
    if isinstance(doc, str):
        return TokenizedDocument("", tuple(tokenize(doc, config)))
    return TokenizedDocument(doc.id, tuple(tokenize(doc.text, config)), doc.label)


def preprocess_corpus(corpus, config=PreprocessConfig()):
    return [preprocess_pipeline(d, config) for d in corpus]
