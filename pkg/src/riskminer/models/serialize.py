"""Versioned text format shared by every model kind.

::

    riskminer-model schema_version=1 kind=<kind> key=value ...
    [classes] <n>
    <one label per line>
    [<block>] <dtype> <d0>,<d1>,...
    <rows of space-separated values>
    ...

Floats are written as shortest round-trip decimals, so a save/load cycle
is exact and identical models serialize to identical bytes.
"""

import numpy as np

from .._io import atomic_write, header_line, lines_of, parse_header
from ..errors import MalformedRecord

MODEL_FORMAT = "riskminer-model"
MODEL_SCHEMA = 1


def _fmt_value(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def dumps(kind, hyper, classes, blocks):
    lines = [header_line(MODEL_FORMAT, MODEL_SCHEMA, kind=kind,
                         **{k: _fmt_value(v) for k, v in hyper.items()})]
    lines.append(f"[classes] {len(classes)}")
    lines.extend(classes)
    for name, arr in blocks.items():
        arr = np.asarray(arr)
        is_int = np.issubdtype(arr.dtype, np.integer)
        shape = ",".join(str(d) for d in arr.shape)
        lines.append(f"[{name}] {'int' if is_int else 'float'} {shape}")
        rows = arr.reshape(-1, arr.shape[-1]) if arr.ndim >= 2 else arr.reshape(1, -1)
        if arr.size == 0:
            continue
        for row in rows:
            if is_int:
                lines.append(" ".join(str(int(v)) for v in row))
            else:
                lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def loads(text):
    lines = lines_of(text)
    if not lines:
        raise MalformedRecord(1, "empty model file")
    hyper = parse_header(lines[0], MODEL_FORMAT, MODEL_SCHEMA)
    kind = hyper.pop("kind", None)
    pos = 1

    def expect_block(pos):
        if pos >= len(lines) or not lines[pos].startswith("["):
            raise MalformedRecord(pos + 1, "expected a [block] header")
        name, _, rest = lines[pos][1:].partition("]")
        return name, rest.split()

    name, rest = expect_block(pos)
    if name != "classes" or len(rest) != 1:
        raise MalformedRecord(pos + 1, "expected [classes] <n>")
    n_classes = int(rest[0])
    classes = lines[pos + 1: pos + 1 + n_classes]
    pos += 1 + n_classes
    blocks = {}
    while pos < len(lines):
        name, rest = expect_block(pos)
        if len(rest) != 2:
            raise MalformedRecord(pos + 1, "expected [name] <dtype> <shape>")
        dtype = np.int64 if rest[0] == "int" else np.float64
        shape = tuple(int(d) for d in rest[1].split(",") if d != "")
        size = int(np.prod(shape)) if shape else 1
        n_rows = 0 if size == 0 else (size // shape[-1] if len(shape) >= 2 else 1)
        values = []
        for line in lines[pos + 1: pos + 1 + n_rows]:
            values.extend(line.split())
        if len(values) != size:
            raise MalformedRecord(pos + 1, f"block {name!r} expects {size} values, got {len(values)}")
        blocks[name] = np.array([dtype(v) if dtype is np.int64 else float(v) for v in values],
                                dtype=dtype).reshape(shape)
        pos += 1 + n_rows
    return kind, hyper, classes, blocks


def save_model(model, path):
    atomic_write(path, model.dumps())


def load_model(path):
    """Load any model file, dispatching on its ``kind``."""
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


def loads_model(text):
    from . import forest, naive_bayes, recurrent, svm

    kind = loads(text)[0]
    cls = {
        "nb": naive_bayes.NBModel,
        "svm": svm.LinearSvmModel,
        "forest": forest.ForestModel,
        "rnn": recurrent.RecurrentModel,
        "lstm": recurrent.RecurrentModel,
    }.get(kind)
    if cls is None:
        raise MalformedRecord(1, f"unknown model kind {kind!r}")
    return cls.loads(text)
