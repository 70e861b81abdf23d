"""Small text-serialization helpers shared by the model and report writers."""

import hashlib
import os
import tempfile

from .errors import MalformedRecord, SchemaVersionError


def fmt_float(x):
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


def fmt_floats(values):
    return " ".join(repr(float(v)) for v in values)


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a temp file in the same directory + rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def lines_of(text):
    """Lines split on "\n" only (``str.splitlines`` also splits on U+0085,
    U+2028 and friends, which may legitimately occur inside labels)."""
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in text.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def header_line(fmt, schema_version, **fields):
    """``fmt schema_version=N key=value ...`` with keys in the given order."""
    parts = [fmt, f"schema_version={schema_version}"]
    parts += [f"{k}={v}" for k, v in fields.items()]
    return " ".join(parts)


def parse_header(line, fmt, schema_version):
    parts = line.split()
    if not parts or parts[0] != fmt:
        raise MalformedRecord(1, f"expected {fmt!r} header")
    fields = {}
    for p in parts[1:]:
        if "=" not in p:
            raise MalformedRecord(1, f"bad header field {p!r}")
        k, v = p.split("=", 1)
        fields[k] = v
    found = fields.pop("schema_version", None)
    if found != str(schema_version):
        raise SchemaVersionError(
            f"{fmt}: schema_version {found} not supported (expected {schema_version})")
    return fields
