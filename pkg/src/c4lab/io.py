"""Edge-list text format.

::

    # optional comment lines
    n m
    u v        (m lines, 0 <= u < v < n)

Serialisation writes edges in lexicographic order, LF-terminated.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, TextIO

from .errors import GraphFormatError
from .graph import Graph


def _data_lines(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def _ints(line: str, lineno: int, what: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(f"expected two integers for {what}, got {line!r}", lineno)
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"non-integer token in {what}: {line!r}", lineno) from None
    return a, b


def parse_graph(text: str | TextIO) -> Graph:
    """Parse the edge-list format; errors carry the offending line number."""
    if not isinstance(text, str):
        text = text.read()
    lines = _data_lines(text.split("\n"))
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError("missing 'n m' header") from None
    n, m = _ints(header, lineno, "header")
    if n < 0 or m < 0:
        raise GraphFormatError("header values must be nonnegative", lineno)
    if m > n * (n - 1) // 2:
        raise GraphFormatError(f"{m} edges cannot fit on {n} vertices", lineno)
    seen: set[tuple[int, int]] = set()
    for lineno, line in lines:
        u, v = _ints(line, lineno, "edge")
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex index out of range in ({u}, {v})", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}", lineno)
        seen.add(key)
        if len(seen) > m:
            raise GraphFormatError(f"more than the declared {m} edges", lineno)
    if len(seen) != m:
        raise GraphFormatError(f"declared {m} edges, found {len(seen)}")
    return Graph.from_edges(n, seen)


def format_graph(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"{g.n} {g.m}")
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def read_graph(path: str | os.PathLike) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh)


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_graph(path: str | os.PathLike, g: Graph, comment: str | None = None) -> None:
    write_text_atomic(path, format_graph(g, comment))
