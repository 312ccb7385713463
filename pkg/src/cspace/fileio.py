"""Reading and writing colored spaces.

Text format (".cspace"):
    line 1:  `n c`
    then one line per i = 0..n-2 holding the colors of pairs (i, j) for
    j = i+1..n-1, space-separated decimal. `#` begins a comment.

JSON format:
    {"n": ..., "colors": ..., "pairs": [[i, j, color], ...]}

Both serializers are deterministic and round-trip bit-exactly through
parse -> serialize.
"""

from __future__ import annotations

import json

from .core import ColoredSpace, new_space, pair_list
from .errors import SpaceSyntaxError

FORMATS = ("text", "json")


def serialize_space(space: ColoredSpace, fmt: str = "text") -> bytes:
    if fmt == "text":
        lines = [f"{space.n} {space.color_count}"]
        for i in range(space.n - 1):
            row = [str(space.color_of(i, j)) for j in range(i + 1, space.n)]
            lines.append(" ".join(row))
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        obj = {
            "n": space.n,
            "colors": space.color_count,
            "pairs": [[i, j, col] for (i, j), col in space.pairs()],
        }
        return (json.dumps(obj, separators=(",", ":")) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def parse_space(data: bytes | str, fmt: str = "text") -> ColoredSpace:
    if isinstance(data, bytes):
        data = data.decode()
    if fmt == "text":
        return _parse_text(data)
    if fmt == "json":
        return _parse_json(data)
    raise ValueError(f"unknown format {fmt!r}")


def sniff_format(data: bytes | str) -> str:
    """Guess the format from the first non-blank character."""
    if isinstance(data, bytes):
        data = data.decode(errors="replace")
    stripped = data.lstrip()
    return "json" if stripped.startswith("{") else "text"


def _parse_text(text: str) -> ColoredSpace:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if not rows:
        raise SpaceSyntaxError("empty input", line=1)
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise SpaceSyntaxError(f"header must be 'n c', got {header!r}", line=lineno)
    try:
        n, c = int(parts[0]), int(parts[1])
    except ValueError:
        raise SpaceSyntaxError(f"header must be two integers, got {header!r}", line=lineno)
    body = rows[1:]
    expected = max(n - 1, 0)
    if len(body) < expected:
        raise SpaceSyntaxError(
            f"expected {expected} color rows, found {len(body)}",
            line=body[-1][0] if body else lineno,
        )
    if len(body) > expected:
        raise SpaceSyntaxError("unexpected extra row", line=body[expected][0])
    assignments = []
    for i, (rowno, line) in enumerate(body):
        fields = line.split()
        if len(fields) != n - 1 - i:
            raise SpaceSyntaxError(
                f"row for point {i} must hold {n - 1 - i} colors, got {len(fields)}",
                line=rowno,
            )
        for off, field in enumerate(fields):
            try:
                col = int(field)
            except ValueError:
                raise SpaceSyntaxError(f"bad color {field!r}", line=rowno)
            assignments.append(((i, i + 1 + off), col))
    return new_space(n, c, assignments)


def _parse_json(text: str) -> ColoredSpace:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpaceSyntaxError(f"invalid JSON: {exc.msg}", line=exc.lineno)
    if not isinstance(obj, dict):
        raise SpaceSyntaxError("top-level JSON value must be an object", line=1)
    for key in ("n", "colors", "pairs"):
        if key not in obj:
            raise SpaceSyntaxError(f"missing key {key!r}", line=1)
    n, c, pairs = obj["n"], obj["colors"], obj["pairs"]
    if not isinstance(n, int) or not isinstance(c, int) or not isinstance(pairs, list):
        raise SpaceSyntaxError("n and colors must be integers, pairs a list", line=1)
    assignments = []
    for entry in pairs:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise SpaceSyntaxError(f"pair entry must be [i, j, color], got {entry!r}", line=1)
        i, j, col = entry
        assignments.append(((i, j), col))
    return new_space(n, c, assignments)


def load_space(path: str, fmt: str | None = None) -> ColoredSpace:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_space(data, fmt or sniff_format(data))
