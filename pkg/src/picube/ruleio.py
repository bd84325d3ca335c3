"""Plain-text rule files with a small header and one node per line.

Values are written with ``repr``, i.e. the shortest decimal string that
round-trips to the same IEEE double, so read(write(rule)) is bit-exact.
"""

from __future__ import annotations

import os

import numpy as np

from .domains import parse_domain
from .rules import CubatureRule

__all__ = ["FORMAT_VERSION", "RuleFileError", "read_rule", "write_rule"]

FORMAT_VERSION = 1
_MAGIC = "picube-rule"


class RuleFileError(Exception):
    """The file is not a well-formed rule file."""


def write_rule(rule: CubatureRule, path: str | os.PathLike, warning: str | None = None) -> None:
    lines = [
        f"{_MAGIC} {FORMAT_VERSION}",
        f"domain {rule.domain.label}",
        f"dim {rule.domain.dim}",
        f"degree {rule.degree}",
        f"n {rule.n}",
    ]
    if warning:
        lines.append(f"warning {warning}")
    for x, w in zip(rule.nodes, rule.weights):
        lines.append(" ".join(repr(float(v)) for v in x) + " " + repr(float(w)))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _header_value(line: str, key: str) -> str:
    parts = line.split(maxsplit=1)
    if len(parts) != 2 or parts[0] != key:
        raise RuleFileError(f"expected header line '{key} ...', got {line!r}")
    return parts[1]


def read_rule(path: str | os.PathLike):
    """Read a rule file; returns ``(rule, warning_or_None)``."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise RuleFileError(str(exc)) from exc
    lines = [ln for ln in lines if ln.strip()]
    if len(lines) < 5:
        raise RuleFileError("file too short for a rule header")
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] != _MAGIC:
        raise RuleFileError(f"bad magic line {lines[0]!r}")
    try:
        version = int(magic[1])
    except ValueError as exc:
        raise RuleFileError(f"bad format version in {lines[0]!r}") from exc
    if version != FORMAT_VERSION:
        raise RuleFileError(f"unsupported format version {version}")
    try:
        domain = parse_domain(_header_value(lines[1], "domain"))
        dim = int(_header_value(lines[2], "dim"))
        degree = int(_header_value(lines[3], "degree"))
        n = int(_header_value(lines[4], "n"))
    except ValueError as exc:
        raise RuleFileError(str(exc)) from exc
    if dim != domain.dim:
        raise RuleFileError(f"dim {dim} does not match domain {domain.label}")
    body_start = 5
    warning = None
    if len(lines) > 5 and lines[5].startswith("warning"):
        warning = _header_value(lines[5], "warning")
        body_start = 6
    body = lines[body_start:]
    if len(body) != n:
        raise RuleFileError(f"expected {n} node lines, found {len(body)}")
    nodes = np.empty((n, dim))
    weights = np.empty(n)
    for i, ln in enumerate(body):
        fields = ln.split()
        if len(fields) != dim + 1:
            raise RuleFileError(f"node line {i + 1} has {len(fields)} fields, expected {dim + 1}")
        try:
            values = [float(v) for v in fields]
        except ValueError as exc:
            raise RuleFileError(f"bad number on node line {i + 1}") from exc
        nodes[i] = values[:dim]
        weights[i] = values[dim]
    return CubatureRule(domain, degree, nodes, weights), warning
