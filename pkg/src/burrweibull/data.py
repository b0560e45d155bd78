"""Datasets, the embedded Kevlar 49/epoxy failure times, and CSV curve tables."""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
from scipy import integrate

from . import distribution as dist
from .distribution import BwParams
from .errors import BwError, DomainError, ParseError

__all__ = [
    "Dataset",
    "CurveTable",
    "KEVLAR_VALUES",
    "CURVE_FUNCTIONS",
    "kevlar_dataset",
    "load_dataset",
    "emit_curves",
    "format_number",
]

# Failure times (hours) of 101 Kevlar 49/epoxy strands held at 90% stress.
KEVLAR_VALUES = (
    0.01, 0.01, 0.02, 0.02, 0.02, 0.03, 0.03, 0.04, 0.05, 0.06,
    0.07, 0.07, 0.08, 0.09, 0.09, 0.10, 0.10, 0.11, 0.11, 0.12,
    0.13, 0.18, 0.19, 0.20, 0.23, 0.24, 0.24, 0.29, 0.34, 0.35,
    0.36, 0.38, 0.40, 0.42, 0.43, 0.52, 0.54, 0.56, 0.60, 0.60,
    0.63, 0.65, 0.67, 0.68, 0.72, 0.72, 0.72, 0.73, 0.79, 0.79,
    0.80, 0.80, 0.83, 0.85, 0.90, 0.92, 0.95, 0.99, 1.00, 1.01,
    1.02, 1.03, 1.05, 1.10, 1.10, 1.11, 1.15, 1.18, 1.20, 1.29,
    1.31, 1.33, 1.34, 1.40, 1.43, 1.45, 1.50, 1.51, 1.52, 1.53,
    1.54, 1.54, 1.55, 1.58, 1.60, 1.63, 1.64, 1.80, 1.80, 1.81,
    2.02, 2.05, 2.14, 2.17, 2.33, 3.03, 3.03, 3.34, 4.20, 4.69,
    7.89,
)


def format_number(value, full_precision: bool = False) -> str:
    """6 significant digits for humans, 17 for lossless round trips."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}" if full_precision else f"{float(value):.6g}"


@dataclass(frozen=True)
class Dataset:
    """Strictly positive failure times with a provenance label."""

    values: tuple
    label: str = ""
    source: str = "file"

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("dataset is empty")
        for i, v in enumerate(vals):
            if not math.isfinite(v) or v <= 0:
                raise DomainError(f"value #{i + 1} ({v!r}) is not a positive finite number")
        if self.source not in ("embedded", "file"):
            raise DomainError(f"unknown dataset source {self.source!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def kevlar_dataset() -> Dataset:
    return Dataset(KEVLAR_VALUES, label="Kevlar 49/epoxy strand failure times", source="embedded")


_SPLITTERS = {"csv": re.compile(r"\s*,\s*"), "whitespace": re.compile(r"\s+")}


def load_dataset(path: Union[str, Path], format: str = "csv", label: str = "") -> Dataset:
    """Read positive reals from a text file.

    ``csv`` splits each line on commas, ``whitespace`` on runs of blanks.
    Blank lines and ``#`` comments are skipped; a non-numeric first line in
    a CSV file is treated as a header.
    """
    if format not in _SPLITTERS:
        raise DomainError(f"unknown format {format!r}; use 'csv' or 'whitespace'")
    split = _SPLITTERS[format]
    text = Path(path).read_text()
    values = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        tokens = [t for t in split.split(stripped) if t != ""] if format == "csv" else stripped.split()
        parsed = []
        for tok in tokens:
            try:
                parsed.append(float(tok))
            except ValueError:
                parsed = None
                bad = tok
                break
        if parsed is None:
            if format == "csv" and not values and lineno == _first_content_line(text):
                continue  # header
            raise ParseError(f"malformed number {bad!r}", line=lineno, column=raw.find(bad) + 1)
        for tok, v in zip(tokens, parsed):
            if not math.isfinite(v) or v <= 0:
                raise DomainError(
                    f"line {lineno}, column {raw.find(tok) + 1}: value {tok} is not a positive finite number"
                )
        values.extend(parsed)
    if not values:
        raise DomainError(f"{path}: no data values found")
    return Dataset(tuple(values), label=label or Path(path).name, source="file")


def _first_content_line(text: str) -> int:
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.split("#", 1)[0].strip():
            return lineno
    return 0


# --------------------------------------------------------------------------
# curve tables
# --------------------------------------------------------------------------


@dataclass
class CurveTable:
    """A header plus rectangular rows, serialisable as comma-separated text."""

    columns: list
    rows: list = field(default_factory=list)

    def __post_init__(self):
        self.columns = list(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise DomainError(f"row {i} has {len(row)} cells, header has {len(self.columns)}")

    def append(self, row: Sequence) -> None:
        if len(row) != len(self.columns):
            raise DomainError(f"row has {len(row)} cells, header has {len(self.columns)}")
        self.rows.append(list(row))

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def to_csv(self, full_precision: bool = True) -> str:
        out = io.StringIO()
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(format_number(v, full_precision) for v in row) + "\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CurveTable":
        lines = text.splitlines()
        if not lines:
            raise ParseError("empty table", line=1)
        table = cls(lines[0].split(","))
        for lineno, line in enumerate(lines[1:], 2):
            if not line:
                continue
            cells = []
            for tok in line.split(","):
                try:
                    cells.append(float(tok))
                except ValueError:
                    cells.append(tok)
            if len(cells) != len(table.columns):
                raise ParseError(f"expected {len(table.columns)} cells, got {len(cells)}", line=lineno)
            table.rows.append(cells)
        return table

    def format(self, full_precision: bool = False) -> str:
        """Aligned plain-text rendering for terminals."""
        cells = [self.columns] + [[format_number(v, full_precision) for v in r] for r in self.rows]
        widths = [max(len(str(r[j])) for r in cells) for j in range(len(self.columns))]
        return "\n".join(
            "  ".join(str(c).rjust(w) for c, w in zip(r, widths)) for r in cells
        ) + "\n"


CURVE_FUNCTIONS = ("pdf", "cdf", "survival", "hazard", "lorenz", "bonferroni")


def _pointwise(fn, p, xs):
    """Evaluate fn on xs; on failure re-raise naming the first bad grid index."""
    try:
        return np.asarray(fn(p, xs), dtype=float)
    except BwError:
        for i, x in enumerate(xs):
            try:
                fn(p, float(x))
            except BwError as exc:
                raise type(exc)(f"grid index {i} (x={x:.6g}): {exc}") from exc
        raise


def _lorenz_columns(p: BwParams, xs: np.ndarray):
    """Lorenz and Bonferroni values at prob = F(x) along an increasing x grid."""
    from .measures import raw_moment

    mu = raw_moment(p, 1)
    lf = lambda x: x * math.exp(float(dist._log_pdf(p, np.asarray(x)))) if x > 0 else 0.0
    partial = np.zeros(xs.size)
    acc, prev = 0.0, 0.0
    for i, x in enumerate(xs):
        if x > prev:
            acc += integrate.quad(lf, prev, x, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
            prev = x
        partial[i] = acc
    probs = dist.cdf(p, xs)
    return np.minimum(partial / mu, 1.0), probs


def emit_curves(p: BwParams, which: Iterable[str], grid: tuple) -> CurveTable:
    """Tabulate the requested functions on a uniform grid over [lo, hi].

    ``lorenz`` and ``bonferroni`` are reported at prob = F(x), so every
    column shares the abscissa x.
    """
    lo, hi, n_points = grid
    n_points = int(n_points)
    if not (0 <= lo < hi) or not math.isfinite(hi) or n_points < 2:
        raise DomainError("grid needs 0 <= lo < hi and at least 2 points")
    which = list(dict.fromkeys(which))
    unknown = [w for w in which if w not in CURVE_FUNCTIONS]
    if unknown:
        raise DomainError(f"unknown curve(s) {unknown}; choose from {CURVE_FUNCTIONS}")
    xs = np.linspace(lo, hi, n_points)
    cols = {"x": xs}
    direct = {
        "pdf": dist.pdf,
        "cdf": dist.cdf,
        "survival": dist.survival,
        "hazard": dist.hazard,
    }
    for name in which:
        if name in direct:
            cols[name] = _pointwise(direct[name], p, xs)
    if "lorenz" in which or "bonferroni" in which:
        L, probs = _lorenz_columns(p, xs)
        if "lorenz" in which:
            cols["lorenz"] = L
        if "bonferroni" in which:
            bad = np.flatnonzero(probs <= 0)
            if bad.size:
                i = int(bad[0])
                raise DomainError(f"grid index {i} (x={xs[i]:.6g}): Bonferroni curve needs F(x) > 0")
            cols["bonferroni"] = L / probs
    names = ["x"] + which
    rows = [[float(cols[name][i]) for name in names] for i in range(n_points)]
    return CurveTable(names, rows)
