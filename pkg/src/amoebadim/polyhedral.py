"""Pure polyhedral complexes in the span model.

A complex is stored as the set of direction spans of its maximal cells,
nothing else: the dimension formulas downstream depend on the cells only
through those spans.  All cells must share one dimension (purity); input
that violates this is rejected, not repaired.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .rational_linalg import Subspace, canonicalize, direct_sum, format_rational


class ComplexFormatError(ValueError):
    """Malformed fan file."""


class PurityError(ValueError):
    """Cells of unequal dimension, either in input or after a Minkowski sum."""

    def __init__(self, message: str, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


@dataclass(frozen=True)
class SpanComplex:
    """Pure complex given by deduplicated, canonically ordered cell spans."""

    ambient_dim: int
    dim: int
    cells: tuple
    labels: tuple = field(default=(), compare=False)

    @classmethod
    def from_cells(cls, ambient_dim: int, cells, labels=None) -> "SpanComplex":
        cells = list(cells)
        if not cells:
            raise ComplexFormatError("a complex needs at least one cell")
        if labels is None:
            labels = [None] * len(cells)
        elif len(labels) != len(cells):
            raise ComplexFormatError("one label per cell, or none at all")
        for cell in cells:
            if cell.ambient_dim != ambient_dim:
                raise ComplexFormatError(
                    f"cell ambient {cell.ambient_dim} != {ambient_dim}"
                )
        d = cells[0].dim
        bad = [i for i, c in enumerate(cells) if c.dim != d]
        if bad:
            dims = sorted({c.dim for c in cells})
            raise PurityError(
                f"impure complex: cell dimensions {dims} "
                f"(cells {bad} disagree with cell 0)",
                offending=bad,
            )
        merged: dict = {}
        for cell, label in zip(cells, labels):
            if cell not in merged or (merged[cell] is None and label is not None):
                merged[cell] = label
        ordered = sorted(merged, key=Subspace.sort_key)
        return cls(ambient_dim, d, tuple(ordered),
                   tuple(merged[c] for c in ordered))

    def __iter__(self):
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)


def parse_complex(text: str) -> SpanComplex:
    """Parse the fan file format.

    ``{"ambient_dim": n, "cells": [{"span": [[rationals...], ...],
    "label": optional}, ...]}`` with rationals as "p" or "p/q" strings.
    The complex dimension is inferred from the spans and checked for
    purity, never declared.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ComplexFormatError("top level must be an object")
    n = doc.get("ambient_dim")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ComplexFormatError('"ambient_dim" must be an integer')
    if n < 0:
        raise ComplexFormatError("ambient_dim < 0")
    raw_cells = doc.get("cells")
    if not isinstance(raw_cells, list) or not raw_cells:
        raise ComplexFormatError('"cells" must be a nonempty list')
    cells = []
    labels = []
    for i, raw in enumerate(raw_cells):
        if not isinstance(raw, dict) or "span" not in raw:
            raise ComplexFormatError(f'cell {i} needs a "span" key')
        rows = raw["span"]
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise ComplexFormatError(f'cell {i}: "span" must be a list of rows')
        try:
            cells.append(canonicalize(n, rows))
        except ValueError as exc:
            raise ComplexFormatError(f"cell {i}: {exc}") from exc
        label = raw.get("label")
        if label is not None and not isinstance(label, str):
            raise ComplexFormatError(f"cell {i}: label must be a string")
        labels.append(label)
    return SpanComplex.from_cells(n, cells, labels)


def format_complex(sigma: SpanComplex) -> str:
    """Serialize back to the fan file format (deterministic)."""
    cells = []
    for cell, label in zip(sigma.cells, sigma.labels):
        entry: dict = {
            "span": [[format_rational(x) for x in row] for row in cell.rows]
        }
        if label is not None:
            entry["label"] = label
        cells.append(entry)
    return json.dumps({"ambient_dim": sigma.ambient_dim, "cells": cells},
                      indent=2)


def _check_ambient(sigma: SpanComplex, sub: Subspace) -> None:
    if sigma.ambient_dim != sub.ambient_dim:
        raise ValueError(
            f"ambient mismatch: complex in R^{sigma.ambient_dim}, "
            f"subspace in R^{sub.ambient_dim}"
        )


def dim_sum_with_subspace(sigma: SpanComplex, sub: Subspace) -> int:
    """dim(S + Sigma) = max over cells C of dim(<C> + S).

    The Minkowski sum of a subspace with a pure complex is again a pure
    complex whose cells are the summed spans, so its dimension is the
    largest summed-span dimension.
    """
    _check_ambient(sigma, sub)
    best = 0
    n = sigma.ambient_dim
    for cell in sigma.cells:
        if cell.dim >= sub.dim:
            got = cell.sum_dim(sub.rows)
        else:
            got = sub.sum_dim(cell.rows)
        if got > best:
            best = got
            if best == n:
                break
    return best


def minkowski_with_subspace(sigma: SpanComplex, sub: Subspace) -> SpanComplex:
    """Cell-wise sum with a subspace; the result must again be pure.

    Raises PurityError naming the offending cells when the summed spans do
    not all have the same dimension (this genuinely happens: a subspace can
    lie inside some cells and not others).
    """
    _check_ambient(sigma, sub)
    summed = [cell.sum(sub) for cell in sigma.cells]
    dims = {c.dim for c in summed}
    if len(dims) > 1:
        top = max(dims)
        bad = [i for i, c in enumerate(summed) if c.dim != top]
        detail = ", ".join(
            f"cell {i} (dim {summed[i].dim})" for i in bad
        )
        raise PurityError(
            f"Minkowski sum is impure: result dimensions {sorted(dims)}; "
            f"below the top dimension: {detail}",
            offending=bad,
        )
    return SpanComplex.from_cells(sigma.ambient_dim, summed, list(sigma.labels))


def cellwise_invariant(sigma: SpanComplex, sub: Subspace) -> bool:
    """True iff S sits inside every cell span.

    This is a sufficient condition for the set-level invariance
    S + |Sigma| = |Sigma|, not an equivalent one: the span model carries no
    cell geometry, so the converse direction cannot be checked here.
    """
    _check_ambient(sigma, sub)
    return all(cell.contains_subspace(sub) for cell in sigma.cells)


def product(sigma1: SpanComplex, sigma2: SpanComplex) -> SpanComplex:
    """Block-embedded product: cells are all direct sums <C1> (+) <C2>."""
    cells = [direct_sum(c1, c2) for c1 in sigma1.cells for c2 in sigma2.cells]
    return SpanComplex.from_cells(sigma1.ambient_dim + sigma2.ambient_dim,
                                  cells)
