"""Generators for the standard example complexes.

Everything here emits a plain SpanComplex; none of it knows about
polynomials or Newton polytopes.  The hyperplane family models the
generic situation where the complex is the full codimension-one
skeleton, so no coefficient data is taken or checked.
"""

from dataclasses import dataclass, field
from itertools import combinations

from .polyhedral import SpanComplex, minkowski_with_subspace
from .rational_linalg import Subspace, canonicalize

FAMILY_NAMES = ("hyperplane", "orbit", "curve")


@dataclass(frozen=True)
class FamilySpec:
    """A named family plus the integer data needed to build it.

    `vectors` carries the basis vectors for an orbit or the rays of a
    curve fan; the hyperplane family ignores it.
    """

    name: str
    ambient_dim: int
    vectors: tuple = field(default=())

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise ValueError(
                f"unknown family {self.name!r}; expected one of "
                + ", ".join(FAMILY_NAMES)
            )
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        object.__setattr__(
            self, "vectors", tuple(tuple(v) for v in self.vectors)
        )

    def build(self) -> SpanComplex:
        if self.name == "hyperplane":
            return tropical_hyperplane(self.ambient_dim)
        if self.name == "orbit":
            return orbit_subspace(self.ambient_dim, self.vectors)
        return curve_fan(self.ambient_dim, self.vectors)


def tropical_hyperplane(n: int) -> SpanComplex:
    """The fan of a tropical hyperplane in R^n.

    Cells are the spans of all (n-1)-element subsets of the n+1
    generators e_1, ..., e_n, e_0 = -(e_1 + ... + e_n).  That is the
    codimension-one skeleton of the fan over the boundary of a simplex,
    which is what a polynomial with full simplex support and generic
    coefficients tropicalizes to.
    """
    if n < 2:
        raise ValueError("tropical hyperplane needs ambient dimension >= 2")
    gens = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    gens.append((-1,) * n)
    return SpanComplex.from_cells(
        n, [canonicalize(n, list(p)) for p in combinations(gens, n - 1)]
    )


def orbit_subspace(n: int, vectors) -> SpanComplex:
    """Single-cell complex spanned by the given independent vectors."""
    vectors = [tuple(v) for v in vectors]
    cell = canonicalize(n, vectors)
    if cell.dim != len(vectors):
        raise ValueError("orbit generators must be linearly independent")
    return SpanComplex.from_cells(n, [cell])


def curve_fan(n: int, rays) -> SpanComplex:
    """One-dimensional fan with the given rays, deduplicated.

    Two rays spanning the same line collapse to one cell.
    """
    rays = [tuple(r) for r in rays]
    if not rays:
        raise ValueError("a curve fan needs at least one ray")
    cells = []
    for i, ray in enumerate(rays):
        if not any(ray):
            raise ValueError(f"ray {i} is zero")
        cells.append(canonicalize(n, [ray]))
    return SpanComplex.from_cells(n, cells)


def torus_invariant(sigma0: SpanComplex, sub: Subspace) -> SpanComplex:
    """Complex stable under translation by `sub`: Minkowski-sum every cell.

    Raises the usual purity error when the summed cells land in mixed
    dimensions, same as minkowski_with_subspace.
    """
    return minkowski_with_subspace(sigma0, sub)
