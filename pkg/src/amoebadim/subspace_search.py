"""Search for the subspace minimizing 2·dim(S+Σ) − dim S.

The minimum of this objective over all rational subspaces S is the real
dimension of the amoeba attached to the complex Σ.  No finite candidate
family is known to be sufficient in general, so results carry an honesty
contract: the reported value is the best objective found (an upper bound),
dim Σ is a proven lower bound, and `certified` is set exactly when the two
meet.

Candidates come from the lattice generated by the cell spans under
pairwise sum and intersection.  A minimizer has to trade its own dimension
against how much every cell forces the sum to grow, and the lattice
elements are the natural rational subspaces realizing those trade-offs.
The closure frequently does not terminate (already four generic planes in
R^3 breed new lines and planes forever), which is why `candidate_lattice`
takes a hard cap and reports in-band whether it reached a fixpoint.  A
capped candidate set still yields correct upper bounds; it only weakens
the search.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .polyhedral import SpanComplex, dim_sum_with_subspace
from .rational_linalg import Subspace, direct_sum, intersect_rows, sum_rows

DEFAULT_CAP = 10000
DEFAULT_HEIGHT = 1

_EXHAUSTIVE_MAX_AMBIENT = 6
_EXHAUSTIVE_MAX_HEIGHT = 3
_EXHAUSTIVE_BUDGET = 200000


class ResourceLimitError(RuntimeError):
    """Raised instead of silently truncating an exhaustive enumeration."""


@dataclass(frozen=True)
class CandidateSet:
    """Deduplicated candidate subspaces plus a completeness flag.

    `complete` means the generating process provably finished: a closure
    fixpoint, or a full exhaustive enumeration.  A capped closure that was
    cut off reports False.
    """

    subspaces: tuple
    complete: bool

    def __iter__(self):
        return iter(self.subspaces)

    def __len__(self) -> int:
        return len(self.subspaces)

    def __contains__(self, sub) -> bool:
        return sub in self.subspaces


@dataclass(frozen=True)
class SearchResult:
    value: int
    lower_bound: int
    upper_bound: int
    certified: bool
    witness_S: Subspace
    witness_T: Subspace
    strategy: str
    candidates_evaluated: int

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "certified": self.certified,
            "witness_S": [list(r) for r in self.witness_S.rows],
            "witness_T": [list(r) for r in self.witness_T.rows],
            "strategy": self.strategy,
            "candidates_evaluated": self.candidates_evaluated,
        }


@dataclass(frozen=True)
class NearActionReport:
    """Outcome of the dimension-drop test value < min(n, 2d)."""

    drop: bool
    value: int
    threshold: int
    witness: Subspace | None


def objective(sigma: SpanComplex, sub: Subspace) -> int:
    """2·dim(S+Σ) − dim S; never below dim Σ."""
    return 2 * dim_sum_with_subspace(sigma, sub) - sub.dim


def candidate_lattice(sigma: SpanComplex, cap: int = DEFAULT_CAP) -> CandidateSet:
    """Closure of the cell spans ∪ {0, R^n} under pairwise sum/intersection.

    Pairs are processed in generation order (all pairs among earlier
    elements before pairs involving later ones); that order keeps the
    integer entries of intermediate bases small, where a depth-first order
    lets them explode.  Stops at a fixpoint or after `cap` distinct
    subspaces, whichever comes first, and says which one happened.
    """
    n = sigma.ambient_dim
    if cap < len(sigma.cells) + 2:
        raise ValueError(
            f"cap {cap} below number of cells + 2 = {len(sigma.cells) + 2}"
        )
    full = Subspace.full(n)
    seed = {Subspace.zero(n), full}
    seed.update(sigma.cells)
    found = sorted(seed, key=Subspace.sort_key)
    seen = {s.rows for s in found}
    seen_dual = {s.orth.rows for s in found}
    full_rows = full.rows
    complete = True
    i = 1
    while complete and i < len(found):
        a = found[i]
        a_dim = len(a.rows)
        if a_dim == n:
            i += 1
            continue
        a_rows = a.rows
        for j in range(i):
            b = found[j]
            b_dim = len(b.rows)
            if not b_dim or b_dim == n:
                continue
            if a_dim == n - 1 and b_dim == n - 1:
                # distinct hyperplanes: the sum can only be everything
                trows = full_rows
            elif a_dim >= b_dim:
                trows = sum_rows(a.ech_pairs, b.rows, n)
                if trows is None:
                    continue
            else:
                trows = sum_rows(b.ech_pairs, a_rows, n)
                if trows is None:
                    continue
            fresh = []
            if trows not in seen:
                fresh.append(Subspace(n, trows))
            di = a_dim + b_dim - len(trows)
            if di > 0:
                # meet in whichever representation is leaner: summing the
                # orthogonal complements computes the same subspace as the
                # double-width Zassenhaus pass, and wins whenever the
                # codimensions are the smaller side
                if (n - a_dim) * (n - b_dim) <= a_dim * b_dim:
                    drows = sum_rows(a.orth.ech_pairs, b.orth.rows, n)
                    if drows not in seen_dual:
                        fresh.append(Subspace(n, drows).orth)
                else:
                    inter_rows = intersect_rows(a_rows, b.rows, n, di,
                                                a.pivots)
                    if inter_rows not in seen:
                        fresh.append(Subspace(n, inter_rows))
            for c in fresh:
                if len(found) >= cap:
                    complete = False
                    break
                seen.add(c.rows)
                seen_dual.add(c.orth.rows)
                found.append(c)
            if not complete:
                break
        i += 1
    found.sort(key=Subspace.sort_key)
    return CandidateSet(tuple(found), complete)


def exhaustive_candidates(n: int, height_bound: int,
                          budget: int = _EXHAUSTIVE_BUDGET) -> CandidateSet:
    """Every subspace spanned by integer vectors with entries in
    [−height_bound, height_bound].

    Grown breadth-first one primitive generator at a time; refuses large
    requests outright rather than silently truncating.
    """
    if n < 0:
        raise ValueError("ambient dimension < 0")
    if height_bound < 0:
        raise ValueError("height bound < 0")
    if n > _EXHAUSTIVE_MAX_AMBIENT or height_bound > _EXHAUSTIVE_MAX_HEIGHT:
        raise ResourceLimitError(
            f"exhaustive enumeration refused for n={n}, "
            f"height={height_bound} (supported: n ≤ {_EXHAUSTIVE_MAX_AMBIENT}, "
            f"height ≤ {_EXHAUSTIVE_MAX_HEIGHT})"
        )
    vectors = _primitive_vectors(n, height_bound)
    zero = Subspace.zero(n)
    seen = {zero}
    frontier = [zero]
    while frontier:
        grown = []
        for sub in frontier:
            if len(sub.rows) == n:
                continue
            for v in vectors:
                bigger = sub.sum_with_rows((v,))
                if bigger is sub or bigger in seen:
                    continue
                if len(seen) >= budget:
                    raise ResourceLimitError(
                        f"exhaustive enumeration exceeded {budget} subspaces"
                    )
                seen.add(bigger)
                grown.append(bigger)
        frontier = grown
    return CandidateSet(tuple(sorted(seen, key=Subspace.sort_key)), True)


def _primitive_vectors(n: int, height: int) -> list:
    """Primitive integer vectors with entries in [−height, height], first
    nonzero entry positive (one representative per line), sorted."""
    from math import gcd

    out = []
    stack = [()]
    for _ in range(n):
        stack = [v + (x,) for v in stack for x in range(-height, height + 1)]
    for v in stack:
        lead = next((x for x in v if x), 0)
        if lead <= 0:
            continue
        g = 0
        for x in v:
            g = gcd(g, x)
            if g == 1:
                break
        if g == 1:
            out.append(v)
    out.sort()
    return out


_STRATEGY_RE = re.compile(
    r"\s*(lattice|exhaustive|combined)\s*(?:\(\s*([^()]*)\s*\))?\s*\Z"
)


def _parse_strategy(text: str) -> tuple:
    """Normalize a strategy descriptor.

    Accepts e.g. "lattice", "lattice(cap=500)", "exhaustive(height=2)",
    "combined(cap=2000,height=1)".  Returns (kind, cap, height, canonical
    descriptor string).
    """
    m = _STRATEGY_RE.match(text)
    if not m:
        raise ValueError(f"invalid strategy {text!r}")
    kind, argtext = m.group(1), m.group(2)
    allowed = {"lattice": ("cap",), "exhaustive": ("height",),
               "combined": ("cap", "height")}[kind]
    params = {}
    if argtext:
        for piece in argtext.split(","):
            piece = piece.strip()
            if not piece:
                continue
            key, eq, raw = piece.partition("=")
            key = key.strip()
            if not eq or key not in allowed:
                raise ValueError(f"invalid strategy parameter {piece!r}")
            try:
                params[key] = int(raw.strip())
            except ValueError:
                raise ValueError(
                    f"strategy parameter {key} must be an integer"
                ) from None
    cap = params.get("cap", DEFAULT_CAP)
    height = params.get("height", DEFAULT_HEIGHT)
    if cap < 1:
        raise ValueError("cap must be positive")
    if height < 0:
        raise ValueError("height must be nonnegative")
    if kind == "lattice":
        descriptor = f"lattice(cap={cap})"
    elif kind == "exhaustive":
        descriptor = f"exhaustive(height={height})"
    else:
        descriptor = f"combined(cap={cap},height={height})"
    return kind, cap, height, descriptor


def default_strategy(ambient_dim: int) -> str:
    """Lattice search, augmented by height-1 exhaustive candidates while the
    ambient dimension keeps that family small."""
    if ambient_dim <= 4:
        return f"combined(cap={DEFAULT_CAP},height={DEFAULT_HEIGHT})"
    return f"lattice(cap={DEFAULT_CAP})"


def amoeba_dim(sigma: SpanComplex, strategy: str | None = None,
               extra_candidates=()) -> SearchResult:
    """Minimize the objective over the strategy's candidates plus {0, R^n}.

    Ties are broken deterministically: smallest dim S first, then
    lexicographically smallest canonical basis.  Candidates are scanned in
    exactly that order, so the first minimum found is the reported witness
    and the outcome is independent of any parallel evaluation schedule.
    """
    n = sigma.ambient_dim
    d = sigma.dim
    if strategy is None:
        strategy = default_strategy(n)
    kind, cap, height, descriptor = _parse_strategy(strategy)
    merged = {Subspace.zero(n), Subspace.full(n)}
    if kind in ("lattice", "combined"):
        merged.update(candidate_lattice(sigma, cap).subspaces)
    if kind in ("exhaustive", "combined"):
        merged.update(exhaustive_candidates(n, height).subspaces)
    for sub in extra_candidates:
        if sub.ambient_dim != n:
            raise ValueError(
                f"extra candidate in R^{sub.ambient_dim}, complex in R^{n}"
            )
        merged.add(sub)
    cands = sorted(merged, key=Subspace.sort_key)

    cells = sigma.cells
    best = cands[0]
    best_val = 2 * d
    ub = min(2 * d, n)
    for sub in cands[1:]:
        s = len(sub.rows)
        limit = best_val if best_val < ub else ub
        bound = 2 * d - s
        if s > bound:
            bound = s
        if bound > limit:
            continue
        val = _objective_within(cells, sub, n, limit)
        if val is not None and val < best_val:
            best_val = val
            best = sub
    witness_t = reduce_torus(sigma, best)
    return SearchResult(
        value=best_val,
        lower_bound=d,
        upper_bound=best_val,
        certified=best_val == d,
        witness_S=best,
        witness_T=witness_t,
        strategy=descriptor,
        candidates_evaluated=len(cands),
    )


def _objective_within(cells, sub, n: int, limit: int):
    """Objective of `sub`, or None as soon as it provably exceeds `limit`.

    The running cell maximum only grows, so 2·max − dim S is a valid lower
    bound on the final objective at every point of the scan.
    """
    s = len(sub.rows)
    best = 0
    for cell in cells:
        if len(cell.rows) >= s:
            got = cell.sum_dim(sub.rows)
        else:
            got = sub.sum_dim(cell.rows)
        if got > best:
            best = got
            if 2 * best - s > limit:
                return None
            if best == n:
                break
    return 2 * best - s


def reduce_torus(sigma: SpanComplex, sub: Subspace) -> Subspace:
    """Shrink S to T ⊆ S with dim T = dim(S+Σ) − dim Σ and dim(T+Σ) = dim(S+Σ).

    Fix the first cell C0 (canonical order) whose sum with S attains
    M = dim(S+Σ), then walk the canonical basis of S, keeping exactly the
    vectors that still grow ⟨C0⟩ + T.  Every kept vector raises that sum's
    dimension by one, so the walk stops after M − dim Σ of them: T has the
    advertised dimension, dim(T+Σ) ≥ dim(⟨C0⟩+T) = M, and T ⊆ S gives the
    reverse inequality.  Greedily growing T against *all* cells instead can
    overshoot: a vector may be forced by one cell while another cell
    already absorbed it, and the result ends up larger than M − dim Σ.
    """
    if sigma.ambient_dim != sub.ambient_dim:
        raise ValueError(
            f"ambient mismatch: complex in R^{sigma.ambient_dim}, "
            f"subspace in R^{sub.ambient_dim}"
        )
    n = sigma.ambient_dim
    target = dim_sum_with_subspace(sigma, sub)
    if target == sigma.dim:
        return Subspace.zero(n)
    anchor = next(
        cell for cell in sigma.cells if cell.sum_dim(sub.rows) == target
    )
    grown = anchor
    kept = []
    for v in sub.rows:
        if len(grown.rows) == target:
            break
        bigger = grown.sum_with_rows((v,))
        if bigger is grown:
            continue
        kept.append(v)
        grown = bigger
    return Subspace(n, tuple(kept))


def witness_pair(sigma: SpanComplex, strategy: str | None = None) -> tuple:
    """(T, S, value): S minimizes the objective, T = reduce_torus(Σ, S).

    The triple satisfies 2·dim Σ + 2·dim T − dim S = value.
    """
    result = amoeba_dim(sigma, strategy)
    return result.witness_T, result.witness_S, result.value


def detect_near_action(sigma: SpanComplex,
                       strategy: str | None = None) -> NearActionReport:
    """Dimension-drop test: value < min(n, 2d)?

    When the drop holds, the minimizing subspace satisfies both strict
    inequalities 2d > objective(S) and n > objective(S), and it is
    automatically neither {0} nor R^n (those two candidates pin the
    objective to 2d and n respectively).
    """
    result = amoeba_dim(sigma, strategy)
    threshold = min(sigma.ambient_dim, 2 * sigma.dim)
    drop = result.value < threshold
    return NearActionReport(
        drop=drop,
        value=result.value,
        threshold=threshold,
        witness=result.witness_S if drop else None,
    )


def orbit_indicator(sigma: SpanComplex, strategy: str | None = None) -> bool:
    """True iff Σ is a single subspace and the search value equals dim Σ."""
    result = amoeba_dim(sigma, strategy)
    return result.value == sigma.dim and len(sigma.cells) == 1


def product_candidates(left, right) -> tuple:
    """Pairwise direct sums, the natural candidates for a product complex.

    The objective is additive on split subspaces, so feeding these to
    `amoeba_dim` via extra_candidates makes the product value at most the
    sum of the factor values.
    """
    sums = {direct_sum(a, b) for a in left for b in right}
    return tuple(sorted(sums, key=Subspace.sort_key))
