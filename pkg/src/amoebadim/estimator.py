"""Floating-point rank oracle for the log image of a sampled variety.

The combinatorial search gives one number; this module produces the same
number a completely different way, by sampling points of an explicitly
given variety and ranking the Jacobian of coordinatewise log|.|.  At a
generic point that rank is the dimension of the log image, so the
estimator returns the max over samples: rank can only drop on a measure
zero locus, never jump.

Everything here is double precision on purpose.  The module never
certifies anything; cross_check reports disagreement instead of hiding
it, and an unlucky run shows up as a mismatch verdict, not a wrong
silent answer.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polyhedral import SpanComplex
from .subspace_search import amoeba_dim
from .roots import RootFindingError, polynomial_roots

DEFAULT_TRIALS = 20
DEFAULT_TOL = 1e-8
_LOG_WINDOW = 3.0
_ROOT_MIN, _ROOT_MAX = 1e-6, 1e6


class VarietyFormatError(ValueError):
    """Malformed parametrization or implicit-hypersurface input."""


class EstimatorError(RuntimeError):
    """No sample survived; the estimate does not exist."""


class SampleRejected(EstimatorError):
    """A single evaluation point was unusable (zero or non-finite)."""


def _check_terms(terms, nvars, what, laurent):
    cooked = []
    for t, (coeff, exponents) in enumerate(terms):
        coeff = complex(coeff)
        if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
            raise VarietyFormatError(f"{what}: term {t} coefficient not finite")
        exponents = tuple(exponents)
        if len(exponents) != nvars:
            raise VarietyFormatError(
                f"{what}: term {t} has {len(exponents)} exponents, "
                f"expected {nvars}"
            )
        for e in exponents:
            if not isinstance(e, int) or isinstance(e, bool):
                raise VarietyFormatError(f"{what}: non-integer exponent")
            if not laurent and e < 0:
                raise VarietyFormatError(
                    f"{what}: negative exponent in a polynomial"
                )
        cooked.append((coeff, exponents))
    return tuple(cooked)


@dataclass(frozen=True)
class Parametrization:
    """Map (C*)^m -> C^n with Laurent-polynomial components.

    Each component is a tuple of (complex coefficient, integer exponent
    vector of length domain_dim) pairs.
    """

    domain_dim: int
    ambient_dim: int
    components: tuple

    def __post_init__(self):
        for label, value in (("domain_dim", self.domain_dim),
                             ("ambient_dim", self.ambient_dim)):
            if not isinstance(value, int) or isinstance(value, bool) \
                    or value < 1:
                raise VarietyFormatError(
                    f"{label} must be a positive integer"
                )
        comps = tuple(self.components)
        if len(comps) != self.ambient_dim:
            raise VarietyFormatError(
                f"expected {self.ambient_dim} components, got {len(comps)}"
            )
        cooked = []
        for i, terms in enumerate(comps):
            terms = tuple(terms)
            if not terms:
                raise VarietyFormatError(f"component {i} has no terms")
            cooked.append(
                _check_terms(terms, self.domain_dim, f"component {i}",
                             laurent=True)
            )
        object.__setattr__(self, "components", tuple(cooked))

    def evaluate(self, z) -> tuple:
        z = tuple(z)
        if len(z) != self.domain_dim:
            raise ValueError("point has the wrong number of coordinates")
        return tuple(_eval_terms(terms, z) for terms in self.components)


@dataclass(frozen=True)
class ImplicitHypersurface:
    """Zero locus of one polynomial, sampled inside the torus.

    A single-term polynomial never vanishes on (C*)^n, so at least two
    terms are required.
    """

    ambient_dim: int
    terms: tuple

    def __post_init__(self):
        if not isinstance(self.ambient_dim, int) \
                or isinstance(self.ambient_dim, bool) or self.ambient_dim < 1:
            raise VarietyFormatError("ambient_dim must be a positive integer")
        terms = tuple(self.terms)
        if len(terms) < 2:
            raise VarietyFormatError(
                "a polynomial with fewer than two terms has no zeros in "
                "the torus"
            )
        object.__setattr__(
            self, "terms",
            _check_terms(terms, self.ambient_dim, "polynomial", laurent=False),
        )

    def evaluate(self, x) -> complex:
        x = tuple(x)
        if len(x) != self.ambient_dim:
            raise ValueError("point has the wrong number of coordinates")
        return _eval_terms(self.terms, x)


@dataclass(frozen=True)
class RankEstimate:
    """Generic numerical rank plus the evidence it rests on.

    `singular_value_gap` is the worst ratio across accepted samples
    between the last kept singular value and the first discarded one;
    infinite when every sample's cut fell to exact zeros (or off the end
    of the spectrum).  `per_sample_gaps` keeps the individual ratios for
    diagnostics; it does not participate in equality.
    """

    rank: int
    samples_used: int
    singular_value_gap: float
    per_sample_ranks: tuple
    per_sample_gaps: tuple = field(default=(), compare=False)

    def to_json_dict(self) -> dict:
        gap = self.singular_value_gap
        return {
            "rank": self.rank,
            "samples_used": self.samples_used,
            "singular_value_gap": None if math.isinf(gap) else gap,
            "per_sample_ranks": list(self.per_sample_ranks),
        }


@dataclass(frozen=True)
class CrossCheckResult:
    combinatorial: int
    numerical: int
    certified: bool
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "combinatorial": self.combinatorial,
            "numerical": self.numerical,
            "certified": self.certified,
            "verdict": self.verdict,
        }


def _eval_terms(terms, z):
    total = 0j
    for coeff, exponents in terms:
        v = coeff
        for zj, e in zip(z, exponents):
            if e:
                v *= zj ** e
        total += v
    return total


def _eval_with_gradient(terms, z):
    """Value and all complex partials at z (no zero coordinates)."""
    m = len(z)
    value = 0j
    grad = [0j] * m
    for coeff, exponents in terms:
        v = coeff
        for zj, e in zip(z, exponents):
            if e:
                v *= zj ** e
        value += v
        for j, e in enumerate(exponents):
            if e:
                grad[j] += v * e / z[j]
    return value, grad


def _finite(q: complex) -> bool:
    return math.isfinite(q.real) and math.isfinite(q.imag)


def log_jacobian(phi: Parametrization, z) -> np.ndarray:
    """Real n x 2m Jacobian of log|phi| at z, columns (Re z_1, Im z_1, ...).

    Differentiating log|phi_i| through the Cauchy-Riemann equations gives
    d/dRe(z_j) = Re(q), d/dIm(z_j) = -Im(q) with q = (d phi_i/d z_j)/phi_i.
    Rejects the point (SampleRejected) when any coordinate or component
    value is zero or the arithmetic leaves the finite range.
    """
    z = tuple(complex(c) for c in z)
    if len(z) != phi.domain_dim:
        raise ValueError("point has the wrong number of coordinates")
    for c in z:
        if c == 0:
            raise SampleRejected("zero coordinate in the sample point")
        if not _finite(c):
            raise SampleRejected("non-finite coordinate in the sample point")
    rows = []
    for terms in phi.components:
        value, grad = _eval_with_gradient(terms, z)
        if value == 0:
            raise SampleRejected("a component vanishes at the sample point")
        row = []
        for g in grad:
            q = g / value
            if not _finite(q):
                raise SampleRejected("non-finite derivative entry")
            row.extend((q.real, -q.imag))
        rows.append(row)
    return np.array(rows, dtype=float)


def _sample_coordinates(rng, count):
    radii = np.exp(rng.uniform(-_LOG_WINDOW, _LOG_WINDOW, count))
    angles = rng.uniform(0.0, 2.0 * math.pi, count)
    return tuple(
        complex(r * math.cos(a), r * math.sin(a))
        for r, a in zip(radii, angles)
    )


def _rank_and_gap(matrix: np.ndarray, tol: float):
    sigma = np.linalg.svd(matrix, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0, math.inf
    rank = int(np.count_nonzero(sigma / sigma[0] > tol))
    if rank < sigma.size and sigma[rank] > 0.0:
        return rank, float(sigma[rank - 1] / sigma[rank])
    return rank, math.inf


def _check_estimator_params(trials, tol):
    if not isinstance(trials, int) or trials < 1:
        raise ValueError("trials must be a positive integer")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie strictly between 0 and 1")


def _collect(samples, trials):
    ranks = []
    gaps = []
    for matrix, tol in samples:
        rank, gap = _rank_and_gap(matrix, tol)
        ranks.append(rank)
        gaps.append(gap)
    if not ranks:
        raise EstimatorError(f"all {trials} samples were rejected")
    return RankEstimate(
        rank=max(ranks),
        samples_used=len(ranks),
        singular_value_gap=min(gaps),
        per_sample_ranks=tuple(ranks),
        per_sample_gaps=tuple(gaps),
    )


def estimate_rank(phi: Parametrization, trials: int = DEFAULT_TRIALS,
                  tol: float = DEFAULT_TOL, seed: int = 0) -> RankEstimate:
    """Generic rank of the log Jacobian over `trials` random points.

    Coordinates are drawn as r e^{i theta} with log r uniform on the
    window [-3, 3]; each sample gets its own child of the seed sequence,
    so the first k samples of any run agree with a run of k trials and
    results do not depend on evaluation order.
    """
    _check_estimator_params(trials, tol)
    samples = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        z = _sample_coordinates(rng, phi.domain_dim)
        try:
            samples.append((log_jacobian(phi, z), tol))
        except SampleRejected:
            continue
    return _collect(samples, trials)


def _specialize(h: ImplicitHypersurface, xs):
    """Coefficients of f(xs, t) as a polynomial in the last variable."""
    degree = max(t[1][-1] for t in h.terms)
    coeffs = [0j] * (degree + 1)
    for coeff, exponents in h.terms:
        v = coeff
        for xj, e in zip(xs, exponents):
            if e:
                v *= xj ** e
        coeffs[exponents[-1]] += v
    return coeffs


def _implicit_matrix(h: ImplicitHypersurface, rng, tol):
    n = h.ambient_dim
    xs = _sample_coordinates(rng, n - 1)
    coeffs = _specialize(h, xs)
    candidates = []
    try:
        for root in polynomial_roots(coeffs):
            if _finite(root) and _ROOT_MIN <= abs(root) <= _ROOT_MAX:
                candidates.append(root)
    except (RootFindingError, ValueError):
        raise SampleRejected("root finding failed")
    if not candidates:
        raise SampleRejected("no root inside the usable magnitude range")
    last = candidates[int(rng.integers(len(candidates)))]
    point = xs + (last,)
    _, grad = _eval_with_gradient(h.terms, point)
    fn = grad[-1]
    if fn == 0 or not _finite(fn):
        raise SampleRejected("critical point: df/dx_n vanishes at the root")
    rows = []
    for i in range(n - 1):
        q = 1 / point[i]
        row = [0.0] * (2 * (n - 1))
        row[2 * i] = q.real
        row[2 * i + 1] = -q.imag
        rows.append(row)
    bottom = []
    for j in range(n - 1):
        q = -(grad[j] / fn) / last
        if not _finite(q):
            raise SampleRejected("non-finite derivative entry")
        bottom.extend((q.real, -q.imag))
    rows.append(bottom)
    return np.array(rows, dtype=float)


def estimate_rank_implicit(h: ImplicitHypersurface,
                           trials: int = DEFAULT_TRIALS,
                           tol: float = DEFAULT_TOL,
                           seed: int = 0) -> RankEstimate:
    """Like estimate_rank, for a hypersurface given by one polynomial.

    Per sample the first n-1 coordinates are drawn at random, the last
    one is solved for (picking one usable root at random), and the
    composed Jacobian of log|.| restricted to the graph is ranked.  The
    chain rule contributes dx_n/dx_j = -f_j/f_n to the bottom row; the
    other rows are the diagonal 1/x_i pattern of the free coordinates.
    """
    _check_estimator_params(trials, tol)
    samples = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        try:
            samples.append((_implicit_matrix(h, rng, tol), tol))
        except SampleRejected:
            continue
    return _collect(samples, trials)


def cross_check(sigma: SpanComplex, estimate: RankEstimate,
                strategy: str | None = None) -> CrossCheckResult:
    """Compare the combinatorial value on sigma with a numerical estimate.

    The caller vouches that sigma belongs to the sampled variety; under
    that assumption the two numbers must agree, and a mismatch means a
    wrong input pairing, an unlucky sampling run, or a capped search
    that missed the optimum.  Nothing is averaged away: both numbers and
    the certification flag are reported as they are.
    """
    result = amoeba_dim(sigma, strategy=strategy)
    verdict = "agree" if result.value == estimate.rank else "mismatch"
    return CrossCheckResult(
        combinatorial=result.value,
        numerical=estimate.rank,
        certified=result.certified,
        verdict=verdict,
    )


def _coeff_to_float(raw, where):
    if isinstance(raw, bool):
        raise VarietyFormatError(f"{where}: coefficient entry must be a number")
    if isinstance(raw, (int, float)):
        value = float(raw)
    elif isinstance(raw, str):
        try:
            value = float(Fraction(raw))
        except (ValueError, ZeroDivisionError) as exc:
            raise VarietyFormatError(
                f"{where}: cannot read {raw!r} as a rational number"
            ) from exc
    else:
        raise VarietyFormatError(f"{where}: coefficient entry must be a number")
    if not math.isfinite(value):
        raise VarietyFormatError(f"{where}: coefficient entry not finite")
    return value


def _parse_terms(raw_terms, where):
    if not isinstance(raw_terms, list) or not raw_terms:
        raise VarietyFormatError(f'{where}: "terms" must be a nonempty list')
    terms = []
    for t, raw in enumerate(raw_terms):
        if not isinstance(raw, dict):
            raise VarietyFormatError(f"{where}: term {t} must be an object")
        pair = raw.get("coeff")
        if not isinstance(pair, list) or len(pair) != 2:
            raise VarietyFormatError(
                f'{where}: term {t} needs "coeff": [re, im]'
            )
        re = _coeff_to_float(pair[0], f"{where} term {t}")
        im = _coeff_to_float(pair[1], f"{where} term {t}")
        exponents = raw.get("exponents")
        if not isinstance(exponents, list):
            raise VarietyFormatError(
                f'{where}: term {t} needs an "exponents" list'
            )
        terms.append((complex(re, im), tuple(exponents)))
    return terms


def _load_document(text, expected_keys):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise VarietyFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise VarietyFormatError("top level must be an object")
    missing = [k for k in expected_keys if k not in doc]
    if missing:
        raise VarietyFormatError("missing keys: " + ", ".join(missing))
    return doc


def _read_dim(doc, key):
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise VarietyFormatError(f'"{key}" must be a positive integer')
    return value


def parse_parametrization(text: str) -> Parametrization:
    """Read the parametrization file format (see README)."""
    doc = _load_document(text, ("domain_dim", "ambient_dim", "components"))
    m = _read_dim(doc, "domain_dim")
    n = _read_dim(doc, "ambient_dim")
    raw_components = doc["components"]
    if not isinstance(raw_components, list) or len(raw_components) != n:
        raise VarietyFormatError(
            f'"components" must be a list of {n} objects'
        )
    components = []
    for i, raw in enumerate(raw_components):
        if not isinstance(raw, dict):
            raise VarietyFormatError(f"component {i} must be an object")
        components.append(_parse_terms(raw.get("terms"), f"component {i}"))
    return Parametrization(m, n, tuple(components))


def parse_implicit(text: str) -> ImplicitHypersurface:
    """Read the implicit-hypersurface file format (see README)."""
    doc = _load_document(text, ("ambient_dim", "polynomial"))
    n = _read_dim(doc, "ambient_dim")
    raw_poly = doc["polynomial"]
    if not isinstance(raw_poly, dict):
        raise VarietyFormatError('"polynomial" must be an object')
    terms = _parse_terms(raw_poly.get("terms"), "polynomial")
    return ImplicitHypersurface(n, tuple(terms))
