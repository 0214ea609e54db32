"""Simultaneous-iteration root finding for small univariate polynomials.

Durand-Kerner is enough here: the polynomials come from specializing a
multivariate one at a random point, so degrees are tiny and clustered
roots are not the regime we care about.  Callers treat a convergence
failure as a rejected sample, not a fatal error.
"""


class RootFindingError(RuntimeError):
    """The iteration did not converge within the step budget."""


def _horner(coeffs, x):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def polynomial_roots(coeffs, tol: float = 1e-12, max_iter: int = 200):
    """All complex roots of sum_k coeffs[k] * x**k, as a tuple.

    Exact zero high-order coefficients are stripped; a factor x**s is
    split off first so roots at the origin come out exact.  Initial
    guesses are the usual powers of 0.4+0.9j, which avoids the symmetric
    stalls a real starting configuration can hit.  The returned order is
    deterministic (sorted by real part, then imaginary).
    """
    cs = [complex(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("the zero polynomial does not have a root set")
    origin = 0
    while cs[0] == 0:
        cs.pop(0)
        origin += 1
    degree = len(cs) - 1
    if degree == 0:
        return (0j,) * origin
    lead = cs[-1]
    cs = [c / lead for c in cs]
    roots = [(0.4 + 0.9j) ** k for k in range(1, degree + 1)]
    for _ in range(max_iter):
        worst = 0.0
        for i in range(degree):
            r = roots[i]
            denom = 1 + 0j
            for j in range(degree):
                if j != i:
                    denom *= r - roots[j]
            if denom == 0:
                raise RootFindingError("coincident iterates")
            step = _horner(cs, r) / denom
            roots[i] = r - step
            mag = abs(step)
            if mag > worst:
                worst = mag
        scale = max(1.0, max(abs(r) for r in roots))
        if worst != worst or scale != scale:
            raise RootFindingError("iteration left the finite range")
        if worst <= tol * scale:
            all_roots = [0j] * origin + roots
            all_roots.sort(key=lambda z: (z.real, z.imag))
            return tuple(all_roots)
    raise RootFindingError(
        f"no convergence after {max_iter} iterations"
    )
