"""
Floating-point norm certificates.

The norm on C^n is the Euclidean one.  Exact results from the other modules
are converted to complex128 only at the end; whether a sample evaluates to
zero is still decided exactly.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .annihilator import condition_c_check
from .exactnum import Matrix
from .similarity import synthesize_from_pair
from .tuples import CommutingTuple, PolyVector, TermImages, VectorTuple, evaluate, monomials

__all__ = [
    "NormReport", "SampleResult", "HardyRow",
    "spectral_norm", "optimal_constant", "inequality_sample_test",
    "evaluation_ratio", "shift_matrix", "hardy_truncation_demo",
]

RELATIVE_SLACK = 1e-9


@dataclass(frozen=True)
class NormReport:
    c: float
    norm_S: float
    norm_S_inverse: float
    sampled_ratio_range: tuple
    S: Matrix = None


@dataclass(frozen=True)
class SampleResult:
    passed: bool
    worst_ratio: float
    samples: int
    first_failure: PolyVector = None


@dataclass(frozen=True)
class HardyRow:
    n: int
    condition_c_holds: bool
    c_n: float
    lower_bound: float


def spectral_norm(M, tolerance=1e-12, max_iter=10_000):
    """Largest singular value by power iteration on M^H M.

    Iterates from the all-ones vector and from each of e1, ..., en and keeps
    the largest Rayleigh quotient: a single start can be an eigenvector of a
    smaller eigenvalue, but the e_i cannot all miss the top eigenspace.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    A = M.to_numpy() if isinstance(M, Matrix) else np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    G = A.conj().T @ A
    n = G.shape[0]
    starts = [np.ones(n, dtype=complex)] + [np.eye(n, dtype=complex)[i] for i in range(n)]
    best = 0.0
    for x in starts:
        best = max(best, _top_eigenvalue(G, x, tolerance, max_iter))
    return math.sqrt(best)


def _top_eigenvalue(G, x, tolerance, max_iter):
    y = G @ x
    ny = np.linalg.norm(y)
    if ny == 0.0:
        return 0.0
    x = y / ny
    lam = 0.0
    for _ in range(max_iter):
        y = G @ x
        lam_new = float(np.real(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny == 0.0:
            break
        x = y / ny
        if abs(lam_new - lam) <= tolerance * abs(lam_new):
            return max(lam_new, 0.0)
        lam = lam_new
    return max(lam, 0.0)


# ---------------------------------------------------------------- sampling

class _IntegerImages:
    """Term images scaled to Gaussian-integer vectors over one common denominator.

    Lets a sample with small integer coefficients be combined in integer
    arithmetic while keeping the zero test exact.
    """

    def __init__(self, T, U):
        self._images = TermImages(T, U)
        self._cache = {}

    def __call__(self, alpha, j):
        key = (alpha, j)
        hit = self._cache.get(key)
        if hit is None:
            v = self._images(alpha, j)
            den = math.lcm(*(x.re.denominator for x in v), *(x.im.denominator for x in v))
            hit = ([int(x.re * den) for x in v], [int(x.im * den) for x in v], den)
            self._cache[key] = hit
        return hit


def _sq_norm(images, terms):
    """Exact squared Euclidean norm of sum c * A^alpha u_j, as a Fraction."""
    den = 1
    for (alpha, j), _ in terms:
        den = math.lcm(den, images(alpha, j)[2])
    re = im = None
    for (alpha, j), c in terms:
        r, i, d = images(alpha, j)
        f = c * (den // d)
        if re is None:
            re = [f * x for x in r]
            im = [f * x for x in i]
        else:
            re = [a + f * x for a, x in zip(re, r)]
            im = [a + f * x for a, x in zip(im, i)]
    return Fraction(sum(x * x for x in re) + sum(x * x for x in im), den * den)


def _ratio(sqA, sqB):
    if not sqB:
        return math.inf
    return math.sqrt(float(sqA / sqB))


def evaluation_ratio(TA, U, TB, V, P):
    """||sum p_j(A) u_j|| / ||sum p_j(B) v_j||, inf when only the right side is 0.

    Returns None when both sides vanish.
    """
    va, vb = evaluate(TA, U, P), evaluate(TB, V, P)
    sqA = sum((x.abs2() for x in va), Fraction(0))
    sqB = sum((x.abs2() for x in vb), Fraction(0))
    if not sqA and not sqB:
        return None
    return _ratio(sqA, sqB)


def _random_terms(m, k, max_degree, rng, by_degree):
    count = rng.randint(1, 6)
    picked = {}
    for _ in range(count):
        alpha = rng.choice(by_degree[rng.randint(0, max_degree)])
        j = rng.randrange(k)
        c = rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])
        picked[(alpha, j)] = c
    return sorted(picked.items())


def _sample_ratios(TA, U, TB, V, samples, max_degree, seed):
    """Yield (terms, ratio) for ``samples`` draws where not both sides vanish."""
    rng = random.Random(seed)
    by_degree = [[a for a in monomials(TA.m, d) if sum(a) == d] for d in range(max_degree + 1)]
    imgA, imgB = _IntegerImages(TA, U), _IntegerImages(TB, V)
    drawn = attempts = 0
    while drawn < samples and attempts < 50 * samples:
        attempts += 1
        terms = _random_terms(TA.m, U.k, max_degree, rng, by_degree)
        sqA, sqB = _sq_norm(imgA, terms), _sq_norm(imgB, terms)
        if not sqA and not sqB:
            continue
        drawn += 1
        yield terms, _ratio(sqA, sqB)


def inequality_sample_test(TA, U, TB, V, c, samples=1000, max_degree=6, seed=0):
    """Check c^-1 ||B-side|| <= ||A-side|| <= c ||B-side|| on random tuples.

    Random tuples have 1 to 6 terms with coefficients in [-5, 5] \\ {0} and
    total degree <= max_degree; draws where both sides vanish are skipped.
    ``worst_ratio`` is the largest max(r, 1/r) seen, i.e. the smallest
    constant that would have passed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if c < 1:
        raise ValueError("c must be >= 1")
    hi = c * (1 + RELATIVE_SLACK)
    lo = (1 / c) * (1 - RELATIVE_SLACK)
    worst = 1.0
    drawn = 0
    failure = None
    for terms, r in _sample_ratios(TA, U, TB, V, samples, max_degree, seed):
        drawn += 1
        spread = math.inf if r == 0 or r == math.inf else max(r, 1 / r)
        worst = max(worst, spread)
        if failure is None and not (lo <= r <= hi):
            failure = PolyVector.from_terms(U.k, TA.m, terms)
    return SampleResult(failure is None, worst, drawn, failure)


def optimal_constant(TA, U, TB, V, tolerance=1e-12, samples=100, max_degree=4, seed=0):
    """The constant max(||S||, ||S^-1||) for the synthesized intertwiner S.

    A valid, not necessarily minimal, constant for the two-sided bound.
    ``sampled_ratio_range`` is the (min, max) of the norm ratio over
    ``samples`` random tuples (``(1.0, 1.0)`` when ``samples`` is 0).
    """
    cert = synthesize_from_pair(TA, U, TB, V)
    ns = spectral_norm(cert.S, tolerance)
    nsi = spectral_norm(cert.S_inverse, tolerance)
    ratios = [r for _, r in _sample_ratios(TA, U, TB, V, samples, max_degree, seed)]
    rng_ = (min(ratios), max(ratios)) if ratios else (1.0, 1.0)
    return NormReport(max(ns, nsi), ns, nsi, rng_, cert.S)


# ---------------------------------------------------------------- Hardy demo

def shift_matrix(n, scale=1):
    """Multiplication by ``scale * z`` on polynomials of degree < n (e_i -> scale e_{i+1})."""
    entries = [0] * (n * n)
    for i in range(n - 1):
        entries[(i + 1) * n + i] = scale
    return Matrix(n, n, entries)


def hardy_truncation_demo(n_max):
    """Truncations of M_z and 2 M_z on H^2 to degree < n, for n = 2..n_max.

    Each row reports the annihilator test with u = v = 1, the constant of
    the synthesized intertwiner, and the bound 2^(n-1) forced on
    ||S|| ||S^-1|| by 2^(n-1) J^(n-1) = S J^(n-1) S^-1 with J^(n-1) != 0.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    rows = []
    for n in range(2, n_max + 1):
        J = CommutingTuple([shift_matrix(n)])
        J2 = CommutingTuple([shift_matrix(n, 2)])
        one = VectorTuple([[1] + [0] * (n - 1)])
        holds = condition_c_check(J, one, J2, one).holds
        report = optimal_constant(J, one, J2, one, samples=0)
        rows.append(HardyRow(n, holds, report.c, float(2 ** (n - 1))))
    return rows
