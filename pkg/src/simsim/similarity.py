"""
Simultaneous similarity: certificate synthesis, verification and decision.

Two routes produce a certificate S with S A_l = B_l S:

* :func:`synthesize_from_pair` reads S off the stacked closure of matched
  cyclic tuples (U, V).  When the annihilators agree, the stacked closure is
  the graph of the map sum p_j(A) u_j -> sum p_j(B) v_j.
* :func:`decide_similarity` samples the linear space of all intertwiners and
  tests the samples for invertibility.
"""

import enum
import random
from dataclasses import dataclass
from itertools import permutations, product
from typing import Optional

from .annihilator import condition_c_check
from .errors import PreconditionFailed, ShapeMismatch
from .exactnum import (
    ONE, ZERO, Matrix, determinant, inverse, kernel_basis,
)
from .krylov import is_cyclic
from .tuples import CommutingTuple

__all__ = [
    "SimilarityCertificate", "Verdict", "VerdictKind",
    "synthesize_from_pair", "verify_similarity", "intertwiner_space",
    "decide_similarity", "conjugate",
]

# exact fallback limits for the symbolic determinant
EXACT_MAX_N = 4
EXACT_MAX_DIM = 6


@dataclass(frozen=True)
class SimilarityCertificate:
    S: Matrix
    S_inverse: Matrix
    checked: bool


class VerdictKind(enum.Enum):
    SIMILAR = "SIMILAR"
    NOT_SIMILAR_EXACT = "NOT_SIMILAR_EXACT"
    NOT_SIMILAR_SAMPLED = "NOT_SIMILAR_SAMPLED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certificate: Optional[SimilarityCertificate] = None
    reason: Optional[str] = None
    failure_probability_bound: Optional[float] = None
    intertwiner_dim: Optional[int] = None

    @property
    def similar(self):
        return self.kind is VerdictKind.SIMILAR


def _commutator_free(TA, TB, S):
    return all((S @ A) == (B @ S) for A, B in zip(TA, TB))


def verify_similarity(TA, TB, S):
    """True iff S is invertible and S A_l = B_l S for every l."""
    if TA.m != TB.m or TA.n != TB.n or S.shape != (TA.n, TA.n):
        return False
    if not determinant(S):
        return False
    return _commutator_free(TA, TB, S)


def _certify(TA, TB, S):
    Si = inverse(S)
    if S @ Si != Matrix.identity(S.rows) or not _commutator_free(TA, TB, S):
        raise AssertionError("certificate failed exact verification")
    return SimilarityCertificate(S, Si, True)


def synthesize_from_pair(TA, U, TB, V):
    """The intertwiner sending sum p_j(A) u_j to sum p_j(B) v_j.

    Raises PreconditionFailed when a tuple is not cyclic, the dimensions
    differ, or the annihilators differ (then with the separating witness).
    """
    if TA.n != TB.n:
        raise PreconditionFailed(f"dimensions differ: {TA.n} vs {TB.n}")
    if not is_cyclic(TA, U):
        raise PreconditionFailed("U is not cyclic for the first tuple")
    if not is_cyclic(TB, V):
        raise PreconditionFailed("V is not cyclic for the second tuple")
    cc = condition_c_check(TA, U, TB, V)
    if not cc.holds:
        raise PreconditionFailed(
            f"annihilators differ (dims {cc.dims}); witness {cc.witness}", cc.witness)
    n = TA.n
    # dC == dA == n, so the x-halves of the stacked basis form a basis of C^n
    X = Matrix.from_columns([w[:n] for w in cc.stacked.basis], n)
    Y = Matrix.from_columns([w[n:] for w in cc.stacked.basis], n)
    return _certify(TA, TB, Y @ inverse(X))


def intertwiner_space(TA, TB):
    """Basis of {S : S A_l = B_l S for all l} as a list of matrices."""
    if TA.n != TB.n or TA.m != TB.m:
        raise ShapeMismatch("intertwiners need tuples of equal size and length")
    n = TA.n
    N = n * n
    eqs = []
    # unknown s[a, b] sits at index a*n + b
    for A, B in zip(TA, TB):
        for i in range(n):
            for j in range(n):
                row = [ZERO] * N
                for b in range(n):
                    x = A[b, j]
                    if x:
                        row[i * n + b] = row[i * n + b] + x
                    y = B[i, b]
                    if y:
                        row[b * n + j] = row[b * n + j] - y
                if any(row):
                    eqs.append(row)
    if not eqs:
        return [Matrix(n, n, [ONE if t == s else ZERO for t in range(N)]) for s in range(N)]
    system = Matrix(len(eqs), N, [x for r in eqs for x in r])
    return [Matrix(n, n, v) for v in kernel_basis(system)]


def _combination(basis, coeffs):
    n = basis[0].rows
    acc = Matrix.zeros(n)
    for W, c in zip(basis, coeffs):
        acc = acc + c * W
    return acc


# ---------------------------------------------------------------- exact fallback

def _poly_mul(p, q):
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            e = tuple(s + t for s, t in zip(a, b))
            out[e] = out.get(e, ZERO) + x * y
    return {e: c for e, c in out.items() if c}


def _generic_determinant(basis):
    """det(sum_i c_i W_i) as a polynomial in c, by Leibniz expansion."""
    d = len(basis)
    n = basis[0].rows
    unit = [tuple(1 if t == i else 0 for t in range(d)) for i in range(d)]
    entry = [[{unit[t]: W[i, j] for t, W in enumerate(basis) if W[i, j]}
              for j in range(n)] for i in range(n)]
    total = {}
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = {(0,) * d: -ONE if inversions % 2 else ONE}
        for i in range(n):
            term = _poly_mul(term, entry[i][perm[i]])
            if not term:
                break
        for e, c in term.items():
            total[e] = total.get(e, ZERO) + c
    return {e: c for e, c in total.items() if c}


def _nonvanishing_point(basis, n):
    # A nonzero polynomial of degree <= n in each variable cannot vanish on
    # all of {1..n+1}^d.
    for point in product(range(1, n + 2), repeat=len(basis)):
        S = _combination(basis, point)
        if determinant(S):
            return S
    raise AssertionError("nonzero determinant polynomial vanished on a full grid")


# ---------------------------------------------------------------- decision

def decide_similarity(TA, TB, trials=20, grid_size=10**6, seed=0):
    """Decide whether TA and TB are simultaneously similar.

    SIMILAR verdicts always carry an exactly re-verified certificate.  A
    negative verdict is exact when the intertwiner space is zero or small
    enough to expand its generic determinant symbolically; otherwise it is
    NOT_SIMILAR_SAMPLED with failure probability at most
    (n / grid_size) ** trials.
    """
    if TA.n != TB.n or TA.m != TB.m:
        raise ShapeMismatch(
            f"cannot compare a {TA.m}-tuple on C^{TA.n} with a {TB.m}-tuple on C^{TB.n}")
    n = TA.n
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if grid_size < 2 * n:
        raise ValueError(f"grid_size must be at least 2n = {2 * n}")
    W = intertwiner_space(TA, TB)
    if not W:
        return Verdict(VerdictKind.NOT_SIMILAR_EXACT,
                       reason="no nonzero intertwiner", intertwiner_dim=0)
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(1, grid_size) for _ in W]
        S = _combination(W, coeffs)
        if determinant(S):
            return Verdict(VerdictKind.SIMILAR, certificate=_certify(TA, TB, S),
                           intertwiner_dim=len(W))
    if n <= EXACT_MAX_N and len(W) <= EXACT_MAX_DIM:
        if not _generic_determinant(W):
            return Verdict(VerdictKind.NOT_SIMILAR_EXACT,
                           reason="every intertwiner is singular (determinant vanishes identically)",
                           intertwiner_dim=len(W))
        S = _nonvanishing_point(W, n)
        return Verdict(VerdictKind.SIMILAR, certificate=_certify(TA, TB, S),
                       intertwiner_dim=len(W))
    return Verdict(VerdictKind.NOT_SIMILAR_SAMPLED,
                   reason=f"{trials} random intertwiners were all singular",
                   failure_probability_bound=(n / grid_size) ** trials,
                   intertwiner_dim=len(W))


def conjugate(T, S):
    """The tuple (S A_1 S^-1, ..., S A_m S^-1)."""
    if S.shape != (T.n, T.n):
        raise ShapeMismatch(f"conjugator must be {T.n}x{T.n}")
    Si = inverse(S)
    return CommutingTuple._trusted([S @ A @ Si for A in T])
