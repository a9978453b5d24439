"""
Annihilators of (tuple, vector-tuple) pairs and the stacked-tuple test for
their equality.

Deciding whether {P : sum p_j(A) u_j = 0} equals {P : sum p_j(B) v_j = 0}
reduces to three closure dimensions.  With C_l = A_l (+) B_l and
w_j = (u_j ; v_j), evaluation of P against (C, W) is the pair of the two
side evaluations, so the annihilator of (C, W) is the intersection of the
two side annihilators.  L_W projects onto L_U and L_V, and both projections
are injective exactly when the intersection equals each side.  Hence the
annihilators agree iff dim L_W == dim L_U == dim L_V.
"""

from dataclasses import dataclass, field
from typing import Optional

from .errors import ShapeMismatch
from .exactnum import ONE, ZERO, _rref_rows
from .krylov import SubspaceBasis, generated_subspace
from .tuples import PolyVector, TermImages, evaluate, monomials

__all__ = [
    "ConditionC", "condition_c_check", "annihilator_basis", "is_annihilating",
    "lowest_term_kernel",
]


@dataclass(frozen=True)
class ConditionC:
    holds: bool
    dims: tuple
    witness: Optional[PolyVector] = None
    stacked: Optional[SubspaceBasis] = field(default=None, repr=False, compare=False)


def _check_pair(TA, U, TB, V):
    if TA.m != TB.m:
        raise ShapeMismatch(f"tuple lengths differ: {TA.m} vs {TB.m}")
    if U.k != V.k:
        raise ShapeMismatch(f"vector tuple sizes differ: {U.k} vs {V.k}")
    if TA.n != U.n or TB.n != V.n:
        raise ShapeMismatch("vector tuple dimension does not match its matrix tuple")


def condition_c_check(TA, U, TB, V):
    """Decide whether the annihilators of (TA, U) and (TB, V) coincide.

    On failure, ``witness`` annihilates exactly one of the two sides.
    """
    _check_pair(TA, U, TB, V)
    LA = generated_subspace(TA, U)
    LB = generated_subspace(TB, V)
    LC = generated_subspace(TA.stacked_with(TB), U.stacked_with(V))
    dims = (LA.dim, LB.dim, LC.dim)
    if LA.dim == LB.dim == LC.dim:
        return ConditionC(True, dims, None, LC)
    witness = _find_witness(TA, U, TB, V, LC.top_degree + 1)
    return ConditionC(False, dims, witness, LC)


def _terms(m, k, degree):
    return [(alpha, j) for alpha in monomials(m, degree) for j in range(k)]


def lowest_term_kernel(columns):
    """Kernel of the matrix with the given columns, in lowest-term form.

    Each returned coefficient vector has coefficient 1 on its lowest nonzero
    position, zero on the lowest positions of the others, and the vectors
    come in ascending order of that position.  Computed as the RREF kernel
    of the column-reversed matrix.  Yields lazily.
    """
    ncols = len(columns)
    if ncols == 0:
        return
    nrows = len(columns[0])
    rev = columns[::-1]
    rows = [[rev[c][i] for c in range(ncols)] for i in range(nrows)]
    pivots = _rref_rows(rows, ncols)
    pivot_set = set(pivots)
    for f in range(ncols - 1, -1, -1):
        if f in pivot_set:
            continue
        coeffs = {ncols - 1 - f: ONE}
        for i, p in enumerate(pivots):
            if p > f:
                break
            x = rows[i][f]
            if x:
                coeffs[ncols - 1 - p] = -x
        yield coeffs


def _combine(cols, coeffs, n):
    acc = [ZERO] * n
    for t, c in coeffs.items():
        for i, x in enumerate(cols[t]):
            if x:
                acc[i] = acc[i] + c * x
    return acc


def _find_witness(TA, U, TB, V, degree):
    # A separating tuple exists at total degree <= top stacked degree + 1:
    # both side annihilators are generated by their elements of that degree.
    terms = _terms(TA.m, U.k, degree)
    imgA, imgB = TermImages(TA, U), TermImages(TB, V)
    colsA = [imgA(alpha, j) for alpha, j in terms]
    colsB = [imgB(alpha, j) for alpha, j in terms]
    rankA = _rank_of_columns(colsA, TA.n)
    rankB = _rank_of_columns(colsB, TB.n)
    sides = [(colsA, colsB, TB.n), (colsB, colsA, TA.n)]
    if len(terms) - rankB > len(terms) - rankA:
        sides.reverse()
    for own, other, n_other in sides:
        for coeffs in lowest_term_kernel(own):
            if any(_combine(other, coeffs, n_other)):
                return PolyVector.from_terms(
                    U.k, TA.m, ((terms[t], c) for t, c in coeffs.items()))
    raise AssertionError("closure dimensions differ but no separating tuple found")


def _rank_of_columns(cols, n):
    if not cols:
        return 0
    rows = [[c[i] for c in cols] for i in range(n)]
    return len(_rref_rows(rows, len(cols)))


def annihilator_basis(T, U, max_degree):
    """Basis of the annihilating polynomial tuples of total degree <= max_degree.

    Elements are in lowest-term form (see :func:`lowest_term_kernel`) over
    the columns (monomial, generator) in graded-lex order.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    if T.n != U.n:
        raise ShapeMismatch(f"tuple acts on C^{T.n} but vectors live in C^{U.n}")
    terms = _terms(T.m, U.k, max_degree)
    images = TermImages(T, U)
    cols = [images(alpha, j) for alpha, j in terms]
    return [PolyVector.from_terms(U.k, T.m, ((terms[t], c) for t, c in coeffs.items()))
            for coeffs in lowest_term_kernel(cols)]


def is_annihilating(T, U, P):
    return not any(evaluate(T, U, P))
