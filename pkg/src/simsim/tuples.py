"""
Commuting matrix tuples, vector tuples and polynomial tuples.

A polynomial in ``m`` variables is a sparse dict mapping an exponent tuple
(a monomial) to a nonzero scalar.  A :class:`PolyVector` bundles ``k`` such
polynomials, one per generator, and :func:`evaluate` computes
``sum_j p_j(A_1, ..., A_m) u_j`` by applying matrices to vectors.
"""

import random
from itertools import combinations_with_replacement

from .errors import NotCommuting, ShapeMismatch
from .exactnum import (
    ONE, ZERO, Matrix, block_diag, determinant, format_scalar, gr, inverse,
    unit_vector, zero_vector,
)

__all__ = [
    "CommutingTuple", "VectorTuple", "PolyVector",
    "new_commuting_tuple", "evaluate", "random_commuting_tuple",
    "random_invertible_matrix", "monomials", "monomial_degree",
    "format_monomial", "standard_basis", "TermImages", "RECIPES",
]


# ---------------------------------------------------------------- monomials

def monomial_degree(alpha):
    return sum(alpha)


def monomials(m, max_degree):
    """All exponent tuples of total degree <= max_degree in graded-lex order.

    Degree ascends; within one degree, z1 > z2 > ... > zm lexicographically,
    e.g. for m = 2: 1, z1, z2, z1^2, z1*z2, z2^2.
    """
    out = []
    for d in range(max_degree + 1):
        block = []
        for combo in combinations_with_replacement(range(m), d):
            alpha = [0] * m
            for var in combo:
                alpha[var] += 1
            block.append(tuple(alpha))
        block.sort(reverse=True)
        out.extend(block)
    return out


def _grlex_key(alpha):
    return (sum(alpha), tuple(-a for a in alpha))


def _var_names(m):
    return ["z"] if m == 1 else [f"z{i + 1}" for i in range(m)]


def format_monomial(alpha):
    names = _var_names(len(alpha))
    parts = []
    for name, a in zip(names, alpha):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) if parts else "1"


def _format_poly(poly):
    if not poly:
        return "0"
    out = ""
    for alpha in sorted(poly, key=_grlex_key):
        c = poly[alpha]
        mono = format_monomial(alpha)
        neg = not c.im and c.re < 0
        mag = -c if neg else c
        if mono == "1":
            term = format_scalar(mag)
        elif mag == ONE:
            term = mono
        elif mag.im and mag.re:
            term = f"({format_scalar(mag)})*{mono}"
        else:
            term = f"{format_scalar(mag)}*{mono}"
        if not out:
            out = f"-{term}" if neg else term
        else:
            out += f" - {term}" if neg else f" + {term}"
    return out


# ---------------------------------------------------------------- types

class CommutingTuple:
    """An m-tuple of pairwise commuting n x n matrices.

    Commutativity is checked exactly when the tuple is built; a failing pair
    raises :class:`NotCommuting` naming the first offending (i, j).
    """

    __slots__ = ("matrices", "n", "m")

    def __init__(self, matrices):
        matrices = tuple(matrices)
        if not matrices:
            raise ShapeMismatch("a commuting tuple needs at least one matrix")
        n = matrices[0].rows
        if n < 1:
            raise ShapeMismatch("matrices must be at least 1x1")
        for M in matrices:
            if M.rows != n or M.cols != n:
                raise ShapeMismatch(f"expected {n}x{n} matrices, got {M.rows}x{M.cols}")
        for i in range(len(matrices)):
            for j in range(i + 1, len(matrices)):
                if matrices[i] @ matrices[j] != matrices[j] @ matrices[i]:
                    raise NotCommuting(i, j)
        self.matrices = matrices
        self.n = n
        self.m = len(matrices)

    @classmethod
    def _trusted(cls, matrices):
        obj = object.__new__(cls)
        obj.matrices = tuple(matrices)
        obj.n = obj.matrices[0].rows
        obj.m = len(obj.matrices)
        return obj

    def __getitem__(self, i):
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return self.m

    def __eq__(self, other):
        if not isinstance(other, CommutingTuple):
            return NotImplemented
        return self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def scaled(self, c):
        return CommutingTuple._trusted([c * A for A in self.matrices])

    def stacked_with(self, other):
        """The block-diagonal tuple (A_l (+) B_l) for l = 1..m."""
        if self.m != other.m:
            raise ShapeMismatch(f"tuple lengths differ: {self.m} vs {other.m}")
        return CommutingTuple._trusted(
            [block_diag(a, b) for a, b in zip(self.matrices, other.matrices)])

    def __repr__(self):
        return f"CommutingTuple(n={self.n}, m={self.m})"


def new_commuting_tuple(matrices):
    return CommutingTuple(matrices)


class VectorTuple:
    """A k-tuple of vectors in C^n (k may be 0)."""

    __slots__ = ("vectors", "n")

    def __init__(self, vectors, n=None):
        vectors = tuple(tuple(gr(x) for x in v) for v in vectors)
        if n is None:
            if not vectors:
                raise ShapeMismatch("dimension of an empty vector tuple must be given")
            n = len(vectors[0])
        if any(len(v) != n for v in vectors):
            raise ShapeMismatch(f"all vectors must have length {n}")
        self.vectors = vectors
        self.n = n

    @property
    def k(self):
        return len(self.vectors)

    def __getitem__(self, j):
        return self.vectors[j]

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, VectorTuple):
            return NotImplemented
        return self.n == other.n and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.n, self.vectors))

    def transformed(self, S):
        """The tuple (S u_1, ..., S u_k)."""
        return VectorTuple([S.apply(v) for v in self.vectors], n=S.rows)

    def appended(self, v):
        return VectorTuple(self.vectors + (tuple(v),), n=self.n)

    def stacked_with(self, other):
        if self.k != other.k:
            raise ShapeMismatch(f"tuple sizes differ: {self.k} vs {other.k}")
        return VectorTuple([u + v for u, v in zip(self.vectors, other.vectors)],
                           n=self.n + other.n)

    def __repr__(self):
        return f"VectorTuple(k={self.k}, n={self.n})"


def standard_basis(n):
    return VectorTuple([unit_vector(n, i) for i in range(n)], n=n)


class PolyVector:
    """An element (p_1, ..., p_k) of C[z_1..z_m]^k in sparse form.

    ``components[j]`` maps exponent tuples to nonzero scalars.  Zero
    coefficients are dropped on construction.
    """

    __slots__ = ("k", "m", "components")

    def __init__(self, components, m):
        comps = []
        for poly in components:
            clean = {}
            for alpha, c in poly.items():
                alpha = tuple(alpha)
                if len(alpha) != m:
                    raise ShapeMismatch(f"monomial {alpha} is not in {m} variables")
                c = gr(c)
                if c:
                    clean[alpha] = c
            comps.append(clean)
        self.components = tuple(comps)
        self.k = len(comps)
        self.m = m

    @classmethod
    def zero(cls, k, m):
        return cls([{} for _ in range(k)], m)

    @classmethod
    def term(cls, k, m, j, alpha, coeff=1):
        comps = [{} for _ in range(k)]
        comps[j][tuple(alpha)] = coeff
        return cls(comps, m)

    @classmethod
    def from_terms(cls, k, m, terms):
        """Build from an iterable of ``((alpha, j), coeff)`` pairs."""
        comps = [{} for _ in range(k)]
        for (alpha, j), c in terms:
            comps[j][alpha] = comps[j].get(alpha, ZERO) + gr(c)
        return cls(comps, m)

    def terms(self):
        """Yield ``((alpha, j), coeff)`` in graded-lex, then generator order."""
        items = [((alpha, j), c) for j, poly in enumerate(self.components)
                 for alpha, c in poly.items()]
        items.sort(key=lambda t: (_grlex_key(t[0][0]), t[0][1]))
        return items

    def is_zero(self):
        return not any(self.components)

    def degree(self):
        """Largest total degree present, or -1 for the zero tuple."""
        return max((sum(a) for p in self.components for a in p), default=-1)

    def _check(self, other):
        if self.k != other.k or self.m != other.m:
            raise ShapeMismatch("polynomial tuples of different shapes")

    def __add__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        self._check(other)
        comps = []
        for p, q in zip(self.components, other.components):
            r = dict(p)
            for a, c in q.items():
                r[a] = r.get(a, ZERO) + c
            comps.append(r)
        return PolyVector(comps, self.m)

    def __neg__(self):
        return PolyVector([{a: -c for a, c in p.items()} for p in self.components], self.m)

    def __sub__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        c = gr(c)
        return PolyVector([{a: c * x for a, x in p.items()} for p in self.components], self.m)

    __rmul__ = __mul__

    def shift(self, var):
        """Multiply every component by the variable z_var (0-based)."""
        def bump(alpha):
            return alpha[:var] + (alpha[var] + 1,) + alpha[var + 1:]
        return PolyVector([{bump(a): c for a, c in p.items()} for p in self.components],
                          self.m)

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return self.m == other.m and self.components == other.components

    def __hash__(self):
        return hash(tuple(frozenset(p.items()) for p in self.components))

    def __str__(self):
        return "(" + ", ".join(_format_poly(p) for p in self.components) + ")"

    def __repr__(self):
        return f"PolyVector{self}"


# ---------------------------------------------------------------- evaluation

class TermImages:
    """Memoised images A^alpha u_j of single terms.

    z^alpha = z_1^a_1 ... z_m^a_m acts right to left, so A^alpha u is built
    as A_l (A^(alpha - e_l) u) with l the first variable present.
    """

    def __init__(self, T, U):
        if T.n != U.n:
            raise ShapeMismatch(f"tuple acts on C^{T.n} but vectors live in C^{U.n}")
        self.T = T
        self.U = U
        self._cache = {}

    def __call__(self, alpha, j):
        key = (alpha, j)
        v = self._cache.get(key)
        if v is not None:
            return v
        l = next((i for i, a in enumerate(alpha) if a), None)
        if l is None:
            v = self.U[j]
        else:
            prev = alpha[:l] + (alpha[l] - 1,) + alpha[l + 1:]
            v = self.T[l].apply(self(prev, j))
        self._cache[key] = v
        return v


def evaluate(T, U, P, images=None):
    """Exact value of sum_j p_j(A) u_j."""
    if P.k != U.k:
        raise ShapeMismatch(f"{P.k} polynomials for {U.k} vectors")
    if P.m != T.m:
        raise ShapeMismatch(f"polynomials in {P.m} variables for a {T.m}-tuple")
    if images is None:
        images = TermImages(T, U)
    acc = list(zero_vector(T.n))
    for (alpha, j), c in P.terms():
        for i, x in enumerate(images(alpha, j)):
            if x:
                acc[i] = acc[i] + c * x
    return tuple(acc)


# ---------------------------------------------------------------- generators

RECIPES = ("poly-in-one", "block-diag", "conjugated")


def _random_int_matrix(n, rng, lo=-3, hi=3):
    return Matrix(n, n, [rng.randint(lo, hi) for _ in range(n * n)])


def random_invertible_matrix(n, rng, lo=-3, hi=3):
    """Random integer matrix with nonzero determinant (rejection sampling)."""
    while True:
        S = _random_int_matrix(n, rng, lo, hi)
        if determinant(S):
            return S


def _poly_of(M, coeffs):
    n = M.rows
    acc = Matrix.zeros(n)
    power = Matrix.identity(n)
    for c in coeffs:
        if c:
            acc = acc + c * power
        power = power @ M
    return acc


def _poly_in_one(n, m, rng):
    M = _random_int_matrix(n, rng)
    mats = []
    for _ in range(m):
        deg = rng.randint(1, 2)
        coeffs = [rng.randint(-2, 2) for _ in range(deg)] + [rng.choice([-2, -1, 1, 2])]
        mats.append(_poly_of(M, coeffs))
    return mats


def _block_diag_recipe(n, m, rng):
    if n == 1:
        return _poly_in_one(1, m, rng)
    cut = rng.randint(1, n - 1)
    left = _poly_in_one(cut, m, rng)
    right = (_block_diag_recipe if rng.random() < 0.5 else _poly_in_one)(n - cut, m, rng)
    return [block_diag(a, b) for a, b in zip(left, right)]


def random_commuting_tuple(n, m, seed=0, recipe="poly-in-one"):
    """Random commuting m-tuple of n x n matrices.

    Recipes: ``poly-in-one`` (polynomials in one random integer matrix),
    ``block-diag`` (direct sums of smaller poly-in-one blocks) and
    ``conjugated`` (either of those conjugated by a random invertible
    integer matrix).
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if recipe == "poly-in-one":
        mats = _poly_in_one(n, m, rng)
    elif recipe == "block-diag":
        mats = _block_diag_recipe(n, m, rng)
    elif recipe == "conjugated":
        base = (_poly_in_one if rng.random() < 0.5 else _block_diag_recipe)(n, m, rng)
        S = random_invertible_matrix(n, rng)
        Si = inverse(S)
        mats = [S @ A @ Si for A in base]
    else:
        raise ValueError(f"unknown recipe {recipe!r}; expected one of {RECIPES}")
    return CommutingTuple(mats)
