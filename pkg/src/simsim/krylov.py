"""
Krylov closures of vector tuples under commuting matrix tuples.

The generated subspace L_U = {sum_j p_j(A) u_j} is built layer by layer:
layer 0 holds the generators, layer d+1 the images A_l v of the vectors that
entered the basis in layer d.  The first layer adding nothing ends the loop,
since the span is then invariant under every A_l.
"""

import random
from dataclasses import dataclass, field

from .errors import ShapeMismatch
from .exactnum import EchelonForm, unit_vector
from .tuples import VectorTuple

__all__ = [
    "SubspaceBasis", "generated_subspace", "is_cyclic",
    "find_cyclic_tuple", "min_cyclic_k_estimate", "random_vector",
]


@dataclass(frozen=True)
class SubspaceBasis:
    """Basis of a generated subspace with per-vector provenance.

    ``provenance[t] == (alpha, j)`` means ``basis[t] == A^alpha u_j``.
    ``rounds`` counts enlarging layers after layer 0.
    """

    n: int
    basis: tuple
    provenance: tuple
    rounds: int
    _echelon: EchelonForm = field(repr=False, compare=False)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def top_degree(self):
        """Largest total degree among the provenance monomials (-1 if empty)."""
        return max((sum(alpha) for alpha, _ in self.provenance), default=-1)

    def contains(self, v):
        return self._echelon.contains(v)


def generated_subspace(T, U):
    if T.n != U.n:
        raise ShapeMismatch(f"tuple acts on C^{T.n} but vectors live in C^{U.n}")
    ech = EchelonForm(T.n)
    basis, prov = [], []
    zero_alpha = (0,) * T.m

    layer = []
    for j, u in enumerate(U):
        if ech.add(u):
            basis.append(u)
            prov.append((zero_alpha, j))
            layer.append(len(basis) - 1)

    rounds = 0
    while layer:
        fresh = []
        for t in layer:
            v = basis[t]
            alpha, j = prov[t]
            for l, A in enumerate(T):
                w = A.apply(v)
                if ech.add(w):
                    basis.append(w)
                    prov.append((alpha[:l] + (alpha[l] + 1,) + alpha[l + 1:], j))
                    fresh.append(len(basis) - 1)
        if fresh:
            rounds += 1
        layer = fresh
    return SubspaceBasis(T.n, tuple(basis), tuple(prov), rounds, ech)


def is_cyclic(T, U):
    return generated_subspace(T, U).dim == T.n


def random_vector(n, rng, bound=10):
    return tuple(rng.randint(-bound, bound) for _ in range(n))


def _random_tuple(n, k, rng, bound):
    return VectorTuple([random_vector(n, rng, bound) for _ in range(k)], n=n)


def find_cyclic_tuple(T, strategy="greedy", seed=0, trials=1, bound=10):
    """A cyclic vector tuple for ``T``.

    ``greedy`` appends the first standard basis vector outside the current
    closure until the closure is everything.  ``random`` draws ``trials``
    integer tuples with entries in [-bound, bound] for each k = 1, 2, ...
    and returns the first cyclic one; if every draw up to k = n fails it
    falls back to the greedy tuple.
    """
    n = T.n
    if strategy == "greedy":
        U = VectorTuple([], n=n)
        L = generated_subspace(T, U)
        for i in range(n):
            if L.dim == n:
                break
            e = unit_vector(n, i)
            if not L.contains(e):
                U = U.appended(e)
                L = generated_subspace(T, U)
        return U
    if strategy == "random":
        rng = random.Random(seed)
        for k in range(1, n + 1):
            for _ in range(trials):
                U = _random_tuple(n, k, rng, bound)
                if is_cyclic(T, U):
                    return U
        return find_cyclic_tuple(T, "greedy")
    raise ValueError(f"unknown strategy {strategy!r}")


def min_cyclic_k_estimate(T, trials=10, seed=0, bound=10):
    """Smallest k for which one of ``trials`` random k-tuples is cyclic.

    One-sided: the true minimum can only be smaller.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    for k in range(1, T.n + 1):
        for _ in range(trials):
            if is_cyclic(T, _random_tuple(T.n, k, rng, bound)):
                return k
    return T.n
