from simsim import CommutingTuple, Matrix
from simsim.norms import shift_matrix


def shift(n, scale=1):
    return CommutingTuple([shift_matrix(n, scale)])


def diag_tuple(*diagonals):
    return CommutingTuple([Matrix.diag(d) for d in diagonals])


def same_span(vectors_a, vectors_b):
    from simsim.exactnum import rank
    def r(vs):
        return rank(Matrix.from_rows(vs)) if vs else 0
    return r(list(vectors_a)) == r(list(vectors_b)) == r(list(vectors_a) + list(vectors_b))
