"""Exact linear algebra over Fraction for small dense matrices.

Everything here operates on lists of lists of Fraction (rows). Matrices are
tiny (at most a handful of rows/columns), so Gaussian elimination with exact
pivoting is the right tool; no attempt is made to be fast on large inputs.
"""

from fractions import Fraction
from math import gcd


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced rows, pivot column indices). Input is not mutated.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def nullspace(rows, ncols):
    """Basis of the right nullspace {x : rows @ x = 0}.

    `rows` may be empty, in which case the standard basis of Q^ncols is
    returned. Basis vectors are Fractions; one per free column.
    """
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def primitive_integer_vector(vec):
    """Scale a rational vector to a primitive integer vector (gcd 1).

    Sign is normalized so the first nonzero entry is positive.
    """
    fracs = [Fraction(x) for x in vec]
    denom_lcm = 1
    for f in fracs:
        d = f.denominator
        denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
    ints = [int(f * denom_lcm) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    lead = next((v for v in ints if v != 0), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return ints


def integer_nullspace(rows, ncols):
    """Nullspace basis scaled to primitive integer vectors."""
    return [primitive_integer_vector(v) for v in nullspace(rows, ncols)]


def left_integer_kernel(rows):
    """Primitive integer basis of {c : c @ rows = 0}."""
    if not rows:
        return []
    ncols = len(rows)
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]
    return integer_nullspace(transposed, ncols)
