"""Exact rational linear algebra on small dense and sparse matrices.

Everything here works over :class:`fractions.Fraction`; no floating point.
Dense matrices are lists of rows.  Sparse vectors are ``dict`` objects mapping
a hashable key to a nonzero Fraction.
"""

from fractions import Fraction


def as_fractions(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def det(matrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num / prev if isinstance(num, Fraction) else num // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rref(matrix):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    m = as_fractions(matrix)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def nullspace(matrix, ncols=None):
    """Basis of ``{x : A x = 0}`` as a list of Fraction vectors."""
    if not matrix:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    m, pivots = rref(matrix)
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(matrix, rhs):
    """One solution of ``A x = b`` (free variables zero), or None."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    m, pivots = rref(aug)
    n = len(matrix[0])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(m, pivots):
        x[pc] = row[n]
    return x


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def inverse(matrix):
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in m]


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector with positive leading entry."""
    from math import gcd
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


# -- sparse elimination ---------------------------------------------------

def _cost(x):
    return x.denominator + abs(x.numerator)


def sparse_kernel(columns):
    """Kernel of the linear map whose j-th column is the sparse vector ``columns[j]``.

    Returns a list of dense coefficient vectors ``c`` (length ``len(columns)``)
    with ``sum_j c[j] * columns[j] == 0``, forming a basis of the kernel.
    Pivots are chosen greedily by smallest numerator+denominator to keep
    entry growth down.
    """
    n = len(columns)
    # Each working entry is (sparse image, sparse combination of original columns).
    work = [(dict(col), {j: Fraction(1)}) for j, col in enumerate(columns)]
    reduced = []
    kernel = []
    while work:
        image, combo = work.pop()
        for key, pivot_image, pivot_combo in reduced:
            coef = image.get(key)
            if coef:
                _axpy(image, -coef, pivot_image)
                _axpy(combo, -coef, pivot_combo)
        if not image:
            kernel.append(combo)
            continue
        key = min(image, key=lambda k: (_cost(image[k]), repr(k)))
        p = image[key]
        image = {k: v / p for k, v in image.items()}
        combo = {k: v / p for k, v in combo.items()}
        # keep earlier pivots fully reduced against the new one
        for idx, (k2, im2, co2) in enumerate(reduced):
            coef = im2.get(key)
            if coef:
                _axpy(im2, -coef, image)
                _axpy(co2, -coef, combo)
        reduced.append((key, image, combo))
    out = []
    for combo in kernel:
        v = [Fraction(0)] * n
        for j, c in combo.items():
            v[j] = c
        out.append(v)
    return _echelon(out)


def _axpy(target, a, source):
    for k, v in source.items():
        nv = target.get(k, 0) + a * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _echelon(vectors):
    """Canonical reduced basis of the span (deterministic output)."""
    if not vectors:
        return []
    m, _ = rref(vectors)
    return [row for row in m if any(row)]


def span_contains(basis, vectors):
    """True if every vector lies in the span of ``basis``."""
    r = rank(basis) if basis else 0
    for v in vectors:
        if rank(list(basis) + [v]) != r:
            return False
    return True


def same_span(a, b):
    ra = rank(a) if a else 0
    rb = rank(b) if b else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(list(a) + list(b)) == ra
