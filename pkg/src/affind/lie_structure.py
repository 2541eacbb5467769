"""Exact structure constants for untwisted affine algebras and PBW straightening.

The finite algebra is realized by explicit rational matrices (types A, B, C, D);
Chevalley constants, coroot expansions and the invariant form are read off the
matrices once and the matrices are then discarded.  The affine algebra is the
loop algebra ``g[t, 1/t] + C c + C d``.

Basis elements are plain tuples::

    ("e", alpha, n)   root vector x_alpha * t^n   (alpha a finite root, tuple)
    ("h", j, n)       j-th Cartan basis vector * t^n
    ("c",)            central element
    ("d",)            degree derivation
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .root_core import FiniteTypeLabel, _symmetrizer, finite_cartan, finite_roots

C = ("c",)
D = ("d",)


class CapabilityError(NotImplementedError):
    """Requested algebra is outside what the structure tables support."""


# -- matrix realizations -----------------------------------------------------------

def _unit(size, i, j, coef=1):
    m = {}
    m[(i, j)] = Fraction(coef)
    return m


def _mat_add(a, b, scale=1):
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + scale * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _mat_mul(a, b):
    out = {}
    rows = {}
    for (k, j), v in b.items():
        rows.setdefault(k, []).append((j, v))
    for (i, k), u in a.items():
        for j, v in rows.get(k, ()):
            nv = out.get((i, j), 0) + u * v
            if nv:
                out[(i, j)] = nv
            else:
                out.pop((i, j), None)
    return out


def _commutator(a, b):
    return _mat_add(_mat_mul(a, b), _mat_mul(b, a), -1)


def _transpose(a):
    return {(j, i): v for (i, j), v in a.items()}


def _scale(a, s):
    return {k: s * v for k, v in a.items()} if s else {}


def _simple_raising(series, n):
    """Simple root vectors ``e_i`` as sparse matrices (Bourbaki numbering, 0-based)."""
    e = []
    if series == "A":
        return [_unit(n + 1, i, i + 1) for i in range(n)]
    for i in range(n - 1):
        e.append(_mat_add(_unit(0, i, i + 1), _unit(0, n + i + 1, n + i), -1))
    if series == "B":
        e.append(_mat_add(_unit(0, n - 1, 2 * n), _unit(0, 2 * n, 2 * n - 1), -1))
    elif series == "C":
        e.append(_unit(0, n - 1, 2 * n - 1))
    elif series == "D":
        e.append(_mat_add(_unit(0, n - 2, 2 * n - 1), _unit(0, n - 1, 2 * n - 2), -1))
    return e


def _ratio(a, b):
    """Scalar s with a == s * b (b nonzero), or None."""
    if not b:
        raise ValueError("zero matrix")
    key = next(iter(b))
    s = a.get(key, Fraction(0)) / b[key]
    if _mat_add(a, b, -s):
        return None
    return s


# -- structure table ---------------------------------------------------------------

@dataclass(frozen=True)
class StructureTable:
    """Chevalley data of a finite simple Lie algebra.

    ``constants[(a, b)]`` is ``N_{a,b}`` with ``[x_a, x_b] = N_{a,b} x_{a+b}``;
    ``coroots[a]`` expands ``[x_a, x_{-a}]`` in simple coroots;
    ``root_form[a] = (x_a | x_{-a})`` and ``coroot_form`` is the Gram matrix of
    the simple coroots.  Long roots have squared length 2.
    """
    label: FiniteTypeLabel
    cartan: tuple
    roots: tuple
    constants: dict = field(compare=False)
    coroots: dict = field(compare=False)
    root_form: dict = field(compare=False)
    coroot_form: tuple = ()

    @property
    def rank(self):
        return len(self.cartan)

    @property
    def positive_roots(self):
        return tuple(r for r in self.roots if sum(r) > 0)

    def root_value(self, alpha, i):
        """``alpha(h_i)`` for the simple coroot ``h_i``."""
        return sum(alpha[j] * self.cartan[i][j] for j in range(self.rank))

    def is_root(self, alpha):
        return alpha in self._root_set

    @property
    def _root_set(self):
        return frozenset(self.roots)

    def to_text(self):
        """Line-oriented export for cross-checking against other software.

        ``N a b value`` for every nonzero constant, ``coroot a h_1,..`` and
        ``form a value`` for each root, then ``gram i j value`` for coroots.
        """
        fmt = lambda v: ",".join(str(x) for x in v)
        lines = [f"# structure {self.label}"]
        for (a, b), v in sorted(self.constants.items()):
            lines.append(f"N {fmt(a)} {fmt(b)} {v}")
        for a in self.roots:
            lines.append(f"coroot {fmt(a)} {fmt(self.coroots[a])}")
        for a in self.roots:
            lines.append(f"form {fmt(a)} {self.root_form[a]}")
        for i, row in enumerate(self.coroot_form):
            for j, v in enumerate(row):
                lines.append(f"gram {i} {j} {v}")
        return "\n".join(lines) + "\n"


def _extraspecial_order(roots, positive):
    """For each non-simple positive root, its decomposition (simple index, rest).

    The simple summand is the lowest-index simple root ``alpha_i`` with
    ``xi - alpha_i`` a root.
    """
    rset = set(roots)
    out = {}
    n = len(positive[0])
    for xi in positive:
        if sum(xi) == 1:
            continue
        for i in range(n):
            rest = tuple(x - int(i == k) for k, x in enumerate(xi))
            if rest in rset:
                out[xi] = (i, rest)
                break
    return out


@lru_cache(maxsize=None)
def chevalley_constants(label):
    """Structure table for finite type ``label`` (``FiniteTypeLabel`` or ``"A2"``)."""
    if isinstance(label, str):
        label = FiniteTypeLabel(label[0], int(label[1:]))
    series, n = label.series, label.rank
    if series not in "ABCD":
        raise CapabilityError(f"structure constants are implemented for types A-D only, not {label}")
    if n < 1 or (series in "BC" and n < 2) or (series == "D" and n < 3):
        raise CapabilityError(f"unsupported finite type {label}")
    cartan = finite_cartan(series, n)
    roots = tuple(finite_roots(cartan))
    positive = [r for r in roots if sum(r) > 0]
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]

    e = {}
    for i, m in enumerate(_simple_raising(series, n)):
        e[simple[i]] = m
    rset = set(roots)
    for xi, (i, rest) in sorted(_extraspecial_order(roots, positive).items(), key=lambda kv: sum(kv[0])):
        p = 0
        while tuple(r - (p + 1) * int(k == i) for k, r in enumerate(rest)) in rset:
            p += 1
        e[xi] = _scale(_commutator(e[simple[i]], e[rest]), Fraction(1, p + 1))

    # lowering partners with [e_a, f_a] = h_a and [h_a, e_a] = 2 e_a
    f, h = {}, {}
    for a in positive:
        ft = _transpose(e[a])
        hp = _commutator(e[a], ft)
        s = Fraction(2) / _ratio(_commutator(hp, e[a]), e[a])
        f[a] = _scale(ft, s)
        h[a] = _scale(hp, s)
    x = dict(e)
    for a in positive:
        x[tuple(-c for c in a)] = f[a]

    # coordinates of Cartan matrices in the simple coroot basis
    hs = [h[s] for s in simple]
    keys = sorted({k for m in hs for k in m})
    basis_cols = [[m.get(k, Fraction(0)) for m in hs] for k in keys]

    def coroot_coords(m):
        sol = linalg.solve(basis_cols, [m.get(k, Fraction(0)) for k in keys])
        if sol is None or any(k not in keys for k in m):
            raise AssertionError("commutator outside the Cartan subalgebra")
        return tuple(sol)

    for i in range(n):
        for j in range(n):
            val = _ratio(_commutator(hs[i], e[simple[j]]), e[simple[j]])
            if val != cartan[i][j]:
                raise AssertionError(f"realization of {label} does not reproduce its Cartan matrix")

    constants = {}
    for a in roots:
        for b in roots:
            s = tuple(u + v for u, v in zip(a, b))
            if s in rset:
                val = _ratio(_commutator(x[a], x[b]), x[s])
                if val is None:
                    raise AssertionError("bracket is not proportional to a root vector")
                constants[(a, b)] = val
    coroots = {}
    for a in roots:
        coroots[a] = coroot_coords(_commutator(x[a], x[tuple(-c for c in a)]))

    d = _symmetrizer(cartan)
    norm = {}
    for a in roots:
        norm[a] = sum(a[i] * d[i] * cartan[i][j] * a[j] for i in range(n) for j in range(n))
    root_form = {a: Fraction(2) / norm[a] for a in roots}
    gram = tuple(tuple(Fraction(cartan[i][j]) / d[j] for j in range(n)) for i in range(n))
    return StructureTable(label, cartan, roots, constants, coroots, root_form, gram)


# -- loop algebra -----------------------------------------------------------------

def _add(target, key, coef):
    nv = target.get(key, 0) + coef
    if nv:
        target[key] = nv
    else:
        target.pop(key, None)


class LoopAlgebra:
    """Untwisted affine algebra ``g[t, 1/t] + C c + C d`` over a structure table.

    ``cartan_basis`` lists the Cartan basis vectors as rows in simple-coroot
    coordinates (default: the simple coroots themselves).
    """

    def __init__(self, table, cartan_basis=None):
        self.table = table
        n = table.rank
        if cartan_basis is None:
            cartan_basis = [[int(i == j) for j in range(n)] for i in range(n)]
        self.cartan_basis = tuple(tuple(Fraction(x) for x in row) for row in cartan_basis)
        if linalg.rank([list(r) for r in self.cartan_basis]) != n or len(self.cartan_basis) != n:
            raise ValueError("cartan_basis must be a basis of the Cartan subalgebra")
        b = [list(r) for r in self.cartan_basis]
        self._to_basis = linalg.inverse(b)  # row vector v (coroots) -> v @ inverse = basis coords
        g = table.coroot_form
        self.cartan_form = tuple(
            tuple(sum(b[i][k] * g[k][l] * b[j][l] for k in range(n) for l in range(n)) for j in range(n))
            for i in range(n))
        self.root_values = {
            a: tuple(sum(b[j][k] * table.root_value(a, k) for k in range(n)) for j in range(n))
            for a in table.roots}
        self.coroots = {}
        for a in table.roots:
            v = table.coroots[a]
            self.coroots[a] = tuple(sum(v[k] * self._to_basis[k][j] for k in range(n)) for j in range(n))
        self._cache = {}

    @property
    def rank(self):
        return self.table.rank

    def coxeter(self):
        return 1 + max(sum(a) for a in self.table.roots)

    def weight(self, x):
        """(finite part, delta-degree)."""
        zero = (0,) * self.rank
        if x[0] == "e":
            return x[1], x[2]
        if x[0] == "h":
            return zero, x[2]
        return zero, 0

    def size(self, x):
        if x[0] == "e":
            return abs(x[2]) + abs(sum(x[1]))
        if x[0] == "h":
            return abs(x[2])
        return 0

    def height(self, x):
        alpha, n = self.weight(x)
        return sum(alpha) + n * self.coxeter()

    def basis(self, degree_bound):
        out = []
        for n in range(-degree_bound, degree_bound + 1):
            out.extend(("e", a, n) for a in self.table.roots)
            out.extend(("h", j, n) for j in range(self.rank))
        out.extend([C, D])
        return out

    def bracket(self, x, y):
        key = (x, y)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._bracket(x, y)
            self._cache[key] = hit
        return hit

    def _bracket(self, x, y):
        tx, ty = x[0], y[0]
        if tx == "c" or ty == "c":
            return {}
        if tx == "d":
            if ty == "d":
                return {}
            return {y: Fraction(y[2])} if y[2] else {}
        if ty == "d":
            return {x: Fraction(-x[2])} if x[2] else {}
        m, n = x[2], y[2]
        out = {}
        if tx == "h" and ty == "h":
            if m + n == 0 and m:
                _add(out, C, m * self.cartan_form[x[1]][y[1]])
            return out
        if tx == "h":
            v = self.root_values[y[1]][x[1]]
            if v:
                out[("e", y[1], m + n)] = Fraction(v)
            return out
        if ty == "h":
            v = self.root_values[x[1]][y[1]]
            if v:
                out[("e", x[1], m + n)] = Fraction(-v)
            return out
        a, b = x[1], y[1]
        s = tuple(u + w for u, w in zip(a, b))
        if not any(s):
            for j, v in enumerate(self.coroots[a]):
                if v:
                    out[("h", j, m + n)] = v
            if m + n == 0 and m:
                _add(out, C, m * self.table.root_form[a])
            return out
        val = self.table.constants.get((a, b))
        if val:
            out[("e", s, m + n)] = val
        return out

    def bracket_vec(self, u, v):
        """Bracket of two sparse combinations."""
        out = {}
        for x, a in u.items():
            for y, b in v.items():
                for z, c in self.bracket(x, y).items():
                    _add(out, z, a * b * c)
        return out

    def pbw_key(self, x):
        """Total order: by height, then degree, finite root, tag; c and d last among height 0."""
        alpha, n = self.weight(x)
        tag = {"e": 0, "h": 1, "c": 2, "d": 3}[x[0]]
        idx = x[1] if x[0] == "h" else -1
        return (self.height(x), n, alpha, tag, idx)


def verify_jacobi(alg, degree_bound):
    """Violations of the Jacobi identity over basis triples with ``|degree| <= degree_bound``."""
    basis = alg.basis(degree_bound)
    bad = []
    nb = len(basis)
    for i in range(nb):
        a = basis[i]
        for j in range(i, nb):
            b = basis[j]
            ab = alg.bracket(a, b)
            for k in range(j, nb):
                c = basis[k]
                total = {}
                for z, v in ab.items():
                    for w, u in alg.bracket(z, c).items():
                        _add(total, w, v * u)
                for z, v in alg.bracket(b, c).items():
                    for w, u in alg.bracket(z, a).items():
                        _add(total, w, v * u)
                for z, v in alg.bracket(c, a).items():
                    for w, u in alg.bracket(z, b).items():
                        _add(total, w, v * u)
                if total:
                    bad.append((a, b, c, total))
    return bad


def verify_antisymmetry(alg, degree_bound):
    basis = alg.basis(degree_bound)
    bad = []
    for a in basis:
        for b in basis:
            ab = alg.bracket(a, b)
            ba = alg.bracket(b, a)
            if any(ab.get(k, 0) + ba.get(k, 0) for k in set(ab) | set(ba)):
                bad.append((a, b))
    return bad


# -- PBW straightening ------------------------------------------------------------

def straighten(word, bracket, key):
    """Rewrite a product of basis elements into ordered PBW monomials.

    ``bracket(x, y)`` returns a sparse combination; ``key`` orders the basis.
    Returns ``{monomial tuple: Fraction}`` with every monomial nondecreasing.
    """
    return straighten_sum({tuple(word): Fraction(1)}, bracket, key)


def straighten_sum(element, bracket, key):
    pending = dict(element)
    done = {}
    while pending:
        w, coef = pending.popitem()
        for i in range(len(w) - 1):
            if key(w[i]) > key(w[i + 1]):
                break
        else:
            _add(done, w, coef)
            continue
        swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
        _add(pending, swapped, coef)
        for z, c in bracket(w[i], w[i + 1]).items():
            _add(pending, w[:i] + (z,) + w[i + 2:], coef * c)
    return done


def uea_multiply(u, v, bracket, key):
    prod = {}
    for a, x in u.items():
        for b, y in v.items():
            _add(prod, a + b, x * y)
    return straighten_sum(prod, bracket, key)
