"""Induced modules along (pseudo) parabolic subalgebras and primitive-vector searches.

Every module built here is a quotient-free "triangular" module
``U(A_-) (x) C_lambda``: the ambient loop algebra is split into lowering
elements ``A_-``, a diagonal part ``A_0`` (degree-zero Cartan, ``c``, ``d``) and
raising elements ``A_+``.  ``A_+`` kills the highest weight vector and ``A_0``
acts on it by scalars.  The lowering part is itself split into the opposite
nilradical (plus, in pseudo mode, the negative half of the Heisenberg
complement) and the negative part of the Levi factor; PBW monomials list the
former first, so a monomial reads ``(nilradical word) (x) (Levi word) v``,
which is exactly ``U(N^-) (x) V`` with ``V`` the Levi Verma module.

Vectors are sparse dicts ``{(summand, word): Fraction}``.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .lie_structure import LoopAlgebra, chevalley_constants
from .parabolic import component_coroots, heisenberg_complement
from .root_core import FiniteTypeLabel, enumerate_roots

NMINUS, LMINUS, ZERO, LPLUS, NPLUS = "nminus", "lminus", "zero", "lplus", "nplus"
PSEUDO, HEISENBERG = "pseudo", "heisenberg"
LOWERING = (NMINUS, LMINUS)


class EngineError(ValueError):
    pass


def _add(target, key, coef):
    nv = target.get(key, 0) + coef
    if nv:
        target[key] = nv
    else:
        target.pop(key, None)


# -- triangular split of the ambient algebra --------------------------------------

class Triangular:
    """Role assignment for basis elements of an untwisted loop algebra.

    ``mode`` is ``"pseudo"`` (Heisenberg complement split across the
    nilradical sides) or ``"heisenberg"`` (complement kept with the Levi, the
    full parabolic shape).
    """

    def __init__(self, pseudo, mode=PSEUDO):
        if mode not in (PSEUDO, HEISENBERG):
            raise EngineError(f"unknown mode {mode!r}")
        P = pseudo.parabolic
        gcm = P.gcm
        if gcm.label.twist != 1:
            raise EngineError("induced modules need an untwisted ambient algebra")
        self.pseudo = pseudo
        self.parabolic = P
        self.gcm = gcm
        self.mode = mode
        owned = component_coroots(gcm, pseudo.levi, with_owner=True)
        coroots = [tuple(linalg.primitive_integer_vector(v)) for _, v in owned]
        complement = list(heisenberg_complement(gcm, pseudo.levi))
        self.n_levi_cartan = len(coroots)
        self.algebra = LoopAlgebra(chevalley_constants(FiniteTypeLabel(gcm.label.series, gcm.label.rank)),
                                   coroots + complement)
        self.theta = gcm.marks[1:]
        self._component_bases = [c.basis for c in pseudo.levi.components]
        self._coroot_component = [pseudo.levi.components[k] for k, _ in owned]
        self._role = {}
        self._key = self.algebra.pbw_key
        self.order_key = lambda x: (0 if self.role(x) == NMINUS else 1, self._key(x))

    @property
    def finite_rank(self):
        return self.algebra.rank

    def affine_root(self, x):
        """Simple-root coordinates of the weight of ``x`` (``None`` for weight zero)."""
        alpha, n = self.algebra.weight(x)
        return (n,) + tuple(a + n * t for a, t in zip(alpha, self.theta))

    def role(self, x):
        r = self._role.get(x)
        if r is None:
            r = self._role[x] = self._compute_role(x)
        return r

    def _compute_role(self, x):
        if x[0] in ("c", "d"):
            return ZERO
        n = x[2]
        if x[0] == "h":
            if n == 0:
                return ZERO
            if x[1] < self.n_levi_cartan or self.mode == HEISENBERG:
                return LMINUS if n < 0 else LPLUS
            ndelta = tuple(n * m for m in self.gcm.marks)
            if self.parabolic.in_levi(ndelta):
                return NMINUS if n < 0 else NPLUS
            return NPLUS if self.parabolic.contains(ndelta) else NMINUS
        beta = self.affine_root(x)
        P = self.parabolic
        if P.in_levi(beta):
            neg = n < 0 or (n == 0 and sum(x[1]) < 0)
            return LMINUS if neg else LPLUS
        return NPLUS if P.contains(beta) else NMINUS

    def size(self, x):
        return self.algebra.size(x)

    def depth(self, x):
        """Grading of Levi lowering elements: height in the Levi component's own basis."""
        if x[0] == "h" and x[1] >= self.n_levi_cartan:
            return abs(x[2])
        beta = self.affine_root(x)
        bases = self._component_bases
        if x[0] == "h":
            bases = [self._coroot_component[x[1]].basis]
        for basis in bases:
            sol = linalg.solve([[b[i] for b in basis] for i in range(len(beta))], list(beta))
            if sol is not None and all(v.denominator == 1 for v in sol):
                return -int(sum(sol))
        raise EngineError(f"{x} does not lie in a Levi component")

    def elements(self, bound, roles, measure):
        """Basis elements with the given roles and ``1 <= measure(x) <= bound``."""
        out = []
        alg = self.algebra
        for n in range(-bound - 1, bound + 2):
            for a in alg.table.roots:
                x = ("e", a, n)
                if self.role(x) in roles and 1 <= measure(x) <= bound:
                    out.append(x)
            if n:
                for j in range(alg.rank):
                    x = ("h", j, n)
                    if self.role(x) in roles and 1 <= measure(x) <= bound:
                        out.append(x)
        return sorted(out, key=self.order_key)

    def weight(self, x):
        return self.algebra.weight(x)


# -- highest weights and modules ---------------------------------------------------

@dataclass(frozen=True)
class HighestWeightSpec:
    """Highest weight data on the adapted Cartan basis.

    ``levi_values``: values on the Levi component coroots (in the order the
    Levi components list them); ``complement_values``: values on the
    Heisenberg complement basis; ``charge``: scalar of ``c``; ``degree``:
    scalar of ``d``.
    """
    levi_values: tuple
    complement_values: tuple = ()
    charge: Fraction = Fraction(1)
    degree: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "levi_values", tuple(Fraction(v) for v in self.levi_values))
        object.__setattr__(self, "complement_values", tuple(Fraction(v) for v in self.complement_values))
        object.__setattr__(self, "charge", Fraction(self.charge))
        object.__setattr__(self, "degree", Fraction(self.degree))

    def cartan_values(self, rank):
        vals = self.levi_values + self.complement_values
        vals = vals + (Fraction(0),) * (rank - len(vals))
        if len(vals) != rank:
            raise EngineError(f"highest weight has {len(vals)} Cartan values, algebra rank is {rank}")
        return vals

    def to_dict(self):
        q = lambda x: f"{x.numerator}/{x.denominator}"
        return {"levi": [q(v) for v in self.levi_values], "complement": [q(v) for v in self.complement_values],
                "charge": q(self.charge), "degree": q(self.degree)}


def _monomials(elements, bound, measure):
    """Nondecreasing words in ``elements`` (already ordered) with total measure <= bound."""
    out = [()]

    def grow(start, word, total):
        for i in range(start, len(elements)):
            m = measure(elements[i])
            if total + m <= bound:
                w = word + (elements[i],)
                out.append(w)
                grow(i, w, total + m)

    grow(0, (), 0)
    return out


class TriangularModule:
    """Direct sum of modules ``U(A_-) (x) C_lambda_i`` with exact action."""

    def __init__(self, tri, specs):
        self.tri = tri
        self.specs = tuple(specs)
        rank = tri.finite_rank
        self._values = [s.cartan_values(rank) for s in self.specs]
        self._memo = {}

    @property
    def algebra(self):
        return self.tri.algebra

    def weight(self, word):
        """Offset from the highest weight: (finite part, delta-degree)."""
        alpha = [0] * self.tri.finite_rank
        n = 0
        for y in word:
            a, k = self.tri.weight(y)
            for i, v in enumerate(a):
                alpha[i] += v
            n += k
        return tuple(alpha), n

    def _eigen(self, summand, x, word):
        spec = self.specs[summand]
        if x[0] == "c":
            return spec.charge
        if x[0] == "d":
            return spec.degree + sum(y[2] for y in word if y[0] != "c")
        rv = self.algebra.root_values
        val = self._values[summand][x[1]]
        for y in word:
            if y[0] == "e":
                val += rv[y[1]][x[1]]
        return val

    def act(self, x, vec):
        out = {}
        for (s, w), coef in vec.items():
            for key, c in self.act_basis(x, s, w).items():
                _add(out, key, coef * c)
        return out

    def act_basis(self, x, summand, word):
        key = (x, summand, word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        role = self.tri.role(x)
        if role in LOWERING:
            res = {(summand, w): c for w, c in self._insert(x, word).items()}
        elif role == ZERO:
            val = self._eigen(summand, x, word)
            res = {(summand, word): val} if val else {}
        elif not word:
            res = {}
        else:
            # x y W' = y (x W') + [x, y] W'
            y, rest = word[0], word[1:]
            res = {}
            for (s, w), c in self.act_basis(x, summand, rest).items():
                for w2, c2 in self._insert(y, w).items():
                    _add(res, (s, w2), c * c2)
            for z, c in self.algebra.bracket(x, y).items():
                for k2, c2 in self.act_basis(z, summand, rest).items():
                    _add(res, k2, c * c2)
        self._memo[key] = res
        return res

    def _insert(self, x, word):
        """Ordered expansion of ``x * word`` inside ``U(A_-)``."""
        key = ("ins", x, word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        order = self.tri.order_key
        if not word or order(x) <= order(word[0]):
            res = {(x,) + word: Fraction(1)}
        else:
            y, rest = word[0], word[1:]
            res = {}
            for w, c in self._insert(x, rest).items():
                for w2, c2 in self._insert(y, w).items():
                    _add(res, w2, c * c2)
            for z, c in self.algebra.bracket(x, y).items():
                if self.tri.role(z) not in LOWERING:
                    raise EngineError(f"lowering part not closed: [{x}, {y}] contains {z}")
                for w2, c2 in self._insert(z, rest).items():
                    _add(res, w2, c * c2)
        self._memo[key] = res
        return res


# -- Levi Verma module V ------------------------------------------------------------

class WeightModule:
    """Verma module over the Levi factor, windowed by depth."""

    def __init__(self, tri, specs, depth_bound):
        self.tri = tri
        self.specs = tuple(specs)
        self.depth_bound = depth_bound
        self.module = TriangularModule(tri, self.specs)
        self.generators = tri.elements(depth_bound, (LMINUS,), tri.depth)
        self.words = _monomials(self.generators, depth_bound, tri.depth)

    def depth(self, word):
        return sum(self.tri.depth(y) for y in word)

    def basis(self):
        return [(s, w) for s in range(len(self.specs)) for w in self.words]

    def weight(self, key):
        return self.module.weight(key[1])

    def act(self, x, vec):
        if self.tri.role(x) in (NMINUS, NPLUS):
            raise EngineError("only Levi and diagonal elements act on the Levi module")
        return self.module.act(x, vec)

    def weights(self):
        return sorted({self.weight(b) for b in self.basis()})

    def character(self):
        """Basis-derived character ``{(summand, weight offset): dim}``."""
        return dict(Counter((s, self.module.weight(w)) for s, w in self.basis()))


def levi_verma(pseudo, spec, depth_bound, mode=PSEUDO, require_charge=True):
    """Levi Verma module(s); ``spec`` may be one HighestWeightSpec or a list (direct sum)."""
    specs = list(spec) if isinstance(spec, (list, tuple)) else [spec]
    if depth_bound < 0:
        raise EngineError("depth_bound must be >= 0")
    if require_charge and any(s.charge == 0 for s in specs):
        raise EngineError("central charge must be nonzero (c has to act injectively)")
    tri = pseudo if isinstance(pseudo, Triangular) else Triangular(pseudo, mode)
    return WeightModule(tri, specs, depth_bound)


# -- induced module -----------------------------------------------------------------

class InducedModule:
    def __init__(self, V, size_bound):
        self.V = V
        self.tri = V.tri
        self.size_bound = size_bound
        self.module = V.module
        self.generators = self.tri.elements(size_bound, (NMINUS,), self.tri.size)
        self.nwords = _monomials(self.generators, size_bound, self.tri.size)
        self._basis = [(s, nw + lw) for s in range(len(V.specs)) for nw in self.nwords for lw in V.words]

    def basis(self):
        return list(self._basis)

    def split(self, word):
        k = 0
        while k < len(word) and self.tri.role(word[k]) == NMINUS:
            k += 1
        return word[:k], word[k:]

    def size(self, word):
        return sum(self.tri.size(y) for y in self.split(word)[0])

    def weight(self, key):
        return self.module.weight(key[1])

    def act(self, x, vec):
        return self.module.act(x, vec)

    def top(self):
        """Basis of ``1 (x) V`` inside the window."""
        return [b for b in self._basis if not self.split(b[1])[0]]

    def weight_spaces(self):
        spaces = {}
        for b in self._basis:
            spaces.setdefault((b[0], self.weight(b)), []).append(b)
        return spaces

    def character(self):
        return dict(Counter((s, self.weight((s, w))) for s, w in self._basis))

    def to_dict(self):
        return {"size_bound": self.size_bound, "depth_bound": self.V.depth_bound,
                "highest_weights": [s.to_dict() for s in self.V.specs],
                "basis": [[s, format_word(w)] for s, w in self._basis]}


def induce(pseudo, V, size_bound):
    if size_bound < 1:
        raise EngineError("size bound must be >= 1")
    if V.tri.pseudo is not pseudo and V.tri.pseudo.parabolic != pseudo.parabolic:
        raise EngineError("V was built for a different pseudo parabolic subalgebra")
    if any(s.charge == 0 for s in V.specs):
        raise EngineError("central charge must be nonzero (c has to act injectively)")
    return InducedModule(V, size_bound)


def weight_dim(M, mu, summand=0):
    """Number of window basis vectors of weight offset ``mu = (finite part, degree)``."""
    mu = (tuple(mu[0]), mu[1])
    return sum(1 for b in M.basis() if b[0] == summand and M.weight(b) == mu)


def character(M):
    return M.character()


# -- product-formula character -----------------------------------------------------

def _series_product(factors, bound):
    """Expand prod (1 - e^w q^g)^(-m) over ``factors = [(w, g, m)]`` up to grade ``bound``."""
    poly = {(None, 0): 1}
    for w, g, m in factors:
        for _ in range(m):
            new = dict(poly)
            for (wt, gr), c in poly.items():
                k = 1
                while gr + k * g <= bound:
                    nw = _shift(wt, w, k)
                    new[(nw, gr + k * g)] = new.get((nw, gr + k * g), 0) + c
                    k += 1
            poly = new
    return poly


def _shift(wt, w, k):
    if wt is None:
        wt = (tuple(0 for _ in w[0]), 0)
    return tuple(a + k * b for a, b in zip(wt[0], w[0])), wt[1] + k * w[1]


def pbw_character(pseudo, V, size_bound, mode=PSEUDO):
    """``ch(V) * prod_{beta in N^-} (1 - e^beta)^(-mult)``, both factors from root data alone.

    Root spaces come from the root enumeration and multiplicity formulas, not
    from the engine's basis, so agreement with :meth:`InducedModule.character`
    is a genuine check of PBW freeness on the window.
    """
    gcm = pseudo.parabolic.gcm
    P = pseudo.parabolic
    levi = pseudo.levi
    ell = gcm.finite_rank
    theta = gcm.marks[1:]
    hdelta = sum(gcm.marks)
    bound = max(size_bound, V.depth_bound) + 2
    window = enumerate_roots(gcm, (bound + 1) * hdelta)

    def finite(beta):
        n = beta[0]
        return tuple(b - n * t for b, t in zip(beta[1:], theta)), n

    def size(beta):
        a, n = finite(beta)
        return abs(n) + abs(sum(a))

    def levi_depth(beta, comps=levi.components):
        for comp in comps:
            sol = linalg.solve([[b[i] for b in comp.basis] for i in range(len(beta))], list(beta))
            if sol is not None and all(v.denominator == 1 for v in sol):
                return -int(sum(sol))
        return None

    n_factors, l_factors = [], []
    for r in window.real:
        beta = r.coeffs
        if P.in_levi(beta):
            dep = levi_depth(beta)
            if dep is not None and 1 <= dep <= V.depth_bound:
                l_factors.append((finite(beta), dep, 1))
        elif not P.contains(beta) and 1 <= size(beta) <= size_bound:
            n_factors.append((finite(beta), size(beta), 1))
    zero = (0,) * ell
    sign = -1 if P.contains(gcm.marks) else 1
    for k in range(1, bound + 1):
        kd = (zero, sign * k)
        heis = pseudo.heis_rank(k)
        for comp in levi.components:
            dep = levi_depth(tuple(-k * m for m in gcm.marks), [comp])
            if dep <= V.depth_bound and comp.imaginary_multiplicity(k):
                l_factors.append((kd, dep, comp.imaginary_multiplicity(k)))
        if heis:
            if mode == PSEUDO and k <= size_bound:
                n_factors.append((kd, k, heis))
            elif mode == HEISENBERG and k <= V.depth_bound:
                l_factors.append((kd, k, heis))
    chV = _series_product(l_factors, V.depth_bound)
    chN = _series_product(n_factors, size_bound)
    out = Counter()
    for s in range(len(V.specs)):
        for (w1, _), c1 in chV.items():
            for (w2, _), c2 in chN.items():
                a = w1 or (zero, 0)
                b = w2 or (zero, 0)
                out[(s, (tuple(x + y for x, y in zip(a[0], b[0])), a[1] + b[1]))] += c1 * c2
    return dict(out)


# -- primitive vectors ---------------------------------------------------------------

NILRADICAL, FULL = "nilradical", "full"


@dataclass
class WindowReport:
    summand: int
    weight: tuple
    dimension: int
    kernel_dim: int
    baseline_dim: int
    kernel: list = field(repr=False)
    excess: list = field(repr=False)

    def to_dict(self):
        return {"summand": self.summand, "weight": [list(self.weight[0]), self.weight[1]],
                "dimension": self.dimension, "kernel_dim": self.kernel_dim,
                "baseline_dim": self.baseline_dim, "excess_dim": len(self.excess),
                "excess": [_vec_dict(v) for v in self.excess]}


@dataclass
class PrimitiveReport:
    mode: str
    operator_bound: int
    operators: tuple
    windows: list

    def excess_total(self):
        return sum(len(w.excess) for w in self.windows)

    def to_dict(self):
        return {"mode": self.mode, "operator_bound": self.operator_bound,
                "operators": [format_element(x) for x in self.operators],
                "windows": [w.to_dict() for w in self.windows]}


def raising_operators(tri, bound, mode=NILRADICAL):
    roles = (NPLUS,) if mode == NILRADICAL else (NPLUS, LPLUS)
    if bound < 1:
        return []
    return tri.elements(bound, roles, tri.size)


def _kernel_on(module, keys, ops):
    """Joint kernel of ``ops`` on the span of ``keys`` (vectors as dicts over keys)."""
    columns = []
    for b in keys:
        col = {}
        for x in ops:
            for target, c in module.act_basis(x, b[0], b[1]).items():
                col[(x, target)] = c
        columns.append(col)
    kernel = linalg.sparse_kernel(columns)
    return [{keys[i]: c for i, c in enumerate(v) if c} for v in kernel]


def primitives(M, operator_bound, mode=NILRADICAL):
    """Joint kernel of raising operators of size <= ``operator_bound`` on every weight window.

    ``mode="nilradical"``: the pseudo nilradical and the positive Heisenberg
    complement; baseline is ``1 (x) V``.  ``mode="full"``: Levi raising
    elements are added; baseline is ``1 (x) v_lambda``.
    Works for both :class:`InducedModule` and :class:`WeightModule`.
    """
    tri = M.tri
    ops = raising_operators(tri, operator_bound, mode)
    if isinstance(M, WeightModule) and mode == NILRADICAL:
        ops = []
    windows = []
    spaces = _weight_spaces(M)
    for (s, wt) in sorted(spaces):
        keys = spaces[(s, wt)]
        kernel = _kernel_on(M.module, keys, ops)
        base = _baseline(M, keys, mode)
        excess = _complement_in(kernel, base, keys)
        windows.append(WindowReport(s, wt, len(keys), len(kernel), len(base), kernel, excess))
    return PrimitiveReport(mode, operator_bound, tuple(ops), windows)


def _weight_spaces(M):
    spaces = {}
    for b in M.basis():
        spaces.setdefault((b[0], M.weight(b)), []).append(b)
    return spaces


def _baseline(M, keys, mode):
    if isinstance(M, InducedModule):
        if mode == NILRADICAL:
            return [{b: Fraction(1)} for b in keys if not M.split(b[1])[0]]
        return [{b: Fraction(1)} for b in keys if not b[1]]
    if mode == NILRADICAL:
        return [{b: Fraction(1)} for b in keys]
    return [{b: Fraction(1)} for b in keys if not b[1]]


def _dense(vectors, keys):
    return [[v.get(k, Fraction(0)) for k in keys] for v in vectors]


def _complement_in(kernel, base, keys):
    """Kernel vectors extending a basis of ``base`` to a basis of ``kernel``."""
    rows = _dense(base, keys)
    r = linalg.rank(rows) if rows else 0
    out = []
    for v in kernel:
        trial = rows + _dense([v], keys)
        rk = linalg.rank(trial)
        if rk > r:
            rows, r = trial, rk
            out.append(v)
    return out


PASS, INCONCLUSIVE = "PASS", "INCONCLUSIVE"


@dataclass
class ReductionVerdict:
    verdict: str
    windows_checked: int
    unmatched: list

    def to_dict(self):
        return {"verdict": self.verdict, "windows_checked": self.windows_checked,
                "unmatched": [[s, [list(w[0]), w[1]]] for s, w in self.unmatched]}


def check_reduction(M, report, v_report=None):
    """Compare the computed kernel of ``M`` with ``1 (x) (primitive part of V)``.

    In nilradical mode the expected space is all of ``1 (x) V``; in full mode it
    is ``1 (x) ker_V`` with ``ker_V`` taken from ``v_report`` (a full-mode
    report on ``M.V``).  PASS when the spaces agree on every window,
    INCONCLUSIVE when some window has kernel vectors that cannot be matched.
    """
    expected = {}
    if report.mode == FULL:
        if v_report is None:
            v_report = primitives(M.V, report.operator_bound, FULL)
        for w in v_report.windows:
            expected[(w.summand, w.weight)] = w.kernel
    unmatched = []
    for w in report.windows:
        keys = [b for b in _weight_spaces(M)[(w.summand, w.weight)]]
        if report.mode == NILRADICAL:
            exp = _baseline(M, keys, NILRADICAL)
        else:
            exp = expected.get((w.summand, w.weight), [])
        if not linalg.span_contains(_dense(w.kernel, keys), _dense(exp, keys)) and exp:
            raise EngineError(f"expected primitive vectors missing from the kernel at {w.weight}")
        if len(w.kernel) != (linalg.rank(_dense(exp, keys)) if exp else 0):
            unmatched.append((w.summand, w.weight))
    verdict = PASS if not unmatched else INCONCLUSIVE
    return ReductionVerdict(verdict, len(report.windows), unmatched)


# -- formatting ------------------------------------------------------------------------

def format_element(x):
    if x[0] == "e":
        return f"e[{','.join(str(a) for a in x[1])}]@{x[2]}"
    if x[0] == "h":
        return f"h{x[1]}@{x[2]}"
    return x[0]


def format_word(word):
    return "*".join(format_element(y) for y in word) or "1"


def _vec_dict(v):
    return {f"{s}:{format_word(w)}": f"{c.numerator}/{c.denominator}" for (s, w), c in sorted(
        v.items(), key=lambda kv: (kv[0][0], format_word(kv[0][1])))}
