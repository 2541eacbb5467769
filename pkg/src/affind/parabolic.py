"""Parabolic subsets of affine root systems encoded by oriented flags.

A flag is an ordered list of rational covectors ``h_1..h_k`` on the root
lattice.  A root ``beta`` belongs to the parabolic subset when the first
nonzero value among ``h_1(beta), ..., h_k(beta)`` is positive, or when all of
them vanish (the Levi part ``P^0``).  Subsets are never materialised: every
set-level statement is checked on a finite :class:`~affind.root_core.RootSet`.
"""

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from . import linalg
from .root_core import (
    AffineTypeLabel, FiniteTypeLabel, Root, affine_gcm, bilinear_form,
    catalog_labels, enumerate_roots, finite_admissible, finite_cartan,
    imaginary_degree, imaginary_multiplicity, is_root,
)

PARTITION, TYPE_IA, TYPE_IB, TYPE_II = "Partition", "TypeIa", "TypeIb", "TypeII"


class ParabolicError(ValueError):
    pass


class InsufficientWindow(ParabolicError):
    def __init__(self, required):
        super().__init__(f"insufficient window: need a root window of height bound >= {required}")
        self.required = required


class RecognitionError(ParabolicError):
    def __init__(self, matrix):
        super().__init__(f"no catalog match for Cartan matrix {matrix}")
        self.matrix = matrix


# -- flags -----------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*m(\d+)\s*")


def parse_functional(text, size):
    """Parse ``"m2-m0"`` or ``"3/2*m1 - m0"`` into a covector of length ``size``.

    ``m_i`` is the coefficient of ``alpha_i``.  Errors report the character
    offset where parsing stopped.
    """
    vec = [Fraction(0)] * size
    pos = 0
    first = True
    text = text.rstrip()
    if not text.strip():
        raise ParabolicError("empty functional")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or (not first and m.group(1) is None):
            raise ParabolicError(f"cannot parse functional {text!r} at position {pos}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coef = -coef
        idx = int(m.group(3))
        if idx >= size:
            raise ParabolicError(f"node m{idx} out of range at position {m.start(3)}")
        vec[idx] += coef
        pos = m.end()
        first = False
    return tuple(vec)


def format_functional(vec):
    parts = []
    for i, c in enumerate(vec):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = f"m{i}" if a == 1 else f"{a}*m{i}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


@dataclass(frozen=True)
class Flag:
    gcm: object
    functionals: tuple

    def __post_init__(self):
        fs = tuple(tuple(Fraction(x) for x in h) for h in self.functionals)
        object.__setattr__(self, "functionals", fs)
        n = self.gcm.size
        if not fs:
            raise ParabolicError("a flag needs at least one functional")
        if any(len(h) != n for h in fs):
            raise ParabolicError(f"functionals must have length {n}")
        if len(fs) > n:
            raise ParabolicError(f"at most {n} functionals fit in a root span of dimension {n}")
        if linalg.rank([list(h) for h in fs]) != len(fs):
            raise ParabolicError("flag functionals are linearly dependent")

    @classmethod
    def parse(cls, gcm, text):
        parts = [p for p in re.split(r"[;,]", text)]
        return cls(gcm, tuple(parse_functional(p, gcm.size) for p in parts))

    def values(self, beta):
        return tuple(sum(h[i] * beta[i] for i in range(len(beta)) if beta[i]) for h in self.functionals)

    def to_dict(self):
        return {"type": str(self.gcm.label),
                "functionals": [[_q(x) for x in h] for h in self.functionals]}

    @classmethod
    def from_dict(cls, data):
        gcm = affine_gcm(AffineTypeLabel.parse(data["type"]))
        return cls(gcm, tuple(tuple(Fraction(x) for x in h) for h in data["functionals"]))


def _q(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ParabolicKind:
    kind: str
    s_index: int = None


# -- parabolic subsets -------------------------------------------------------------

@dataclass(frozen=True)
class ParabolicSubset:
    flag: Flag
    S: tuple = None           # node set when built by subset_from_S
    alpha0: int = None

    @property
    def gcm(self):
        return self.flag.gcm

    def contains(self, beta):
        for v in self.flag.values(beta):
            if v:
                return v > 0
        return True

    __contains__ = contains

    def in_levi(self, beta):
        return not any(self.flag.values(beta))

    def in_nilradical(self, beta):
        return self.contains(beta) and not self.in_levi(beta)

    @cached_property
    def delta_values(self):
        return self.flag.values(self.gcm.marks)

    @property
    def is_type_ii(self):
        return not any(self.delta_values)

    @cached_property
    def levi_roots_intrinsic(self):
        """Real roots of ``P^0`` when ``delta`` is not in the joint kernel (a finite set)."""
        if self.is_type_ii:
            raise ParabolicError("P^0 is infinite for type II subsets; use a window")
        return _finite_kernel_roots(self)

    def kind(self):
        return kind(self)

    def to_dict(self):
        d = self.flag.to_dict()
        if self.S is not None:
            d["S"] = list(self.S)
            d["alpha0"] = self.alpha0
        return d


def _mark_one_node(gcm):
    return next(i for i, m in enumerate(gcm.marks) if m == 1)


def _finite_kernel_roots(P):
    gcm = P.gcm
    delta = gcm.marks
    p = _mark_one_node(gcm)
    window = enumerate_roots(gcm, 4 * gcm.label.twist * sum(delta))
    classes = set()
    for r in window.real:
        b = r.coeffs
        classes.add(tuple(x - b[p] * d for x, d in zip(b, delta)))
    hd = P.delta_values
    j = next(i for i, v in enumerate(hd) if v)
    found = set()
    for c in classes:
        hv = P.flag.values(c)
        n = -hv[j] / hd[j]
        if n.denominator != 1:
            continue
        beta = tuple(x + int(n) * d for x, d in zip(c, delta))
        if P.in_levi(beta) and is_root(gcm, beta):
            found.add(beta)
    return tuple(sorted(found, key=lambda b: (sum(b), b)))


def subset_from_flag(flag):
    return ParabolicSubset(flag)


def admissible_alpha0(gcm, alpha0):
    """Whether node ``alpha0`` can play the affine node (mark 1, delta - alpha0 or its half a root)."""
    if gcm.marks[alpha0] != 1:
        return False
    v = list(gcm.marks)
    v[alpha0] -= 1
    if is_root(gcm, v):
        return True
    if all(x % 2 == 0 for x in v):
        return is_root(gcm, [x // 2 for x in v])
    return False


def admissible_alpha0_nodes(gcm):
    return [i for i in range(gcm.size) if admissible_alpha0(gcm, i)]


def subset_from_S(gcm, alpha0, S):
    """Type II parabolic subset ``P_S = S_pi u P_+`` for ``S`` a proper subset of ``pi - {alpha0}``."""
    if not admissible_alpha0(gcm, alpha0):
        raise ParabolicError(f"node {alpha0} is not an admissible affine node for {gcm.label}")
    S = tuple(sorted(set(S)))
    dot_pi = [i for i in range(gcm.size) if i != alpha0]
    if any(i not in dot_pi for i in S):
        raise ParabolicError("S must be a subset of the finite nodes")
    if len(S) == len(dot_pi):
        raise ParabolicError("S must be a proper subset of the finite nodes")
    delta = gcm.marks
    funcs = []
    for j in dot_pi:
        if j in S:
            continue
        h = [Fraction(0)] * gcm.size
        h[j] += 1
        h[alpha0] -= delta[j]
        funcs.append(tuple(h))
    return ParabolicSubset(Flag(gcm, tuple(funcs)), S, alpha0)


def kind(P):
    hd = P.delta_values
    if not any(hd):
        return ParabolicKind(TYPE_II)
    s = next(i for i, v in enumerate(hd) if v)
    if not P.levi_roots_intrinsic:
        return ParabolicKind(PARTITION, s or None)
    if s == 0:
        return ParabolicKind(TYPE_IA)
    return ParabolicKind(TYPE_IB, s)


# -- window checks -----------------------------------------------------------------

def axiom_violations(P, window):
    """Closure, ``P u -P = Delta`` and (partition case) disjointness on a window."""
    out = []
    members = [r.coeffs for r in window if P.contains(r.coeffs)]
    for r in window:
        b = r.coeffs
        neg = tuple(-x for x in b)
        if not (P.contains(b) or P.contains(neg)):
            out.append(("cover", b))
    for b, c in itertools.combinations_with_replacement(members, 2):
        s = tuple(x + y for x, y in zip(b, c))
        if any(s) and s in window and not P.contains(s):
            out.append(("closure", b, c))
    if not P.is_type_ii and not P.levi_roots_intrinsic:
        for r in window:
            if P.in_levi(r.coeffs):
                out.append(("disjoint", r.coeffs))
    return out


# -- Levi components ---------------------------------------------------------------

@dataclass(frozen=True)
class LeviComponent:
    basis: tuple            # simple roots (ambient coefficient vectors)
    label: object           # AffineTypeLabel or FiniteTypeLabel
    cartan: tuple
    null_multiple: int = None  # delta_i = null_multiple * delta for affine components

    def imaginary_multiplicity(self, k):
        if self.null_multiple is None or k % self.null_multiple:
            return 0
        return imaginary_multiplicity(affine_gcm(self.label), k // self.null_multiple)


@dataclass(frozen=True)
class LeviData:
    parabolic: ParabolicSubset
    components: tuple

    def heisenberg_complement_rank(self, k):
        if not self.parabolic.is_type_ii and self.components:
            return None
        gcm = self.parabolic.gcm
        return imaginary_multiplicity(gcm, k) - sum(c.imaginary_multiplicity(k) for c in self.components)


def required_window(P):
    gcm = P.gcm
    if P.is_type_ii:
        return gcm.label.twist * sum(gcm.marks)
    roots = P.levi_roots_intrinsic
    return max((abs(sum(b)) for b in roots), default=1)


def _positive(b):
    return all(x >= 0 for x in b)


def levi_components(P, window):
    need = required_window(P)
    if window.height_bound < need:
        raise InsufficientWindow(need)
    gcm = P.gcm
    if P.is_type_ii:
        levi = [r.coeffs for r in window if P.in_levi(r.coeffs)]
    else:
        levi = list(P.levi_roots_intrinsic)
    pos = {b for b in levi if _positive(b)}
    real_pos = sorted((b for b in pos if imaginary_degree(gcm, b) is None), key=lambda b: (sum(b), b))
    simple = []
    for b in real_pos:
        hb = sum(b)
        decomposable = False
        for g in pos:
            if sum(g) < hb:
                rest = tuple(x - y for x, y in zip(b, g))
                if rest in pos:
                    decomposable = True
                    break
        if not decomposable:
            simple.append(b)
    form = bilinear_form(gcm)
    comps = _connected(simple, lambda u, v: form(u, v) != 0)

    def support_key(comp):
        # smallest simple root inside the component, else smallest support node
        simple_nodes = [b.index(1) for b in comp if sum(b) == 1]
        first = min(simple_nodes) if simple_nodes else min(i for b in comp for i, x in enumerate(b) if x)
        return (first, comp)

    comps.sort(key=support_key)
    out = []
    for comp in comps:
        label, cartan = _recognize(comp, form)
        mult = None
        if isinstance(label, AffineTypeLabel):
            marks = linalg.primitive_integer_vector(linalg.nullspace([list(r) for r in cartan])[0])
            dvec = [sum(m * b[i] for m, b in zip(marks, comp)) for i in range(gcm.size)]
            mult = imaginary_degree(gcm, dvec)
        out.append(LeviComponent(tuple(comp), label, cartan, mult))
    return LeviData(P, tuple(out))


def _connected(nodes, adjacent, key=lambda b: (sum(b), b)):
    comps = []
    left = list(nodes)
    while left:
        stack = [left.pop(0)]
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in list(left):
                if adjacent(u, v):
                    left.remove(v)
                    stack.append(v)
        comps.append(tuple(sorted(comp, key=key)))
    return comps


def cartan_of_basis(basis, form):
    return tuple(tuple(int(Fraction(2) * form(bi, bj) / form(bi, bi)) for bj in basis) for bi in basis)


@lru_cache(maxsize=None)
def _candidates(nodes):
    out = []
    for lab in catalog_labels(max_rank=2 * nodes + 2):
        if lab.nodes == nodes:
            out.append((lab, affine_gcm(lab).matrix))
    for series in "ABCDEFG":
        # B2 = C2 and D3 = A3: keep one name for each
        if (series, nodes) in (("B", 2), ("D", 3)):
            continue
        if finite_admissible(series, nodes):
            out.append((FiniteTypeLabel(series, nodes), finite_cartan(series, nodes)))
    return out


def match_cartan(matrix):
    """Catalog label whose matrix equals ``matrix`` up to simultaneous permutation."""
    n = len(matrix)
    hits = [lab for lab, cand in _candidates(n) if _permutation_match(matrix, cand) is not None]
    if len(hits) != 1:
        raise RecognitionError(matrix)
    return hits[0]


def _permutation_match(a, b):
    """Permutation p with ``a[p[i]][p[j]] == b[i][j]``, or None."""
    n = len(a)
    sig_a = [sorted(r) for r in a]
    sig_b = [sorted(r) for r in b]
    if sorted(map(tuple, sig_a)) != sorted(map(tuple, sig_b)):
        return None
    p = []
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for cand in range(n):
            if used[cand] or sig_a[cand] != sig_b[i]:
                continue
            if all(a[cand][p[j]] == b[i][j] and a[p[j]][cand] == b[j][i] for j in range(i)):
                used[cand] = True
                p.append(cand)
                if extend(i + 1):
                    return True
                p.pop()
                used[cand] = False
        return False

    return list(p) if extend(0) else None


def _recognize(basis, form):
    cartan = cartan_of_basis(basis, form)
    return match_cartan(cartan), cartan


def recognize_type(basis_roots, window):
    """Type label of the sub-root-system with simple roots ``basis_roots``."""
    basis = [r.coeffs if isinstance(r, Root) else tuple(r) for r in basis_roots]
    return _recognize(basis, bilinear_form(window.gcm))[0]


# -- pseudo parabolic data and m_P ------------------------------------------------

@dataclass(frozen=True)
class PseudoParabolicData:
    parabolic: ParabolicSubset
    levi: LeviData
    heis_basis: tuple     # coroot-coordinate vectors spanning the complement (untwisted), else None

    def levi_real_roots(self, beta):
        return self.parabolic.in_levi(beta) and imaginary_degree(self.parabolic.gcm, beta) is None

    def nilrad_roots(self, beta):
        return self.parabolic.in_nilradical(beta)

    def root_space_dim(self, beta):
        """Dimension of the ``beta`` root space inside the pseudo parabolic subalgebra.

        Real roots keep their parabolic membership.  At ``k delta`` the Levi
        components contribute their own imaginary spaces and the Heisenberg
        complement contributes only for ``k > 0``.
        """
        gcm = self.parabolic.gcm
        k = imaginary_degree(gcm, beta)
        if k is None:
            return int(self.parabolic.contains(beta))
        if k == 0:
            raise ParabolicError("zero is not a root")
        comp = sum(c.imaginary_multiplicity(k) for c in self.levi.components)
        return comp + (self.heis_rank(k) if k > 0 else 0)

    def parabolic_space_dim(self, beta):
        """Same quantity for the parabolic subalgebra itself (all of ``k delta`` for type II)."""
        k = imaginary_degree(self.parabolic.gcm, beta)
        if k is None:
            return int(self.parabolic.contains(beta))
        return imaginary_multiplicity(self.parabolic.gcm, k)

    def heis_rank(self, k):
        return self.levi.heisenberg_complement_rank(k)

    def heis_plus(self, k):
        """Basis of the degree-``k`` piece of ``G(P)_+`` as ``(coroot vector, k)`` pairs."""
        if k <= 0:
            return []
        if self.heis_basis is None:
            raise NotImplementedError("explicit Heisenberg bases are available for untwisted types only")
        return [(v, k) for v in self.heis_basis]


def finite_part(gcm, beta):
    """Untwisted: ``beta = alpha + n delta`` -> (alpha on nodes 1..l, n)."""
    n = beta[0]
    delta = gcm.marks
    return tuple(b - n * d for b, d in zip(beta, delta))[1:], n


def component_coroots(gcm, levi, with_owner=False):
    """Independent simple coroots of the Levi components' finite parts, in coroot coordinates.

    The completing root of a component has a dependent finite part and is
    skipped.  With ``with_owner`` each vector is paired with its component index.
    """
    d = gcm.symmetrizer
    out = []
    for k, comp in enumerate(levi.components):
        for b in comp.basis:
            alpha, _ = finite_part(gcm, b)
            if not any(alpha):
                continue
            norm = sum(alpha[i] * d[i + 1] * gcm.matrix[i + 1][j + 1] * alpha[j]
                       for i in range(len(alpha)) for j in range(len(alpha))) / 2
            v = tuple(Fraction(alpha[i]) * d[i + 1] / norm for i in range(len(alpha)))
            if linalg.rank([list(w) for _, w in out] + [list(v)]) > len(out):
                out.append((k, v))
    return out if with_owner else [v for _, v in out]


def heisenberg_complement(gcm, levi):
    """Basis of ``{h in h_fin : alpha(h) = 0 for every Levi root}`` (untwisted only)."""
    rows = []
    ell = gcm.size - 1
    for comp in levi.components:
        for b in comp.basis:
            alpha, _ = finite_part(gcm, b)
            rows.append([sum(alpha[k] * gcm.matrix[j + 1][k + 1] for k in range(ell)) for j in range(ell)])
    return tuple(tuple(linalg.primitive_integer_vector(v)) for v in linalg.nullspace(rows, ncols=ell))


def pseudo_parabolic(P, form=None, window=None):
    if not P.is_type_ii:
        raise ParabolicError("pseudo parabolic subalgebras are defined for type II subsets")
    gcm = P.gcm
    if window is None:
        window = enumerate_roots(gcm, required_window(P))
    levi = levi_components(P, window)
    if not levi.components:
        raise ParabolicError("P^0 has no real roots: pseudo parabolic subalgebra undefined")
    heis = heisenberg_complement(gcm, levi) if gcm.label.twist == 1 else None
    return PseudoParabolicData(P, levi, heis)


def borel_data(P):
    """Degenerate data for a partition subset: no Levi components, the whole
    Cartan subalgebra as complement.  Inducing along it gives a Verma module."""
    if kind(P).kind != PARTITION:
        raise ParabolicError("borel_data needs a partition subset")
    gcm = P.gcm
    if gcm.label.twist != 1:
        raise ParabolicError("borel_data is implemented for untwisted types only")
    ell = gcm.size - 1
    basis = tuple(tuple(int(i == j) for j in range(ell)) for i in range(ell))
    return PseudoParabolicData(P, LeviData(P, ()), basis)


@dataclass(frozen=True)
class MPData:
    parabolic: ParabolicSubset
    s: int

    def m_roots(self, beta):
        return not any(self.parabolic.flag.values(beta)[:self.s])

    def N_roots(self, beta):
        return self.parabolic.contains(beta) and not self.m_roots(beta)

    def N_minus_roots(self, beta):
        return self.N_roots(tuple(-x for x in beta))

    def __iter__(self):
        return iter((self.m_roots, self.N_roots, self.N_minus_roots))

    def extension(self):
        """The type II parabolic subset ``m_P + N_P``."""
        flag = self.parabolic.flag
        return ParabolicSubset(Flag(flag.gcm, flag.functionals[:self.s]))


def m_p(P):
    k = kind(P)
    if k.kind != TYPE_IB:
        raise ParabolicError(f"m_P is defined for type Ib subsets, got {k.kind}")
    return MPData(P, k.s_index)


# -- type II Levi table ------------------------------------------------------------

def connected_subsets(gcm, nodes):
    nodes = list(nodes)
    out = []
    for r in range(1, len(nodes) + 1):
        for sub in itertools.combinations(nodes, r):
            comp = _connected(list(sub), lambda i, j: gcm.matrix[i][j] != 0, key=None)
            if len(comp) == 1:
                out.append(tuple(sorted(sub)))
    return out


@dataclass(frozen=True)
class LeviRow:
    ambient: AffineTypeLabel
    alpha0: int
    S: tuple
    recognized: tuple

    def to_dict(self):
        return {"type": str(self.ambient), "alpha0": self.alpha0, "S": list(self.S),
                "levi": [str(x) for x in self.recognized]}


def levi_table_rows(label):
    if isinstance(label, str):
        label = AffineTypeLabel.parse(label)
    gcm = affine_gcm(label)
    if gcm.finite_rank < 2:
        raise ParabolicError("the Levi table needs finite rank >= 2")
    window = enumerate_roots(gcm, label.twist * sum(gcm.marks))
    rows = []
    for a0 in admissible_alpha0_nodes(gcm):
        dot_pi = [i for i in range(gcm.size) if i != a0]
        for S in connected_subsets(gcm, dot_pi):
            if len(S) == len(dot_pi):
                continue
            P = subset_from_S(gcm, a0, S)
            levi = levi_components(P, window)
            rows.append(LeviRow(label, a0, S, tuple(c.label for c in levi.components)))
    return rows


def levi_table(label):
    labels = {lab for row in levi_table_rows(label) for lab in row.recognized}
    return sorted(labels, key=lambda x: (x.twist, x.series, x.rank))
