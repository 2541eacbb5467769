"""Affine generalized Cartan matrices and their root systems.

Conventions
-----------
* ``a_ij = <alpha_i^vee, alpha_j>`` and the simple reflection is
  ``s_i(beta) = beta - <beta, alpha_i^vee> alpha_i`` with
  ``<beta, alpha_i^vee> = sum_j beta_j a_ij``.
* Untwisted types ``X_N^(1)`` use Bourbaki numbering ``1..N`` for the finite
  diagram and put the affine node ``alpha_0 = delta - theta`` at index 0.
* Twisted types follow the numbering of Kac's tables Aff 2 / Aff 3, again with
  ``alpha_0`` at index 0.  For ``A_{2n}^(2)`` the node carrying mark 1 is the
  last one, so ``alpha_0`` has mark 2 there.
* A label's ``rank`` is the subscript ``N`` of ``X_N^(r)``; the number of
  nodes is ``finite_rank + 1``.
"""

import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources

from . import linalg

CATALOG_SCHEMA = "affind.gcm_catalog/1"


class CatalogError(ValueError):
    """Label or matrix outside the supported affine catalog."""


@dataclass(frozen=True, order=True)
class AffineTypeLabel:
    series: str
    rank: int
    twist: int = 1

    def __post_init__(self):
        if not admissible(self.series, self.rank, self.twist):
            raise CatalogError(
                f"inadmissible affine label {self.series}{self.rank}~{self.twist}; "
                f"catalog: {CATALOG_DESCRIPTION}")

    def __str__(self):
        return f"{self.series}{self.rank}~{self.twist}"

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r"\s*([A-G])(\d+)~([123])\s*", text)
        if not m:
            raise CatalogError(f"cannot parse affine label {text!r}; expected e.g. 'A2~1'")
        return cls(m.group(1), int(m.group(2)), int(m.group(3)))

    @property
    def finite_rank(self):
        """Number of nodes minus one."""
        if self.twist == 1:
            return self.rank
        if self.twist == 3:
            return 2
        if self.series == "A":
            return (self.rank + 1) // 2 if self.rank % 2 else self.rank // 2
        if self.series == "D":
            return self.rank - 1
        if self.series == "E":
            return 4

    @property
    def nodes(self):
        return self.finite_rank + 1

    def pretty(self):
        return f"{self.series}_{self.rank}^({self.twist})"


@dataclass(frozen=True, order=True)
class FiniteTypeLabel:
    series: str
    rank: int

    def __str__(self):
        return f"{self.series}{self.rank}"

    @property
    def nodes(self):
        return self.rank


CATALOG_DESCRIPTION = (
    "A_N^(1) N>=1, B_N^(1) N>=3, C_N^(1) N>=2, D_N^(1) N>=4, E_6,7,8^(1), F_4^(1), G_2^(1), "
    "A_2n^(2) n>=1, A_2n-1^(2) n>=3, D_N^(2) N>=3, E_6^(2), D_4^(3)")


def admissible(series, rank, twist):
    if not isinstance(rank, int) or rank < 1:
        return False
    if twist == 1:
        return {
            "A": rank >= 1, "B": rank >= 3, "C": rank >= 2, "D": rank >= 4,
            "E": rank in (6, 7, 8), "F": rank == 4, "G": rank == 2,
        }.get(series, False)
    if twist == 2:
        if series == "A":
            return rank >= 2 and (rank % 2 == 0 or rank >= 5)
        return (series == "D" and rank >= 3) or (series == "E" and rank == 6)
    if twist == 3:
        return series == "D" and rank == 4
    return False


def finite_admissible(series, rank):
    return {
        "A": rank >= 1, "B": rank >= 2, "C": rank >= 2, "D": rank >= 3,
        "E": rank in (6, 7, 8), "F": rank == 4, "G": rank == 2,
    }.get(series, False)


# -- finite Cartan matrices (Bourbaki numbering, 0-based here) ----------------

def finite_cartan(series, rank):
    n = rank
    if not finite_admissible(series, n):
        raise CatalogError(f"no finite Cartan matrix for {series}{rank}")
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if series in "ABCD":
        chain = n - 1 if series == "D" else n
        for i in range(chain - 1):
            link(i, i + 1)
        if series == "B":
            link(n - 2, n - 1, -1, -2)
        elif series == "C":
            link(n - 2, n - 1, -2, -1)
        elif series == "D":
            link(n - 3, n - 1)
    elif series == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif series == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif series == "G":
        link(0, 1, -3, -1)
    return tuple(tuple(r) for r in a)


def finite_roots(cartan):
    """All roots of a finite-type Cartan matrix, by reflection closure."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple) | {tuple(-x for x in s) for s in simple}
    queue = deque(seen)
    while queue:
        beta = queue.popleft()
        for i in range(n):
            gamma = _reflect(cartan, beta, i)
            if gamma not in seen:
                seen.add(gamma)
                queue.append(gamma)
    return sorted(seen, key=lambda v: (sum(v), v))


def _reflect(cartan, beta, i):
    p = sum(beta[j] * cartan[i][j] for j in range(len(beta)))
    if p == 0:
        return beta
    out = list(beta)
    out[i] -= p
    return tuple(out)


def _symmetrizer(cartan):
    n = len(cartan)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j != i and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * cartan[i][j] / cartan[j][i]
                    queue.append(j)
    top = max(d)
    return tuple(x / top for x in d)


def _untwisted_matrix(series, rank):
    fin = finite_cartan(series, rank)
    roots = finite_roots(fin)
    theta = max(roots, key=sum)
    d = _symmetrizer(fin)
    n = rank

    def form(u, v):
        return sum(u[i] * d[i] * fin[i][j] * v[j] for i in range(n) for j in range(n))

    a = [[0] * (n + 1) for _ in range(n + 1)]
    a[0][0] = 2
    tt = form(theta, theta)
    for j in range(n):
        e = tuple(int(k == j) for k in range(n))
        a[0][j + 1] = int(-2 * form(e, theta) / tt)
        a[j + 1][0] = -sum(theta[k] * fin[j][k] for k in range(n))
        for k in range(n):
            a[j + 1][k + 1] = fin[j][k]
    return a


def _chain(n):
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    return a


def _twisted_matrix(series, rank, twist):
    if twist == 3:
        return [[2, -1, 0], [-1, 2, -3], [0, -1, 2]]
    if series == "E":
        return [[2, -1, 0, 0, 0], [-1, 2, -1, 0, 0], [0, -1, 2, -2, 0],
                [0, 0, -1, 2, -1], [0, 0, 0, -1, 2]]
    if series == "A" and rank % 2 == 0:
        ell = rank // 2
        if ell == 1:
            return [[2, -4], [-1, 2]]
        a = _chain(ell + 1)
        a[0][1], a[1][0] = -2, -1
        a[ell - 1][ell], a[ell][ell - 1] = -2, -1
        return a
    if series == "A":
        ell = (rank + 1) // 2
        a = _chain(ell + 1)
        # nodes 0 and 1 both attach to node 2
        a[0][1] = a[1][0] = 0
        a[0][2] = a[2][0] = -1
        a[ell - 1][ell], a[ell][ell - 1] = -2, -1
        return a
    # D_{ell+1}^(2)
    ell = rank - 1
    a = _chain(ell + 1)
    a[0][1], a[1][0] = -2, -1
    a[ell - 1][ell], a[ell][ell - 1] = -1, -2
    return a


def build_affine_matrix(label):
    """Construct the affine GCM for ``label`` from first principles."""
    if label.twist == 1:
        return _untwisted_matrix(label.series, label.rank)
    return _twisted_matrix(label.series, label.rank, label.twist)


def _kernel_marks(matrix):
    ker = linalg.nullspace(matrix)
    if len(ker) != 1:
        raise CatalogError(f"kernel of matrix has dimension {len(ker)}, not 1: non-affine input")
    marks = linalg.primitive_integer_vector(ker[0])
    if any(m <= 0 for m in marks):
        raise CatalogError("null vector is not positive: non-affine input")
    return tuple(marks)


# -- GCM -----------------------------------------------------------------------

@dataclass(frozen=True)
class GCM:
    label: AffineTypeLabel
    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in r) for r in self.matrix))

    @property
    def size(self):
        return len(self.matrix)

    @property
    def finite_rank(self):
        return self.size - 1

    @property
    def simple_root_names(self):
        return tuple(f"alpha_{i}" for i in range(self.size))

    @cached_property
    def marks(self):
        return _kernel_marks(self.matrix)

    @cached_property
    def symmetrizer(self):
        return _symmetrizer(self.matrix)

    def coroot_pairing(self, beta, i):
        """``<beta, alpha_i^vee>``."""
        row = self.matrix[i]
        return sum(b * a for b, a in zip(beta, row))

    def reflect(self, beta, i):
        return _reflect(self.matrix, tuple(beta), i)

    def validate(self):
        """Check the affine GCM axioms; raises CatalogError on failure."""
        a = self.matrix
        n = self.size
        for i in range(n):
            if a[i][i] != 2:
                raise CatalogError(f"diagonal entry a_{i}{i} != 2")
            for j in range(n):
                if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                    raise CatalogError(f"bad off-diagonal pair at ({i},{j})")
        if linalg.det(a) != 0:
            raise CatalogError("determinant is nonzero")
        for i in range(n):
            keep = [k for k in range(n) if k != i]
            for size in range(1, n):
                sub = [[a[r][c] for c in keep[:size]] for r in keep[:size]]
                if linalg.det(sub) <= 0:
                    raise CatalogError(f"principal minor {keep[:size]} not positive")
        return self


@lru_cache(maxsize=None)
def _catalog():
    try:
        text = resources.files("affind").joinpath("data/gcm_catalog.json").read_text()
    except FileNotFoundError:
        return {}
    data = json.loads(text)
    if data.get("schema") != CATALOG_SCHEMA:
        raise CatalogError("unrecognised GCM catalog schema")
    return {e["label"]: e for e in data["entries"]}


@lru_cache(maxsize=None)
def affine_gcm(label):
    if isinstance(label, str):
        label = AffineTypeLabel.parse(label)
    entry = _catalog().get(str(label))
    matrix = entry["matrix"] if entry else build_affine_matrix(label)
    return GCM(label, matrix)


def catalog_labels(max_rank=10):
    """Every admissible affine label with subscript up to ``max_rank``."""
    out = []
    for twist in (1, 2, 3):
        for series in "ABCDEFG":
            for rank in range(1, max_rank + 1):
                if admissible(series, rank, twist):
                    out.append(AffineTypeLabel(series, rank, twist))
    return out


def catalog_document(max_rank=10):
    entries = []
    for label in catalog_labels(max_rank):
        m = build_affine_matrix(label)
        entries.append({"label": str(label), "matrix": m, "marks": list(_kernel_marks(m))})
    return {"schema": CATALOG_SCHEMA,
            "numbering": "affine node alpha_0 at index 0; untwisted: Bourbaki 1..N; twisted: Kac Aff 2/3",
            "entries": entries}


# -- roots ---------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    coeffs: tuple
    kind: str = "real"
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not any(self.coeffs):
            raise ValueError("zero vector is not a root")
        if self.kind == "real" and self.multiplicity != 1:
            raise ValueError("real roots have multiplicity 1")

    @property
    def height(self):
        return sum(self.coeffs)

    def __neg__(self):
        return Root(tuple(-c for c in self.coeffs), self.kind, self.multiplicity)


def null_root(gcm):
    return Root(gcm.marks, "imaginary", imaginary_multiplicity(gcm, 1))


def imaginary_multiplicity(gcm, k):
    """Dimension of the root space of ``k * delta``."""
    if k == 0:
        raise ValueError("k = 0 is not an imaginary root")
    label = gcm.label
    ell = label.finite_rank
    r = label.twist
    if r == 1 or k % r == 0:
        return ell
    return (label.rank - ell) // (r - 1)


def is_real_root(gcm, beta):
    """Exact real-root test by descending reflections to a simple root."""
    v = list(beta)
    if not any(v):
        return False
    if all(x <= 0 for x in v):
        v = [-x for x in v]
    elif not all(x >= 0 for x in v):
        return False
    while True:
        if sum(v) == 1:
            return True
        for i in range(len(v)):
            p = gcm.coroot_pairing(v, i)
            if p > 0:
                v[i] -= p
                break
        else:
            return False
        if v[i] < 0:
            return False


def imaginary_degree(gcm, beta):
    """``k`` if ``beta == k * delta`` (k may be 0), else None."""
    marks = gcm.marks
    k = Fraction(beta[0], marks[0])
    if k.denominator != 1 or any(b != k * m for b, m in zip(beta, marks)):
        return None
    return int(k)


def is_root(gcm, beta):
    k = imaginary_degree(gcm, beta)
    if k is not None:
        return k != 0
    return is_real_root(gcm, beta)


@dataclass(frozen=True)
class RootSet:
    gcm: GCM
    height_bound: int
    roots: tuple

    @cached_property
    def index(self):
        return {r.coeffs: r for r in self.roots}

    def __contains__(self, beta):
        if isinstance(beta, Root):
            beta = beta.coeffs
        return tuple(beta) in self.index

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def real(self):
        return [r for r in self.roots if r.kind == "real"]

    @property
    def imaginary(self):
        return [r for r in self.roots if r.kind == "imaginary"]

    def to_text(self):
        """One root per line: ``kind mult c0,c1,...``; header carries label and bound."""
        lines = [f"# rootset {self.gcm.label} bound {self.height_bound}"]
        for r in self.roots:
            lines.append(f"{r.kind} {r.multiplicity} {','.join(map(str, r.coeffs))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        m = re.fullmatch(r"# rootset (\S+) bound (\d+)", lines[0].strip())
        if not m:
            raise ValueError("missing rootset header")
        gcm = affine_gcm(AffineTypeLabel.parse(m.group(1)))
        roots = []
        for ln in lines[1:]:
            kind, mult, coeffs = ln.split()
            roots.append(Root(tuple(int(c) for c in coeffs.split(",")), kind, int(mult)))
        return cls(gcm, int(m.group(2)), tuple(roots))


def _root_order(r):
    return (abs(r.height), -r.height, tuple(-c for c in r.coeffs))


@lru_cache(maxsize=64)
def enumerate_roots(gcm, height_bound):
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    n = gcm.size
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple) | {tuple(-x for x in s) for s in simple}
    queue = deque(seen)
    while queue:
        beta = queue.popleft()
        for i in range(n):
            gamma = gcm.reflect(beta, i)
            if gamma not in seen and abs(sum(gamma)) <= height_bound:
                seen.add(gamma)
                queue.append(gamma)
    roots = [Root(b) for b in seen]
    delta = gcm.marks
    hd = sum(delta)
    k = 1
    while k * hd <= height_bound:
        mult = imaginary_multiplicity(gcm, k)
        roots.append(Root(tuple(k * x for x in delta), "imaginary", mult))
        roots.append(Root(tuple(-k * x for x in delta), "imaginary", imaginary_multiplicity(gcm, -k)))
        k += 1
    roots.sort(key=_root_order)
    return RootSet(gcm, height_bound, tuple(roots))


# -- invariant form ------------------------------------------------------------

@dataclass(frozen=True)
class BilinearForm:
    gcm: GCM
    symmetrizer: tuple = field(default=None)

    def __post_init__(self):
        if self.symmetrizer is None:
            object.__setattr__(self, "symmetrizer", self.gcm.symmetrizer)

    @cached_property
    def gram(self):
        """Symmetric matrix ``(alpha_i | alpha_j) = d_i a_ij``."""
        a, d = self.gcm.matrix, self.symmetrizer
        return tuple(tuple(d[i] * a[i][j] for j in range(len(a))) for i in range(len(a)))

    def __call__(self, a, b):
        g = self.gram
        n = len(g)
        return sum(a[i] * g[i][j] * b[j] for i in range(n) if a[i] for j in range(n) if b[j])


def bilinear_form(gcm):
    return BilinearForm(gcm)


def pairing(form, a, b):
    if isinstance(a, Root):
        a = a.coeffs
    if isinstance(b, Root):
        b = b.coeffs
    n = form.gcm.size
    if len(a) != n or len(b) != n:
        raise ValueError("root vectors do not belong to this GCM")
    return Fraction(form(a, b))
