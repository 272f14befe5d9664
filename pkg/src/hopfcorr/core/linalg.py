"""Linear algebra over Scalars.

Sparse vectors and matrices hold the carrier-space data of cocycles
(tree cocycles have thousands of coordinates but two nonzeros per column).
Dense helpers work on ``list[list[Scalar]]`` and cover the small systems
that appear in Gram factorizations, kernels and projections.

Inner products are linear on the right and may carry a positive diagonal
metric: <x, y>_D = sum conj(x_i) d_i y_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg as sla

from .scalars import Backend, Scalar, get_tolerance

Dense = list[list[Scalar]]
Metric = Sequence[Scalar] | None


class SparseVector:
    """Vector of fixed dimension storing only nonzero coordinates."""

    __slots__ = ('dim', 'entries', 'backend')

    def __init__(self, dim: int, entries: dict[int, Scalar] | None = None,
                 backend: Backend = Backend.EXACT):
        self.dim = dim
        self.backend = backend
        self.entries = {i: x for i, x in (entries or {}).items() if not x.is_zero()}

    @classmethod
    def zero(cls, dim: int, backend: Backend) -> SparseVector:
        return cls(dim, {}, backend)

    @classmethod
    def basis(cls, dim: int, index: int, backend: Backend) -> SparseVector:
        return cls(dim, {index: Scalar.one(backend)}, backend)

    @classmethod
    def from_list(cls, values: Sequence[Scalar], backend: Backend) -> SparseVector:
        return cls(len(values), {i: x for i, x in enumerate(values)}, backend)

    def __getitem__(self, i: int) -> Scalar:
        return self.entries.get(i, Scalar.zero(self.backend))

    def to_list(self) -> list[Scalar]:
        return [self[i] for i in range(self.dim)]

    def _check(self, other: SparseVector) -> None:
        if self.dim != other.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: SparseVector) -> SparseVector:
        self._check(other)
        out = dict(self.entries)
        for i, x in other.entries.items():
            out[i] = out[i] + x if i in out else x
        return SparseVector(self.dim, out, self.backend)

    def __sub__(self, other: SparseVector) -> SparseVector:
        return self + (-other)

    def __neg__(self) -> SparseVector:
        return SparseVector(self.dim, {i: -x for i, x in self.entries.items()}, self.backend)

    def scale(self, c: Scalar | int) -> SparseVector:
        return SparseVector(self.dim, {i: x * c for i, x in self.entries.items()}, self.backend)

    def __rmul__(self, c: Scalar | int) -> SparseVector:
        return self.scale(c)

    def conj(self) -> SparseVector:
        return SparseVector(self.dim, {i: x.conj() for i, x in self.entries.items()}, self.backend)

    def dot(self, other: SparseVector, metric: Metric = None) -> Scalar:
        """Inner product <self, other>, antilinear in self."""
        self._check(other)
        small, large = (self, other) if len(self.entries) <= len(other.entries) else (other, self)
        total = Scalar.zero(self.backend)
        for i in small.entries:
            if i in large.entries:
                term = self.entries[i].conj() * other.entries[i]
                total = total + (term * metric[i] if metric is not None else term)
        return total

    def is_zero(self) -> bool:
        return not self.entries

    def direct_sum(self, other: SparseVector) -> SparseVector:
        out = dict(self.entries)
        out.update({self.dim + i: x for i, x in other.entries.items()})
        return SparseVector(self.dim + other.dim, out, self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector) or self.dim != other.dim:
            return False
        return (self - other).is_zero()

    def __repr__(self) -> str:
        body = ', '.join(f"{i}: {x}" for i, x in sorted(self.entries.items()))
        return f"SparseVector({self.dim}, {{{body}}})"


class SparseMatrix:
    """Matrix stored as a dict of nonzero rows."""

    __slots__ = ('shape', 'rows', 'backend')

    def __init__(self, shape: tuple[int, int], rows: dict[int, dict[int, Scalar]] | None = None,
                 backend: Backend = Backend.EXACT):
        self.shape = shape
        self.backend = backend
        self.rows: dict[int, dict[int, Scalar]] = {}
        for i, row in (rows or {}).items():
            kept = {j: x for j, x in row.items() if not x.is_zero()}
            if kept:
                self.rows[i] = kept

    @classmethod
    def identity(cls, n: int, backend: Backend) -> SparseMatrix:
        one = Scalar.one(backend)
        return cls((n, n), {i: {i: one} for i in range(n)}, backend)

    @classmethod
    def zero(cls, n: int, m: int, backend: Backend) -> SparseMatrix:
        return cls((n, m), {}, backend)

    @classmethod
    def from_dense(cls, dense: Dense, backend: Backend, ncols: int | None = None) -> SparseMatrix:
        m = ncols if ncols is not None else (len(dense[0]) if dense else 0)
        return cls((len(dense), m), {i: dict(enumerate(row)) for i, row in enumerate(dense)}, backend)

    @classmethod
    def from_columns(cls, columns: Sequence[SparseVector], nrows: int, backend: Backend) -> SparseMatrix:
        rows: dict[int, dict[int, Scalar]] = {}
        for j, col in enumerate(columns):
            for i, x in col.entries.items():
                rows.setdefault(i, {})[j] = x
        return cls((nrows, len(columns)), rows, backend)

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        i, j = key
        return self.rows.get(i, {}).get(j, Scalar.zero(self.backend))

    def to_dense(self) -> Dense:
        n, m = self.shape
        return [[self[i, j] for j in range(m)] for i in range(n)]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def column(self, j: int) -> SparseVector:
        return SparseVector(self.shape[0], {i: r[j] for i, r in self.rows.items() if j in r},
                            self.backend)

    def matvec(self, v: SparseVector) -> SparseVector:
        if v.dim != self.shape[1]:
            raise ValueError(f"Shape {self.shape} cannot act on dimension {v.dim}")
        out: dict[int, Scalar] = {}
        if not v.entries:
            return SparseVector(self.shape[0], {}, self.backend)
        for i, row in self.rows.items():
            total = None
            for j, x in row.items():
                if j in v.entries:
                    term = x * v.entries[j]
                    total = term if total is None else total + term
            if total is not None:
                out[i] = total
        return SparseVector(self.shape[0], out, self.backend)

    def __matmul__(self, other: SparseMatrix | SparseVector):
        if isinstance(other, SparseVector):
            return self.matvec(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"Shape mismatch {self.shape} @ {other.shape}")
        rows: dict[int, dict[int, Scalar]] = {}
        for i, row in self.rows.items():
            acc: dict[int, Scalar] = {}
            for k, x in row.items():
                for j, y in other.rows.get(k, {}).items():
                    acc[j] = acc[j] + x * y if j in acc else x * y
            rows[i] = acc
        return SparseMatrix((self.shape[0], other.shape[1]), rows, self.backend)

    def transpose(self) -> SparseMatrix:
        rows: dict[int, dict[int, Scalar]] = {}
        for i, row in self.rows.items():
            for j, x in row.items():
                rows.setdefault(j, {})[i] = x
        return SparseMatrix((self.shape[1], self.shape[0]), rows, self.backend)

    def conj(self) -> SparseMatrix:
        return SparseMatrix(self.shape, {i: {j: x.conj() for j, x in r.items()}
                                         for i, r in self.rows.items()}, self.backend)

    def adjoint(self, metric: Metric = None) -> SparseMatrix:
        """Adjoint for <x, y>_D: D^-1 A^dagger D."""
        adj = self.conj().transpose()
        if metric is None:
            return adj
        return SparseMatrix(adj.shape, {i: {j: x * metric[j] / metric[i] for j, x in r.items()}
                                        for i, r in adj.rows.items()}, self.backend)

    def scale(self, c: Scalar | int) -> SparseMatrix:
        return SparseMatrix(self.shape, {i: {j: x * c for j, x in r.items()}
                                         for i, r in self.rows.items()}, self.backend)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch {self.shape} + {other.shape}")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            target = rows.setdefault(i, {})
            for j, x in r.items():
                target[j] = target[j] + x if j in target else x
        return SparseMatrix(self.shape, rows, self.backend)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not self.rows

    def block_diag(self, other: SparseMatrix) -> SparseMatrix:
        n, m = self.shape
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            rows[n + i] = {m + j: x for j, x in r.items()}
        return SparseMatrix((n + other.shape[0], m + other.shape[1]), rows, self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix) or self.shape != other.shape:
            return False
        return (self - other).is_zero()

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz()})"


class EchelonBasis:
    """Incremental row-echelon basis of a subspace.

    Each stored vector vanishes at the pivots of all vectors stored before
    it, so reducing in insertion order leaves a vector with zero entries at
    every pivot.
    """

    def __init__(self, dim: int, backend: Backend):
        self.dim = dim
        self.backend = backend
        self._pivots: list[int] = []
        self._vectors: dict[int, SparseVector] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def vectors(self) -> list[SparseVector]:
        """Stored basis vectors in insertion order."""
        return [self._vectors[p] for p in self._pivots]

    def reduce(self, v: SparseVector) -> SparseVector:
        for p in self._pivots:
            if p in v.entries:
                v = v - self._vectors[p].scale(v.entries[p])
        return v

    def contains(self, v: SparseVector) -> bool:
        return self.reduce(v).is_zero()

    def add(self, v: SparseVector) -> bool:
        """Insert v; return True when it enlarged the span."""
        r = self.reduce(v)
        if r.is_zero():
            return False
        if self.backend is Backend.EXACT:
            p = min(r.entries)
        else:
            p = max(r.entries, key=lambda i: abs(r.entries[i]))
        r = r.scale(Scalar.one(self.backend) / r.entries[p])
        self._pivots.append(p)
        self._vectors[p] = r
        return True


def independent_subset(vectors: Sequence[SparseVector], dim: int, backend: Backend) -> list[int]:
    """Indices of a greedy maximal independent subset, in input order."""
    basis = EchelonBasis(dim, backend)
    return [k for k, v in enumerate(vectors) if basis.add(v)]


def rank(vectors: Sequence[SparseVector], dim: int, backend: Backend) -> int:
    return len(independent_subset(vectors, dim, backend))


# Dense helpers

def dense_zero(n: int, m: int, backend: Backend) -> Dense:
    zero = Scalar.zero(backend)
    return [[zero] * m for _ in range(n)]


def dense_identity(n: int, backend: Backend) -> Dense:
    out = dense_zero(n, n, backend)
    for i in range(n):
        out[i][i] = Scalar.one(backend)
    return out


def dense_matmul(a: Dense, b: Dense, backend: Backend) -> Dense:
    if not a:
        return []
    inner = len(b)
    m = len(b[0]) if b else 0
    out = dense_zero(len(a), m, backend)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x.is_zero():
                continue
            for j in range(m):
                out[i][j] = out[i][j] + x * b[k][j]
    return out


def dense_adjoint(a: Dense) -> Dense:
    if not a:
        return []
    return [[a[i][j].conj() for i in range(len(a))] for j in range(len(a[0]))]


def rref(rows: Dense, ncols: int, backend: Backend) -> tuple[Dense, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        if backend is Backend.EXACT:
            cand = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        else:
            best = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
            cand = None if m[best][c].is_zero() else best
        if cand is None:
            continue
        m[r], m[cand] = m[cand], m[r]
        inv = Scalar.one(backend) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(rows: Dense, ncols: int, backend: Backend) -> list[SparseVector]:
    """Basis of {x : rows x = 0}."""
    reduced, pivots = rref(rows, ncols, backend)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        entries = {f: Scalar.one(backend)}
        for k, p in enumerate(pivots):
            if not reduced[k][f].is_zero():
                entries[p] = -reduced[k][f]
        basis.append(SparseVector(ncols, entries, backend))
    return basis


def inverse(a: Dense, backend: Backend) -> Dense:
    """Inverse of a square matrix.

    Raises:
        ZeroDivisionError: If the matrix is singular
    """
    n = len(a)
    augmented = [list(row) + ident for row, ident in zip(a, dense_identity(n, backend))]
    reduced, pivots = rref(augmented, 2 * n, backend)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise ZeroDivisionError("Singular matrix")
    return [row[n:] for row in reduced]


@dataclass
class LDLFactorization:
    """G = B^dagger D B with B of full row rank and D positive diagonal."""

    rows: Dense
    diag: list[Scalar]
    pivots: list[int]
    psd: bool = True
    witness: str | None = None

    @property
    def rank(self) -> int:
        return len(self.diag)

    def column(self, j: int, backend: Backend) -> SparseVector:
        return SparseVector(self.rank, {k: row[j] for k, row in enumerate(self.rows)}, backend)


def ldl_factor(gram: Dense, backend: Backend) -> LDLFactorization:
    """Diagonally pivoted LDL^dagger factorization of a hermitian matrix.

    Exact under the Exact backend; under Float, pivots at or below eps_psd
    count as zero.

    Args:
        gram: Hermitian matrix
        backend: Scalar backend

    Returns:
        Factorization; ``psd`` is False (with a witness) when the matrix
        is not positive semidefinite
    """
    n = len(gram)
    a = [list(row) for row in gram]
    eps = get_tolerance().eps_psd if backend is Backend.FLOAT else 0
    remaining = list(range(n))
    rows: Dense = []
    diag: list[Scalar] = []
    pivots: list[int] = []
    zero = Scalar.zero(backend)
    while remaining:
        p = max(remaining, key=lambda i: a[i][i].re)
        piv = a[p][p]
        if not piv.re > eps:
            if piv.re < -eps:
                return LDLFactorization(rows, diag, pivots, False,
                                        f"negative pivot {piv} at index {p}")
            for i in remaining:
                for j in remaining:
                    if abs(a[i][j]) > max(eps, 0) and not a[i][j].is_zero():
                        return LDLFactorization(rows, diag, pivots, False,
                                                f"zero pivot with nonzero entry {a[i][j]} at ({i}, {j})")
            break
        row = [zero] * n
        for j in remaining:
            row[j] = a[p][j] / piv
        rows.append(row)
        diag.append(Scalar(piv.re, 0, backend))
        pivots.append(p)
        remaining.remove(p)
        for i in remaining:
            f = a[i][p]
            if f.is_zero():
                continue
            for j in remaining:
                a[i][j] = a[i][j] - f * row[j]
    return LDLFactorization(rows, diag, pivots)


def to_numpy(a: Dense) -> np.ndarray:
    if not a:
        return np.zeros((0, 0), dtype=complex)
    return np.array([[x.to_complex() for x in row] for row in a], dtype=complex)


def eigenvalues(a: Dense) -> np.ndarray:
    """Eigenvalues of a hermitian matrix in ascending order."""
    if not a:
        return np.zeros(0)
    m = to_numpy(a)
    return sla.eigvalsh((m + m.conj().T) / 2)


def extreme_eigenvalues(a: Dense) -> tuple[float, float]:
    values = eigenvalues(a)
    if values.size == 0:
        return 0.0, 0.0
    return float(values[0]), float(values[-1])


def orthogonal_basis(vectors: Iterable[SparseVector], metric: Metric = None) -> list[SparseVector]:
    """Metric Gram-Schmidt without normalization, dropping dependent vectors."""
    basis: list[SparseVector] = []
    norms: list[Scalar] = []
    for v in vectors:
        w = v
        for b, nb in zip(basis, norms):
            c = b.dot(w, metric)
            if not c.is_zero():
                w = w - b.scale(c / nb)
        if w.is_zero():
            continue
        nw = w.dot(w, metric)
        if nw.is_zero():
            continue
        basis.append(w)
        norms.append(nw)
    return basis


def projector(basis: Sequence[SparseVector], dim: int, backend: Backend,
              metric: Metric = None) -> SparseMatrix:
    """Metric-orthogonal projection onto the span of an orthogonal basis."""
    rows: dict[int, dict[int, Scalar]] = {}
    for b in basis:
        nb = b.dot(b, metric)
        # P = sum_b b (D b)^dagger / <b, b>
        for i, bi in b.entries.items():
            for j, bj in b.entries.items():
                w = metric[j] if metric is not None else 1
                x = bi * bj.conj() * w / nb
                target = rows.setdefault(i, {})
                target[j] = target[j] + x if j in target else x
    return SparseMatrix((dim, dim), rows, backend)


@dataclass
class OperatorFit:
    """Result of fitting X with X s_j = t_j."""

    matrix: SparseMatrix
    consistent: bool
    residual: float
    witness: int | None = None
    pivots: list[int] = field(default_factory=list)


def fit_operator(sources: Sequence[SparseVector], targets: Sequence[SparseVector],
                 dim_in: int, dim_out: int, backend: Backend, metric: Metric = None) -> OperatorFit:
    """Solve X sources[j] = targets[j], X vanishing on the complement of span(sources).

    The pivot subset fixes X; every other column is then checked for
    consistency.
    """
    pivots = independent_subset(sources, dim_in, backend)
    k = len(pivots)
    if k == 0:
        x = SparseMatrix.zero(dim_out, dim_in, backend)
    else:
        s_dag = [[sources[p][i].conj() * (metric[i] if metric is not None else 1)
                  for i in range(dim_in)] for p in pivots]
        gram = [[sum((s_dag[a][i] * sources[pivots[b]][i] for i in sources[pivots[b]].entries),
                     Scalar.zero(backend)) for b in range(k)] for a in range(k)]
        t_p = [[targets[pivots[b]][i] for b in range(k)] for i in range(dim_out)]
        x_dense = dense_matmul(dense_matmul(t_p, inverse(gram, backend), backend), s_dag, backend)
        x = SparseMatrix.from_dense(x_dense, backend, ncols=dim_in)
    worst, witness = 0.0, None
    for j, (s, t) in enumerate(zip(sources, targets)):
        diff = x.matvec(s) - t
        if not diff.is_zero():
            size = max(abs(v) for v in diff.entries.values())
            if size > worst:
                worst, witness = size, j
    return OperatorFit(x, witness is None, worst, witness, pivots)
