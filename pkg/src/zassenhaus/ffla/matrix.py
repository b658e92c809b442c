"""Dense exact matrices over GF(p^m) and the elimination kernels behind them.

Entries are integer codes (see :mod:`zassenhaus.ffla.field`).  Products go
through prime-field coordinate planes and one BLAS call; row reduction over
GF(2^m) runs on bit-packed planes with word-wide XOR.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .field import FieldCtx


class DimensionError(ValueError):
    pass


class ContextError(ValueError):
    pass


def _plane_product(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of code arrays ``a @ b`` (2-D or batched) via coordinate planes."""
    p, m = ctx.p, ctx.m
    a_prime = m == 1 or a.size == 0 or a.max() < p
    b_prime = m == 1 or b.size == 0 or b.max() < p
    if a_prime and b_prime:
        # prime-field entries: codes coincide with residues
        prod = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.mod(prod, p).astype(np.int64)
    if a_prime or b_prime:
        af = a.astype(np.float64)
        bf = b.astype(np.float64)
        if a_prime:
            planes = [np.matmul(af, pl) for pl in ctx.digits(b).astype(np.float64)]
        else:
            planes = [np.matmul(pl, bf) for pl in ctx.digits(a).astype(np.float64)]
        return ctx.from_digits(np.mod(np.stack(planes), p).astype(np.int64))
    pa = ctx.digits(a).astype(np.float64)  # (m, ..., r, k)
    pb = ctx.digits(b).astype(np.float64)  # (m, ..., k, c)
    z = [None] * (2 * m - 1)
    for i in range(m):
        for j in range(m):
            t = np.matmul(pa[i], pb[j])
            z[i + j] = t if z[i + j] is None else z[i + j] + t
    zz = np.mod(np.stack(z), p).astype(np.int64)  # (2m-1, ..., r, c)
    coeff = np.tensordot(ctx.reduction.T, zz, axes=(1, 0))  # (m, ..., r, c)
    return ctx.from_digits(coeff)


# -- row reduction kernels ------------------------------------------------


def _rref_reference(ctx: FieldCtx, data: np.ndarray, pivot_cols: int):
    """Reduced row echelon form by per-entry field arithmetic (any p)."""
    R = np.array(data, dtype=np.int64, copy=True)
    nrows = R.shape[0]
    pivots: list[int] = []
    row = 0
    for col in range(pivot_cols):
        if row == nrows:
            break
        nz = np.flatnonzero(R[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = ctx.mul(R[row], ctx.inv(int(R[row, col])))
        f = R[:, col].copy()
        f[row] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            R[rows] = ctx.sub(R[rows], ctx.mul(f[rows, None], R[row][None, :]))
        pivots.append(col)
        row += 1
    return R, pivots


def _pack_planes(ctx: FieldCtx, data: np.ndarray) -> np.ndarray:
    r, c = data.shape
    words = max(1, (c + 63) // 64)
    bits = ctx.digits(data).astype(np.uint8)  # (m, r, c)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    pad = words * 8 - packed.shape[-1]
    if pad:
        packed = np.concatenate(
            [packed, np.zeros(packed.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1
        )
    return np.ascontiguousarray(packed).view("<u8").reshape(ctx.m, r, words)


def _unpack_planes(ctx: FieldCtx, planes: np.ndarray, cols: int) -> np.ndarray:
    m, r, w = planes.shape
    as_bytes = np.ascontiguousarray(planes).view(np.uint8).reshape(m, r, w * 8)
    bits = np.unpackbits(as_bytes, axis=-1, bitorder="little")[..., :cols]
    return ctx.from_digits(bits.astype(np.int64))


def _times_x_row(ctx: FieldCtx, row: np.ndarray) -> np.ndarray:
    """Multiply a packed row (m, W) by the field generator x."""
    m = ctx.m
    out = np.empty_like(row)
    out[0] = 0
    out[1:] = row[:-1]
    top = row[m - 1]
    for k in range(m):
        if ctx.modulus[k]:
            out[k] ^= top
    return out


def _scale_row(ctx: FieldCtx, row: np.ndarray, c: int) -> np.ndarray:
    out = np.zeros_like(row)
    cur = row
    for k in range(ctx.m):
        if (c >> k) & 1:
            out ^= cur
        if k + 1 < ctx.m:
            cur = _times_x_row(ctx, cur)
    return out


def _rref_packed2(ctx: FieldCtx, data: np.ndarray, pivot_cols: int):
    """Reduced row echelon form over GF(2^m) on bit-packed planes."""
    nrows, ncols = data.shape
    m = ctx.m
    P = _pack_planes(ctx, data)
    one = np.uint64(1)
    pivots: list[int] = []
    row = 0
    for col in range(pivot_cols):
        if row == nrows:
            break
        w, b = divmod(col, 64)
        sh = np.uint64(b)
        vals = np.zeros(nrows - row, dtype=np.int64)
        for k in range(m):
            vals |= ((P[k, row:, w] >> sh) & one).astype(np.int64) << k
        nz = np.flatnonzero(vals)
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            P[:, [row, piv]] = P[:, [piv, row]]
        v = int(vals[nz[0]])
        if v != 1:
            P[:, row, w:] = _scale_row(ctx, P[:, row, w:], ctx.inv(v))
        allv = np.zeros(nrows, dtype=np.int64)
        for k in range(m):
            allv |= ((P[k, :, w] >> sh) & one).astype(np.int64) << k
        allv[row] = 0
        if allv.any():
            mult = P[:, row, w:]
            for k in range(m):
                rows_k = np.flatnonzero((allv >> k) & 1)
                if rows_k.size:
                    P[:, rows_k, w:] ^= mult[:, None, :]
                if k + 1 < m:
                    mult = _times_x_row(ctx, mult)
        pivots.append(col)
        row += 1
    return _unpack_planes(ctx, P, ncols), pivots


KERNELS = {"reference": _rref_reference, "packed": _rref_packed2}


def rref_codes(ctx: FieldCtx, data: np.ndarray, pivot_cols: int | None = None, kernel: str = "auto"):
    """Row-reduce a code array; returns (R, pivot columns).

    Only the first ``pivot_cols`` columns are searched for pivots; row
    operations still act on full rows (augmented systems).
    """
    data = np.asarray(data, dtype=np.int64)
    if pivot_cols is None:
        pivot_cols = data.shape[1]
    if data.shape[0] == 0 or data.shape[1] == 0:
        return data.copy(), []
    if kernel == "auto":
        kernel = "packed" if ctx.p == 2 else "reference"
    if kernel == "packed" and ctx.p != 2:
        raise ContextError("bit-packed kernel requires characteristic 2")
    return KERNELS[kernel](ctx, data, pivot_cols)


# -- matrices ---------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over a :class:`FieldCtx`."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: FieldCtx, data):
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionError(f"matrix data must be 2-D, got shape {arr.shape}")
        arr.setflags(write=False)
        self.ctx = ctx
        self.data = arr

    @classmethod
    def _wrap(cls, ctx: FieldCtx, arr: np.ndarray) -> "Matrix":
        out = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.int64)
        if arr.flags.writeable:
            arr.setflags(write=False)
        out.ctx = ctx
        out.data = arr
        return out

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "Matrix":
        return cls._wrap(ctx, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        return cls._wrap(ctx, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence, cols: int | None = None) -> "Matrix":
        rows = [np.asarray(r, dtype=np.int64) for r in rows]
        if not rows:
            return cls.zeros(ctx, 0, cols or 0)
        return cls._wrap(ctx, np.stack(rows))

    @classmethod
    def random(cls, ctx: FieldCtx, rows: int, cols: int, rng: np.random.Generator) -> "Matrix":
        return cls._wrap(ctx, ctx.random(rng, (rows, cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __repr__(self):
        return f"Matrix({self.ctx}, {self.rows}x{self.cols})"

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.ctx != self.ctx:
            raise ContextError(f"field mismatch: {self.ctx} vs {other.ctx}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ctx == other.ctx and self.shape == other.shape and np.array_equal(self.data, other.data)

    __hash__ = None

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._wrap(self.ctx, self.ctx.add(self.data, other.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._wrap(self.ctx, self.ctx.sub(self.data, other.data))

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(self.ctx, self.ctx.neg(self.data))

    def __matmul__(self, other):
        if isinstance(other, np.ndarray) and other.ndim == 1:
            if other.shape[0] != self.cols:
                raise DimensionError(f"cannot apply {self.shape} to vector of length {other.shape[0]}")
            if self.rows == 0 or self.cols == 0:
                return np.zeros(self.rows, dtype=np.int64)
            return _plane_product(self.ctx, self.data, other.astype(np.int64)[:, None])[:, 0]
        self._check(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.ctx, self.rows, other.cols)
        return Matrix._wrap(self.ctx, _plane_product(self.ctx, self.data, other.data))

    def scale(self, c: int) -> "Matrix":
        return Matrix._wrap(self.ctx, self.ctx.mul(self.data, c))

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.ctx, self.data.T)

    def __getitem__(self, key):
        out = self.data[key]
        if np.ndim(out) == 2:
            return Matrix._wrap(self.ctx, out)
        if np.ndim(out) == 0:
            return int(out)
        return np.array(out)

    def row(self, i: int) -> np.ndarray:
        return np.array(self.data[i])

    def col(self, j: int) -> np.ndarray:
        return np.array(self.data[:, j])

    def is_zero(self) -> bool:
        return not self.data.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self.data, np.eye(self.rows, dtype=np.int64))

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def power(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionError("power of a non-square matrix")
        result = Matrix.identity(self.ctx, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def rref(self, kernel: str = "auto") -> tuple["Matrix", list[int]]:
        R, piv = rref_codes(self.ctx, self.data, kernel=kernel)
        return Matrix._wrap(self.ctx, R[: len(piv)]), piv

    def rank(self) -> int:
        return len(rref_codes(self.ctx, self.data)[1])

    def inverse(self) -> "Matrix":
        n = self.rows
        if n != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        aug = np.concatenate([self.data, np.eye(n, dtype=np.int64)], axis=1)
        R, piv = rref_codes(self.ctx, aug, pivot_cols=n)
        if len(piv) != n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix._wrap(self.ctx, R[:, n:])

    def hstack(self, *others: "Matrix") -> "Matrix":
        for o in others:
            self._check(o)
        return Matrix._wrap(self.ctx, np.concatenate([self.data] + [o.data for o in others], axis=1))

    def vstack(self, *others: "Matrix") -> "Matrix":
        for o in others:
            self._check(o)
        return Matrix._wrap(self.ctx, np.concatenate([self.data] + [o.data for o in others], axis=0))

    def kron(self, other: "Matrix") -> "Matrix":
        self._check(other)
        a, b = self.data, other.data
        prod = self.ctx.mul(a[:, None, :, None], b[None, :, None, :])
        return Matrix._wrap(self.ctx, prod.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))

    def to_json(self) -> list[list[str]]:
        cs = self.ctx.coeff_string
        return [[cs(x) for x in row] for row in self.data.tolist()]

    @classmethod
    def from_json(cls, ctx: FieldCtx, rows: list[list[str]], cols: int | None = None) -> "Matrix":
        if not rows:
            return cls.zeros(ctx, 0, cols or 0)
        return cls._wrap(ctx, np.array([[ctx.parse_coeff_string(s) for s in r] for r in rows], dtype=np.int64))


def lincomb(ctx: FieldCtx, coeffs, mats: Sequence[Matrix] | np.ndarray) -> np.ndarray:
    """Code array of sum_k coeffs[k] * mats[k]."""
    stack = np.stack([m.data if isinstance(m, Matrix) else m for m in mats])
    coeffs = np.asarray(coeffs, dtype=np.int64)
    flat = stack.reshape(stack.shape[0], -1)
    out = _plane_product(ctx, coeffs[None, :], flat)[0]
    return out.reshape(stack.shape[1:])


def vec_add(ctx: FieldCtx, a, b):
    return ctx.add(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))


# -- subspaces and solving --------------------------------------------------


class Subspace:
    """Row space of a matrix, kept as a reduced row echelon basis."""

    __slots__ = ("ctx", "ambient", "basis", "pivots")

    def __init__(self, ctx: FieldCtx, ambient: int, basis: Matrix, pivots: list[int]):
        self.ctx = ctx
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, ctx: FieldCtx, vectors, ambient: int | None = None) -> "Subspace":
        if isinstance(vectors, Matrix):
            data = vectors.data
        else:
            vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
            if not vectors:
                if ambient is None:
                    raise DimensionError("ambient dimension needed for an empty span")
                data = np.zeros((0, ambient), dtype=np.int64)
            else:
                data = np.stack(vectors)
        if ambient is None:
            ambient = data.shape[1]
        if data.shape[1] != ambient:
            raise DimensionError(f"vectors of length {data.shape[1]} in ambient {ambient}")
        R, piv = rref_codes(ctx, data)
        return cls(ctx, ambient, Matrix._wrap(ctx, R[: len(piv)].reshape(len(piv), ambient)), piv)

    @classmethod
    def zero(cls, ctx: FieldCtx, ambient: int) -> "Subspace":
        return cls(ctx, ambient, Matrix.zeros(ctx, 0, ambient), [])

    @classmethod
    def full(cls, ctx: FieldCtx, ambient: int) -> "Subspace":
        return cls(ctx, ambient, Matrix.identity(ctx, ambient), list(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, {self.ctx})"

    def vectors(self) -> list[np.ndarray]:
        return [self.basis.row(i) for i in range(self.dim)]

    def _check(self, other: "Subspace"):
        if other.ctx != self.ctx:
            raise ContextError("field mismatch")
        if other.ambient != self.ambient:
            raise DimensionError(f"ambient mismatch {self.ambient} vs {other.ambient}")

    def reduce(self, v) -> np.ndarray:
        """Residue of ``v`` after clearing the pivot columns."""
        v = np.asarray(v, dtype=np.int64)
        if self.dim == 0:
            return v.copy()
        coeffs = v[..., self.pivots]
        if v.ndim == 1:
            return self.ctx.sub(v, _plane_product(self.ctx, coeffs[None, :], self.basis.data)[0])
        return self.ctx.sub(v, _plane_product(self.ctx, coeffs, self.basis.data))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64)
        if v.shape[-1] != self.ambient:
            raise DimensionError("vector length differs from ambient dimension")
        return not self.reduce(v).any()

    def coords(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the echelon basis; raises if ``v`` is outside."""
        v = np.asarray(v, dtype=np.int64)
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return v[..., self.pivots].copy()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0:
            return True
        return not self.reduce(other.basis.data).any()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    __hash__ = None

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.ctx, self.basis.vstack(other.basis), self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ctx, self.ambient)
        # a U = b V  <=>  (a, -b) in the left kernel of [U; V]
        stacked = self.basis.vstack(-other.basis)
        ker = nullspace(stacked.T)
        if ker.dim == 0:
            return Subspace.zero(self.ctx, self.ambient)
        a = ker.basis[:, : self.dim]
        return Subspace.span(self.ctx, a @ self.basis, self.ambient)

    def complement_indices(self) -> list[int]:
        piv = set(self.pivots)
        return [i for i in range(self.ambient) if i not in piv]


def nullspace(A: Matrix) -> Subspace:
    """Right kernel {v : A v = 0} as a subspace of the column space."""
    ctx = A.ctx
    n = A.cols
    if A.rows == 0:
        return Subspace.full(ctx, n)
    R, piv = rref_codes(ctx, A.data)
    return _kernel_from_rref(ctx, R, piv, n)


def _kernel_from_rref(ctx: FieldCtx, R: np.ndarray, piv: list[int], n: int) -> Subspace:
    free = [j for j in range(n) if j not in set(piv)]
    if not free:
        return Subspace.zero(ctx, n)
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        if piv:
            basis[t, piv] = ctx.neg(R[: len(piv), f])
    return Subspace.span(ctx, Matrix._wrap(ctx, basis), n)


def solve(A: Matrix, B: Matrix | np.ndarray):
    """Solve ``A X = B`` exactly.

    Returns ``(X, N)`` where ``X`` is one solution (``None`` when the system is
    inconsistent) and ``N`` the nullspace of ``A``.  A 1-D ``B`` gives a 1-D
    ``X``.
    """
    vector = isinstance(B, np.ndarray) and B.ndim == 1
    if vector:
        B = Matrix._wrap(A.ctx, np.asarray(B, dtype=np.int64)[:, None])
    if not isinstance(A, Matrix) or not isinstance(B, Matrix):
        raise TypeError("solve expects matrices")
    if A.ctx != B.ctx:
        raise ContextError(f"field mismatch: {A.ctx} vs {B.ctx}")
    if A.rows != B.rows:
        raise DimensionError(f"A has {A.rows} rows but B has {B.rows}")
    ctx = A.ctx
    n = A.cols
    aug = np.concatenate([A.data, B.data], axis=1)
    R, piv = rref_codes(ctx, aug, pivot_cols=n)
    N = _kernel_from_rref(ctx, R[:, :n], piv, n) if A.rows else Subspace.full(ctx, n)
    if R[len(piv):, n:].any():
        return None, N
    X = np.zeros((n, B.cols), dtype=np.int64)
    if piv:
        X[piv] = R[: len(piv), n:]
    if vector:
        return X[:, 0], N
    return Matrix._wrap(ctx, X), N


def subspace_ops(U: Subspace, V: Subspace, mode: str):
    if mode == "sum":
        return U + V
    if mode == "intersect":
        return U.intersect(V)
    if mode == "contains":
        return U.contains_subspace(V)
    raise ValueError(f"unknown mode {mode!r}")


def stack_vectors(ctx: FieldCtx, vectors: Iterable, length: int) -> Matrix:
    vs = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vs:
        return Matrix.zeros(ctx, 0, length)
    return Matrix._wrap(ctx, np.stack(vs))
