"""Finite-dimensional associative algebras over GF(q): Jacobson radical,
semisimple quotient, division test, and the indecomposability verdict for
modules via their endomorphism rings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ffla import GF, FieldCtx, Matrix, Subspace, nullspace, solve
from .ffla.matrix import _plane_product, lincomb, rref_codes
from .rmod import RModule, hom_space, is_submodule, submodule

MAX_RADICAL_DIM = 512
EXHAUSTIVE_ELEMENTS = 2**16


class AlgebraError(ValueError):
    pass


class AssocAlg:
    """Associative unital algebra with structure constants ``mult[i, j] = b_i b_j``.

    ``matrices`` optionally holds the basis as concrete matrices (for End(M)).
    """

    def __init__(self, ctx: FieldCtx, mult, unit, matrices: Sequence[Matrix] | None = None, name: str = ""):
        mult = np.asarray(mult, dtype=np.int64)
        d = mult.shape[0]
        if mult.shape != (d, d, d):
            raise AlgebraError("structure constants must be d x d x d")
        self.ctx = ctx
        self.mult = mult
        self.unit = np.asarray(unit, dtype=np.int64)
        self.matrices = tuple(matrices) if matrices is not None else None
        self.name = name

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def __repr__(self):
        return f"AssocAlg({self.name or 'anonymous'}, dim={self.dim}, {self.ctx})"

    @classmethod
    def from_matrices(cls, ctx: FieldCtx, mats: Sequence[Matrix], name: str = "") -> "AssocAlg":
        """Algebra spanned by ``mats``; the basis is replaced by its echelon form."""
        if not mats:
            raise AlgebraError("empty spanning set")
        n = mats[0].rows
        flat = np.stack([m.data.ravel() for m in mats])
        R, piv = rref_codes(ctx, flat)
        d = len(piv)
        basis = R[:d]
        B = [Matrix._wrap(ctx, basis[i].reshape(n, n)) for i in range(d)]
        stack = np.stack([b.data for b in B])
        prods = _plane_product(ctx, stack[:, None, :, :], stack[None, :, :, :]).reshape(d * d, n * n)
        coords = prods[:, piv]
        back = _plane_product(ctx, coords, basis)
        if not np.array_equal(back, prods):
            raise AlgebraError("span of the matrices is not closed under multiplication")
        eye = np.eye(n, dtype=np.int64).ravel()
        unit = eye[piv]
        if not np.array_equal(_plane_product(ctx, unit[None, :], basis)[0], eye):
            raise AlgebraError("span does not contain the identity")
        return cls(ctx, coords.reshape(d, d, d), unit, matrices=B, name=name)

    def mul(self, x, y) -> np.ndarray:
        ctx = self.ctx
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        d = self.dim
        w = ctx.mul(x[:, None], y[None, :]).reshape(1, d * d)
        return _plane_product(ctx, w, self.mult.reshape(d * d, d))[0]

    def mul_batch(self, X, Y) -> np.ndarray:
        """Row-wise products of two stacks of elements."""
        ctx = self.ctx
        d = self.dim
        w = ctx.mul(X[:, :, None], Y[:, None, :]).reshape(-1, d * d)
        return _plane_product(ctx, w, self.mult.reshape(d * d, d))

    def left_matrix(self, x) -> Matrix:
        """Matrix of y -> x y."""
        x = np.asarray(x, dtype=np.int64)
        return Matrix._wrap(self.ctx, lincomb(self.ctx, x, self.mult).T)

    def right_matrix(self, x) -> Matrix:
        x = np.asarray(x, dtype=np.int64)
        return Matrix._wrap(self.ctx, lincomb(self.ctx, x, self.mult.transpose(1, 0, 2)).T)

    def power(self, x, e: int) -> np.ndarray:
        result = self.unit.copy()
        base = np.asarray(x, dtype=np.int64)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def element_matrix(self, x) -> Matrix:
        if self.matrices is None:
            raise AlgebraError("no matrix basis attached")
        return Matrix._wrap(self.ctx, lincomb(self.ctx, x, self.matrices))

    def is_commutative(self) -> bool:
        return np.array_equal(self.mult, self.mult.transpose(1, 0, 2))

    def check_associative(self) -> bool:
        ctx = self.ctx
        d = self.dim
        c = self.mult
        # (b_i b_j) b_k versus b_i (b_j b_k)
        left = _plane_product(ctx, c.reshape(d * d, d), c.reshape(d, d * d)).reshape(d, d, d, d)
        right = _plane_product(ctx, c.reshape(d * d, d)[None], c).reshape(d, d, d, d)
        return np.array_equal(left, right)

    def is_unit_element(self) -> bool:
        d = self.dim
        for i in range(d):
            e = np.zeros(d, dtype=np.int64)
            e[i] = 1
            if not np.array_equal(self.mul(self.unit, e), e) or not np.array_equal(self.mul(e, self.unit), e):
                return False
        return True


def matrix_algebra_from_table(ctx: FieldCtx, mult, unit, name: str = "") -> AssocAlg:
    A = AssocAlg(ctx, mult, unit, name=name)
    if not A.check_associative():
        raise AlgebraError("structure constants are not associative")
    if not A.is_unit_element():
        raise AlgebraError("unit element is not a two-sided identity")
    return A


def end_algebra(M: RModule) -> AssocAlg:
    H = hom_space(M, M)
    return AssocAlg.from_matrices(M.ctx, H, name=f"End({M.name})")


# -- radical --------------------------------------------------------------------------


def _fp_regular(E: AssocAlg, Z: np.ndarray) -> np.ndarray:
    """Left multiplication by each row of Z on E as a prime-field space, shape (len(Z), dm, dm)."""
    ctx = E.ctx
    m = ctx.m
    d = E.dim
    K = Z.shape[0]
    Lq = _plane_product(ctx, Z, E.mult.reshape(d, d * d)).reshape(K, d, d).transpose(0, 2, 1)
    # column (j, k) holds the coordinates of z * x^k b_j
    planes = np.stack([ctx.digits(ctx.mul(Lq, ctx.p**k)) for k in range(m)])  # (k, digit, K, i, j)
    return planes.transpose(2, 3, 1, 4, 0).reshape(K, d * m, d * m)


def _fp_to_q(ctx: FieldCtx, v: np.ndarray) -> np.ndarray:
    m = ctx.m
    lead = v.shape[:-1]
    w = v.reshape(*lead, -1, m)  # [..., i, k]
    return ctx.from_digits(np.moveaxis(w, -1, 0))


def _trace_digits(L: np.ndarray, p: int, i: int) -> np.ndarray:
    """(Tr(L^(p^i)) mod p^(i+1)) / p^i for a stack of integer lifts L."""
    mod = p ** (i + 1)
    # float64 products stay exact while n * mod^2 < 2^53
    A = (L % mod).astype(np.float64)
    for _ in range(i):
        B = A.copy()
        for _ in range(p - 1):
            B = np.matmul(B, A) % mod
        A = B
    A = A.astype(np.int64)
    t = np.trace(A, axis1=1, axis2=2) % mod
    return t // p**i


def _radical_fp(E: AssocAlg) -> np.ndarray:
    """Prime-field basis (rows, length d*m) of J(E)."""
    ctx = E.ctx
    p, m = ctx.p, ctx.m
    d = E.dim
    D = d * m
    Fp = GF(p, 1)
    if D == 0:
        return np.zeros((0, 0), dtype=np.int64)
    l = 0
    while p ** (l + 1) <= D:
        l += 1
    basis_fp = np.eye(D, dtype=np.int64)
    basis_q = _fp_to_q(ctx, basis_fp)
    current = basis_fp
    for i in range(l + 1):
        if current.shape[0] == 0:
            break
        cur_q = _fp_to_q(ctx, current)
        G = np.zeros((current.shape[0], D), dtype=np.int64)
        for s in range(current.shape[0]):
            prods = E.mul_batch(np.broadcast_to(cur_q[s], (D, d)).copy(), basis_q)
            G[s] = _trace_digits(_fp_regular(E, prods), p, i)
        ker = nullspace(Matrix(Fp, G.T))
        if ker.dim == 0:
            current = np.zeros((0, D), dtype=np.int64)
            break
        current = (ker.basis.data @ current) % p
        R, piv = rref_codes(Fp, current)
        current = R[: len(piv)]
    return current


@dataclass
class RadicalResult:
    J: Subspace
    quotient: AssocAlg
    certificates: dict = field(default_factory=dict)

    @property
    def codim(self) -> int:
        return self.quotient.dim


def _span(ctx, rows, d) -> Subspace:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, d)
    return Subspace.span(ctx, Matrix._wrap(ctx, rows), d)


def quotient_algebra(E: AssocAlg, J: Subspace) -> AssocAlg:
    ctx = E.ctx
    d = E.dim
    comp = J.complement_indices()
    k = len(comp)
    mult = np.zeros((k, k, k), dtype=np.int64)
    for a, ia in enumerate(comp):
        for b, ib in enumerate(comp):
            red = J.reduce(E.mult[ia, ib])
            mult[a, b] = red[comp]
    unit = J.reduce(E.unit)[comp]
    return AssocAlg(ctx, mult, unit, name=f"{E.name}/J")


def _is_two_sided_ideal(E: AssocAlg, J: Subspace) -> bool:
    if J.dim == 0:
        return True
    d = E.dim
    Jb = J.basis.data
    eye = np.eye(d, dtype=np.int64)
    for b in eye:
        Bb = np.broadcast_to(b, Jb.shape).copy()
        if J.reduce(E.mul_batch(Jb, Bb)).any() or J.reduce(E.mul_batch(Bb, Jb)).any():
            return False
    return True


def _nilpotency_index(E: AssocAlg, J: Subspace) -> int | None:
    """Smallest k with J^k = 0, or ``None`` if the powers stabilise above zero."""
    if J.dim == 0:
        return 1
    ctx = E.ctx
    d = E.dim
    cur = J
    k = 1
    while cur.dim:
        a = cur.basis.data
        b = J.basis.data
        X = np.repeat(a, b.shape[0], axis=0)
        Y = np.tile(b, (a.shape[0], 1))
        nxt = _span(ctx, E.mul_batch(X, Y), d)
        if nxt.dim == cur.dim:
            return None
        cur = nxt
        k += 1
    return k


def radical(E: AssocAlg, certify: bool = True) -> RadicalResult:
    if E.dim > MAX_RADICAL_DIM:
        raise AlgebraError(f"radical limited to dim <= {MAX_RADICAL_DIM}")
    ctx = E.ctx
    rows = _radical_fp(E)
    J = _span(ctx, _fp_to_q(ctx, rows) if rows.size else np.zeros((0, E.dim), dtype=np.int64), E.dim)
    if J.dim * ctx.m != rows.shape[0]:
        raise AlgebraError("prime-field radical is not a subspace over the ground field")
    Q = quotient_algebra(E, J)
    certs = {}
    if certify:
        if not _is_two_sided_ideal(E, J):
            raise AlgebraError("radical candidate is not a two-sided ideal")
        idx = _nilpotency_index(E, J)
        if idx is None:
            raise AlgebraError("radical candidate is not nilpotent")
        certs["ideal"] = True
        certs["nilpotency_index"] = idx
        if Q.dim:
            qrows = _radical_fp(Q)
            if qrows.shape[0]:
                raise AlgebraError("quotient by the radical candidate is not semisimple")
        certs["quotient_semisimple"] = True
    return RadicalResult(J, Q, certs)


def frobenius_fixed_dim(Q: AssocAlg) -> int:
    """Dimension of {x : x^q = x} for a commutative algebra."""
    ctx = Q.ctx
    d = Q.dim
    cols = [Q.power(np.eye(d, dtype=np.int64)[i], ctx.q) for i in range(d)]
    F = Matrix._wrap(ctx, np.stack(cols, axis=1))
    return nullspace(F - Matrix.identity(ctx, d)).dim


def division_test(Q: AssocAlg) -> tuple[bool, str]:
    """For a semisimple Q: (is a division ring, description)."""
    if Q.dim == 0:
        return False, "zero algebra"
    if Q.dim == 1:
        return True, "ground field"
    if not Q.is_commutative():
        return False, "noncommutative semisimple (matrix algebra)"
    k = frobenius_fixed_dim(Q)
    if k == 1:
        return True, f"field extension of degree {Q.dim}"
    return False, f"product of {k} fields"


# -- idempotents and indecomposability ------------------------------------------------


def _batched_square(E: AssocAlg, X: np.ndarray) -> np.ndarray:
    return E.mul_batch(X, X)


def _all_elements(ctx: FieldCtx, d: int) -> np.ndarray:
    return np.array(list(itertools.product(range(ctx.q), repeat=d)), dtype=np.int64).reshape(-1, d)


def _batched_rank(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of square matrices over GF(q)."""
    A = mats.copy()
    K, n, _ = A.shape
    rank = np.zeros(K, dtype=np.int64)
    rows = np.arange(K)
    for col in range(n):
        # candidate pivot rows are those at index >= current rank
        mask = (A[:, :, col] != 0) & (np.arange(n)[None, :] >= rank[:, None])
        has = mask.any(axis=1)
        piv = np.argmax(mask, axis=1)
        sel = rows[has]
        if sel.size == 0:
            continue
        r = rank[sel]
        pr = piv[sel]
        tmp = A[sel, r].copy()
        A[sel, r] = A[sel, pr]
        A[sel, pr] = tmp
        inv = ctx.inv(A[sel, r, col])
        A[sel, r] = ctx.mul(A[sel, r], inv[:, None])
        factors = A[sel, :, col].copy()
        factors[np.arange(sel.size), r] = 0
        A[sel] = ctx.sub(A[sel], ctx.mul(factors[:, :, None], A[sel, r][:, None, :]))
        rank[sel] += 1
    return rank


@dataclass
class ExhaustiveScan:
    idempotents: int
    nontrivial_idempotent: np.ndarray | None
    all_nilpotent_or_unit: bool


def exhaustive_scan(E: AssocAlg, chunk: int = 8192) -> ExhaustiveScan:
    """Enumerate all q^d elements: idempotents and the nilpotent-or-unit property."""
    ctx = E.ctx
    d = E.dim
    if ctx.q**d > EXHAUSTIVE_ELEMENTS:
        raise AlgebraError("algebra too large for exhaustive enumeration")
    X_all = _all_elements(ctx, d)
    count = 0
    witness = None
    local = True
    steps = max(1, int(np.ceil(np.log2(max(d, 2)))))
    for start in range(0, X_all.shape[0], chunk):
        X = X_all[start : start + chunk]
        sq = _batched_square(E, X)
        idem = np.all(sq == X, axis=1)
        count += int(idem.sum())
        if witness is None:
            for k in np.flatnonzero(idem):
                x = X[k]
                if x.any() and not np.array_equal(x, E.unit):
                    witness = x.copy()
                    break
        P = X
        for _ in range(steps):
            P = _batched_square(E, P)
        nil = ~P.any(axis=1)
        Ls = np.stack([lincomb(ctx, x, E.mult).T for x in X])
        unit = _batched_rank(ctx, Ls) == d
        if not np.all(nil | unit):
            local = False
    return ExhaustiveScan(count, witness, local)


@dataclass
class IndecResult:
    status: str  # indecomposable | decomposable | needs-extension
    end_dim: int
    certificate: dict = field(default_factory=dict)
    idempotent: Matrix | None = None
    summands: tuple | None = None

    @property
    def indecomposable(self) -> bool:
        return self.status == "indecomposable"


def _fitting_idempotent(M: RModule, phi: Matrix) -> Matrix | None:
    """Projection onto im(phi^N) along ker(phi^N), when both are proper."""
    ctx = M.ctx
    n = M.dim
    P = phi
    e = 1
    while e < n:
        P = P @ P
        e *= 2
    r = P.rank()
    if r == 0 or r == n:
        return None
    im = Subspace.span(ctx, P.T, n)
    ker = nullspace(P)
    S = im.basis.vstack(ker.basis).T
    D = np.zeros((n, n), dtype=np.int64)
    D[np.arange(im.dim), np.arange(im.dim)] = 1
    return S @ Matrix._wrap(ctx, D) @ S.inverse()


def _split(M: RModule, e: Matrix):
    ctx = M.ctx
    n = M.dim
    if not (e @ e == e):
        raise AlgebraError("idempotent check failed")
    if not all(e @ a == a @ e for a in M.action):
        raise AlgebraError("idempotent does not commute with the action")
    one_minus = Matrix.identity(ctx, n) - e
    U = Subspace.span(ctx, e.T, n)
    V = Subspace.span(ctx, one_minus.T, n)
    if U.dim == 0 or V.dim == 0 or U.dim + V.dim != n or (U + V).dim != n:
        raise AlgebraError("idempotent does not split the module")
    if not (is_submodule(M, U) and is_submodule(M, V)):
        raise AlgebraError("summands are not submodules")
    return U, V


def indecomposability_test(M: RModule, seed: int = 0, tries: int = 16, E: AssocAlg | None = None) -> IndecResult:
    ctx = M.ctx
    E = E or end_algebra(M)
    rng = np.random.default_rng(seed)
    # fast path: Fitting decomposition of random endomorphisms
    for t in range(tries):
        x = ctx.random(rng, E.dim)
        phi = E.element_matrix(x)
        e = _fitting_idempotent(M, phi)
        if e is not None:
            U, V = _split(M, e)
            return IndecResult(
                "decomposable", E.dim, {"route": "fitting", "try": t, "dims": [U.dim, V.dim]}, idempotent=e, summands=(U, V)
            )
    rad = radical(E)
    is_div, desc = division_test(rad.quotient)
    cert = {"route": "radical", "radical_dim": rad.J.dim, "quotient_dim": rad.quotient.dim, "quotient": desc}
    cert.update(rad.certificates)
    if ctx.q**E.dim <= EXHAUSTIVE_ELEMENTS:
        scan = exhaustive_scan(E)
        cert["exhaustive_idempotents"] = scan.idempotents
        cert["exhaustive_local"] = scan.all_nilpotent_or_unit
        if scan.all_nilpotent_or_unit != is_div or (scan.idempotents == 2) != is_div:
            raise AlgebraError("radical route and exhaustive scan disagree")
        if not is_div:
            e = E.element_matrix(scan.nontrivial_idempotent)
            U, V = _split(M, e)
            cert["route"] = "exhaustive"
            return IndecResult("decomposable", E.dim, cert, idempotent=e, summands=(U, V))
    if is_div:
        cert["absolute"] = rad.quotient.dim == 1
        status = "indecomposable" if rad.quotient.dim == 1 else "needs-extension"
        return IndecResult(status, E.dim, cert)
    for t in range(tries, 64 * tries):
        x = ctx.random(rng, E.dim)
        e = _fitting_idempotent(M, E.element_matrix(x))
        if e is not None:
            U, V = _split(M, e)
            cert["route"] = "fitting"
            return IndecResult("decomposable", E.dim, cert, idempotent=e, summands=(U, V))
    raise AlgebraError("endomorphism ring is not local but no idempotent was found")


def summand_modules(M: RModule, res: IndecResult):
    if res.summands is None:
        raise AlgebraError("no splitting recorded")
    U, V = res.summands
    return submodule(M, U), submodule(M, V)
