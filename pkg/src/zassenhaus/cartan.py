"""Divided powers, Witt and Zassenhaus algebras, their p-envelopes, and the
canonical torus/Borel frame of the restricted Zassenhaus algebra in
characteristic 2."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .ffla import GF, FieldCtx, Matrix, Subspace, nullspace, solve
from .liecore import (
    FieldTooSmallError,
    LieError,
    StructLie,
    ToralBasis,
    bracket_block,
    lie_from_matrices,
    spin,
    toral_basis,
)

SUPPORTED_P = (2, 3, 5, 7)
MAX_ORDER = 2**16


def binom_mod(a: int, b: int, p: int) -> int:
    """C(a, b) mod p by Lucas' theorem."""
    if b < 0 or a < 0 or b > a:
        return 0
    out = 1
    while a or b:
        ai, bi = a % p, b % p
        if bi > ai:
            return 0
        out = out * math.comb(ai, bi) % p
        a //= p
        b //= p
    return out


def binom_exact_mod(a: int, b: int, p: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b) % p


def witt_coefficient(i: int, j: int, p: int) -> int:
    """Coefficient of e_{i+j} in [e_i, e_j] before truncation."""
    return (binom_mod(i + j + 1, j, p) - binom_mod(i + j + 1, i, p)) % p


def _check_order(p: int, n: int):
    if p not in SUPPORTED_P:
        raise ValueError(f"unsupported characteristic {p}")
    if n < 1:
        raise ValueError("n must be positive")
    if p**n > MAX_ORDER:
        raise ValueError(f"p^n = {p}^{n} exceeds {MAX_ORDER}")


def e_label(j: int) -> str:
    return f"e_{j}"


def d_label(k: int) -> str:
    return f"d_{k}"


@dataclass
class DividedPowerAlg:
    """Truncated divided powers O(1;n): basis x^(0), ..., x^(p^n - 1)."""

    p: int
    n: int
    ctx: FieldCtx
    mult: np.ndarray = field(repr=False)
    partial: Matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return self.p**self.n

    def multiply(self, u, v) -> np.ndarray:
        N = self.dim
        out = np.zeros(N, dtype=np.int64)
        ctx = self.ctx
        for a in np.flatnonzero(u):
            for b in np.flatnonzero(v):
                if a + b < N and self.mult[a, b]:
                    c = ctx.mul(ctx.mul(int(u[a]), int(v[b])), int(self.mult[a, b]))
                    out[a + b] = ctx.add(int(out[a + b]), c)
        return out

    def times(self, a: int) -> Matrix:
        """Matrix of multiplication by x^(a)."""
        N = self.dim
        M = np.zeros((N, N), dtype=np.int64)
        for b in range(N - a):
            M[a + b, b] = self.mult[a, b]
        return Matrix._wrap(self.ctx, M)

    def witt_operator(self, j: int) -> Matrix:
        """e_j = x^(j+1) * d as a matrix on this algebra."""
        if j == -1:
            return self.partial
        return self.times(j + 1) @ self.partial

    def partial_power(self, e: int) -> Matrix:
        N = self.dim
        M = np.zeros((N, N), dtype=np.int64)
        for a in range(e, N):
            M[a - e, a] = 1
        return Matrix._wrap(self.ctx, M)


def divided_powers(p: int, n: int, ctx: FieldCtx) -> DividedPowerAlg:
    _check_order(p, n)
    if ctx.p != p:
        raise ValueError(f"field {ctx} has characteristic {ctx.p}, not {p}")
    N = p**n
    mult = np.zeros((N, N), dtype=np.int64)
    for a in range(N):
        for b in range(N - a):
            mult[a, b] = binom_mod(a + b, a, p)
    partial = np.zeros((N, N), dtype=np.int64)
    partial[np.arange(N - 1), np.arange(1, N)] = 1
    return DividedPowerAlg(p, n, ctx, mult, Matrix._wrap(ctx, partial))


def witt_algebra(p: int, n: int, ctx: FieldCtx | None = None):
    """(O(1;n), W(1;n), derived index range).

    The brackets come from the binomial formula; each e_j also carries its
    matrix on O(1;n) as realization so the two can be compared.
    """
    ctx = ctx or GF(p, 1)
    O = divided_powers(p, n, ctx)
    N = p**n
    c = np.zeros((N, N, N), dtype=np.int64)
    for a in range(N):
        i = a - 1
        for b in range(N):
            j = b - 1
            if i + j + 1 <= N - 1 and i + j >= -1:
                c[a, b, i + j + 1] = ctx.from_int(witt_coefficient(i, j, p))
    labels = [e_label(j) for j in range(-1, N - 1)]
    real = [O.witt_operator(j) for j in range(-1, N - 1)]
    W = StructLie(ctx, c, None, labels, realization=real, name=f"W(1;{n})")
    derived = range(0, N - 1) if p == 2 else range(0, N)
    return O, W, derived


def witt_oracle_check(W: StructLie):
    """First basis pair whose tabulated bracket differs from the commutator of the realizations."""
    d = W.dim
    for i in range(d):
        for j in range(i + 1, d):
            lhs = W.realize(W.brackets[i, j])
            rhs = W.realization[i].commutator(W.realization[j])
            if lhs != rhs:
                return (i, j)
    return None


def zassenhaus_algebra(p: int, n: int, ctx: FieldCtx) -> StructLie:
    """L(E) for E = GF(p^n) inside ``ctx``: [u_a, u_b] = (b - a) u_{a+b}."""
    _check_order(p, n)
    if ctx.p != p:
        raise ValueError(f"field {ctx} has characteristic {ctx.p}, not {p}")
    if ctx.m % n:
        raise FieldTooSmallError(f"{ctx} does not contain GF({p}^{n})")
    E = ctx.subfield(n)
    pos = {a: k for k, a in enumerate(E)}
    N = len(E)
    c = np.zeros((N, N, N), dtype=np.int64)
    for ia, a in enumerate(E):
        for ib, b in enumerate(E):
            c[ia, ib, pos[int(ctx.add(a, b))]] = ctx.sub(b, a)
    labels = [f"u_{ctx.coeff_string(a)}" for a in E]
    return StructLie(ctx, c, None, labels, name=f"L(GF({p}^{n}))")


def derivation_matrices(A: StructLie) -> list[Matrix]:
    """Basis of Der(A) as d x d matrices, from the Leibniz linear system."""
    ctx = A.ctx
    d = A.dim
    if d > 64:
        raise ValueError("derivation algebra limited to dim <= 64")
    if d == 0:
        return []
    c = A.brackets
    # unknown D[r, col] sits at r * d + col; D x_col = sum_r D[r, col] x_r
    # equation (i, j, s): D[x_i, x_j] - [D x_i, x_j] - [x_i, D x_j] has zero x_s-coordinate
    M = np.zeros((d * d * d, d * d), dtype=np.int64)
    s_idx = np.arange(d)
    for i in range(d):
        for j in range(d):
            rows = (i * d + j) * d + s_idx
            # sum_k c[i,j,k] D[s,k]
            cols = s_idx[:, None] * d + s_idx[None, :]
            M[rows[:, None], cols] = ctx.add(M[rows[:, None], cols], np.broadcast_to(c[i, j][None, :], (d, d)))
            # - sum_r D[r,i] c[r,j,s]
            cols = s_idx[None, :] * d + i
            M[rows[:, None], cols] = ctx.sub(M[rows[:, None], cols], c[:, j, :].T)
            # - sum_r D[r,j] c[i,r,s]
            cols = s_idx[None, :] * d + j
            M[rows[:, None], cols] = ctx.sub(M[rows[:, None], cols], c[i, :, :].T)
    ker = nullspace(Matrix._wrap(ctx, M))
    return [Matrix._wrap(ctx, v.reshape(d, d)) for v in ker.vectors()]


def is_derivation(A: StructLie, D: Matrix) -> bool:
    d = A.dim
    ctx = A.ctx
    c = A.brackets
    for i in range(d):
        for j in range(d):
            lhs = D @ c[i, j]
            rhs = ctx.add(A.bracket(D.col(i), A.basis_vector(j)), A.bracket(A.basis_vector(i), D.col(j)))
            if not np.array_equal(lhs, rhs):
                return False
    return True


def derivation_algebra(A: StructLie) -> StructLie:
    mats = derivation_matrices(A)
    labels = [f"D{i}" for i in range(len(mats))]
    return lie_from_matrices(A.ctx, mats, labels, name=f"Der({A.name})")


def realization_coords(D: StructLie, mats) -> Matrix:
    """Rows: coordinates of each matrix in the realization basis of ``D``."""
    ctx = D.ctx
    basis = Matrix._wrap(ctx, np.stack([m.data.ravel() for m in D.realization]).T)
    rhs = Matrix._wrap(ctx, np.stack([m.data.ravel() for m in mats]).T)
    X, _ = solve(basis, rhs)
    if X is None:
        raise LieError("matrices are outside the realized algebra")
    return X.T


def adjoint_image(A: StructLie, indices, D: StructLie) -> Matrix:
    """Coordinates in ``D`` (realized on A) of ad(x_i) for the given basis indices."""
    return realization_coords(D, [A.ad(i) for i in indices])


def wbar(p: int, n: int, ctx: FieldCtx | None = None) -> StructLie:
    """The restricted Zassenhaus algebra: W(1;n) plus the divided powers d_k of the derivative.

    Brackets and p-map are tabulated from the matrices on O(1;n).
    """
    ctx = ctx or GF(p, 1)
    O = divided_powers(p, n, ctx)
    N = p**n
    mats = [O.witt_operator(j) for j in range(-1, N - 1)]
    mats += [O.partial_power(p**k) for k in range(1, n)]
    labels = [e_label(j) for j in range(-1, N - 1)] + [d_label(k) for k in range(1, n)]
    return lie_from_matrices(ctx, mats, labels, name=f"Wbar(1;{n})")


def wbar_index(p: int, n: int, label: str) -> int:
    kind, val = label.split("_", 1)
    k = int(val)
    if kind == "e":
        return k + 1
    return p**n + k - 1


def restricted_closure(ambient: StructLie, S) -> Subspace:
    return spin(ambient, S, mode="restricted")


# -- canonical frame ----------------------------------------------------------


@dataclass
class CanonicalFrame:
    n: int
    ctx: FieldCtx
    wbar: StructLie
    witt: range
    derived: range
    borel: Subspace
    radu: Subspace
    s: np.ndarray
    spowers: list
    t0: Subspace
    t0_rows: Matrix
    toral: ToralBasis
    characters: list
    certificates: dict

    @property
    def toral_element(self):
        return self.toral.element

    def t0_algebra(self) -> StructLie:
        return self.wbar.subalgebra(self.toral.vectors, labels=[f"t_{i}" for i in range(self.n)], name="t0")

    def borel_algebra(self) -> StructLie:
        return self.wbar.subalgebra(self.borel.basis, labels=[e_label(j) for j in self.borel_indices], name="B")

    @property
    def borel_indices(self) -> range:
        return range(0, 2**self.n - 1)

    def to_json(self) -> dict:
        W = self.wbar
        cs = self.ctx.coeff_string

        def vec(v):
            return {W.labels[i]: cs(int(v[i])) for i in np.flatnonzero(v)}

        return {
            "p": 2,
            "n": self.n,
            "m": self.ctx.m,
            "labels": list(W.labels),
            "s": vec(self.s),
            "s_powers": [vec(v) for v in self.spowers],
            "t0": [vec(v) for v in self.t0_rows.data],
            "toral": [vec(v) for v in self.toral.vectors.data],
            "borel": [W.labels[i + 1] for i in self.borel_indices],
            "radu": [W.labels[i + 1] for i in range(1, 2**self.n - 1)],
            "characters": [list(mu) for mu in self.characters],
            "certificates": self.certificates,
        }


def _is_strictly_lower(M: Matrix) -> bool:
    return not np.triu(M.data).any()


def canonical_frame(n: int, ctx: FieldCtx | None = None, p: int = 2) -> CanonicalFrame:
    if p != 2:
        raise ValueError("the canonical frame is built in characteristic 2 only")
    ctx = ctx or GF(2, n)
    W = wbar(2, n, ctx)
    N = 2**n
    idx = lambda lab: W.labels.index(lab)  # noqa: E731
    s = W.vector([e_label(-1), e_label(N - 2)])
    spowers = [s]
    for _ in range(n):
        spowers.append(W.pmap_eval(spowers[-1]))
    certs = {}
    for k in range(1, n):
        expect = W.vector([d_label(k), e_label(N - 2**k - 1)])
        if not np.array_equal(spowers[k], expect):
            raise LieError(f"s-power chain breaks at k={k}")
    if not np.array_equal(spowers[n], s):
        raise LieError("s is not periodic under the p-map")
    certs["s_chain"] = True
    t0_rows = Matrix.from_rows(ctx, spowers[:n])
    t0 = Subspace.span(ctx, t0_rows, W.dim)
    if t0.dim != n:
        raise LieError("t0 has the wrong dimension")
    borel = Subspace.span(ctx, [W.basis_vector(idx(e_label(j))) for j in range(0, N - 1)], W.dim)
    radu = Subspace.span(ctx, [W.basis_vector(idx(e_label(j))) for j in range(1, N - 1)], W.dim)
    if (t0 + borel).dim != W.dim or t0.intersect(borel).dim != 0:
        raise LieError("t0 and B do not form a direct sum")
    certs["direct_sum"] = True
    toral = toral_basis(W, t0_rows)
    certs["t0_torus"] = True
    # B is a restricted subalgebra; rad_u(B) is a restricted ideal of B acting nilpotently
    Bb = borel.basis.data
    Rb = radu.basis.data
    if not borel.contains_subspace(Subspace.span(ctx, Matrix._wrap(ctx, bracket_block(W, Bb, Bb).reshape(-1, W.dim)), W.dim)):
        raise LieError("B is not a subalgebra")
    if not all(borel.contains(W.pmap_eval(b)) for b in Bb):
        raise LieError("B is not p-closed")
    if not radu.contains_subspace(Subspace.span(ctx, Matrix._wrap(ctx, bracket_block(W, Bb, Rb).reshape(-1, W.dim)), W.dim)):
        raise LieError("rad_u(B) is not an ideal of B")
    if not all(radu.contains(W.pmap_eval(r)) for r in Rb):
        raise LieError("rad_u(B) is not p-closed")
    if not all(_is_strictly_lower(W.realize(r)) for r in Rb):
        raise LieError("rad_u(B) does not act nilpotently")
    e0 = W.basis_vector(idx(e_label(0)))
    if not np.array_equal(W.pmap_eval(e0), e0) or radu.contains(e0):
        raise LieError("B / rad_u(B) is not spanned by a toral element")
    certs["radu"] = True
    characters = [tuple(mu) for mu in itertools.product(range(2), repeat=n)]
    return CanonicalFrame(
        n=n,
        ctx=ctx,
        wbar=W,
        witt=range(0, N),
        derived=range(0, N - 1),
        borel=borel,
        radu=radu,
        s=s,
        spowers=spowers,
        t0=t0,
        t0_rows=t0_rows,
        toral=toral,
        characters=characters,
        certificates=certs,
    )


def odd_torus(p: int, n: int, ctx: FieldCtx):
    """For odd p: the torus spanned by ad(u_0)^(p^j), 0 <= j < n, inside Der(L(E)).

    Returns (L(E), torus algebra realized on L(E), its toral basis).
    """
    if p == 2:
        raise ValueError("odd_torus is for odd characteristic")
    L = zassenhaus_algebra(p, n, ctx)
    u0 = L.labels.index(f"u_{ctx.coeff_string(0)}")
    ad0 = L.ad(u0)
    mats = [ad0]
    for _ in range(n - 1):
        mats.append(mats[-1].power(p))
    for D in mats:
        if not is_derivation(L, D):
            raise LieError("p-th power of ad(u_0) is not a derivation")
    T = lie_from_matrices(ctx, mats, [f"ad(u_0)^[p]^{j}" for j in range(n)], name="t0")
    if T.brackets.any():
        raise LieError("powers of ad(u_0) do not commute")
    tb = toral_basis(T, Matrix.identity(ctx, n))
    return L, T, tb
