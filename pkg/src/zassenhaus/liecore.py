"""Restricted Lie algebras given by structure constants and a p-map table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ffla import GF, FieldCtx, Matrix, Subspace, nullspace, solve
from .ffla.matrix import _plane_product, lincomb


class LieError(ValueError):
    pass


class NotClosedError(LieError):
    pass


class FieldTooSmallError(LieError):
    pass


class StructLie:
    """A Lie algebra over ``ctx`` with basis x_0..x_{d-1}.

    ``brackets[i, j]`` holds the coordinates of [x_i, x_j]; ``pmap[i]`` (if
    present) those of x_i^[p].  ``realization`` is an optional faithful list of
    matrices, one per basis element, used to evaluate the p-map off the basis
    when p > 2.  ``embedding`` records the basis as vectors of a parent
    algebra for subalgebras.
    """

    def __init__(
        self,
        ctx: FieldCtx,
        brackets,
        pmap=None,
        labels: Sequence[str] | None = None,
        realization: Sequence[Matrix] | None = None,
        embedding: Matrix | None = None,
        name: str = "",
        parent: "StructLie | None" = None,
    ):
        c = np.array(brackets, dtype=np.int64)
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2]:
            raise LieError(f"structure tensor must be d x d x d, got {c.shape}")
        d = c.shape[0]
        if np.any(c[np.arange(d), np.arange(d)]):
            raise LieError("structure tensor is not alternating: [x_i, x_i] != 0")
        if not np.array_equal(c, ctx.neg(c.transpose(1, 0, 2))):
            raise LieError("structure tensor is not antisymmetric")
        c.setflags(write=False)
        self.ctx = ctx
        self.brackets = c
        if pmap is not None:
            pmap = np.array(pmap, dtype=np.int64).reshape(d, d)
            pmap.setflags(write=False)
        self.pmap = pmap
        self.labels = tuple(labels) if labels is not None else tuple(f"x{i}" for i in range(d))
        if len(self.labels) != d:
            raise LieError("one label per basis element required")
        self.realization = tuple(realization) if realization is not None else None
        self.embedding = embedding
        self.parent = parent
        self.name = name
        self._ad = None

    # -- basics ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.brackets.shape[0]

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def restricted(self) -> bool:
        return self.pmap is not None

    def __repr__(self):
        return f"StructLie({self.name or 'anonymous'}, dim={self.dim}, {self.ctx})"

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def vector(self, terms: dict[str, int] | Sequence[str]) -> np.ndarray:
        """Vector from labels, e.g. ``A.vector(["e_-1", "e_2"])``."""
        v = np.zeros(self.dim, dtype=np.int64)
        items = terms.items() if isinstance(terms, dict) else ((t, 1) for t in terms)
        for lab, coeff in items:
            i = self.labels.index(lab)
            v[i] = self.ctx.add(int(v[i]), coeff)
        return v

    def ad(self, i: int) -> Matrix:
        if self._ad is None:
            self._ad = [Matrix(self.ctx, self.brackets[k].T) for k in range(self.dim)]
        return self._ad[i]

    def ad_vec(self, x) -> Matrix:
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (self.dim,):
            raise LieError(f"vector of length {x.shape} in algebra of dim {self.dim}")
        if self.dim == 0:
            return Matrix.zeros(self.ctx, 0, 0)
        return Matrix._wrap(self.ctx, lincomb(self.ctx, x, self.brackets.transpose(0, 2, 1)))

    def bracket(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise LieError("bracket arguments must have length dim")
        return bracket_block(self, x[None, :], y[None, :])[0, 0]

    def realize(self, x) -> Matrix:
        if self.realization is None:
            raise LieError("no matrix realization attached")
        return Matrix._wrap(self.ctx, lincomb(self.ctx, x, self.realization))

    def pmap_eval(self, x) -> np.ndarray:
        """x^[p] for an arbitrary element x."""
        if self.pmap is None:
            raise LieError(f"{self!r} carries no p-map")
        ctx = self.ctx
        x = np.asarray(x, dtype=np.int64)
        d = self.dim
        if d == 0:
            return x.copy()
        if ctx.p == 2:
            sq = ctx.mul(x, x)
            out = _plane_product(ctx, np.asarray(sq)[None, :], self.pmap)[0]
            w = ctx.mul(x[:, None], x[None, :])
            w = np.triu(w, 1)
            cross = _plane_product(ctx, w.reshape(1, d * d), self.brackets.reshape(d * d, d))[0]
            return ctx.add(out, cross)
        nz = np.flatnonzero(x)
        if len(nz) == 1:
            i = int(nz[0])
            return np.asarray(ctx.mul(ctx.pow(int(x[i]), ctx.p), self.pmap[i]), dtype=np.int64)
        if len(nz) == 0:
            return np.zeros(d, dtype=np.int64)
        if self.realization is not None:
            R = self.realize(x).power(ctx.p)
            return _coords_in_span(ctx, self.realization, R)
        zc = center(self)
        if zc.dim:
            raise LieError("p-map off the basis needs a faithful realization (p > 2)")
        target = self.ad_vec(x).power(ctx.p)
        return _coords_in_span(ctx, [self.ad(i) for i in range(d)], target)

    # -- sub-structures -------------------------------------------------------

    def subalgebra(
        self,
        rows,
        labels: Sequence[str] | None = None,
        name: str = "",
        require_restricted: bool = False,
    ) -> "StructLie":
        """The subalgebra with basis ``rows`` (vectors of this algebra).

        The p-map is inherited when the span is closed under it; otherwise
        the result is unrestricted (or an error if ``require_restricted``).
        """
        ctx = self.ctx
        if isinstance(rows, Subspace):
            rows = rows.basis
        if not isinstance(rows, Matrix):
            rows = Matrix.from_rows(ctx, list(rows), cols=self.dim)
        k = rows.rows
        if rows.rank() != k:
            raise LieError("subalgebra basis is linearly dependent")
        emb_T = rows.T
        if k == 0:
            sub = StructLie(ctx, np.zeros((0, 0, 0), dtype=np.int64), np.zeros((0, 0)) if self.pmap is not None else None,
                            labels=[], embedding=rows, name=name, parent=self)
            return sub
        prods = bracket_block(self, rows.data, rows.data).reshape(k * k, self.dim)
        X, _ = solve(emb_T, Matrix._wrap(ctx, prods.T))
        if X is None:
            raise NotClosedError("span is not closed under the bracket")
        c = X.data.T.reshape(k, k, k)
        pm = None
        if self.pmap is not None:
            powers = np.stack([self.pmap_eval(rows.row(i)) for i in range(k)])
            Y, _ = solve(emb_T, Matrix._wrap(ctx, powers.T))
            if Y is not None:
                pm = Y.data.T
            elif require_restricted:
                raise NotClosedError("span is not closed under the p-map")
        elif require_restricted:
            raise LieError("parent algebra carries no p-map")
        real = None
        if self.realization is not None:
            real = [self.realize(rows.row(i)) for i in range(k)]
        if labels is None:
            labels = [_label_of(self, rows.row(i)) for i in range(k)]
        return StructLie(ctx, c, pm, labels, realization=real, embedding=rows, name=name, parent=self)

    def rebase(self, B: Matrix, labels: Sequence[str] | None = None) -> "StructLie":
        """Same algebra in the basis given by the rows of the invertible ``B``."""
        if B.rows != self.dim or B.rank() != self.dim:
            raise LieError("rebase needs an invertible square basis matrix")
        out = self.subalgebra(B, labels=labels, name=self.name)
        out.parent = None
        return out

    # -- fixtures ---------------------------------------------------------------

    def to_json(self) -> dict:
        cs = self.ctx.coeff_string
        d = self.dim
        br = []
        for i in range(d):
            for j in range(i + 1, d):
                terms = [[int(k), cs(int(self.brackets[i, j, k]))] for k in np.flatnonzero(self.brackets[i, j])]
                if terms:
                    br.append([i, j, *terms])
        out = {
            "p": self.ctx.p,
            "m": self.ctx.m,
            "dim": d,
            "labels": list(self.labels),
            "brackets": br,
        }
        if self.pmap is not None:
            out["pmap"] = [
                [i, *[[int(k), cs(int(self.pmap[i, k]))] for k in np.flatnonzero(self.pmap[i])]]
                for i in range(d)
            ]
        else:
            out["pmap"] = None
        return out

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "StructLie":
        ctx = GF(int(data["p"]), int(data["m"]))
        d = int(data["dim"])
        c = np.zeros((d, d, d), dtype=np.int64)
        for entry in data["brackets"]:
            i, j, *terms = entry
            for k, s in terms:
                v = ctx.parse_coeff_string(s)
                c[i, j, k] = v
                c[j, i, k] = ctx.neg(v)
        pm = None
        if data.get("pmap") is not None:
            pm = np.zeros((d, d), dtype=np.int64)
            for entry in data["pmap"]:
                i, *terms = entry
                for k, s in terms:
                    pm[i, k] = ctx.parse_coeff_string(s)
        return cls(ctx, c, pm, data["labels"], name=name)

    def same_structure(self, other: "StructLie") -> bool:
        if self.ctx != other.ctx or self.dim != other.dim:
            return False
        if not np.array_equal(self.brackets, other.brackets):
            return False
        if (self.pmap is None) != (other.pmap is None):
            return False
        return self.pmap is None or np.array_equal(self.pmap, other.pmap)


def _label_of(A: StructLie, v: np.ndarray) -> str:
    nz = np.flatnonzero(v)
    parts = []
    for i in nz:
        c = int(v[i])
        parts.append(A.labels[i] if c == 1 else f"{A.ctx.coeff_string(c)}*{A.labels[i]}")
    return "+".join(parts) if parts else "0"


def _coords_in_span(ctx: FieldCtx, mats: Sequence[Matrix], target: Matrix) -> np.ndarray:
    basis = Matrix._wrap(ctx, np.stack([m.data.ravel() for m in mats]).T)
    x, _ = solve(basis, target.data.ravel())
    if x is None:
        raise NotClosedError("matrix is outside the span of the realization")
    return x


def bracket_block(A: StructLie, F, B) -> np.ndarray:
    """All brackets [F_i, B_j] as an array of shape (len(F), len(B), dim)."""
    ctx = A.ctx
    d = A.dim
    F = np.asarray(F, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.shape[0] == 0 or B.shape[0] == 0 or d == 0:
        return np.zeros((F.shape[0], B.shape[0], d), dtype=np.int64)
    M = _plane_product(ctx, F, A.brackets.reshape(d, d * d)).reshape(F.shape[0], d, d)
    return _plane_product(ctx, B[None, :, :], M)


# -- operations -----------------------------------------------------------------


def bracket_eval(A: StructLie, x, y) -> np.ndarray:
    return A.bracket(x, y)


def jacobi_check(A: StructLie):
    """``None`` when Jacobi holds on all basis triples, else a failing triple."""
    ctx = A.ctx
    d = A.dim
    if d < 3:
        return None
    c = A.brackets
    S = _plane_product(ctx, c.reshape(d * d, d), c.reshape(d, d * d)).reshape(d, d, d, d)
    total = ctx.add(ctx.add(S, np.einsum("ijkr->kijr", S)), np.einsum("ijkr->jkir", S))
    bad = np.argwhere(total.any(axis=3))
    if bad.size:
        i, j, k = (int(t) for t in bad[0])
        return (i, j, k)
    return None


def spin(A: StructLie, gens, mode: str = "subalgebra") -> Subspace:
    """Smallest subalgebra / ideal / restricted subalgebra containing ``gens``."""
    if mode not in ("subalgebra", "ideal", "restricted"):
        raise ValueError(f"unknown spin mode {mode!r}")
    if mode == "restricted" and A.pmap is None:
        raise LieError("restricted closure needs a p-map")
    ctx = A.ctx
    d = A.dim
    if isinstance(gens, Subspace):
        gens = gens.basis
    S = Subspace.span(ctx, gens if isinstance(gens, Matrix) else list(gens), d)
    if S.dim == 0:
        return S
    frontier = S.basis.data
    full = np.eye(d, dtype=np.int64)
    for _ in range(d + 1):
        partners = full if mode == "ideal" else S.basis.data
        cand = bracket_block(A, frontier, partners).reshape(-1, d)
        if mode == "restricted":
            cand = np.concatenate([cand, np.stack([A.pmap_eval(f) for f in frontier])])
        res = S.reduce(cand)
        res = res[res.any(axis=1)]
        if res.shape[0] == 0:
            return S
        new = Subspace.span(ctx, Matrix._wrap(ctx, res), d)
        S = S + new
        # the new directions, plus (for subalgebras) old ones against them
        frontier = new.basis.data if mode == "ideal" else S.basis.data
    return S


def centralizer(A: StructLie, S) -> Subspace:
    """{x : [x, s] = 0 for all s in S}."""
    if isinstance(S, Subspace):
        if S.ambient != A.dim:
            raise LieError("subspace lives in a different ambient space")
        vecs = S.vectors()
    else:
        vecs = [np.asarray(v, dtype=np.int64) for v in S]
    if not vecs:
        return Subspace.full(A.ctx, A.dim)
    mats = [A.ad_vec(v) for v in vecs]
    big = mats[0].vstack(*mats[1:]) if len(mats) > 1 else mats[0]
    return nullspace(big)


def center(A: StructLie) -> Subspace:
    return centralizer(A, Subspace.full(A.ctx, A.dim))


def derived_subalgebra(A: StructLie) -> Subspace:
    d = A.dim
    return Subspace.span(A.ctx, Matrix._wrap(A.ctx, A.brackets.reshape(d * d, d)), d)


def derived_series_dims(A: StructLie, max_steps: int = 32) -> list[int]:
    dims = [A.dim]
    cur = A
    for _ in range(max_steps):
        D = derived_subalgebra(cur)
        if D.dim == dims[-1]:
            break
        dims.append(D.dim)
        if D.dim == 0:
            break
        cur = cur.subalgebra(D.basis)
    return dims


def pmap_axioms_check(A: StructLie, rng: np.random.Generator | None = None, samples: int = 8):
    """``None`` when the p-map table is consistent, else a description of the violation."""
    if A.pmap is None:
        raise LieError("algebra carries no p-map")
    ctx = A.ctx
    p = ctx.p
    d = A.dim
    rng = rng or np.random.default_rng(0)
    for i in range(d):
        lhs = A.ad_vec(A.pmap[i])
        rhs = A.ad(i).power(p)
        if lhs != rhs:
            return ("ad", i)
    if p > 2 and A.realization is None:
        raise LieError("additivity for p > 2 needs a faithful realization")
    if A.realization is not None:
        for i in range(d):
            if A.realize(A.pmap[i]) != A.realization[i].power(p):
                return ("realization", i)
    for _ in range(samples):
        i = int(rng.integers(d)) if d else 0
        a = int(rng.integers(1, ctx.q)) if ctx.q > 1 else 1
        if d == 0:
            break
        x = np.zeros(d, dtype=np.int64)
        x[i] = a
        expect = ctx.mul(ctx.pow(a, p), A.pmap[i])
        if not np.array_equal(A.pmap_eval(x), expect):
            return ("scalar", i)
    if p == 2:
        for i in range(d):
            for j in range(i + 1, d):
                x = A.basis_vector(i)
                x[j] = 1
                z = A.pmap_eval(x)
                if A.ad_vec(z) != A.ad_vec(x).power(2):
                    return ("additivity", (i, j))
                if A.realization is not None and A.realize(z) != A.realize(x).power(2):
                    return ("additivity", (i, j))
    else:
        for _ in range(samples):
            x = ctx.random(rng, d)
            try:
                z = A.pmap_eval(x)
            except NotClosedError:
                return ("closure", tuple(int(t) for t in x))
            if A.ad_vec(z) != A.ad_vec(x).power(p):
                return ("additivity", tuple(int(t) for t in x))
    return None


@dataclass
class ToralBasis:
    """Prime-field basis of the toral elements {t : t^[p] = t} of a torus."""

    parent: StructLie
    vectors: Matrix

    @property
    def rank(self) -> int:
        return self.vectors.rows

    def span(self) -> Subspace:
        return Subspace.span(self.parent.ctx, self.vectors, self.parent.dim)

    def element(self, mu: Sequence[int]) -> np.ndarray:
        """The toral element sum mu_i t_i for prime-field coefficients mu."""
        return lincomb(self.parent.ctx, np.asarray(mu, dtype=np.int64), [self.vectors.data[i] for i in range(self.rank)])


def toral_basis(A: StructLie, t) -> ToralBasis:
    """Solve x^[p] = x on the torus ``t`` over the prime field."""
    ctx = A.ctx
    p, m = ctx.p, ctx.m
    if A.pmap is None:
        raise LieError("toral basis needs a p-map")
    if isinstance(t, Subspace):
        rows = t.basis
    elif isinstance(t, Matrix):
        rows = t
    else:
        rows = Matrix.from_rows(ctx, list(t), cols=A.dim)
    r = rows.rows
    if rows.rank() != r:
        raise LieError("torus basis is linearly dependent")
    if r == 0:
        return ToralBasis(A, Matrix.zeros(ctx, 0, A.dim))
    if bracket_block(A, rows.data, rows.data).any():
        raise LieError("input is not abelian")
    powers = np.stack([A.pmap_eval(rows.row(i)) for i in range(r)])
    M, _ = solve(rows.T, Matrix._wrap(ctx, powers.T))
    if M is None:
        raise NotClosedError("input is not closed under the p-map")
    # coordinate a (length r over GF(q)) is toral iff M (a^p) = a; F_p-linear
    Fp = GF(p, 1)
    n = r * m
    phi = np.zeros((n, n), dtype=np.int64)
    for i in range(r):
        for k in range(m):
            a = np.zeros(r, dtype=np.int64)
            a[i] = p**k
            fa = ctx.pow(a, p)
            image = ctx.sub(_plane_product(ctx, M.data, fa[:, None])[:, 0], a)
            phi[:, i * m + k] = ctx.digits(image).T.reshape(-1)
    ker = nullspace(Matrix(Fp, phi))
    if ker.dim < r:
        raise FieldTooSmallError(
            f"only {ker.dim} prime-field toral directions in a torus of dimension {r}; "
            f"enlarge the field to contain GF({p}^{r})"
        )
    coeffs = ctx.from_digits(ker.basis.data.reshape(ker.dim, r, m).transpose(2, 0, 1))
    vecs = _plane_product(ctx, coeffs, rows.data)
    out = Matrix._wrap(ctx, vecs)
    if out.rank() != r:
        raise LieError("toral elements do not span the input over the field")
    for i in range(out.rows):
        if not np.array_equal(A.pmap_eval(out.row(i)), out.row(i)):
            raise LieError("internal error: solved element is not toral")
    return ToralBasis(A, out)


def lie_from_matrices(
    ctx: FieldCtx,
    mats: Sequence[Matrix],
    labels: Sequence[str] | None = None,
    name: str = "",
    restricted: bool = True,
) -> StructLie:
    """Tabulate brackets (and p-th powers) of linearly independent matrices."""
    d = len(mats)
    flat = Matrix._wrap(ctx, np.stack([m.data.ravel() for m in mats]).T)
    if flat.rank() != d:
        raise LieError("matrices are linearly dependent")
    stack = np.stack([m.data for m in mats])
    prods = _plane_product(ctx, stack[:, None], stack[None, :])  # (d, d, k, k)
    comms = ctx.sub(prods, prods.transpose(1, 0, 2, 3)).reshape(d * d, -1)
    X, _ = solve(flat, Matrix._wrap(ctx, comms.T))
    if X is None:
        raise NotClosedError("matrices do not span a Lie algebra")
    c = X.data.T.reshape(d, d, d)
    pm = None
    if restricted:
        pows = stack
        for _ in range(ctx.p - 1):
            pows = _plane_product(ctx, pows, stack)
        pows = pows.reshape(d, -1)
        Y, _ = solve(flat, Matrix._wrap(ctx, pows.T))
        if Y is None:
            raise NotClosedError("matrices are not closed under p-th powers")
        pm = Y.data.T
    return StructLie(ctx, c, pm, labels, realization=mats, name=name)
