"""Restricted modules given by action matrices, and the tools used to analyse
them: duals, restriction, weight spaces, Hom spaces, MeatAxe-style
irreducibility tests, composition factors and isomorphism tests."""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ffla import GF, Matrix, Subspace, nullspace, solve
from .ffla import poly
from .ffla.matrix import _plane_product, lincomb
from .liecore import LieError, StructLie, ToralBasis

log = logging.getLogger(__name__)


class ModuleError(ValueError):
    pass


@dataclass
class InducedData:
    """How an induced module was built: u(A) (x)_{u(H)} V with PBW complement ``complement``."""

    H: StructLie
    V: "RModule"
    complement: Matrix
    p: int

    @property
    def rank(self) -> int:
        return self.complement.rows


class RModule:
    """A restricted module: one action matrix per basis element of ``algebra``."""

    def __init__(
        self,
        algebra: StructLie,
        action: Sequence[Matrix],
        dim: int | None = None,
        name: str = "",
        induced: InducedData | None = None,
    ):
        if len(action) != algebra.dim:
            raise ModuleError(f"{len(action)} action matrices for an algebra of dim {algebra.dim}")
        if dim is None:
            if not action:
                raise ModuleError("dimension needed for a module over the zero algebra")
            dim = action[0].rows
        for a in action:
            if a.shape != (dim, dim):
                raise ModuleError(f"action matrix of shape {a.shape} in a module of dim {dim}")
            if a.ctx != algebra.ctx:
                raise ModuleError("action matrices over a different field")
        self.algebra = algebra
        self.action = tuple(action)
        self._dim = dim
        self.name = name
        self.induced = induced

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def ctx(self):
        return self.algebra.ctx

    def __repr__(self):
        return f"RModule({self.name or 'anonymous'}, dim={self.dim}, over {self.algebra.name or self.algebra.dim})"

    def rho(self, x) -> Matrix:
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (self.algebra.dim,):
            raise ModuleError("element has the wrong length")
        if self.algebra.dim == 0:
            return Matrix.zeros(self.ctx, self.dim, self.dim)
        return Matrix._wrap(self.ctx, lincomb(self.ctx, x, self.action))

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.ctx.p},{self.ctx.m},{self.algebra.dim},{self.dim}".encode())
        for a in self.action:
            h.update(a.data.tobytes())
        return h.hexdigest()[:16]

    def to_json(self, algebra_ref: str = "") -> dict:
        return {
            "algebra-ref": algebra_ref or self.algebra.name,
            "dim": self.dim,
            "action": [a.to_json() for a in self.action],
        }

    @classmethod
    def from_json(cls, algebra: StructLie, data: dict, name: str = "") -> "RModule":
        d = int(data["dim"])
        mats = [Matrix.from_json(algebra.ctx, m, cols=d) for m in data["action"]]
        return cls(algebra, mats, d, name=name)


def check_compatibility(M: RModule):
    """``None`` if brackets and p-powers act compatibly, else the offending index."""
    A = M.algebra
    d = A.dim
    for i in range(d):
        for j in range(i + 1, d):
            if M.rho(A.brackets[i, j]) != M.action[i].commutator(M.action[j]):
                return ("bracket", (i, j))
    if A.pmap is not None:
        for i in range(d):
            if M.rho(A.pmap[i]) != M.action[i].power(A.p):
                return ("pmap", i)
    return None


def assert_module(M: RModule) -> RModule:
    bad = check_compatibility(M)
    if bad is not None:
        raise ModuleError(f"not a restricted module: {bad[0]} compatibility fails at {bad[1]}")
    return M


# -- constructions -------------------------------------------------------------


def trivial_module(A: StructLie) -> RModule:
    return RModule(A, [Matrix.zeros(A.ctx, 1, 1) for _ in range(A.dim)], 1, name="F")


def one_dim_module(A: StructLie, values: Sequence[int], name: str = "") -> RModule:
    M = RModule(A, [Matrix(A.ctx, [[int(v)]]) for v in values], 1, name=name)
    return assert_module(M)


def character_module(T: StructLie, mu: Sequence[int]) -> RModule:
    """F(mu) for a torus algebra whose basis consists of toral elements."""
    if T.pmap is None:
        raise ModuleError("characters need a restricted torus")
    p = T.p
    mu = [int(c) for c in mu]
    if len(mu) != T.dim or any(not 0 <= c < p for c in mu):
        raise ModuleError(f"character must be {T.dim} prime-field entries")
    for i in range(T.dim):
        if not np.array_equal(T.pmap[i], T.basis_vector(i)):
            raise ModuleError("torus basis is not toral")
    return one_dim_module(T, mu, name="F(" + "".join(map(str, mu)) + ")")


def borel_character_module(B: StructLie, lam: int, toral_index: int = 0) -> RModule:
    """F[lambda]: the toral basis element acts by lambda, the rest by zero."""
    p = B.p
    red = lam % p
    if red != lam:
        log.info("weight %d reduced mod %d to %d", lam, p, red)
    values = [0] * B.dim
    values[toral_index] = red
    return one_dim_module(B, values, name=f"F[{red}]")


def adjoint_module(A: StructLie) -> RModule:
    return RModule(A, [A.ad(i) for i in range(A.dim)], A.dim, name=f"ad {A.name}")


def ideal_module(A: StructLie, I: Subspace, name: str = "") -> RModule:
    """The ideal ``I`` of ``A`` as an A-module under the adjoint action."""
    if I.ambient != A.dim:
        raise ModuleError("ideal lives in a different ambient space")
    basis = I.basis.data
    mats = []
    for i in range(A.dim):
        imgs = (A.ad(i) @ Matrix._wrap(A.ctx, basis.T)).data.T
        if I.dim and I.reduce(imgs).any():
            raise ModuleError("subspace is not an ideal")
        mats.append(Matrix._wrap(A.ctx, imgs[:, I.pivots].T.copy()))
    return RModule(A, mats, I.dim, name=name)


def direct_sum(*mods: RModule) -> RModule:
    A = mods[0].algebra
    if any(m.algebra is not A for m in mods):
        raise ModuleError("direct sum of modules over different algebras")
    dim = sum(m.dim for m in mods)
    mats = []
    for i in range(A.dim):
        big = np.zeros((dim, dim), dtype=np.int64)
        o = 0
        for m in mods:
            big[o : o + m.dim, o : o + m.dim] = m.action[i].data
            o += m.dim
        mats.append(Matrix._wrap(A.ctx, big))
    return RModule(A, mats, dim, name=" + ".join(m.name or "?" for m in mods))


def dual_module(M: RModule) -> RModule:
    return RModule(M.algebra, [-(a.T) for a in M.action], M.dim, name=f"{M.name}*")


def restrict_module(M: RModule, H) -> RModule:
    """Restriction to a subalgebra, given as a StructLie with embedding or as rows/Subspace."""
    A = M.algebra
    if H is A:
        return RModule(A, list(M.action), M.dim, name=M.name, induced=M.induced)
    if not isinstance(H, StructLie):
        H = A.subalgebra(H)
    if H.embedding is None or H.embedding.cols != A.dim:
        raise ModuleError("subalgebra carries no embedding into the module's algebra")
    mats = [M.rho(H.embedding.row(i)) for i in range(H.dim)]
    return RModule(H, mats, M.dim, name=f"res {M.name}")


def _stacked_kernel(ctx, mats: Sequence[Matrix], dim: int) -> Subspace:
    mats = [m for m in mats]
    if not mats:
        return Subspace.full(ctx, dim)
    big = mats[0].vstack(*mats[1:]) if len(mats) > 1 else mats[0]
    return nullspace(big)


def weight_space(M: RModule, T, mu: Sequence[int] | None = None) -> Subspace:
    """{v : rho(t_i) v = mu_i v}; ``T`` is a ToralBasis or rows of algebra vectors.

    Non-toral rows are allowed only with mu = 0 (fixed points).
    """
    ctx = M.ctx
    A = M.algebra
    if isinstance(T, ToralBasis):
        rows = T.vectors
        toral = True
    else:
        rows = T.basis if isinstance(T, Subspace) else (T if isinstance(T, Matrix) else Matrix.from_rows(ctx, list(T), cols=A.dim))
        toral = False
    if mu is None:
        mu = [0] * rows.rows
    if len(mu) != rows.rows:
        raise ModuleError("one weight per basis vector required")
    if any(mu) and not toral:
        if A.pmap is None or any(not np.array_equal(A.pmap_eval(rows.row(i)), rows.row(i)) for i in range(rows.rows)):
            raise ModuleError("nonzero weights need a toral basis")
    eye = np.eye(M.dim, dtype=np.int64)
    mats = []
    for i in range(rows.rows):
        R = M.rho(rows.row(i))
        mats.append(Matrix._wrap(ctx, ctx.sub(R.data, ctx.mul(eye, int(mu[i]) % ctx.p))))
    return _stacked_kernel(ctx, mats, M.dim)


def fixed_points(M: RModule, rows) -> Subspace:
    return weight_space(M, rows, None)


# -- Hom spaces -------------------------------------------------------------------


def _hom_direct(M: RModule, N: RModule) -> list[Matrix]:
    ctx = M.ctx
    dm, dn = M.dim, N.dim
    if dm == 0 or dn == 0:
        return []
    eye_m = Matrix.identity(ctx, dm)
    eye_n = Matrix.identity(ctx, dn)
    blocks = []
    # phi rho_M(x) - rho_N(x) phi = 0, phi stored row-major (dn x dm)
    for a, b in zip(M.action, N.action):
        blocks.append(eye_n.kron(a.T) - b.kron(eye_m))
    if not blocks:
        return [Matrix._wrap(ctx, v.reshape(dn, dm)) for v in Subspace.full(ctx, dn * dm).vectors()]
    ker = _stacked_kernel(ctx, blocks, dn * dm)
    return [Matrix._wrap(ctx, v.reshape(dn, dm)) for v in ker.vectors()]


def _monomial_images(N: RModule, info: InducedData) -> list[Matrix]:
    """rho_N(c^a) for every PBW monomial a of the complement, in module order."""
    p, r = info.p, info.rank
    comp = [N.rho(info.complement.row(i)) for i in range(r)]
    out = [Matrix.identity(N.ctx, N.dim)]
    for mono in range(1, p**r):
        j = _first_index(mono, p)
        out.append(comp[j] @ out[mono - p**j])
    return out


def _first_index(mono: int, p: int) -> int:
    j = 0
    while mono % p == 0:
        mono //= p
        j += 1
    return j


def _hom_frobenius(M: RModule, N: RModule) -> list[Matrix]:
    info = M.induced
    resN = restrict_module(N, info.H)
    psis = _hom_direct(info.V, resN)
    if not psis:
        return []
    imgs = _monomial_images(N, info)
    big = Matrix._wrap(N.ctx, np.concatenate([m.data for m in imgs], axis=0))  # (P*dimN) x dimN
    out = []
    P = len(imgs)
    for psi in psis:
        cols = (big @ psi).data.reshape(P, N.dim, info.V.dim)
        phi = cols.transpose(1, 0, 2).reshape(N.dim, P * info.V.dim)
        out.append(Matrix._wrap(N.ctx, phi))
    return out


def is_intertwiner(M: RModule, N: RModule, phi: Matrix) -> bool:
    return all(phi @ a == b @ phi for a, b in zip(M.action, N.action))


def hom_space(M: RModule, N: RModule, method: str = "auto") -> list[Matrix]:
    """Basis of Hom(M, N) as dim N x dim M matrices."""
    if M.algebra is not N.algebra and not M.algebra.same_structure(N.algebra):
        raise ModuleError("Hom between modules over different algebras")
    if method == "auto":
        method = "frobenius" if M.induced is not None else "direct"
    if method == "frobenius":
        if M.induced is None:
            raise ModuleError("Frobenius shortcut needs an induced source module")
        return _hom_frobenius(M, N)
    if method == "direct":
        return _hom_direct(M, N)
    raise ValueError(f"unknown Hom method {method!r}")


# -- submodules -------------------------------------------------------------------


def spin_module(M: RModule, vectors) -> Subspace:
    """Smallest submodule containing ``vectors``."""
    ctx = M.ctx
    S = Subspace.span(ctx, vectors if isinstance(vectors, Matrix) else list(vectors), M.dim)
    frontier = S.basis.data
    stack = np.stack([a.data for a in M.action]) if M.action else None
    while frontier.shape[0] and stack is not None:
        imgs = _plane_product(ctx, stack, frontier.T[None, :, :])  # (d, dim, f)
        cand = imgs.transpose(0, 2, 1).reshape(-1, M.dim)
        res = S.reduce(cand)
        res = res[res.any(axis=1)]
        if res.shape[0] == 0:
            break
        new = Subspace.span(ctx, Matrix._wrap(ctx, res), M.dim)
        S = S + new
        frontier = new.basis.data
    return S


def spin_dual(M: RModule, vectors) -> Subspace:
    """Smallest subspace containing ``vectors`` stable under all transposed actions."""
    return spin_module(dual_module(M), vectors)


def is_submodule(M: RModule, S: Subspace) -> bool:
    if S.dim == 0:
        return True
    return all(not S.reduce((a @ Matrix._wrap(M.ctx, S.basis.data.T)).data.T).any() for a in M.action)


def submodule(M: RModule, S: Subspace, name: str = "") -> RModule:
    if not is_submodule(M, S):
        raise ModuleError("subspace is not a submodule")
    mats = []
    for a in M.action:
        imgs = (a @ Matrix._wrap(M.ctx, S.basis.data.T)).data.T
        mats.append(Matrix._wrap(M.ctx, imgs[:, S.pivots].T.copy()))
    return RModule(M.algebra, mats, S.dim, name=name)


def quotient(M: RModule, S: Subspace, name: str = "") -> RModule:
    if not is_submodule(M, S):
        raise ModuleError("subspace is not a submodule")
    comp = S.complement_indices()
    mats = []
    k = len(comp)
    for a in M.action:
        cols = a.data[:, comp]
        red = S.reduce(cols.T)
        mats.append(Matrix._wrap(M.ctx, red[:, comp].T.copy()))
    return RModule(M.algebra, mats, k, name=name)


# -- MeatAxe ---------------------------------------------------------------------------


@dataclass
class NortonResult:
    status: str  # irreducible | reducible | inconclusive
    submodule: Subspace | None = None
    certificate: dict = field(default_factory=dict)

    @property
    def irreducible(self) -> bool:
        return self.status == "irreducible"

    @property
    def reducible(self) -> bool:
        return self.status == "reducible"


EXHAUSTIVE_POINTS = 4096


def _random_algebra_element(M: RModule, rng: np.random.Generator) -> Matrix:
    ctx = M.ctx
    gens = list(M.action)
    dim = M.dim
    theta = Matrix._wrap(ctx, ctx.mul(np.eye(dim, dtype=np.int64), int(ctx.random(rng))))
    for _ in range(3):
        word = gens[int(rng.integers(len(gens)))]
        for _ in range(int(rng.integers(0, 3))):
            word = word @ gens[int(rng.integers(len(gens)))]
        c = int(rng.integers(1, ctx.q))
        theta = theta + word.scale(c)
    return theta


def _projective_points(ctx, K: Subspace):
    """One representative per 1-dimensional subspace of K."""
    k = K.dim
    B = K.basis.data
    for lead in range(k):
        for tail in itertools.product(range(ctx.q), repeat=k - lead - 1):
            coeffs = np.zeros(k, dtype=np.int64)
            coeffs[lead] = 1
            coeffs[lead + 1 :] = tail
            yield _plane_product(ctx, coeffs[None, :], B)[0]


def _n_points(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def _annihilator(ctx, U: Subspace, dim: int) -> Subspace:
    return nullspace(U.basis) if U.dim else Subspace.full(ctx, dim)


def norton_test(M: RModule, seed: int = 0, budget: int = 64) -> NortonResult:
    """Las-Vegas irreducibility test; submodules returned are verified."""
    ctx = M.ctx
    dim = M.dim
    if dim == 0:
        raise ModuleError("zero module")
    if dim == 1:
        return NortonResult("irreducible", certificate={"reason": "dimension 1"})
    if not M.action:
        v = np.zeros(dim, dtype=np.int64)
        v[0] = 1
        return _found(M, Subspace.span(ctx, [v], dim), "zero algebra")
    rng = np.random.default_rng(seed)
    for attempt in range(budget):
        theta = _random_algebra_element(M, rng)
        v0 = ctx.random(rng, dim)
        f = poly.min_poly_vector(theta, v0)
        if len(f) <= 1:
            continue
        for g in poly.irreducible_factors(ctx, f, rng):
            G = poly.eval_matrix(g, theta)
            K = nullspace(G)
            deg = len(g) - 1
            if K.dim == 0:
                continue
            v = K.basis.row(0)
            U = spin_module(M, [v])
            if U.dim < dim:
                return _found(M, U, "kernel vector spin")
            Kt = nullspace(G.T)
            w = Kt.basis.row(0)
            Ut = spin_dual(M, [w])
            if Ut.dim < dim:
                return _found(M, _annihilator(ctx, Ut, dim), "dual kernel vector spin")
            if K.dim == deg:
                return NortonResult(
                    "irreducible",
                    certificate={"attempt": attempt, "factor_degree": deg, "nullity": K.dim, "criterion": "norton"},
                )
            if _n_points(ctx.q, K.dim) + _n_points(ctx.q, Kt.dim) <= EXHAUSTIVE_POINTS:
                for u in _projective_points(ctx, K):
                    U = spin_module(M, [u])
                    if U.dim < dim:
                        return _found(M, U, "exhaustive kernel spin")
                for u in _projective_points(ctx, Kt):
                    Ut = spin_dual(M, [u])
                    if Ut.dim < dim:
                        return _found(M, _annihilator(ctx, Ut, dim), "exhaustive dual kernel spin")
                return NortonResult(
                    "irreducible",
                    certificate={"attempt": attempt, "factor_degree": deg, "nullity": K.dim, "criterion": "exhaustive"},
                )
            break
    return NortonResult("inconclusive", certificate={"attempts": budget})


def _found(M: RModule, U: Subspace, how: str) -> NortonResult:
    if not (0 < U.dim < M.dim) or not is_submodule(M, U):
        raise ModuleError("internal error: proposed submodule failed verification")
    return NortonResult("reducible", submodule=U, certificate={"method": how, "dim": U.dim})


class InconclusiveError(RuntimeError):
    pass


@dataclass
class Factor:
    module: RModule
    certificate: dict


def chop(M: RModule, seed: int = 0, budget: int = 64) -> list[Factor]:
    """Composition factors by recursive splitting."""
    res = norton_test(M, seed=seed, budget=budget)
    if res.status == "inconclusive":
        raise InconclusiveError(f"irreducibility of a {M.dim}-dimensional module undecided")
    if res.irreducible:
        return [Factor(M, res.certificate)]
    U = res.submodule
    return chop(submodule(M, U), seed + 1, budget) + chop(quotient(M, U), seed + 2, budget)


# -- isomorphism ---------------------------------------------------------------------


@dataclass
class IsoResult:
    status: str  # isomorphic | distinct | inconclusive
    map: Matrix | None = None
    witness: dict = field(default_factory=dict)

    @property
    def isomorphic(self) -> bool:
        return self.status == "isomorphic"

    @property
    def distinct(self) -> bool:
        return self.status == "distinct"


EXHAUSTIVE_HOM = 2**16


def rank_profile(M: RModule) -> tuple[int, ...]:
    return tuple(a.rank() for a in M.action)


def iso_test(M: RModule, N: RModule, seed: int = 0, budget: int = 64) -> IsoResult:
    if M.algebra is not N.algebra and not M.algebra.same_structure(N.algebra):
        raise ModuleError("modules over different algebras")
    if M.dim != N.dim:
        return IsoResult("distinct", witness={"invariant": "dimension", "values": [M.dim, N.dim]})
    rm, rn = rank_profile(M), rank_profile(N)
    if rm != rn:
        i = next(k for k in range(len(rm)) if rm[k] != rn[k])
        return IsoResult("distinct", witness={"invariant": "rank", "index": i, "values": [rm[i], rn[i]]})
    if M.dim == 0:
        return IsoResult("isomorphic", map=Matrix.zeros(M.ctx, 0, 0))
    H = hom_space(M, N)
    if not H:
        return IsoResult("distinct", witness={"invariant": "Hom(M,N) = 0"})
    Hback = hom_space(N, M)
    if len(Hback) != len(H):
        return IsoResult("distinct", witness={"invariant": "Hom dimension asymmetry", "values": [len(H), len(Hback)]})
    ctx = M.ctx
    rng = np.random.default_rng(seed)
    stack = np.stack([h.data for h in H])
    k = len(H)
    exhaustive = ctx.q**k <= EXHAUSTIVE_HOM
    if exhaustive:
        candidates = (np.array(c, dtype=np.int64) for c in itertools.product(range(ctx.q), repeat=k))
    else:
        candidates = (ctx.random(rng, k) for _ in range(budget))
    for coeffs in candidates:
        if not coeffs.any():
            continue
        phi = Matrix._wrap(ctx, lincomb(ctx, coeffs, stack))
        if phi.rank() == M.dim:
            if not is_intertwiner(M, N, phi):
                raise ModuleError("internal error: Hom basis element does not intertwine")
            return IsoResult("isomorphic", map=phi, witness={"hom_dim": k})
    if exhaustive:
        return IsoResult("distinct", witness={"invariant": "no invertible element in Hom (exhaustive)", "hom_dim": k})
    return IsoResult("inconclusive", witness={"hom_dim": k, "tries": budget})


def module_in_list(M: RModule, refs: Sequence[RModule], seed: int = 0) -> int | None:
    """Index of the first reference isomorphic to ``M``."""
    for i, R in enumerate(refs):
        res = iso_test(M, R, seed=seed)
        if res.status == "inconclusive":
            raise InconclusiveError("isomorphism test undecided")
        if res.isomorphic:
            return i
    return None


def cyclic_vector(M: RModule, rng: np.random.Generator | None = None, tries: int = 32):
    """A vector generating M, or ``None`` if none was found among standard and random vectors."""
    ctx = M.ctx
    cands = [np.eye(M.dim, dtype=np.int64)[i] for i in range(M.dim)]
    rng = rng or np.random.default_rng(0)
    cands += [ctx.random(rng, M.dim) for _ in range(tries)]
    for v in cands:
        if v.any() and spin_module(M, [v]).dim == M.dim:
            return v
    return None

