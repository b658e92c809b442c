"""Restricted enveloping algebras through truncated PBW monomials.

A PBW monomial over generators c_0, ..., c_{r-1} with exponents a_i < p is
encoded as the integer sum a_i p^i; the leftmost factor of the ordered
product c_0^{a_0} c_1^{a_1} ... is the lowest index with a_i != 0.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .ffla import Matrix, Subspace
from .ffla.matrix import _plane_product, lincomb
from .liecore import LieError, NotClosedError, StructLie
from .rmod import InducedData, ModuleError, RModule, check_compatibility

MAX_REGULAR_DIM = 10
MAX_PBW_DIM = 30


def first_index(mono: int, p: int) -> int:
    if p == 2:
        return (mono & -mono).bit_length() - 1
    j = 0
    while mono % p == 0:
        mono //= p
        j += 1
    return j


def exponent(mono: int, i: int, p: int) -> int:
    return (mono // p**i) % p


@contextmanager
def _deep_recursion(limit: int = 200000):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


class _Straightener:
    """Action of generators on c^a (x) V, memoized per (generator, monomial).

    Generators 0..r-1 of ``Ab`` are the PBW letters, r..d-1 span H and act on
    the tail V through ``tail``.
    """

    def __init__(self, Ab: StructLie, r: int, tail: list[np.ndarray], dim_v: int):
        self.Ab = Ab
        self.ctx = Ab.ctx
        self.p = Ab.p
        self.r = r
        self.P = self.p**r
        self.dv = dim_v
        self.size = self.P * dim_v
        self.tail = tail
        self.memo: dict[tuple[int, int], np.ndarray] = {}
        self.active: set[tuple[int, int]] = set()

    def unit(self, mono: int) -> np.ndarray:
        out = np.zeros((self.size, self.dv), dtype=np.int64)
        out[mono * self.dv : (mono + 1) * self.dv] = np.eye(self.dv, dtype=np.int64)
        return out

    def block(self, g: int, mono: int) -> np.ndarray:
        key = (g, mono)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if key in self.active:
            raise RuntimeError("straightening entered a cycle")
        self.active.add(key)
        out = self._compute(g, mono)
        self.active.discard(key)
        out.setflags(write=False)
        self.memo[key] = out
        return out

    def _compute(self, g: int, mono: int) -> np.ndarray:
        p, r = self.p, self.r
        ctx = self.ctx
        if g >= r:
            if mono == 0:
                out = np.zeros((self.size, self.dv), dtype=np.int64)
                out[: self.dv] = self.tail[g - r]
                return out
            j = first_index(mono, p)
            rest = mono - p**j
            inner = self.block(g, rest)
            return ctx.add(self.apply_gen(j, inner), self.act_elem(self.Ab.brackets[g, j], rest))
        if mono == 0:
            return self.unit(p**g)
        j = first_index(mono, p)
        if g < j:
            return self.unit(mono + p**g)
        if g == j:
            a = exponent(mono, g, p)
            if a < p - 1:
                return self.unit(mono + p**g)
            return self.act_elem(self.Ab.pmap[g], mono - (p - 1) * p**g)
        rest = mono - p**j
        inner = self.block(g, rest)
        return ctx.add(self.apply_gen(j, inner), self.act_elem(self.Ab.brackets[g, j], rest))

    def act_elem(self, y, mono: int) -> np.ndarray:
        nz = np.flatnonzero(y)
        if nz.size == 0:
            return np.zeros((self.size, self.dv), dtype=np.int64)
        blocks = [self.block(int(g), mono) for g in nz]
        return lincomb(self.ctx, y[nz], blocks)

    def apply_gen(self, j: int, W: np.ndarray) -> np.ndarray:
        Wb = W.reshape(self.P, self.dv, self.dv)
        supp = np.flatnonzero(Wb.any(axis=(1, 2)))
        if supp.size == 0:
            return np.zeros((self.size, self.dv), dtype=np.int64)
        X = np.concatenate([self.block(j, int(m)) for m in supp], axis=1)
        Y = Wb[supp].reshape(supp.size * self.dv, self.dv)
        return _plane_product(self.ctx, X, Y)

    def full_matrix(self, g: int) -> np.ndarray:
        return np.concatenate([self.block(g, mono) for mono in range(self.P)], axis=1)


def zero_subalgebra(A: StructLie) -> StructLie:
    return A.subalgebra(Matrix.zeros(A.ctx, 0, A.dim), labels=[], name="0")


def _subalgebra_of(A: StructLie, H, V: RModule) -> StructLie:
    Hv = V.algebra
    if Hv.embedding is None or Hv.embedding.cols != A.dim:
        raise ModuleError("V must be a module over a subalgebra of A (with embedding)")
    rows = Hv.embedding
    if H is not None:
        if isinstance(H, StructLie):
            Hs = Subspace.span(A.ctx, H.embedding, A.dim)
        elif isinstance(H, Subspace):
            Hs = H
        else:
            Hs = Subspace.span(A.ctx, H if isinstance(H, Matrix) else list(H), A.dim)
        if Hs != Subspace.span(A.ctx, rows, A.dim):
            raise ModuleError("V is defined over a different subalgebra")
    ref = A.subalgebra(rows, require_restricted=True)
    if not ref.same_structure(Hv):
        raise LieError("subalgebra tables of V disagree with the ambient algebra")
    return Hv


def induced_module(A: StructLie, H, V: RModule, check: bool = True, name: str = "") -> RModule:
    """u(A) (x)_{u(H)} V with basis c^a (x) v_k at index a * dim V + k."""
    if A.pmap is None:
        raise LieError("induction needs a restricted algebra")
    try:
        Hv = _subalgebra_of(A, H, V)
    except NotClosedError as exc:
        raise ModuleError(f"H is not a restricted subalgebra: {exc}") from exc
    bad = check_compatibility(V)
    if bad is not None:
        raise ModuleError(f"V is not a restricted H-module ({bad[0]} at {bad[1]})")
    ctx = A.ctx
    d = A.dim
    rows = Hv.embedding
    comp_idx = Subspace.span(ctx, rows, d).complement_indices()
    r = len(comp_idx)
    comp = Matrix._wrap(ctx, np.eye(d, dtype=np.int64)[comp_idx])
    B = comp.vstack(rows) if rows.rows else comp
    Ab = A.rebase(B)
    with _deep_recursion():
        eng = _Straightener(Ab, r, [a.data for a in V.action], V.dim)
        mats_b = [eng.full_matrix(g) for g in range(d)]
    Binv = B.inverse()
    stack = np.stack(mats_b)
    action = [Matrix._wrap(ctx, lincomb(ctx, Binv.row(i), stack)) for i in range(d)]
    M = RModule(
        A,
        action,
        eng.size,
        name=name or f"ind({V.name})",
        induced=InducedData(H=Hv, V=V, complement=comp, p=A.p),
    )
    if check:
        bad = check_compatibility(M)
        if bad is not None:
            raise ModuleError(f"induced action failed compatibility: {bad}")
    return M


induced_action = induced_module


def regular_module(A: StructLie, check: bool = False) -> RModule:
    """u(A) acting on itself from the left, in the PBW basis of A's basis order."""
    H = zero_subalgebra(A)
    V = RModule(H, [], 1, name="F")
    return induced_module(A, H, V, check=check, name=f"u({A.name})")


# -- sparse elements --------------------------------------------------------------------


class EnvelopingAlgebra:
    """u(A) with sparse elements {monomial: coefficient} over A's basis order."""

    def __init__(self, A: StructLie):
        if A.pmap is None:
            raise LieError("restricted enveloping algebra needs a p-map")
        self.A = A
        self.ctx = A.ctx
        self.p = A.p
        self.d = A.dim
        self._memo: dict[tuple[int, int], dict[int, int]] = {}

    @property
    def dim(self) -> int:
        return self.p**self.d

    def _add_into(self, acc: dict, terms: dict, c: int = 1):
        ctx = self.ctx
        for m, v in terms.items():
            val = ctx.add(acc.get(m, 0), ctx.mul(v, c) if c != 1 else v)
            if val:
                acc[m] = int(val)
            else:
                acc.pop(m, None)

    def gen_mono(self, i: int, mono: int) -> dict[int, int]:
        key = (i, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        p = self.p
        if mono == 0:
            out = {p**i: 1}
        else:
            j = first_index(mono, p)
            if i < j or (i == j and exponent(mono, i, p) < p - 1):
                out = {mono + p**i: 1}
            elif i == j:
                out = self.elem_mono(self.A.pmap[i], mono - (p - 1) * p**i)
            else:
                rest = mono - p**j
                out = {}
                self._add_into(out, self.gen_elem(j, self.gen_mono(i, rest)))
                self._add_into(out, self.elem_mono(self.A.brackets[i, j], rest))
        self._memo[key] = out
        return out

    def elem_mono(self, y, mono: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in np.flatnonzero(y):
            self._add_into(out, self.gen_mono(int(g), mono), int(y[g]))
        return out

    def gen_elem(self, i: int, terms: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for m, c in terms.items():
            self._add_into(out, self.gen_mono(i, m), c)
        return out

    def letters(self, mono: int) -> list[int]:
        """Generator indices of the ordered product, left to right."""
        out = []
        for i in range(self.d):
            out += [i] * exponent(mono, i, self.p)
        return out

    def mul_terms(self, u: dict[int, int], v: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        with _deep_recursion():
            for m, c in u.items():
                cur = dict(v)
                for i in reversed(self.letters(m)):
                    cur = self.gen_elem(i, cur)
                self._add_into(out, cur, c)
        return out

    # element helpers
    def one(self) -> "UEAElement":
        return UEAElement(self, {0: 1})

    def gen(self, i: int) -> "UEAElement":
        return UEAElement(self, {self.p**i: 1})

    def element(self, x) -> "UEAElement":
        """Image of a Lie algebra element."""
        return UEAElement(self, {self.p**i: int(x[i]) for i in np.flatnonzero(x)})

    def monomial(self, exps) -> "UEAElement":
        mono = sum(int(a) * self.p**i for i, a in enumerate(exps))
        return UEAElement(self, {mono: 1})


@dataclass
class UEAElement:
    U: EnvelopingAlgebra
    terms: dict

    def __post_init__(self):
        self.terms = {int(m): int(c) for m, c in self.terms.items() if c}

    def __mul__(self, other: "UEAElement") -> "UEAElement":
        return UEAElement(self.U, self.U.mul_terms(self.terms, other.terms))

    def __add__(self, other: "UEAElement") -> "UEAElement":
        out = dict(self.terms)
        self.U._add_into(out, other.terms)
        return UEAElement(self.U, out)

    def scale(self, c: int) -> "UEAElement":
        return UEAElement(self.U, {m: self.U.ctx.mul(v, c) for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, UEAElement) and self.terms == other.terms

    def degree(self) -> int:
        U = self.U
        return max((len(U.letters(m)) for m in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        U = self.U
        parts = []
        for m in sorted(self.terms):
            word = "*".join(U.A.labels[i] for i in U.letters(m)) or "1"
            c = self.terms[m]
            parts.append(word if c == 1 else f"{U.ctx.coeff_string(c)}.{word}")
        return " + ".join(parts)


def enveloping(A: StructLie) -> EnvelopingAlgebra:
    U = getattr(A, "_uea", None)
    if U is None:
        U = EnvelopingAlgebra(A)
        A._uea = U
    return U


def straighten_mul(A: StructLie, u: UEAElement, v: UEAElement) -> UEAElement:
    U = enveloping(A)
    if u.U is not U or v.U is not U:
        raise LieError("elements belong to a different enveloping algebra")
    return u * v


def uea_dim(A: StructLie, certify: bool = True, seed: int = 0, samples: int = 16) -> int:
    """p^dim A; for dim A <= 10 the left regular representation is built and checked."""
    if A.pmap is None:
        raise LieError("restricted enveloping algebra needs a p-map")
    n = A.p**A.dim
    if not certify or A.dim > MAX_REGULAR_DIM:
        return n
    U = enveloping(A)
    R = regular_module(A)
    if R.dim != n:
        raise LieError("regular representation has the wrong dimension")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a, b, c = (int(t) for t in rng.integers(0, n, size=3))
        x, y, z = (UEAElement(U, {t: 1}) for t in (a, b, c))
        if (x * y) * z != x * (y * z):
            raise LieError(f"associativity fails on monomials {a}, {b}, {c}")
        i = int(rng.integers(A.dim))
        col = R.action[i].col(b)
        sparse = U.gen_mono(i, b)
        dense = np.zeros(n, dtype=np.int64)
        for m, v in sparse.items():
            dense[m] = v
        if not np.array_equal(col, dense):
            raise LieError("regular representation disagrees with sparse straightening")
    return n
