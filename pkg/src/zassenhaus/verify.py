"""Registry of named checks on the restricted Zassenhaus algebra and its
modules, and the machine-readable report they produce."""

from __future__ import annotations

import functools
import json
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .cartan import (
    binom_mod,
    canonical_frame,
    d_label,
    derivation_algebra,
    e_label,
    realization_coords,
    restricted_closure,
    witt_algebra,
    witt_oracle_check,
    zassenhaus_algebra,
)
from .endo import indecomposability_test
from .ffla import GF, Matrix, Subspace
from .ffla.field import CONWAY
from .liecore import (
    NotClosedError,
    centralizer,
    derived_series_dims,
    derived_subalgebra,
    jacobi_check,
    pmap_axioms_check,
)
from .rmod import (
    InconclusiveError,
    adjoint_module,
    borel_character_module,
    character_module,
    chop,
    cyclic_vector,
    dual_module,
    fixed_points,
    hom_space,
    ideal_module,
    is_intertwiner,
    iso_test,
    module_in_list,
    norton_test,
    restrict_module,
    submodule,
    trivial_module,
    weight_space,
)
from .uea import induced_module, regular_module, uea_dim

MAX_ALGEBRA_N = 4
MAX_MODULE_N = 3


class UnsupportedError(ValueError):
    pass


class CheckFailure(Exception):
    def __init__(self, message: str, **witness):
        super().__init__(message)
        self.witness = {"message": message, **witness}


class NeedsExtension(Exception):
    def __init__(self, message: str, **data):
        super().__init__(message)
        self.data = data


class Skip(Exception):
    pass


@dataclass
class CheckResult:
    id: str
    status: str  # pass | fail | skip | needs-extension
    claim: str
    data: dict = field(default_factory=dict)
    millis: int = 0
    witness: dict | None = None
    reason: str | None = None

    def to_dict(self, timing: bool = False) -> dict:
        out = {"id": self.id, "status": self.status, "claim": self.claim, "data": self.data}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        if timing:
            out["millis"] = self.millis
        return out


def _require(cond: bool, message: str, **witness):
    if not cond:
        raise CheckFailure(message, **witness)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


# -- shared constructions ----------------------------------------------------------------


class Session:
    """Lazily built objects shared by the checks of one run."""

    def __init__(self, n: int, ctx, seed: int = 0):
        self.n = n
        self.ctx = ctx
        self.seed = seed
        self.N = 2**n

    @functools.cached_property
    def witt(self):
        return witt_algebra(2, self.n, self.ctx)

    @property
    def W(self):
        return self.witt[1]

    @functools.cached_property
    def W1(self):
        W = self.W
        rows = Subspace.span(self.ctx, [W.basis_vector(i) for i in self.witt[2]], W.dim).basis
        return W.subalgebra(rows, name="W(1;n)^(1)")

    @functools.cached_property
    def frame(self):
        return canonical_frame(self.n, self.ctx)

    @property
    def wbar(self):
        return self.frame.wbar

    @functools.cached_property
    def der(self):
        return derivation_algebra(self.W)

    def span(self, indices) -> Subspace:
        A = self.wbar
        return Subspace.span(self.ctx, [A.basis_vector(i) for i in indices], A.dim)

    @functools.cached_property
    def L(self):
        return ideal_module(self.wbar, self.span(self.frame.derived), name="L")

    @functools.cached_property
    def Wmod(self):
        return ideal_module(self.wbar, self.span(self.frame.witt), name="W")

    @functools.cached_property
    def F(self):
        return trivial_module(self.wbar)

    @functools.cached_property
    def T(self):
        return self.frame.t0_algebra()

    @functools.cached_property
    def B(self):
        return self.frame.borel_algebra()

    @functools.cached_property
    def P(self) -> dict:
        return {
            mu: induced_module(self.wbar, self.T, character_module(self.T, mu), name="P(" + "".join(map(str, mu)) + ")")
            for mu in self.frame.characters
        }

    def borel_induced(self, lam: int):
        return induced_module(self.wbar, self.B, borel_character_module(self.B, lam))

    @functools.cached_property
    def chops(self) -> dict:
        return {mu: chop(P, seed=self.seed) for mu, P in self.P.items()}

    @functools.cached_property
    def indec(self) -> dict:
        return {mu: indecomposability_test(P, seed=self.seed) for mu, P in self.P.items()}


# -- checks -------------------------------------------------------------------------------


def check_alg_jacobi(S: Session):
    algebras = {"W(1;n)": S.W, "Wbar(1;n)": S.wbar, "Der(W(1;n))": S.der}
    algebras["W(1;n)^(1)"] = S.W1
    algebras["L(E)"] = zassenhaus_algebra(2, S.n, S.ctx)
    dims = {}
    for name, A in algebras.items():
        bad = jacobi_check(A)
        _require(bad is None, f"Jacobi fails in {name}", triple=bad)
        dims[name] = A.dim
    return {"dims": dims}


def check_alg_oracle(S: Session):
    W, Wb, n, N = S.W, S.wbar, S.n, S.N
    bad = witt_oracle_check(W)
    _require(bad is None, "binomial bracket differs from the commutator of O(1;n) operators", pair=bad)
    _require(np.array_equal(Wb.brackets[:N, :N, :N], W.brackets), "realized brackets differ from the binomial table")
    _require(not Wb.brackets[:N, :N, N:].any(), "brackets of W leave W")
    bad = pmap_axioms_check(Wb)
    _require(bad is None, "p-map axioms fail", violation=bad)
    idx = Wb.labels.index
    for j in range(-1, N - 1):
        got = Wb.pmap[idx(e_label(j))]
        if j == -1:
            want = Wb.vector([d_label(1)]) if n > 1 else np.zeros(Wb.dim, dtype=np.int64)
        else:
            c = binom_mod(2 * j + 1, j, 2)
            want = Wb.vector([e_label(2 * j)]) if c and 2 * j <= N - 2 else np.zeros(Wb.dim, dtype=np.int64)
        _require(np.array_equal(got, want), f"square of {e_label(j)} has the wrong closed form")
    for k in range(1, n):
        got = Wb.pmap[idx(d_label(k))]
        want = Wb.vector([d_label(k + 1)]) if k + 1 < n else np.zeros(Wb.dim, dtype=np.int64)
        _require(np.array_equal(got, want), f"square of {d_label(k)} is wrong")
        for j in range(-1, N - 1):
            got = Wb.brackets[idx(d_label(k)), idx(e_label(j))]
            want = Wb.vector([e_label(j - 2**k)]) if j - 2**k >= -1 else np.zeros(Wb.dim, dtype=np.int64)
            _require(np.array_equal(got, want), f"[{d_label(k)}, {e_label(j)}] is wrong")
    if n > 1:
        j = 2 ** (n - 1) - 1
        _require(
            np.array_equal(Wb.pmap[idx(e_label(j))], Wb.vector([e_label(N - 2)])),
            f"{e_label(j)}^[2] != {e_label(N - 2)}",
        )
    pairs = W.dim * (W.dim - 1) // 2
    return {"pairs_compared": pairs, "dim_wbar": Wb.dim}


def check_alg_LE(S: Session):
    LE = zassenhaus_algebra(2, S.n, S.ctx)
    bad = jacobi_check(LE)
    _require(bad is None, "Jacobi fails in L(E)", triple=bad)
    d_le = derived_subalgebra(LE).dim
    _require(LE.dim == S.N and d_le == S.N - 1, "L(E) has the wrong dimension or derived codimension", dims=[LE.dim, d_le])
    s_le = derived_series_dims(LE)
    s_w = derived_series_dims(S.W)
    _require(s_le == s_w, "derived series of L(E) and W(1;n) differ", le=s_le, w=s_w)
    # spot check of the defining bracket on all pairs
    E = S.ctx.subfield(S.n)
    for ia, a in enumerate(E):
        for ib, b in enumerate(E):
            k = E.index(int(S.ctx.add(a, b)))
            _require(int(LE.brackets[ia, ib, k]) == int(S.ctx.sub(b, a)), "bracket of L(E) mismatches", a=a, b=b)
    return {"dim": LE.dim, "derived_dim": d_le, "derived_series": s_le}


def check_alg_simple(S: Session):
    if S.n == 1:
        raise Skip("W(1;1)^(1) is one-dimensional")
    W1 = S.W1
    _require(W1.brackets.any(), "derived algebra is abelian")
    res = norton_test(adjoint_module(W1), seed=S.seed)
    _require(res.status != "inconclusive", "irreducibility test inconclusive")
    _require(res.irreducible, "adjoint module of W(1;n)^(1) is reducible", submodule_dim=res.submodule.dim if res.submodule else None)
    return {"dim": W1.dim, "certificate": res.certificate}


def check_env_dim(S: Session):
    want = S.N + S.n - 1
    _require(S.der.dim == want, "Der(W(1;n)) has the wrong dimension", got=S.der.dim, want=want)
    _require(S.wbar.dim == want, "Wbar(1;n) has the wrong dimension", got=S.wbar.dim)
    return {"dim_der": S.der.dim, "expected": want}


def check_env_closure(S: Session):
    D, W, n = S.der, S.W, S.n
    gens = S.witt[2] if n > 1 else range(W.dim)
    A = realization_coords(D, [W.ad(i) for i in gens])
    cl = restricted_closure(D, A)
    _require(cl.dim == D.dim, "restricted closure is smaller than Der(W(1;n))", closure=cl.dim, der=D.dim)
    data = {"closure_dim": cl.dim, "generators": len(list(gens)), "variant": "W(1;1)" if n == 1 else "W(1;n)^(1)"}
    if n > 1:
        C = centralizer(D, Subspace.span(S.ctx, A, D.dim))
        _require(C.dim == 0, "centralizer of ad W(1;n)^(1) in Der(W(1;n)) is nonzero", dim=C.dim)
        data["centralizer_dim"] = 0
    # Wbar maps isomorphically onto Der(W) through its action on W
    Wb = S.wbar
    phi = realization_coords(D, list(S.Wmod.action))
    _require(phi.rank() == D.dim, "Wbar(1;n) -> Der(W(1;n)) is not bijective")
    for i in range(Wb.dim):
        _require(
            np.array_equal(phi.T @ Wb.pmap[i], D.pmap_eval(phi.row(i))),
            "Wbar(1;n) -> Der(W(1;n)) does not preserve the p-map",
            index=i,
        )
        for j in range(i + 1, Wb.dim):
            _require(
                np.array_equal(phi.T @ Wb.brackets[i, j], D.bracket(phi.row(i), phi.row(j))),
                "Wbar(1;n) -> Der(W(1;n)) does not preserve brackets",
                pair=[i, j],
            )
    data["isomorphism"] = "Wbar(1;n) = Der(W(1;n)) as restricted algebras"
    return data


def check_env_cent(S: Session):
    Wb, n = S.wbar, S.n
    C = centralizer(Wb, [Wb.vector([e_label(-1)])])
    powers = [Wb.vector([e_label(-1)])]
    for _ in range(n - 1):
        powers.append(Wb.pmap_eval(powers[-1]))
    want = Subspace.span(S.ctx, powers, Wb.dim)
    _require(want.dim == n and C == want, "centralizer of the derivative is not spanned by its p-powers", dim=C.dim)
    data = {"dim": C.dim}
    if n > 1:
        Z = centralizer(Wb, S.span(S.frame.derived))
        _require(Z.dim == 0, "centralizer of W(1;n)^(1) is nonzero", dim=Z.dim)
        data["centralizer_derived"] = 0
    return data


def check_torus_spow(S: Session):
    F, Wb, n, N = S.frame, S.wbar, S.n, S.N
    for k in range(1, n):
        want = Wb.vector([d_label(k), e_label(N - 2**k - 1)])
        _require(np.array_equal(F.spowers[k], want), f"s^(2^{k}) is wrong")
    _require(np.array_equal(F.spowers[n], F.s), "s^(2^n) != s")
    return {"k_checked": list(range(1, n + 1))}


def check_torus_t0(S: Session):
    F, Wb = S.frame, S.wbar
    T = S.T
    _require(F.t0.dim == S.n, "t0 has the wrong dimension", dim=F.t0.dim)
    _require(not T.brackets.any(), "t0 is not abelian")
    for i in range(T.dim):
        _require(np.array_equal(T.pmap[i], T.basis_vector(i)), "toral basis element is not toral", index=i)
    _require(F.toral.span() == F.t0, "toral elements do not span t0")
    return {
        "dim": F.t0.dim,
        "toral_basis": [[S.ctx.coeff_string(int(c)) for c in v] for v in F.toral.vectors.data],
        "maximal_dimension": "assumed",
    }


def check_deco_sum(S: Session):
    F = S.frame
    s = F.t0 + F.borel
    inter = F.t0.intersect(F.borel)
    _require(s.dim == S.wbar.dim and inter.dim == 0, "t0 + B is not a direct sum decomposition", sum=s.dim, intersection=inter.dim)
    return {"dim_t0": F.t0.dim, "dim_B": F.borel.dim, "dim_sum": s.dim}


def check_borel_radu(S: Session):
    F, Wb = S.frame, S.wbar
    _require(F.certificates.get("radu") is True, "rad_u(B) certificate missing")
    e0 = Wb.vector([e_label(0)])
    _require(np.array_equal(Wb.pmap_eval(e0), e0), "e_0 is not toral")
    s = Subspace.span(S.ctx, [e0], Wb.dim)
    _require((s + F.radu) == F.borel and s.intersect(F.radu).dim == 0, "B != F e_0 (+) rad_u(B)")
    # p-nilpotency: iterated squares of a basis vanish
    for v in F.radu.vectors():
        x = v
        for _ in range(S.n + 1):
            x = Wb.pmap_eval(x)
        _require(not x.any(), "element of rad_u(B) is not p-nilpotent")
    return {"dim_B": F.borel.dim, "dim_radu": F.radu.dim}


def check_mod_rep1(S: Session):
    I = S.borel_induced(-2)
    res = iso_test(I, S.Wmod, seed=S.seed)
    _require(res.isomorphic, "ind_B(F[-2]) is not isomorphic to W(1;n)", verdict=res.status, witness=res.witness)
    _require(is_intertwiner(I, S.Wmod, res.map) and res.map.rank() == I.dim, "isomorphism failed verification")
    return {"dim": I.dim, "lambda_reduced": 0, "hom_dim": res.witness.get("hom_dim")}


def check_mod_rep2(S: Session):
    I = S.borel_induced(1)
    D = dual_module(S.Wmod)
    res = iso_test(I, D, seed=S.seed)
    _require(res.isomorphic, "ind_B(F[1]) is not isomorphic to W(1;n)*", verdict=res.status, witness=res.witness)
    _require(is_intertwiner(I, D, res.map) and res.map.rank() == I.dim, "isomorphism failed verification")
    return {"dim": I.dim, "hom_dim": res.witness.get("hom_dim")}


def check_irr_class(S: Session):
    refs = [S.F, S.L]
    n_irr = norton_test(S.L, seed=S.seed)
    _require(n_irr.irreducible, "L is not irreducible")
    counts = {}
    seen = set()
    for mu, factors in S.chops.items():
        c = [0, 0]
        for f in factors:
            k = module_in_list(f.module, refs, seed=S.seed)
            _require(k is not None, "composition factor outside {F, L}", mu=list(mu), dim=f.module.dim)
            c[k] += 1
            seen.add(k)
        counts["".join(map(str, mu))] = {"F": c[0], "L": c[1]}
    _require(seen == {0, 1}, "factor set differs from {F, L}", seen=sorted(seen))
    return {"factor_counts": counts, "dim_L": S.L.dim}


def check_irr_selfdual(S: Session):
    res = iso_test(S.L, dual_module(S.L), seed=S.seed)
    _require(res.isomorphic, "L is not self-dual", verdict=res.status, witness=res.witness)
    return {"dim": S.L.dim}


def check_borel_general(S: Session):
    F, Wb, n, N = S.frame, S.wbar, S.n, S.N
    data = {}
    if n > 1:
        _require(F.radu.dim > 0, "rad_u(B) is trivial")
        data["condition_i"] = "pass"
    else:
        data["condition_i"] = "omitted for n = 1"
    radu_rows = F.radu.basis
    e0 = Wb.vector([e_label(0)])
    weights = []
    for M in (S.F, S.L):
        fix = fixed_points(M, radu_rows) if radu_rows.rows else Subspace.full(S.ctx, M.dim)
        _require(fix.dim == 1, "fixed points of rad_u(B) are not one-dimensional", module=M.name, dim=fix.dim)
        v = fix.basis.row(0)
        img = M.rho(e0) @ v
        lam = None
        for c in range(2):
            if np.array_equal(img, S.ctx.mul(v, c)):
                lam = c
        _require(lam is not None, "e_0 does not act by a prime-field scalar on the fixed line", module=M.name)
        weights.append(lam)
    _require(weights[0] != weights[1], "fixed-point map is not injective", weights=weights)
    # L^{rad_u} is spanned by e_{2^n-3}
    fixL = fixed_points(S.L, radu_rows) if radu_rows.rows else Subspace.full(S.ctx, S.L.dim)
    Lsub = S.span(F.derived)
    target = Lsub.coords(Wb.vector([e_label(N - 3)]))
    _require(fixL.contains(target), f"L^rad_u is not spanned by {e_label(N - 3)}")
    data.update({"weights": {"F": weights[0], "L": weights[1]}, "L_fixed_line": e_label(N - 3)})
    return data


def check_torus_Lfix(S: Session):
    fix = weight_space(S.L, S.frame.toral, [0] * S.n)
    _require(fix.dim == 0, "t0 has fixed points on L", dim=fix.dim)
    mults = {}
    for mu in S.frame.characters:
        mults["".join(map(str, mu))] = weight_space(S.L, S.frame.toral, mu).dim
    return {"fixed_dim": 0, "weight_multiplicities": mults}


def check_mod_free(S: Session):
    I = S.borel_induced(0)
    R = restrict_module(I, S.T)
    _require(R.dim == 2**S.n, "restriction has the wrong dimension", dim=R.dim)
    v = cyclic_vector(R, np.random.default_rng(S.seed))
    _require(v is not None, "no cyclic vector for u(t0)")
    return {"dim": R.dim, "rank": 1, "cyclic_vector": [S.ctx.coeff_string(int(c)) for c in v]}


def check_mod_aug(S: Session):
    T = S.T
    U = regular_module(T, check=True)
    aug = Subspace.span(S.ctx, [np.eye(U.dim, dtype=np.int64)[i] for i in range(1, U.dim)], U.dim)
    A = submodule(U, aug, name="augmentation ideal")
    R = restrict_module(S.L, T)
    res = iso_test(R, A, seed=S.seed)
    _require(res.isomorphic, "res_t0 L is not isomorphic to the augmentation ideal", verdict=res.status, witness=res.witness)
    return {"dim": R.dim}


def check_pim_indec(S: Session):
    out = {}
    ext = []
    for mu, r in S.indec.items():
        key = "".join(map(str, mu))
        _require(r.status != "decomposable", "P(mu) decomposes", mu=key)
        out[key] = {"end_dim": r.end_dim, "radical_dim": r.certificate.get("radical_dim"), "quotient": r.certificate.get("quotient")}
        if r.status == "needs-extension":
            ext.append(key)
    if ext:
        raise NeedsExtension("End/J is a proper field extension", characters=ext, modules=out)
    return {"modules": out}


def check_pim_dim(S: Session):
    want = 2 ** (S.N - 1)
    dims = {"".join(map(str, mu)): P.dim for mu, P in S.P.items()}
    _require(all(d == want for d in dims.values()), "some P(mu) has the wrong dimension", dims=dims)
    _require(want == 2 ** (S.wbar.dim - S.T.dim), "dimension formula mismatch")
    return {"dims": dims, "expected": want}


def check_pim_count(S: Session):
    total = uea_dim(S.wbar, certify=S.wbar.dim <= 10, seed=S.seed)
    _require(total == 2 ** (S.N + S.n - 1), "dim u(Wbar) is wrong", got=total)
    zero = tuple([0] * S.n)
    pf = S.P[zero].dim
    others = [P.dim for mu, P in S.P.items() if mu != zero]
    pl = others[0]
    _require(all(d == pl for d in others), "P(mu) for mu != 0 differ in dimension")
    _require(total == pf + S.L.dim * pl, "dim u(Wbar) != dim P_F + dim L * dim P_L", total=total, pf=pf, pl=pl, dim_L=S.L.dim)
    _require(len(S.frame.characters) == S.N, "wrong number of characters")
    return {"dim_u": total, "dim_P_F": pf, "dim_L": S.L.dim, "dim_P_L": pl, "characters": len(S.frame.characters)}


def check_pim_head(S: Session):
    heads = {}
    for mu, P in S.P.items():
        key = "".join(map(str, mu))
        hf = len(hom_space(P, S.F))
        hl = len(hom_space(P, S.L))
        if any(mu):
            _require(hf == 0 and hl >= 1, "head of P(mu) is not L", mu=key, hom_F=hf, hom_L=hl)
            heads[key] = "L"
        else:
            _require(hf == 1 and hl == 0, "head of P(0) is not trivial", hom_F=hf, hom_L=hl)
            heads[key] = "F"
        _require(S.indec[mu].status != "decomposable", "P(mu) is decomposable", mu=key)
    return {"heads": heads}


def check_bound_eq(S: Session):
    bound = 2 ** (S.wbar.dim - S.n)
    dims = [P.dim for P in S.P.values()]
    _require(all(d == bound for d in dims), "some P(mu) is below the bound", bound=bound)
    _require(all(r.status != "decomposable" for r in S.indec.values()), "some P(mu) decomposes")
    return {"bound": bound, "torus_rank": S.n, "torus_rank_maximality": "assumed"}


@dataclass(frozen=True)
class CheckSpec:
    id: str
    claim: str
    func: Callable
    needs_modules: bool = False


REGISTRY: tuple[CheckSpec, ...] = (
    CheckSpec("alg.jacobi", "Jacobi identity on all basis triples of W(1;n), its derived algebra, Wbar(1;n), Der(W(1;n)) and L(E)", check_alg_jacobi),
    CheckSpec("alg.oracle", "binomial structure constants agree with commutators of O(1;n) operators; closed p-map forms hold", check_alg_oracle),
    CheckSpec("alg.LE", "[u_a, u_b] = (b - a) u_(a+b) defines a Lie algebra with the invariants of W(1;n)", check_alg_LE),
    CheckSpec("alg.simple", "W(1;n)^(1) is simple (its adjoint module is irreducible)", check_alg_simple),
    CheckSpec("env.dim", "dim Der(W(1;n)) = 2^n + n - 1", check_env_dim),
    CheckSpec("env.closure", "the restricted closure of ad W(1;n)^(1) in Der(W(1;n)) is all of Der(W(1;n)) = Wbar(1;n)", check_env_closure),
    CheckSpec("env.cent", "centralizer of the derivative is spanned by its iterated p-powers", check_env_cent),
    CheckSpec("torus.spow", "s^(2^k) = d_k + e_(2^n-2^k-1) for 1 <= k < n and s^(2^n) = s", check_torus_spow),
    CheckSpec("torus.t0", "t0 = span{s^[2]^i} is an n-dimensional torus", check_torus_t0),
    CheckSpec("deco.sum", "Wbar(1;n) = t0 (+) B", check_deco_sum),
    CheckSpec("borel.radu", "B = F e_0 (+) rad_u(B) with rad_u(B) a p-nilpotent restricted ideal", check_borel_radu),
    CheckSpec("mod.rep1", "ind_B(F[-2]) is isomorphic to W(1;n)", check_mod_rep1, True),
    CheckSpec("mod.rep2", "ind_B(F[1]) is isomorphic to W(1;n)*", check_mod_rep2, True),
    CheckSpec("irr.class", "the irreducible restricted modules are F and L", check_irr_class, True),
    CheckSpec("irr.selfdual", "L is isomorphic to L*", check_irr_selfdual, True),
    CheckSpec("borel.general", "B is a generalized Borel subalgebra", check_borel_general, True),
    CheckSpec("torus.Lfix", "L has no nonzero t0-fixed vectors", check_torus_Lfix, True),
    CheckSpec("mod.free", "res_t0 ind_B(F[0]) is free of rank 1 over u(t0)", check_mod_free, True),
    CheckSpec("mod.aug", "res_t0 L is isomorphic to the augmentation ideal of u(t0)", check_mod_aug, True),
    CheckSpec("pim.indec", "every P(mu) = ind_t0(F(mu)) is indecomposable", check_pim_indec, True),
    CheckSpec("pim.dim", "dim P(mu) = 2^(2^n - 1)", check_pim_dim, True),
    CheckSpec("pim.count", "dim u(Wbar) = dim P_F + dim L * dim P_L", check_pim_count, True),
    CheckSpec("pim.head", "P(0) covers F and P(mu) covers L for mu != 0", check_pim_head, True),
    CheckSpec("bound.eq", "every projective indecomposable attains dimension p^(dim - rank of a maximal torus)", check_bound_eq, True),
)

CHECK_IDS = tuple(c.id for c in REGISTRY)
_BY_ID = {c.id: c for c in REGISTRY}


def default_field_degree(n: int) -> int:
    return n


def validate(n: int, m: int | None, ids) -> tuple[int, list[CheckSpec]]:
    if not 1 <= n <= MAX_ALGEBRA_N:
        raise UnsupportedError(f"unsupported size n = {n} (supported: 1..{MAX_ALGEBRA_N})")
    m = default_field_degree(n) if m is None else m
    if m < 1 or m % n:
        raise UnsupportedError(f"field degree m = {m} must be a positive multiple of n = {n}")
    if (2, m) not in CONWAY:
        raise UnsupportedError(f"no field table for GF(2^{m})")
    if ids is None:
        chosen = list(REGISTRY)
    else:
        unknown = [i for i in ids if i not in _BY_ID]
        if unknown:
            raise UnsupportedError(f"unknown check id(s): {', '.join(unknown)}")
        chosen = [_BY_ID[i] for i in CHECK_IDS if i in set(ids)]
        if n > MAX_MODULE_N:
            big = [s.id for s in chosen if s.needs_modules]
            if big:
                raise UnsupportedError(f"module checks {', '.join(big)} need n <= {MAX_MODULE_N}")
    return m, chosen


def run_checks(n: int, m: int | None = None, ids=None, seed: int = 0, p: int = 2) -> list[CheckResult]:
    if p != 2:
        raise UnsupportedError("the check registry runs in characteristic 2")
    m, chosen = validate(n, m, ids)
    S = Session(n, GF(2, m), seed)
    out = []
    for chk in chosen:
        t0 = time.perf_counter()
        if chk.needs_modules and n > MAX_MODULE_N:
            res = CheckResult(chk.id, "skip", chk.claim, reason=f"module checks run for n <= {MAX_MODULE_N}")
        else:
            try:
                data = chk.func(S)
                res = CheckResult(chk.id, "pass", chk.claim, _jsonable(data))
            except Skip as exc:
                res = CheckResult(chk.id, "skip", chk.claim, reason=str(exc))
            except NeedsExtension as exc:
                res = CheckResult(chk.id, "needs-extension", chk.claim, _jsonable(exc.data), reason=str(exc))
            except CheckFailure as exc:
                res = CheckResult(chk.id, "fail", chk.claim, witness=_jsonable(exc.witness))
            except (InconclusiveError, NotClosedError, ValueError, RuntimeError) as exc:
                res = CheckResult(chk.id, "fail", chk.claim, witness={"message": f"{type(exc).__name__}: {exc}"})
        res.millis = int(round((time.perf_counter() - t0) * 1000))
        out.append(res)
    return out


def report(results: list[CheckResult], n: int, m: int, seed: int, p: int = 2, timing: bool = False) -> dict:
    ctx = GF(p, m)
    return {
        "meta": {
            "p": p,
            "n": n,
            "m": m,
            "modulus": "".join(str(c) for c in ctx.modulus),
            "seed": seed,
            "version": __version__,
        },
        "checks": [r.to_dict(timing=timing) for r in results],
    }


def report_json(rep: dict) -> str:
    return json.dumps(rep, sort_keys=True, indent=2) + "\n"


def overall_status(results: list[CheckResult]) -> int:
    """0 all pass (skips allowed), 1 any fail, 3 needs-extension without failures."""
    statuses = {r.status for r in results}
    if "fail" in statuses:
        return 1
    if "needs-extension" in statuses:
        return 3
    return 0
