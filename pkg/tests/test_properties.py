"""Invariants checked on random inputs."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import world
from zassenhaus.cartan import wbar
from zassenhaus.ffla import GF, Matrix, nullspace, rref_codes, solve
from zassenhaus.liecore import jacobi_check
from zassenhaus.rmod import RModule, borel_character_module, dual_module, iso_test, restrict_module
from zassenhaus.uea import UEAElement, enveloping, induced_module

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

fields = st.sampled_from([(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 1)])
seeds = st.integers(0, 2**32 - 1)


@SETTINGS
@given(fields, seeds)
def test_field_laws(pm, seed):
    ctx = GF(*pm)
    rng = np.random.default_rng(seed)
    a, b, c = (ctx.random(rng, 16) for _ in range(3))
    assert np.array_equal(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)))
    assert np.array_equal(ctx.sub(ctx.add(a, b), b), a)
    nz = a[a != 0]
    assert np.array_equal(ctx.mul(ctx.div(b[: nz.size], nz), nz), b[: nz.size])
    # Frobenius is a ring endomorphism
    assert np.array_equal(ctx.frobenius(ctx.mul(a, b)), ctx.mul(ctx.frobenius(a), ctx.frobenius(b)))


@SETTINGS
@given(fields, seeds, st.integers(1, 24), st.integers(1, 24))
def test_rank_nullity_and_solve(pm, seed, r, c):
    ctx = GF(*pm)
    rng = np.random.default_rng(seed)
    A = Matrix.random(ctx, r, c, rng)
    if rng.random() < 0.5 and r > 1:
        # force a dependency
        A = Matrix._wrap(ctx, np.vstack([A.data[:-1], A.data[:1]]))
    N = nullspace(A)
    assert A.rank() + N.dim == c
    for v in N.vectors():
        assert not (A @ v).any()
    x = ctx.random(rng, c)
    X, _ = solve(A, A @ x)
    assert X is not None and np.array_equal(A @ X, A @ x)


@SETTINGS
@given(st.integers(1, 4), seeds, st.integers(1, 64), st.integers(1, 64))
def test_packed_equals_reference(m, seed, r, c):
    ctx = GF(2, m)
    data = ctx.random(np.random.default_rng(seed), (r, c))
    assert all(
        np.array_equal(x, y) if isinstance(x, np.ndarray) else x == y
        for x, y in zip(rref_codes(ctx, data, kernel="packed"), rref_codes(ctx, data, kernel="reference"))
    )


@SETTINGS
@given(st.integers(1, 3), seeds)
def test_wbar_random_elements(n, seed):
    W = wbar(2, n, GF(2, n))
    ctx = W.ctx
    rng = np.random.default_rng(seed)
    x, y, z = (ctx.random(rng, W.dim) for _ in range(3))
    br = W.bracket
    jac = ctx.add(ctx.add(br(x, br(y, z)), br(y, br(z, x))), br(z, br(x, y)))
    assert not jac.any()
    assert not ctx.add(br(x, y), br(y, x)).any()
    # p = 2: (x + y)^[2] = x^[2] + y^[2] + [x, y]
    lhs = W.pmap_eval(ctx.add(x, y))
    rhs = ctx.add(ctx.add(W.pmap_eval(x), W.pmap_eval(y)), br(x, y))
    assert np.array_equal(lhs, rhs)
    a = int(ctx.random(rng))
    assert np.array_equal(W.pmap_eval(ctx.mul(a, x)), ctx.mul(ctx.mul(a, a), W.pmap_eval(x)))
    assert W.ad_vec(W.pmap_eval(x)) == W.ad_vec(x).power(2)
    assert W.realize(W.pmap_eval(x)) == W.realize(x).power(2)


def _modules(n):
    w = world(n)
    mods = [w.F, w.L, w.Wmod, dual_module(w.Wmod)]
    mods += [w.P(mu) for mu in w.frame.characters]
    mods += [induced_module(w.W, w.B, borel_character_module(w.B, lam)) for lam in (0, 1)]
    return w, mods


@SETTINGS
@given(st.integers(1, 2), seeds, st.data())
def test_restricted_module_compatibility(n, seed, data):
    w, mods = _modules(n)
    M = data.draw(st.sampled_from(mods))
    ctx = w.ctx
    rng = np.random.default_rng(seed)
    x, y = ctx.random(rng, w.W.dim), ctx.random(rng, w.W.dim)
    assert M.rho(w.W.pmap_eval(x)) == M.rho(x).power(2)
    assert M.rho(w.W.bracket(x, y)) == M.rho(x).commutator(M.rho(y))
    R = restrict_module(M, w.T)
    t = ctx.random(rng, w.T.dim)
    assert R.rho(w.T.pmap_eval(t)) == R.rho(t).power(2)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 2), seeds, st.data())
def test_iso_invariant_under_change_of_basis(n, seed, data):
    w, mods = _modules(n)
    M = data.draw(st.sampled_from(mods))
    rng = np.random.default_rng(seed)
    while True:
        g = Matrix.random(M.ctx, M.dim, M.dim, rng)
        if g.rank() == M.dim:
            break
    gi = g.inverse()
    N = RModule(M.algebra, [g @ a @ gi for a in M.action], M.dim)
    assert iso_test(M, N, seed=seed).isomorphic


@SETTINGS
@given(seeds)
def test_uea_associative_and_pbw_consistent(seed):
    W = wbar(2, 2, GF(2))
    U = enveloping(W)
    rng = np.random.default_rng(seed)
    a, b, c = (UEAElement(U, {int(m): int(rng.integers(1, 2)) for m in rng.integers(0, 32, size=3)}) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    x, y = (W.ctx.random(rng, W.dim) for _ in range(2))
    ex, ey = U.element(x), U.element(y)
    # xy - yx = [x, y] in u(W)
    assert ex * ey + ey * ex == U.element(W.bracket(x, y))


def test_jacobi_every_constructed_algebra():
    for n in (1, 2, 3):
        w = world(n)
        for A in (w.W, w.T, w.B, w.frame.wbar.subalgebra(w.frame.radu.basis)):
            assert jacobi_check(A) is None
