import json
import math
from pathlib import Path

import numpy as np
import pytest

from zassenhaus.cartan import (
    binom_exact_mod,
    binom_mod,
    canonical_frame,
    derivation_algebra,
    is_derivation,
    odd_torus,
    realization_coords,
    restricted_closure,
    wbar,
    wbar_index,
    witt_algebra,
    witt_oracle_check,
    zassenhaus_algebra,
)
from zassenhaus.ffla import GF, Matrix, Subspace
from zassenhaus.liecore import StructLie, derived_series_dims, derived_subalgebra, jacobi_check, pmap_axioms_check

FIXTURES = Path(__file__).parent / "fixtures"


# -- an independent model of Wbar(1;n) over GF(2) with plain integers ----------------


def _naive_operators(n):
    N = 2**n
    ops = []
    for j in range(-1, N - 1):
        M = [[0] * N for _ in range(N)]
        for a in range(N):
            if 0 <= j + a <= N - 1:
                M[j + a][a] = math.comb(j + a, j + 1) % 2
        ops.append(M)
    for k in range(1, n):
        M = [[0] * N for _ in range(N)]
        for a in range(2**k, N):
            M[a - 2**k][a] = 1
        ops.append(M)
    return ops


def _mm(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) % 2 for j in range(n)] for i in range(n)]


def _coords(ops, M):
    """Coordinates of M in the span of ops by brute force over GF(2)."""
    flat = [sum(row, []) for row in ops]
    target = sum(M, [])
    d = len(ops)
    # Gaussian elimination on the transposed system
    rows = [[flat[i][r] for i in range(d)] + [target[r]] for r in range(len(target))]
    piv = []
    r = 0
    for c in range(d):
        k = next((t for t in range(r, len(rows)) if rows[t][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        for t in range(len(rows)):
            if t != r and rows[t][c]:
                rows[t] = [(x + y) % 2 for x, y in zip(rows[t], rows[r])]
        piv.append(c)
        r += 1
    assert not any(row[-1] for row in rows[r:]), "not in span"
    x = [0] * d
    for i, c in enumerate(piv):
        x[c] = rows[i][-1]
    return x


def _naive_wbar(n):
    ops = _naive_operators(n)
    d = len(ops)
    br = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            C = [[(x - y) % 2 for x, y in zip(r1, r2)] for r1, r2 in zip(_mm(ops[i], ops[j]), _mm(ops[j], ops[i]))]
            br[i, j] = _coords(ops, C)
    pm = np.array([_coords(ops, _mm(op, op)) for op in ops], dtype=np.int64)
    return br, pm


@pytest.mark.parametrize("n", [1, 2, 3])
def test_wbar_matches_naive_model_and_fixture(n):
    br, pm = _naive_wbar(n)
    W = wbar(2, n, GF(2))
    assert np.array_equal(W.brackets, br)
    assert np.array_equal(W.pmap, pm)
    frozen = StructLie.from_json(json.loads((FIXTURES / f"wbar_n{n}.json").read_text()))
    assert frozen.same_structure(W)


def test_binomials_lucas_vs_exact():
    for p in (2, 3, 5, 7):
        for a in range(60):
            for b in range(-1, a + 2):
                assert binom_mod(a, b, p) == binom_exact_mod(a, b, p)


def test_witt_n2_brackets():
    W = witt_algebra(2, 2, GF(2))[1]
    nonzero = {}
    for i in range(W.dim):
        for j in range(i + 1, W.dim):
            if W.brackets[i, j].any():
                nonzero[(W.labels[i], W.labels[j])] = [W.labels[k] for k in np.flatnonzero(W.brackets[i, j])]
    assert nonzero == {
        ("e_-1", "e_0"): ["e_-1"],
        ("e_-1", "e_1"): ["e_0"],
        ("e_-1", "e_2"): ["e_1"],
        ("e_0", "e_1"): ["e_1"],
    }


def test_witt_derived_dimension():
    O, W, derived = witt_algebra(2, 2, GF(2))
    assert derived_subalgebra(W).dim == 3 == len(derived)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)])
def test_witt_oracle_all_pairs(p, n):
    O, W, _ = witt_algebra(p, n, GF(p))
    assert witt_oracle_check(W) is None
    assert jacobi_check(W) is None


def test_zassenhaus_gf4():
    ctx = GF(2, 2)
    L = zassenhaus_algebra(2, 2, ctx)
    w = 2
    u0 = L.labels.index("u_" + ctx.coeff_string(0))
    uw = L.labels.index("u_" + ctx.coeff_string(w))
    got = L.bracket(L.basis_vector(u0), L.basis_vector(uw))
    assert np.array_equal(got, ctx.mul(w, L.basis_vector(uw)))
    assert derived_subalgebra(L).dim == 3
    assert jacobi_check(L) is None


@pytest.mark.parametrize("n,dim", [(1, 2), (2, 5), (3, 10), (4, 19)])
def test_derivation_algebra_dimension(n, dim):
    W = witt_algebra(2, n, GF(2))[1]
    D = derivation_algebra(W)
    assert D.dim == dim
    assert all(is_derivation(W, M) for M in D.realization)


def test_derivations_of_line():
    A = StructLie(GF(2), np.zeros((1, 1, 1), dtype=np.int64))
    assert derivation_algebra(A).dim == 1


def test_partial_power_squares_to_zero():
    O, W, _ = witt_algebra(2, 2, GF(2))
    d2 = O.partial_power(2)
    assert d2.power(2).is_zero()
    D = derivation_algebra(W)
    x = realization_coords(D, [W.ad(0).power(2)]).row(0)
    assert not D.pmap_eval(x).any()


def test_restricted_closure_examples():
    W = witt_algebra(2, 2, GF(2))[1]
    D = derivation_algebra(W)
    A = realization_coords(D, [W.ad(i) for i in range(3)])
    assert restricted_closure(D, A).dim == 5
    Wb = wbar(2, 2, GF(2))
    B = Subspace.span(Wb.ctx, [Wb.basis_vector(i) for i in range(1, 4)], Wb.dim)
    assert restricted_closure(Wb, B) == B


def test_wbar_index():
    assert wbar_index(2, 3, "e_-1") == 0
    assert wbar_index(2, 3, "e_6") == 7
    assert wbar_index(2, 3, "d_2") == 9
    assert wbar(2, 3).labels[9] == "d_2"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_wbar_restricted(n):
    W = wbar(2, n, GF(2))
    assert W.dim == 2**n + n - 1
    assert pmap_axioms_check(W) is None
    assert jacobi_check(W) is None


def test_frame_n1():
    F = canonical_frame(1)
    W = F.wbar
    assert np.array_equal(F.s, W.vector(["e_-1", "e_0"]))
    assert np.array_equal(W.pmap_eval(F.s), F.s)
    assert F.borel == Subspace.span(F.ctx, [W.vector(["e_0"])], W.dim)


def test_frame_n2():
    F = canonical_frame(2)
    W = F.wbar
    assert np.array_equal(F.spowers[1], W.vector(["d_1", "e_1"]))
    assert np.array_equal(F.spowers[2], F.s)
    assert F.t0.dim == 2 and F.borel.dim == 3 and W.dim == 5
    assert F.t0.intersect(F.borel).dim == 0
    assert F.characters == [(0, 0), (0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_frame_power_chain(n):
    F = canonical_frame(n)
    W, N = F.wbar, 2**n
    for k in range(1, n):
        assert np.array_equal(F.spowers[k], W.vector([f"d_{k}", f"e_{N - 2**k - 1}"]))
    assert np.array_equal(F.spowers[n], F.s)
    assert (F.t0 + F.borel).dim == W.dim and F.t0.intersect(F.borel).dim == 0


def test_frame_json_is_serializable():
    js = canonical_frame(3).to_json()
    assert json.loads(json.dumps(js)) == js


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 1)])
def test_odd_torus(p, n):
    ctx = GF(p, n)
    L, T, tb = odd_torus(p, n, ctx)
    assert jacobi_check(L) is None
    assert T.dim == n and tb.rank == n
    assert derived_series_dims(L)[0] == p**n
