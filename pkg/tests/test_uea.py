import numpy as np
import pytest

from zassenhaus.cartan import wbar
from zassenhaus.ffla import GF, Matrix, Subspace
from zassenhaus.rmod import (
    borel_character_module,
    character_module,
    check_compatibility,
    dual_module,
    ideal_module,
    iso_test,
    trivial_module,
)
from zassenhaus.uea import UEAElement, enveloping, induced_module, regular_module, straighten_mul, uea_dim, zero_subalgebra


def test_p0_n1_matches_hand_computation(w1):
    # basis v, e_0 v; s v = 0 and s e_0 v = e_0 s v + [s, e_0] v = e_-1 v = (s + e_0) v = e_0 v
    P = w1.P((0,))
    s = w1.frame.s
    assert P.rho(s).data.tolist() == [[0, 0], [0, 1]]
    assert P.rho(w1.W.vector(["e_0"])).data.tolist() == [[0, 0], [1, 1]]
    assert P.rho(w1.W.vector(["e_-1"])).data.tolist() == [[0, 0], [1, 0]]


def test_p1_n1_matches_hand_computation(w1):
    # s v = v and s e_0 v = e_0 v + (s + e_0) v = e_0 v + v + e_0 v = v
    P = w1.P((1,))
    assert P.rho(w1.frame.s).data.tolist() == [[1, 1], [0, 0]]


@pytest.mark.parametrize("n,dim", [(1, 2), (2, 8)])
def test_pim_dimensions(n, dim, w1, w2):
    w = {1: w1, 2: w2}[n]
    for mu in w.frame.characters:
        P = w.P(mu)
        assert P.dim == dim
        assert check_compatibility(P) is None


def test_borel_induction_dimension(w2):
    M = induced_module(w2.W, w2.B, borel_character_module(w2.B, 0))
    assert M.dim == 4


def test_induction_from_whole_algebra_is_identity(w2):
    W = w2.W
    full = W.subalgebra(Matrix.identity(W.ctx, W.dim))
    V = ideal_module(full, Subspace.span(W.ctx, [full.basis_vector(i) for i in range(3)], W.dim))
    M = induced_module(W, full, V)
    assert M.dim == V.dim
    assert all(a == b for a, b in zip(M.action, V.action))


def test_uea_products_w12():
    W = wbar(2, 2, GF(2))
    U = enveloping(W)
    e0 = U.element(W.vector(["e_0"]))
    assert straighten_mul(W, e0, e0) == e0
    x = U.element(W.vector(["e_1", "d_1"]))
    assert straighten_mul(W, x, U.one()) == x
    assert straighten_mul(W, U.one(), x) == x
    em1, e1 = U.element(W.vector(["e_-1"])), U.element(W.vector(["e_1"]))
    assert straighten_mul(W, e1, em1) == straighten_mul(W, em1, e1) + e0
    assert repr(straighten_mul(W, e1, em1)) == "e_0 + e_-1*e_1"


def test_uea_p_power_relation():
    W = wbar(2, 3, GF(2))
    U = enveloping(W)
    for i in range(W.dim):
        g = U.gen(i)
        assert g * g == U.element(W.pmap[i])


def test_uea_associativity_random_elements():
    W = wbar(2, 2, GF(2))
    U = enveloping(W)
    rng = np.random.default_rng(4)
    for _ in range(10):
        a, b, c = (UEAElement(U, {int(m): 1 for m in rng.integers(0, 32, size=3)}) for _ in range(3))
        assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("n,dim", [(1, 4), (2, 32)])
def test_uea_dim(n, dim):
    assert uea_dim(wbar(2, n, GF(2))) == dim


def test_uea_dim_t0(w3):
    assert uea_dim(w3.T) == 8


def test_regular_module_of_torus_is_induced_from_zero(w2):
    R = regular_module(w2.T, check=True)
    assert R.dim == 4
    Z = zero_subalgebra(w2.T)
    assert Z.dim == 0


def test_rep1_and_rep2_n2(w2):
    I0 = induced_module(w2.W, w2.B, borel_character_module(w2.B, 0))
    assert iso_test(I0, w2.Wmod).isomorphic
    I1 = induced_module(w2.W, w2.B, borel_character_module(w2.B, 1))
    assert iso_test(I1, dual_module(w2.Wmod)).isomorphic


def test_minus_two_reduces_to_zero(w2):
    assert borel_character_module(w2.B, -2).action[0] == borel_character_module(w2.B, 0).action[0]


def test_character_module_values(w2):
    for mu in w2.frame.characters:
        V = character_module(w2.T, mu)
        assert [int(a.data[0, 0]) for a in V.action] == list(mu)


def test_trivial_module_induced_rank(w2):
    H = w2.T
    M = induced_module(w2.W, H, trivial_module(H))
    assert M.induced.rank == w2.W.dim - H.dim
