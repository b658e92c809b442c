import numpy as np
import pytest

from zassenhaus.cartan import canonical_frame, witt_algebra, wbar, zassenhaus_algebra
from zassenhaus.ffla import GF, Matrix, Subspace
from zassenhaus.liecore import (
    FieldTooSmallError,
    LieError,
    NotClosedError,
    StructLie,
    bracket_eval,
    center,
    centralizer,
    derived_subalgebra,
    jacobi_check,
    lie_from_matrices,
    pmap_axioms_check,
    spin,
    toral_basis,
)


def W2():
    return witt_algebra(2, 2, GF(2))[1]


def test_bracket_examples():
    W = W2()
    assert np.array_equal(bracket_eval(W, W.vector(["e_-1"]), W.vector(["e_1"])), W.vector(["e_0"]))
    assert not bracket_eval(W, W.vector(["e_0"]), W.vector(["e_2"])).any()


def test_bracket_alternating():
    W = W2()
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = W.ctx.random(rng, W.dim)
        assert not W.bracket(x, x).any()


def test_rejects_non_alternating_table():
    W = W2()
    c = W.brackets.copy()
    c[0, 0, 1] = 1
    with pytest.raises(LieError):
        StructLie(W.ctx, c)


def test_jacobi_passes_on_witt_and_zassenhaus():
    assert jacobi_check(witt_algebra(2, 3, GF(2))[1]) is None
    assert jacobi_check(zassenhaus_algebra(2, 2, GF(2, 2))) is None


def test_jacobi_reports_injected_fault():
    W = W2()
    c = W.brackets.copy()
    # flip c[0][1][0] keeping antisymmetry
    c[0, 1, 0] ^= 1
    c[1, 0, 0] ^= 1
    bad = jacobi_check(StructLie(W.ctx, c, labels=W.labels))
    assert bad is not None and len(bad) == 3


def test_spin_modes():
    W = W2()
    D = Subspace.span(W.ctx, [W.basis_vector(i) for i in range(3)], W.dim)
    W1 = W.subalgebra(D.basis)
    assert spin(W1, [W1.vector(["e_-1"])], mode="ideal").dim == 3
    assert spin(W1, [np.zeros(3, dtype=np.int64)], mode="ideal").dim == 0
    assert spin(W, [W.vector(["e_-1"]), W.vector(["e_1"])], mode="subalgebra").dim == 3
    with pytest.raises(LieError):
        spin(W1, [W1.vector(["e_-1"])], mode="restricted")


def test_restricted_spin_of_derivative():
    Wb = wbar(2, 3, GF(2))
    S = spin(Wb, [Wb.vector(["e_-1"])], mode="restricted")
    assert S.contains(Wb.vector(["d_1"])) and S.contains(Wb.vector(["d_2"]))
    assert S.dim == 3


def test_centralizer_examples():
    Wb = wbar(2, 2, GF(2))
    C = centralizer(Wb, [Wb.vector(["e_-1"])])
    assert C == Subspace.span(Wb.ctx, [Wb.vector(["e_-1"]), Wb.vector(["d_1"])], Wb.dim)
    assert centralizer(Wb, Subspace.zero(Wb.ctx, Wb.dim)).dim == Wb.dim
    D = Subspace.span(Wb.ctx, [Wb.basis_vector(i) for i in range(3)], Wb.dim)
    assert centralizer(Wb, D).dim == 0
    assert center(Wb).dim == 0


def test_pmap_squares_w12():
    Wb = wbar(2, 2, GF(2))
    assert pmap_axioms_check(Wb) is None
    sq = lambda lab: Wb.pmap_eval(Wb.vector([lab]))  # noqa: E731
    assert np.array_equal(sq("e_0"), Wb.vector(["e_0"]))
    assert not sq("e_2").any()
    assert np.array_equal(sq("e_1"), Wb.vector(["e_2"]))


def test_pmap_fault_detected():
    Wb = wbar(2, 2, GF(2))
    pm = Wb.pmap.copy()
    i = Wb.labels.index("e_0")
    pm[i] = Wb.vector(["e_1"])
    bad = StructLie(Wb.ctx, Wb.brackets, pm, Wb.labels)
    assert pmap_axioms_check(bad) == ("ad", i)


def test_toral_basis_gf4_frozen():
    F = canonical_frame(2, GF(2, 2))
    vecs = F.toral.vectors.data.tolist()
    # {s + s^[2], w s + w^2 s^[2]} with w the class of x in GF(4)
    assert vecs == [[1, 0, 1, 1, 1], [2, 0, 3, 2, 3]]
    ctx = F.ctx
    s, s2 = F.spowers[0], F.spowers[1]
    w = 2
    assert np.array_equal(vecs[1], ctx.add(ctx.mul(w, s), ctx.mul(ctx.mul(w, w), s2)))


def test_toral_basis_field_too_small():
    Wb = wbar(2, 2, GF(2))
    s = Wb.vector(["e_-1", "e_2"])
    with pytest.raises(FieldTooSmallError):
        toral_basis(Wb, [s, Wb.pmap_eval(s)])


def test_toral_basis_of_e0():
    Wb = wbar(2, 2, GF(2))
    tb = toral_basis(Wb, [Wb.vector(["e_0"])])
    assert tb.vectors.data.tolist() == [list(Wb.vector(["e_0"]))]


def test_toral_basis_rejects_nonabelian():
    Wb = wbar(2, 2, GF(2))
    with pytest.raises(LieError):
        toral_basis(Wb, [Wb.vector(["e_0"]), Wb.vector(["e_1"])])


def test_subalgebra_closure_error():
    Wb = wbar(2, 2, GF(2))
    with pytest.raises(NotClosedError):
        Wb.subalgebra([Wb.vector(["e_-1"]), Wb.vector(["e_1"])])


def test_subalgebra_inherits_pmap_when_closed():
    Wb = wbar(2, 2, GF(2))
    B = Wb.subalgebra([Wb.vector([f"e_{j}"]) for j in range(3)], require_restricted=True)
    assert B.restricted and pmap_axioms_check(B) is None
    W1 = Wb.subalgebra([Wb.vector([f"e_{j}"]) for j in range(-1, 2)])
    assert not W1.restricted


def test_json_round_trip():
    Wb = wbar(2, 3, GF(2, 3))
    back = StructLie.from_json(Wb.to_json())
    assert back.same_structure(Wb)
    assert back.labels == Wb.labels


def test_lie_from_matrices_gl2():
    ctx = GF(2)
    E = lambda i, j: Matrix._wrap(ctx, np.eye(2, dtype=np.int64)[:, [i]] @ np.eye(2, dtype=np.int64)[[j], :])  # noqa: E731
    g = lie_from_matrices(ctx, [E(0, 0), E(0, 1), E(1, 0), E(1, 1)], ["e11", "e12", "e21", "e22"])
    assert jacobi_check(g) is None and pmap_axioms_check(g) is None
    assert derived_subalgebra(g).dim == 3
    assert center(g) == Subspace.span(ctx, [[1, 0, 0, 1]], 4)
