import itertools

import numpy as np
import pytest

from zassenhaus.ffla import CONWAY, GF, FieldError, Matrix, Subspace, nullspace, rref_codes, solve, subspace_ops
from zassenhaus.ffla import poly


def schoolbook_mul(p, modulus, a_digits, b_digits):
    """Reference product in F_p[x]/(f), digits little-endian."""
    m = len(modulus) - 1
    prod = [0] * (2 * m)
    for i, a in enumerate(a_digits):
        for j, b in enumerate(b_digits):
            prod[i + j] = (prod[i + j] + a * b) % p
    for k in range(2 * m - 1, m - 1, -1):
        c = prod[k]
        if c:
            for t in range(m + 1):
                prod[k - m + t] = (prod[k - m + t] - c * modulus[t]) % p
    return prod[:m]


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 1), (7, 2)])
def test_field_multiplication_matches_schoolbook(p, m):
    ctx = GF(p, m)
    els = np.arange(ctx.q)
    table = ctx.mul(els[:, None], els[None, :])
    for a in range(ctx.q):
        da = [int(d) for d in ctx.digits(a)]
        for b in range(ctx.q):
            db = [int(d) for d in ctx.digits(b)]
            want = schoolbook_mul(p, ctx.modulus, da, db)
            assert [int(d) for d in ctx.digits(int(table[a, b]))] == want


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (2, 4), (3, 2), (5, 2)])
def test_field_axioms(p, m):
    ctx = GF(p, m)
    els = np.arange(ctx.q)
    A, B, C = np.meshgrid(els, els, els[: min(ctx.q, 5)], indexing="ij")
    assert np.array_equal(ctx.add(A, B), ctx.add(B, A))
    assert np.array_equal(ctx.mul(A, B), ctx.mul(B, A))
    assert np.array_equal(ctx.mul(A, ctx.add(B, C)), ctx.add(ctx.mul(A, B), ctx.mul(A, C)))
    assert np.array_equal(ctx.mul(ctx.mul(A, B), C), ctx.mul(A, ctx.mul(B, C)))
    assert np.array_equal(ctx.add(els, ctx.neg(els)), np.zeros_like(els))
    nz = els[1:]
    assert np.array_equal(ctx.mul(nz, ctx.inv(nz)), np.ones_like(nz))
    # Frobenius is additive and fixes exactly the prime field
    assert np.array_equal(ctx.frobenius(ctx.add(A, B)), ctx.add(ctx.frobenius(A), ctx.frobenius(B)))
    assert int((ctx.frobenius(els) == els).sum()) == p


@pytest.mark.parametrize("key", sorted(CONWAY))
def test_tabulated_moduli_are_primitive(key):
    p, m = key
    if p**m > 2**16:
        pytest.skip("large field")
    ctx = GF(p, m)
    x = ctx.from_digits(np.eye(m, dtype=np.int64)[1]) if m > 1 else None
    if x is None:
        # m = 1: the modulus is x - g for a primitive root g
        g = (-CONWAY[key][0]) % p
        order = next(k for k in range(1, p) if pow(g, k, p) == 1)
        assert order == p - 1
        return
    powers = set()
    y = 1
    for _ in range(ctx.q - 1):
        y = int(ctx.mul(y, x))
        powers.add(y)
    assert len(powers) == ctx.q - 1


def test_unknown_field_rejected():
    with pytest.raises(FieldError):
        GF(2, 40)


def test_coeff_strings_round_trip():
    ctx = GF(2, 3)
    for a in ctx.elements():
        assert ctx.parse_coeff_string(ctx.coeff_string(a)) == a
    with pytest.raises(FieldError):
        ctx.parse_coeff_string("12")


# -- linear algebra ---------------------------------------------------------------


def test_solve_identity():
    ctx = GF(2)
    X, N = solve(Matrix.identity(ctx, 3), np.array([0, 1, 0]))
    assert list(X) == [0, 1, 0] and N.dim == 0


def test_solve_rank_one():
    ctx = GF(2)
    X, N = solve(Matrix.from_rows(ctx, [[1, 1], [0, 0]]), np.array([1, 0]))
    assert list(X) == [1, 0]
    assert N == Subspace.span(ctx, [[1, 1]], 2)


def test_solve_inconsistent():
    ctx = GF(2)
    X, N = solve(Matrix.from_rows(ctx, [[1, 1], [1, 1]]), np.array([1, 0]))
    assert X is None and N.dim == 1


def test_solve_random_gf8_resubstitution():
    ctx = GF(2, 3)
    rng = np.random.default_rng(7)
    for _ in range(10):
        A = Matrix.random(ctx, 20, 20, rng)
        B = Matrix.random(ctx, 20, 3, rng)
        X, N = solve(A, B)
        if X is not None:
            assert A @ X == B
        for v in N.vectors():
            assert not (A @ v).any()
        assert N.dim == 20 - A.rank()


def test_nullspace_trivial_cases():
    ctx = GF(2)
    assert nullspace(Matrix.zeros(ctx, 4, 4)).dim == 4
    assert nullspace(Matrix.identity(ctx, 5)).dim == 0


def test_subspace_operations():
    ctx = GF(2)
    U = Subspace.span(ctx, [[0, 1, 0]], 3)
    V = Subspace.span(ctx, [[0, 0, 1]], 3)
    assert subspace_ops(U, V, "sum").dim == 2
    assert subspace_ops(U, V, "intersect").dim == 0
    assert subspace_ops(U, U, "intersect") == U
    assert subspace_ops(U, U, "contains") is True
    assert subspace_ops(U + V, U, "contains") is True
    assert subspace_ops(U, U + V, "contains") is False


def test_inverse_and_power():
    ctx = GF(2, 2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        A = Matrix.random(ctx, 6, 6, rng)
        if A.rank() < 6:
            continue
        assert A @ A.inverse() == Matrix.identity(ctx, 6)
        assert A.power(5) == A @ A @ A @ A @ A


def _random_system(rng, ctx, rows, cols, rank):
    A = Matrix.random(ctx, rows, rank, rng)
    B = Matrix.random(ctx, rank, cols, rng)
    return (A @ B).data


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_packed_kernel_matches_reference(m):
    """Bit-packed elimination agrees with the naive kernel on 50 systems per field (200 total)."""
    ctx = GF(2, m)
    rng = np.random.default_rng(1000 + m)
    for _ in range(50):
        r, c = (int(x) for x in rng.integers(1, 65, size=2))
        rank = int(rng.integers(0, min(r, c) + 1))
        data = _random_system(rng, ctx, r, c, rank) if rng.random() < 0.5 else ctx.random(rng, (r, c))
        pc = int(rng.integers(1, c + 1))
        R1, p1 = rref_codes(ctx, data, pivot_cols=pc, kernel="packed")
        R2, p2 = rref_codes(ctx, data, pivot_cols=pc, kernel="reference")
        assert p1 == p2
        assert np.array_equal(R1, R2)


def test_rref_is_reduced():
    ctx = GF(2, 3)
    rng = np.random.default_rng(5)
    data = ctx.random(rng, (12, 15))
    R, piv = rref_codes(ctx, data)
    for i, j in enumerate(piv):
        col = R[:, j]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert not R[len(piv):].any()


def test_matrix_json_round_trip():
    ctx = GF(2, 3)
    A = Matrix.random(ctx, 4, 5, np.random.default_rng(0))
    assert Matrix.from_json(ctx, A.to_json()) == A


# -- polynomials ----------------------------------------------------------------


def test_irreducible_factors_of_x_power_minus_x():
    ctx = GF(2)
    rng = np.random.default_rng(0)
    # x^8 - x over GF(2): x, x+1, and the two cubics
    f = np.zeros(9, dtype=np.int64)
    f[8], f[1] = 1, 1
    facs = poly.irreducible_factors(ctx, f, rng)
    degs = sorted(poly.degree(g) for g in facs)
    assert degs == [1, 1, 3, 3]
    prod = np.array([1])
    for g in facs:
        prod = poly.mul(ctx, prod, g)
    assert np.array_equal(poly.trim(prod), poly.trim(f))


def test_min_poly_vector_annihilates():
    ctx = GF(2, 2)
    rng = np.random.default_rng(9)
    A = Matrix.random(ctx, 7, 7, rng)
    v = ctx.random(rng, 7)
    f = poly.min_poly_vector(A, v)
    assert not (poly.eval_matrix(f, A) @ v).any()
    # minimality: no proper monic divisor of lower degree kills v
    for d in range(poly.degree(f)):
        vecs = [v]
        for _ in range(d):
            vecs.append(A @ vecs[-1])
        assert Subspace.span(ctx, vecs, 7).dim == d + 1


@pytest.mark.parametrize("a,b", list(itertools.product(range(4), repeat=2)))
def test_gf4_spot_products(a, b):
    ctx = GF(2, 2)
    # codes are digit vectors in base x with x^2 = x + 1
    want = schoolbook_mul(2, ctx.modulus, [a & 1, a >> 1], [b & 1, b >> 1])
    assert int(ctx.mul(a, b)) == want[0] + 2 * want[1]
