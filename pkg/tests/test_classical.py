"""Classical group types: membership, projections, Cartan and Iwasawa."""

import numpy as np
import pytest
from scipy.linalg import expm

from opideal import (CLASSICAL_TYPES, DomainError, InputError,
                     algebra_membership, algebra_project, cartan_decompose,
                     cartan_involution, default_structure, group_membership,
                     irreducibility_check, iwasawa_algebra_split,
                     iwasawa_decompose, random_group_element,
                     regular_eigenflag, validate_structure)
from opideal.utils import crandn, dagger, frob


def test_default_structures_validate():
    for typ in CLASSICAL_TYPES:
        st = default_structure(typ, 4)
        validate_structure(typ, st)


def test_even_dimension_enforced():
    for typ in ("C", "AII", "BII", "CI", "CII"):
        with pytest.raises(InputError):
            default_structure(typ, 3)


def test_cii_split_components_must_be_even():
    with pytest.raises(InputError):
        default_structure("CII", 4, split=(1, 3))
    st = default_structure("CII", 6)
    assert st.split == (2, 4)


def test_structure_compat_checks():
    st = default_structure("BI", 4, split=(2, 2))
    bad = np.eye(4, dtype=complex)[[0, 2, 1, 3]]   # swaps across the split
    with pytest.raises(InputError):
        validate_structure("BI", type(st)(n=4, c_conj=bad, v=st.v, split=st.split))


def test_identity_in_every_group():
    for typ in CLASSICAL_TYPES:
        st = default_structure(typ, 4)
        assert group_membership(np.eye(4), typ, st)


def test_scalar_i_examples():
    x = 1j * np.eye(2)
    assert algebra_membership(x, "A")
    st = default_structure("AIII", 2, split=(1, 1))
    assert algebra_membership(x, "AIII", st)      # (i)* V = -V (i)
    assert not algebra_membership(x, "AI", default_structure("AI", 2))


def test_aiii_one_parameter_group_against_relation_oracle():
    rng = np.random.default_rng(1)
    st = default_structure("AIII", 4, split=(2, 2))
    v = st.v
    h = crandn(rng, 4, 4)
    h = (h + dagger(h)) / 2.0
    for t in (0.3, 1.0):
        g = expm(1j * t * v @ h)
        assert group_membership(g, "AIII", st, tol=1e-9)
        assert frob(dagger(g) @ v @ g - v) < 1e-9 * frob(g) ** 2


def test_projection_fixes_members_and_is_idempotent():
    rng = np.random.default_rng(2)
    for typ in CLASSICAL_TYPES:
        st = default_structure(typ, 4)
        x = crandn(rng, 4, 4)
        p1 = algebra_project(x, typ, st)
        assert algebra_membership(p1, typ, st, tol=1e-12)
        p2 = algebra_project(p1, typ, st)
        assert frob(p1 - p2) < 1e-13
        assert frob(algebra_project(p1, typ, st) - p1) < 1e-14 * max(1.0, frob(p1))


def test_projection_type_a_is_identity():
    rng = np.random.default_rng(3)
    x = crandn(rng, 3, 3)
    assert np.array_equal(algebra_project(x, "A"), x)


def test_projection_type_c_relation_oracle():
    rng = np.random.default_rng(4)
    st = default_structure("C", 4)
    x = algebra_project(crandn(rng, 4, 4), "C", st)
    ca = st.c_anti
    assert frob(x - ca @ x.T @ ca.conj()) < 1e-13


def test_random_group_element_properties():
    st = default_structure("AIII", 4, split=(2, 2))
    tiny = random_group_element("AIII", st, seed=5, radius=1e-9)
    assert frob(tiny - np.eye(4)) < 1e-7
    g1 = random_group_element("AIII", st, seed=5, radius=0.6)
    g2 = random_group_element("AIII", st, seed=5, radius=0.6)
    assert np.array_equal(g1, g2)
    assert frob(dagger(g1) @ st.v @ g1 - st.v) < 1e-9 * frob(g1) ** 2
    with pytest.raises(InputError):
        random_group_element("AIII", st, seed=5, radius=0.0)


def test_group_closure_under_product_and_inverse():
    rng = np.random.default_rng(6)
    for typ in CLASSICAL_TYPES:
        st = default_structure(typ, 4)
        g = random_group_element(typ, st, seed=int(rng.integers(1e6)), radius=0.5)
        h = random_group_element(typ, st, seed=int(rng.integers(1e6)), radius=0.5)
        assert group_membership(g @ h, typ, st, tol=1e-9)
        assert group_membership(np.linalg.inv(g), typ, st, tol=1e-9)


def test_cartan_unitary_input():
    st = default_structure("B", 4)
    g = random_group_element("B", st, seed=7, radius=0.5)
    cf0 = cartan_decompose(g, "B", st)
    k = cf0.k                                     # unitary element of the group
    cf = cartan_decompose(k, "B", st)
    assert frob(cf.x) < 1e-12
    assert frob(cf.k - k) < 1e-12


def test_cartan_positive_input():
    rng = np.random.default_rng(8)
    h = crandn(rng, 3, 3)
    h = (h + dagger(h)) / 2.0
    p = expm(h)                                   # positive definite in GL
    cf = cartan_decompose(p, "A")
    assert frob(cf.k - np.eye(3)) < 1e-10
    assert frob(cf.x - h) < 1e-10


def _svd_polar_oracle(g):
    u, s, vh = np.linalg.svd(g)
    k = u @ vh
    pos = dagger(vh) @ np.diag(s) @ vh
    w, v = np.linalg.eigh(pos)
    return k, v @ np.diag(np.log(w)) @ dagger(v)


@pytest.mark.parametrize("typ", CLASSICAL_TYPES)
def test_cartan_each_type_with_polar_oracle(typ):
    st = default_structure(typ, 4)
    for seed in (11, 12):
        g = random_group_element(typ, st, seed=seed, radius=0.7)
        cf = cartan_decompose(g, typ, st)
        k_o, x_o = _svd_polar_oracle(g)
        assert frob(cf.k - k_o) < 1e-9 * max(1.0, frob(k_o))
        assert frob(cf.x - x_o) < 1e-9 * max(1.0, frob(x_o))
        assert group_membership(cf.k, typ, st, tol=1e-8)
        assert algebra_membership(cf.x, typ, st, tol=1e-8)
        assert frob(cf.x - dagger(cf.x)) < 1e-10


def test_cartan_rejects_outsiders():
    st = default_structure("B", 4)
    rng = np.random.default_rng(13)
    with pytest.raises(DomainError):
        cartan_decompose(crandn(rng, 4, 4) + 3 * np.eye(4), "B", st)


def test_cartan_involution_clauses():
    rng = np.random.default_rng(14)
    q, _ = np.linalg.qr(crandn(rng, 4, 4))
    assert frob(cartan_involution(q) - q) < 1e-12
    h = crandn(rng, 4, 4)
    p = expm((h + dagger(h)) / 2.0)
    assert frob(cartan_involution(p) - np.linalg.inv(p)) < 1e-9
    g1 = crandn(rng, 4, 4) + 2 * np.eye(4)
    g2 = crandn(rng, 4, 4) + 2 * np.eye(4)
    hom = cartan_involution(g1 @ g2) - cartan_involution(g1) @ cartan_involution(g2)
    assert frob(hom) < 1e-10
    assert frob(cartan_involution(cartan_involution(g1)) - g1) < 1e-10
    # non-unitary elements move
    assert frob(cartan_involution(p) - p) > 1e-3
    with pytest.raises(DomainError):
        cartan_involution(np.zeros((3, 3)))


def _positive_qr(g):
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph, r / ph[:, None]


def test_iwasawa_unitary_and_triangular_inputs():
    rng = np.random.default_rng(15)
    q, _ = np.linalg.qr(crandn(rng, 5, 5))
    f = iwasawa_decompose(q)
    assert frob(f.a - np.eye(5)) < 1e-10
    assert frob(f.n - np.eye(5)) < 1e-10

    r = np.triu(crandn(rng, 5, 5))
    np.fill_diagonal(r, np.abs(np.diag(r)) + 1.0)
    f2 = iwasawa_decompose(r)
    assert frob(f2.k - np.eye(5)) < 1e-10


def test_iwasawa_matches_qr_oracle():
    rng = np.random.default_rng(16)
    g = crandn(rng, 6, 6)
    f = iwasawa_decompose(g)
    q_o, r_o = _positive_qr(g)
    a_o = np.diag(np.diag(r_o).real)
    n_o = np.linalg.solve(a_o, r_o)
    assert frob(f.k - q_o) < 1e-9
    assert frob(f.a - a_o) < 1e-9
    assert frob(f.n - n_o) < 1e-9
    assert frob(f.k @ f.a @ f.n - g) < 1e-10 * frob(g)
    # repeated runs identical
    f2 = iwasawa_decompose(g)
    assert np.array_equal(f.k, f2.k) and np.array_equal(f.a, f2.a)


def test_iwasawa_real_inputs_stay_real():
    rng = np.random.default_rng(17)
    g = rng.standard_normal((5, 5))
    f = iwasawa_decompose(g)
    assert np.abs(f.k.imag).max() < 1e-12
    assert frob(f.k @ f.a @ f.n - g) < 1e-10 * frob(g)


def test_iwasawa_custom_regular_element():
    rng = np.random.default_rng(18)
    q, _ = np.linalg.qr(crandn(rng, 4, 4))
    x0 = q @ np.diag([4.0, 2.5, 1.0, -1.0]) @ dagger(q)
    g = crandn(rng, 4, 4) + 2 * np.eye(4)
    f = iwasawa_decompose(g, x0)
    assert frob(f.k @ f.a @ f.n - g) < 1e-10 * frob(g)
    assert frob(f.a @ x0 - x0 @ f.a) < 1e-10
    flag = regular_eigenflag(x0)
    from opideal import is_in_nest_algebra
    assert is_in_nest_algebra(f.n, flag, tol=1e-9)


def test_iwasawa_rejects_degenerate_x0():
    x0 = np.diag([2.0, 1.0, 1.0 + 1e-10])
    with pytest.raises(DomainError, match="collide"):
        iwasawa_decompose(np.eye(3) * 2.0, x0)
    with pytest.raises(InputError, match="Hermitian"):
        iwasawa_decompose(np.eye(3) * 2.0, np.diag([3.0, 2.0, 1.0]) + 1j * np.eye(3))
    with pytest.raises(InputError, match="dimension"):
        iwasawa_decompose(np.eye(3) * 2.0, np.diag([2.0, 1.0]))


def _split_oracle(x):
    # unique entrywise solution of the linear constraints in flag coordinates
    n = x.shape[0]
    xa = np.diag(np.diag(x).real).astype(complex)
    xn = np.zeros_like(x)
    for i in range(n):
        for j in range(i + 1, n):
            xn[i, j] = x[i, j] + np.conj(x[j, i])
    xk = x - xa - xn
    return xk, xa, xn


def test_algebra_split_examples_and_oracle():
    rng = np.random.default_rng(19)
    # skew input: no diagonal part
    s = crandn(rng, 4, 4)
    s = (s - dagger(s)) / 2.0
    xk, xa, xn = iwasawa_algebra_split(s)
    assert frob(xa) < 1e-14
    assert frob(xk + xn - s) < 1e-14
    # real diagonal input: only the commuting part
    d = np.diag([3.0, 1.0, -2.0, 0.5]).astype(complex)
    xk, xa, xn = iwasawa_algebra_split(d)
    assert frob(xk) == 0.0 and frob(xn) == 0.0 and np.array_equal(xa, d)
    # random input matches the entrywise constraint solution
    x = crandn(rng, 5, 5)
    xk, xa, xn = iwasawa_algebra_split(x)
    ok, oa, on = _split_oracle(x)
    assert frob(xk - ok) < 1e-13
    assert frob(xa - oa) < 1e-13
    assert frob(xn - on) < 1e-13
    assert frob(xk + xa + xn - x) < 1e-13
    assert frob(xk + dagger(xk)) < 1e-13
    assert frob(np.tril(xn)) == 0.0


def test_algebra_split_is_linear_and_projective():
    rng = np.random.default_rng(20)
    x, y = crandn(rng, 4, 4), crandn(rng, 4, 4)
    for c in (1.0, 2.5):
        left = iwasawa_algebra_split(c * x + y)
        right = [c * a + b for a, b in zip(iwasawa_algebra_split(x),
                                           iwasawa_algebra_split(y))]
        for l, r in zip(left, right):
            assert frob(l - r) < 1e-12
    comps = iwasawa_algebra_split(x)
    for i, comp in enumerate(comps):
        again = iwasawa_algebra_split(comp)
        for j, piece in enumerate(again):
            target = comp if i == j else 0.0
            assert frob(piece - target) < 1e-13


def test_irreducibility_known_cases():
    n = 3
    basis = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    assert irreducibility_check(basis)
    assert not irreducibility_check([np.diag([1.0, 2.0]).astype(complex)])
    rng = np.random.default_rng(21)
    assert irreducibility_check([crandn(rng, 3, 3), crandn(rng, 3, 3)])
    # block structure conjugated by a unitary is still reducible
    q, _ = np.linalg.qr(crandn(rng, 4, 4))
    blocks = []
    for _ in range(3):
        b = np.zeros((4, 4), dtype=complex)
        b[:2, :2] = crandn(rng, 2, 2)
        b[2:, 2:] = crandn(rng, 2, 2)
        blocks.append(q @ b @ dagger(q))
    assert not irreducibility_check(blocks)
    with pytest.raises(InputError):
        irreducibility_check([])
