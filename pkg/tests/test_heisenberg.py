"""Tests for the Heisenberg constructions and the order-6 twist."""

from fractions import Fraction

import numpy as np
import pytest

from abindex import group_core as gc
from abindex import heisenberg as hb
from abindex.errors import (
    CapExceeded,
    DetNotOne,
    ModulusMismatch,
    NonIntegralInput,
    OddModulus,
)


def rand_int_elem(rng, span=50):
    x, y = (int(v) for v in rng.integers(-span, span + 1, 2))
    return hb.IntHeisElem(x, y, Fraction(int(rng.integers(-2 * span, 2 * span + 1))))


# ---------------------------------------------------------------------------
# element arithmetic


def test_heis_mul_basic_products():
    a = hb.heis_elem(4, 1, 0, 0)
    b = hb.heis_elem(4, 0, 1, 0)
    assert hb.heis_mul(a, b) == hb.heis_elem(4, 1, 1, 1)
    assert hb.heis_mul(b, a) == hb.heis_elem(4, 1, 1, 0)


def test_heis_commutator_is_central_generator():
    a = hb.heis_elem(6, 1, 0, 0)
    b = hb.heis_elem(6, 0, 1, 0)
    ab = hb.heis_mul(a, b)
    ba = hb.heis_mul(b, a)
    comm = hb.heis_mul(ab, hb.heis_inv(ba))
    assert comm == hb.heis_elem(6, 0, 0, 1)


def test_heis_mul_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        hb.heis_mul(hb.heis_elem(4, 0, 0, 0), hb.heis_elem(6, 0, 0, 0))


def test_heis_mul_associative_small_moduli():
    # tabulating the closure through heis_mul makes the table constructor
    # prove associativity on all (2n^3)^3 triples for every n up to 6
    for n in (2, 3, 4, 5, 6):
        table, _ = gc.build_from_generators(
            hb.heis_identity(n),
            [hb.heis_elem(n, 1, 0, 0), hb.heis_elem(n, 0, 1, 0), hb.HeisElem(n, 0, 0, 1)],
            hb.heis_mul,
        )
        assert table.order == 2 * n**3
    # plus a seeded spot check above that range
    rng = np.random.default_rng(8)
    for n in (8, 10):
        for _ in range(300):
            xs = rng.integers(0, n, 6)
            zs = rng.integers(0, 2 * n, 3)
            a = hb.HeisElem(n, int(xs[0]), int(xs[1]), int(zs[0]))
            b = hb.HeisElem(n, int(xs[2]), int(xs[3]), int(zs[1]))
            c = hb.HeisElem(n, int(xs[4]), int(xs[5]), int(zs[2]))
            assert hb.heis_mul(hb.heis_mul(a, b), c) == hb.heis_mul(a, hb.heis_mul(b, c))


def test_heis_inverse():
    for n in (2, 5, 8):
        for x in range(n):
            for y in range(n):
                e = hb.HeisElem(n, x, y, (x + 3 * y) % (2 * n))
                assert hb.heis_mul(e, hb.heis_inv(e)) == hb.heis_identity(n)


def test_parse_heis_literal():
    assert hb.parse_heis_literal("A(1,0,0)", 4) == hb.heis_elem(4, 1, 0, 0)
    assert hb.parse_heis_literal("A(2,3,5/2)", 4) == hb.HeisElem(4, 2, 3, 5)
    assert hb.parse_heis_literal("A(-1,1,-1/2)", 4) == hb.HeisElem(4, 3, 1, 7)
    with pytest.raises(ValueError):
        hb.parse_heis_literal("B(1,0,0)", 4)
    with pytest.raises(ValueError):
        hb.parse_heis_literal("A(1,0,1/3)", 4)


# ---------------------------------------------------------------------------
# gamma_n


def test_gamma_2_is_dihedral_of_order_8():
    g = hb.gamma_n(2)
    assert g.order == 8
    assert gc.exponent(g) == 4
    orders = gc.all_element_orders(g)
    profile = {int(o): int(np.count_nonzero(orders == o)) for o in np.unique(orders)}
    assert profile == {1: 1, 2: 5, 4: 2}  # dihedral, not quaternion


def test_gamma_3_is_extraspecial_exponent_3():
    g = hb.gamma_n(3)
    assert g.order == 27
    assert gc.exponent(g) == 3
    assert gc.center(g).size == 3


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_gamma_center_equals_commutator(n):
    g = hb.gamma_n(n)
    center = gc.center(g)
    assert center.size == n
    assert gc.commutator_subgroup(g) == center
    assert center == hb.gamma_center_mask(g, n)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_gamma_quotient_by_center_is_two_torus(n):
    g = hb.gamma_n(n)
    q, hom = gc.quotient_by_normal(g, gc.center(g))
    assert hom.verify()
    assert q.order == n * n
    assert q.is_abelian()
    assert gc.exponent(q) == n
    assert gc.abelian_invariant_factors(q) == [n, n]


def test_gamma_element_orders():
    g4 = hb.gamma_n(4)
    assert gc.element_order(g4, hb.gamma_elem_index(4, 1, 0, 0)) == 4
    g2 = hb.gamma_n(2)
    assert gc.element_order(g2, hb.gamma_elem_index(2, 1, 1, 0)) == 4


def test_gamma_centralizer_of_first_translation():
    n = 4
    g = hb.gamma_n(n)
    cent = gc.centralizer(g, [hb.gamma_elem_index(n, 1, 0, 0)])
    # commutator exponent x y' - x' y forces y' = 0: n choices for x', n for z
    assert cent.size == n * n
    expect = {hb.gamma_elem_index(n, x, 0, z) for x in range(n) for z in range(n)}
    assert set(cent.indices().tolist()) == expect


def test_gamma_cap():
    with pytest.raises(CapExceeded):
        hb.gamma_n(30, cap=1000)


# ---------------------------------------------------------------------------
# the twist


def test_twist_fixes_center_elementwise():
    for n in (2, 4, 6):
        for z2 in range(2 * n):
            e = hb.HeisElem(n, 0, 0, z2)
            assert hb.h_auto(e) == e


def test_twist_basic_values():
    assert hb.h_auto(hb.heis_elem(4, 1, 0, 0)) == hb.heis_elem(4, 0, 1, 0)
    # y = 1 drops the doubled coordinate by one: half-integral output
    out = hb.h_auto(hb.heis_elem(4, 0, 1, 0))
    assert (out.x, out.y, out.z2) == (3, 1, 7)
    assert out.z == Fraction(-1, 2) + 4


def test_twist_requires_even_modulus():
    with pytest.raises(OddModulus):
        hb.h_auto(hb.HeisElem(3, 1, 0, 0))


@pytest.mark.parametrize("n", list(range(2, 13, 2)))
def test_twist_order_six_exhaustive(n):
    for x in range(n):
        for y in range(n):
            for z2 in range(2 * n):
                e = hb.HeisElem(n, x, y, z2)
                cur = e
                for _ in range(6):
                    cur = hb.h_auto(cur)
                assert cur == e


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_twist_is_homomorphism_all_pairs(n):
    elems = [
        hb.HeisElem(n, x, y, z2)
        for x in range(n)
        for y in range(n)
        for z2 in range(2 * n)
    ]
    for a in elems:
        ha = hb.h_auto(a)
        for b in elems:
            assert hb.h_auto(hb.heis_mul(a, b)) == hb.heis_mul(ha, hb.h_auto(b))


def test_int_twist_random_sweep():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        e = rand_int_elem(rng)
        cur = e
        for _ in range(6):
            cur = hb.h_auto_int(cur)
        assert cur == e
        b = rand_int_elem(rng)
        assert hb.h_auto_int(hb.int_heis_mul(e, b)) == hb.int_heis_mul(
            hb.h_auto_int(e), hb.h_auto_int(b)
        )


def test_integral_twist_random_sweep():
    rng = np.random.default_rng(1)
    for _ in range(10_000):
        e = rand_int_elem(rng)
        out = hb.h_prime_auto(e)
        assert out.z.denominator == 1
        cur = e
        for _ in range(6):
            cur = hb.h_prime_auto(cur)
        assert cur == e


def test_integral_twist_values_and_errors():
    assert hb.h_prime_auto(hb.IntHeisElem(0, 1, Fraction(0))) == hb.IntHeisElem(
        -1, 1, Fraction(0)
    )
    with pytest.raises(NonIntegralInput):
        hb.h_prime_auto(hb.IntHeisElem(0, 1, Fraction(1, 2)))


def test_twists_differ_by_half_y():
    rng = np.random.default_rng(2)
    for _ in range(200):
        x, y = (int(v) for v in rng.integers(-20, 21, 2))
        e = hb.IntHeisElem(x, y, Fraction(3))
        a, b = hb.h_auto_int(e), hb.h_prime_auto(e)
        assert (a.x, a.y) == (b.x, b.y)
        assert b.z - a.z == Fraction(y, 2)


# ---------------------------------------------------------------------------
# the extended group


def test_hat_rejects_odd_modulus():
    with pytest.raises(OddModulus):
        hb.hat_gamma_n(3)
    with pytest.raises(CapExceeded):
        hb.hat_gamma_n(10, cap=100)


@pytest.mark.parametrize("n", [2, 4])
def test_hat_structure(n):
    hat = hb.hat_gamma_n(n)
    assert hat.order == 12 * n**3  # closure picks up half-integral rotations
    assert hat.theta_surjective
    assert hat.theta.verify()
    assert hat.gamma_image.size == n**3
    assert hat.gamma_image_index == 12
    assert hat.theta_kernel_order == 2 * n**3
    assert gc.is_normal(hat.table, hat.theta_kernel)
    # conjugating by the twist generator moves integral translations to
    # half-integral ones, so the translation image itself is not normal
    assert hat.gamma_image_normal is False


def test_hat_elements_multiply_like_the_table():
    n = 2
    hat = hb.hat_gamma_n(n)
    rng = np.random.default_rng(7)
    for _ in range(300):
        i, j = (int(v) for v in rng.integers(0, hat.order, 2))
        a, b = hat.element_at(i), hat.element_at(j)
        assert hat.index_of(hb.hat_mul(a, b)) == hat.table.mul_idx(i, j)
    with pytest.raises(ModulusMismatch):
        hb.hat_mul(
            hb.HatElem(hb.heis_identity(2), 1), hb.HatElem(hb.heis_identity(4), 1)
        )


def test_hat_conjugation_by_twist_realizes_it():
    n = 4
    hat = hb.hat_gamma_n(n)
    t = hat.table
    lab = {s: i for i, s in enumerate(t.labels)}
    hgen = lab["A(0,0,0)h^1"]
    for x, y, z in [(1, 0, 0), (0, 1, 0), (2, 3, 1), (1, 1, 2)]:
        g_idx = lab[f"A({x},{y},{z})h^0"]
        conj = t.mul_idx(t.mul_idx(hgen, g_idx), t.inv_idx(hgen))
        img = hb.h_auto(hb.heis_elem(n, x, y, z))
        assert t.labels[conj] == f"{img}h^0"


def test_hat_gamma_image_is_normal_inside_kernel():
    hat = hb.hat_gamma_n(4)
    sub, parent_idx = gc.subgroup_table(hat.table, hat.theta_kernel)
    pos = {int(v): i for i, v in enumerate(parent_idx)}
    bits = np.zeros(sub.order, dtype=bool)
    for v in hat.gamma_image.indices():
        bits[pos[int(v)]] = True
    inner = gc.SubgroupMask(sub, bits)
    assert gc.is_normal(sub, inner)  # index 2
    assert sub.order // inner.size == 2


def test_hat_4_min_abelian_index():
    hat = hb.hat_gamma_n(4)
    res = gc.min_abelian_index(hat.table)
    # below the sharpness threshold the floor 6n fails: the half-turn
    # lattice {0, n/2}^2 pulls back to an abelian subgroup of order 16n
    assert res.index == 12
    assert res.witness.size == 64


# ---------------------------------------------------------------------------
# the base group on the torus


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_bn_order_and_relations(n):
    data = hb.b_n_components(n)
    t = data.table
    assert t.order == 6 * n * n
    chi, ta, tb = data.chi_idx, data.ta_idx, data.tb_idx
    chi_inv = t.inv_idx(chi)
    assert t.mul_idx(t.mul_idx(chi_inv, ta), chi) == t.mul_idx(ta, t.inv_idx(tb))
    assert t.mul_idx(t.mul_idx(chi_inv, tb), chi) == ta
    assert gc.element_order(t, chi) == 6


@pytest.mark.parametrize("n", [2, 3, 6])
def test_bn_translation_subgroup(n):
    data = hb.b_n_components(n)
    assert data.translations.size == n * n
    assert gc.is_normal(data.table, data.translations)
    sub, _ = gc.subgroup_table(data.table, data.translations)
    assert sub.is_abelian()
    if n > 1:
        assert gc.abelian_invariant_factors(sub) == [n, n]
    assert data.zeta.verify()
    assert data.zeta.is_surjective()
    assert data.zeta.kernel_mask() == data.translations


def test_fixed_points_identity_power():
    for n in (5, 8, 9):
        assert hb.fixed_points_chi_power(n, 1) == {(0, 0)}


def test_fixed_points_half_turn():
    assert hb.fixed_points_chi_power(8, 3) == {(0, 0), (0, 4), (4, 0), (4, 4)}
    assert hb.fixed_points_chi_power(9, 3) == {(0, 0)}


def test_fixed_points_third_turn():
    # solutions of u = v, 3u = 0: three points when 3 | n, one otherwise
    assert hb.fixed_points_chi_power(9, 2) == {(0, 0), (3, 3), (6, 6)}
    assert hb.fixed_points_chi_power(6, 2) == {(0, 0), (2, 2), (4, 4)}
    assert hb.fixed_points_chi_power(8, 2) == {(0, 0)}


# ---------------------------------------------------------------------------
# doubling


@pytest.mark.parametrize("p", [3, 5])
def test_doubling_embeds_as_sylow(p):
    d = hb.doubling_embed(p)
    assert d.verify()
    assert d.is_injective()
    img = d.image_mask()
    assert img.size == p**3
    assert gc.sylow(d.target, p).size == p**3
    spot = d.map[hb.gamma_elem_index(p, 1, 0, 0)]
    assert int(spot) == hb.gamma_elem_index(2 * p, 2, 0, 0)


def test_doubling_rejects_bad_primes():
    with pytest.raises(ValueError):
        hb.doubling_embed(2)
    with pytest.raises(ValueError):
        hb.doubling_embed(9)


# ---------------------------------------------------------------------------
# lifts over SL(2,Z)


def test_sl2_det_check():
    with pytest.raises(DetNotOne):
        hb.SL2Matrix(1, 0, 0, 2)


def test_identity_lift_is_identity():
    lift = hb.sl2_lift(hb.SL2Matrix(1, 0, 0, 1))
    e = hb.IntHeisElem(3, -2, Fraction(5, 2))
    assert lift(e) == e


def test_lift_reproduces_both_twists():
    Fh = hb.SL2Matrix(0, -1, 1, 1)
    lift = hb.sl2_lift(Fh)
    lift_prime = hb.sl2_lift(Fh, (0, Fraction(1, 2)))
    rng = np.random.default_rng(3)
    for _ in range(1000):
        e = rand_int_elem(rng)
        assert lift(e) == hb.h_auto_int(e)
        if e.z.denominator == 1:
            assert lift_prime(e) == hb.h_prime_auto(e)


def test_lift_is_homomorphism_random_matrices():
    # 100 seeded matrices, 1000 element pairs each
    rng = np.random.default_rng(4)
    for _ in range(100):
        F = hb.random_sl2(rng, entry_bound=20)
        lift = hb.sl2_lift(F)
        coords = rng.integers(-50, 51, (1000, 4))
        zs = rng.integers(-99, 100, (1000, 2))
        for (x1, y1, x2, y2), (z1, z2) in zip(coords, zs):
            a = hb.IntHeisElem(int(x1), int(y1), Fraction(int(z1)))
            b = hb.IntHeisElem(int(x2), int(y2), Fraction(int(z2)))
            assert lift(hb.int_heis_mul(a, b)) == hb.int_heis_mul(lift(a), lift(b))
        assert lift(hb.IntHeisElem(0, 0, Fraction(7))).z == Fraction(7)  # fixes center


def test_cocycle_identity_cases():
    I = hb.SL2Matrix(1, 0, 0, 1)
    F = hb.SL2Matrix(3, 1, 2, 1)
    for pair in [(I, I), (F, I), (I, F)]:
        res = hb.q_form_cocycle_check(*pair)
        assert res.is_cocycle_mod_linear
        assert res.linear_defect == (0, 0)
        assert res.quadratic_defect == (0, 0, 0)


def test_cocycle_twist_squared():
    Fh = hb.SL2Matrix(0, -1, 1, 1)
    res = hb.q_form_cocycle_check(Fh, Fh)
    assert res.is_cocycle_mod_linear
    assert res.quadratic_defect == (0, 0, 0)


def test_cocycle_random_pairs():
    rng = np.random.default_rng(5)
    for _ in range(100):
        F, G = hb.random_sl2(rng, 20), hb.random_sl2(rng, 20)
        assert F.entry_bound() <= 20 and G.entry_bound() <= 20
        assert hb.q_form_cocycle_check(F, G).is_cocycle_mod_linear
