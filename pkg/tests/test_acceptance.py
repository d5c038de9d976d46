"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines.
All tolerances are exact integer or exact rational comparisons.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from abindex import group_core as gc
from abindex import heisenberg as hb
from abindex import jordan_bounds as jb
from abindex import qpairing as qp
from abindex import surface_groups as sg
from abindex.errors import OddModulus


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    suffix = f" -- {detail}" if detail else ""
    print(f"\nACCEPTANCE {num} [{name}]: {tag}{suffix}")


def test_criterion_1_gamma_structure():
    t0 = time.monotonic()
    problems = []
    for n in range(2, 11):
        g = hb.gamma_n(n)
        if g.order != n**3:
            problems.append(f"order({n})={g.order}")
        center = gc.center(g)
        if center.size != n:
            problems.append(f"center({n})={center.size}")
        if gc.commutator_subgroup(g) != center:
            problems.append(f"commutator({n})!=center")
        # explicit abelian witness of order n^2: first coordinate plus center
        bits = np.zeros(g.order, dtype=bool)
        for x in range(n):
            for z in range(n):
                bits[hb.gamma_elem_index(n, x, 0, z)] = True
        witness = gc.SubgroupMask(g, bits)
        if not (witness.is_abelian() and witness.size == n * n):
            problems.append(f"explicit witness broken at n={n}")
        res = gc.min_abelian_index(g, budget_s=300)
        if res.index != n:
            problems.append(f"min_index({n})={res.index}")
    elapsed = time.monotonic() - t0
    ok = not problems and elapsed < 30.0
    _verdict(1, "heisenberg structure n=2..10", ok,
             f"elapsed {elapsed:.1f}s" + ("; " + "; ".join(problems) if problems else ""))
    assert not problems, problems
    assert elapsed < 30.0


def test_criterion_2_extended_group_sharpness():
    details = []
    problems = []
    for n in (8, 10):
        t0 = time.monotonic()
        hat = hb.hat_gamma_n(n)
        res = gc.min_abelian_index(hat.table, budget_s=300)
        elapsed = time.monotonic() - t0
        details.append(
            f"n={n}: order={hat.order}, theta-kernel={hat.theta_kernel_order}, "
            f"min_index={res.index} (floor {6 * n}), {elapsed:.1f}s"
        )
        if res.index < 6 * n:
            problems.append(f"n={n}: index {res.index} below {6 * n}")
        if elapsed >= 300.0:
            problems.append(f"n={n}: took {elapsed:.1f}s")
    _verdict(2, "extended-group index floor 6n", not problems, "; ".join(details))
    assert not problems, problems


def test_criterion_3_twists_exact():
    problems = []
    for n in range(2, 13):
        if n % 2 == 1:
            with pytest.raises(OddModulus):
                hb.h_auto(hb.HeisElem(n, 0, 1, 0))
            continue
        for x in range(n):
            for y in range(n):
                for z2 in range(2 * n):
                    e = hb.HeisElem(n, x, y, z2)
                    cur = e
                    for _ in range(6):
                        cur = hb.h_auto(cur)
                    if cur != e:
                        problems.append(f"twist^6 != id at n={n} {e}")
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        x, y = (int(v) for v in rng.integers(-40, 41, 2))
        e = hb.IntHeisElem(x, y, Fraction(int(rng.integers(-80, 81))))
        out = hb.h_prime_auto(e)
        if out.z.denominator != 1:
            problems.append(f"integral twist broke integrality at {e}")
        cur = e
        for _ in range(6):
            cur = hb.h_prime_auto(cur)
        if cur != e:
            problems.append(f"integral twist^6 != id at {e}")
    lift = hb.sl2_lift(hb.SL2Matrix(0, -1, 1, 1))
    for _ in range(1000):
        x, y = (int(v) for v in rng.integers(-40, 41, 2))
        e = hb.IntHeisElem(x, y, Fraction(int(rng.integers(-40, 41)), 2))
        if lift(e) != hb.h_auto_int(e):
            problems.append(f"lift disagrees with twist at {e}")
    _verdict(3, "order-6 twists, exact", not problems,
             "" if not problems else problems[0])
    assert not problems, problems


def test_criterion_4_pairing_laws():
    problems = []
    for n in range(2, 9):
        data = qp.gamma_central_data(n)
        for prop in qp.verify_q_properties(data):
            if not prop.passed:
                problems.append(f"{prop.name} failed at n={n}: {prop.counterexample}")
        rep = qp.check_dc_bound(data)
        if not rep.bound_holds:
            problems.append(f"square bound failed at n={n}")
        if rep.d_c**2 != rep.gamma_b_order:
            problems.append(f"equality witness missing at n={n}")
        if not rep.generator_attains:
            problems.append(f"no single pairing value generates at n={n}")
    data6 = qp.gamma_central_data(6)
    ordB = gc.all_element_orders(data6.gammaB)
    for a in np.flatnonzero(ordB == 2):
        for b in np.flatnonzero(ordB == 3):
            if qp.q_pair(data6, int(a), int(b)) != data6.g.identity:
                problems.append(f"mixed-prime pairing nonzero at ({a},{b})")
    _verdict(4, "commutator pairing laws n=2..8", not problems,
             "" if not problems else problems[0])
    assert not problems, problems


def test_criterion_5_doubling():
    t0 = time.monotonic()
    problems = []
    for p in (5, 7):
        d = hb.doubling_embed(p)
        if not d.verify():  # exhaustive over all pairs, stronger than sampling
            problems.append(f"homomorphism law failed at p={p}")
        if not d.is_injective():
            problems.append(f"not injective at p={p}")
        img = d.image_mask()
        if img.size != p**3:
            problems.append(f"image size {img.size} at p={p}")
        if gc.sylow(d.target, p).size != img.size:
            problems.append(f"image is not of Sylow order at p={p}")
    elapsed = time.monotonic() - t0
    ok = not problems and elapsed < 60.0
    _verdict(5, "doubling embedding p=5,7", ok, f"elapsed {elapsed:.1f}s")
    assert not problems, problems
    assert elapsed < 60.0


def test_criterion_6_rotation_orbits():
    problems = []
    icosa_count = None
    cases = [
        (sg.cyclic_kind(5), 1), (sg.cyclic_kind(6), 1),
        (sg.dihedral_kind(3), 1), (sg.dihedral_kind(5), 1),
        (sg.TETRA, 3), (sg.OCTA, 3),
    ]
    for kind, expected in cases:
        wit = sg.esfera_witness(sg.rotation_group(kind), kind)
        if wit.sigma_count != expected:
            problems.append(f"{kind}: orbit {wit.sigma_count} != {expected}")
    icosa = sg.rotation_group(sg.ICOSA)
    wit = sg.esfera_witness(icosa, sg.ICOSA)
    icosa_count = wit.sigma_count
    if icosa_count > 12:
        problems.append(f"icosa orbit {icosa_count} above 12")
    for kind in (sg.TETRA, sg.OCTA, sg.ICOSA):
        w = sg.esfera_witness(sg.rotation_group(kind), kind)
        if w.inverting_element is None:
            problems.append(f"{kind}: no inverting element")
    for kind in (sg.cyclic_kind(9), sg.dihedral_kind(5), sg.dihedral_kind(9),
                 sg.TETRA, sg.OCTA, sg.ICOSA):
        g = sg.rotation_group(kind)
        for p in (3, 5, 7):
            if g.order % p == 0:
                sub, _ = gc.subgroup_table(g, gc.sylow(g, p))
                if not sg.p_group_on_sphere_is_cyclic(p, sub):
                    problems.append(f"{kind}: Sylow-{p} not cyclic")
    _verdict(6, "rotation-group orbits", not problems,
             f"icosa orbit computed = {icosa_count} (bound 12)")
    assert not problems, problems


def test_criterion_7_torus_point_groups():
    problems = []
    orders = sg.torus_point_orders(10)
    if orders != {1, 2, 3, 4, 6}:
        problems.append(f"point orders {sorted(orders)}")
    for n in range(2, 9):
        data = hb.b_n_components(n)
        t = data.table
        if t.order != 6 * n * n:
            problems.append(f"order(B_{n})={t.order}")
        chi, ta, tb = data.chi_idx, data.ta_idx, data.tb_idx
        chi_inv = t.inv_idx(chi)
        if t.mul_idx(t.mul_idx(chi_inv, ta), chi) != t.mul_idx(ta, t.inv_idx(tb)):
            problems.append(f"first relation fails in B_{n}")
        if t.mul_idx(t.mul_idx(chi_inv, tb), chi) != ta:
            problems.append(f"second relation fails in B_{n}")
    # documented fixed-point sets for the twist powers
    for n in (6, 8, 9, 12):
        k2_documented = {(0, 0), (n // 3, n // 3)} if n % 3 == 0 else {(0, 0)}
        k3_documented = (
            {(u, v) for u in (0, n // 2) for v in (0, n // 2)}
            if n % 2 == 0
            else {(0, 0)}
        )
        for k, documented in ((1, {(0, 0)}), (2, k2_documented), (3, k3_documented)):
            computed = hb.fixed_points_chi_power(n, k)
            if computed != documented:
                problems.append(
                    f"n={n} k={k}: computed {sorted(computed)} != documented "
                    f"{sorted(documented)}"
                )
    _verdict(7, "torus point groups", not problems,
             "" if not problems else "; ".join(problems))
    assert not problems, problems


def test_criterion_8_shape_arithmetic():
    problems = []
    table = [
        # (alpha, beta, lambda, bound, degrees)
        (Fraction(1), Fraction(1), 1, 144, [0]),
        (Fraction(5), Fraction(1), 8, 144, list(range(-8, 9, 2))),
        (Fraction(4), Fraction(1), 6, 144, list(range(-6, 7, 2))),
        (Fraction(1), Fraction(4), 1, 144, [0]),
        (Fraction(3, 2), Fraction(1), 2, 144, [-2, 0, 2]),
        (Fraction(25, 2), Fraction(1), 24, 144, list(range(-24, 25, 2))),
        (Fraction(27, 2), Fraction(1), 26, 156, list(range(-26, 27, 2))),
    ]
    for alpha, beta, lam, bound, degrees in table:
        s = jb.shape(alpha, beta)
        if jb.lambda_of(s) != lam:
            problems.append(f"lambda({alpha},{beta})={jb.lambda_of(s)} != {lam}")
        if jb.jordan_bound(s) != bound:
            problems.append(f"bound({alpha},{beta})={jb.jordan_bound(s)} != {bound}")
        if jb.admissible_fixed_surface_degrees(s) != degrees:
            problems.append(f"degrees({alpha},{beta}) mismatch")
    padm = [
        (Fraction(5), Fraction(1), 5, False),      # lambda 8 < 10
        (Fraction(11, 2), Fraction(1), 5, True),   # lambda 10, equality case
        (Fraction(13), Fraction(1), 5, True),      # lambda 24
        (Fraction(7), Fraction(1), 7, False),      # lambda 12 < 14
    ]
    for alpha, beta, p, expected in padm:
        got = jb.nonabelian_p_admissible(jb.shape(alpha, beta), p).admissible
        if got != expected:
            problems.append(f"admissible({alpha},{beta},p={p})={got} != {expected}")
    for num in range(1, 300):
        s = jb.shape(Fraction(num, 5), 1)
        if (jb.jordan_bound(s) == 144) != (jb.lambda_of(s) <= 24):
            problems.append(f"crossover broken at {num}/5")
    _verdict(8, "shape arithmetic", not problems,
             "" if not problems else problems[0])
    assert not problems, problems


def test_criterion_9_cocycle_property():
    rng = np.random.default_rng(0)
    problems = []
    for i in range(100):
        F = hb.random_sl2(rng, entry_bound=20)
        G = hb.random_sl2(rng, entry_bound=20)
        res = hb.q_form_cocycle_check(F, G)
        if not res.is_cocycle_mod_linear:
            problems.append(f"pair {i}: quadratic defect {res.quadratic_defect}")
        if res.linear_defect != (0, 0):
            problems.append(f"pair {i}: linear defect {res.linear_defect}")
    _verdict(9, "lift composition cocycle", not problems,
             "" if not problems else problems[0])
    assert not problems, problems
