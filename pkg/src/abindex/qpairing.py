"""Commutator pairing on central extensions with abelian quotient.

For a group G with a central subgroup G0 and abelian quotient B, the pairing
sends a pair of quotient elements to the commutator of any lifts.  The value
is lift-independent, biadditive, and controls how far the extension is from
abelian; everything here is checked by exhaustive table arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import HypothesisViolation, NotCentral, QuotientNotAbelian
from .group_core import (
    GroupTable,
    Homomorphism,
    SubgroupMask,
    abelian_invariant_factors,
    all_element_orders,
    center,
    closure,
    commutator_subgroup,
    is_cyclic,
    quotient_by_normal,
    subgroup_table,
)
from .heisenberg import gamma_center_mask, gamma_n


@dataclass
class CentralData:
    """A group with a chosen central subgroup and its abelian quotient."""

    g: GroupTable
    gamma0: SubgroupMask
    eta: Homomorphism
    gammaB: GroupTable


def central_data_from(g: GroupTable, gamma0: SubgroupMask) -> CentralData:
    """Assemble the pairing habitat; rejects non-central or non-abelian data."""
    if not np.all(center(g).bits[gamma0.indices()]):
        raise NotCentral("the chosen subgroup is not central")
    gammaB, eta = quotient_by_normal(g, gamma0)
    if not gammaB.is_abelian():
        raise QuotientNotAbelian("quotient by the chosen subgroup is not abelian")
    return CentralData(g, gamma0, eta, gammaB)


def gamma_central_data(n: int) -> CentralData:
    """The mod-n Heisenberg group over its center; quotient is (Z_n)^2."""
    g = gamma_n(n)
    return central_data_from(g, gamma_center_mask(g, n))


def _first_lifts(data: CentralData) -> np.ndarray:
    lifts = np.empty(data.gammaB.order, dtype=np.int64)
    emap = np.asarray(data.eta.map)
    for a in range(data.gammaB.order):
        lifts[a] = np.flatnonzero(emap == a)[0]
    return lifts


def _commutator(g: GroupTable, x: int, y: int) -> int:
    return int(g.mul[g.mul[x, y], g.mul[g.inv[x], g.inv[y]]])


def q_pair(data: CentralData, a: int, b: int) -> int:
    """Commutator of lifts of two quotient elements, as an element of G0.

    Tries a second lift on each side when one exists; the result must not
    depend on the choice.
    """
    g = data.g
    emap = np.asarray(data.eta.map)
    la = np.flatnonzero(emap == a)
    lb = np.flatnonzero(emap == b)
    out = _commutator(g, int(la[0]), int(lb[0]))
    alt_a = int(la[1]) if len(la) > 1 else int(la[0])
    alt_b = int(lb[1]) if len(lb) > 1 else int(lb[0])
    if (
        _commutator(g, alt_a, int(lb[0])) != out
        or _commutator(g, int(la[0]), alt_b) != out
    ):
        raise RuntimeError("pairing value depends on the lift; data is not central")
    if not data.gamma0.contains(out):
        raise RuntimeError("pairing value escaped the central subgroup")
    return out


def q_table(data: CentralData) -> np.ndarray:
    """The full pairing as a (|B|, |B|) array of G-element indices."""
    g = data.g
    lifts = _first_lifts(data)
    ab = g.mul[np.ix_(lifts, lifts)].astype(np.int64)
    ai_bi = g.mul[np.ix_(g.inv[lifts], g.inv[lifts])].astype(np.int64)
    return g.mul[ab, ai_bi].astype(np.int64)


def verify_lift_independence(data: CentralData) -> bool:
    """Exhaustive: every pair of lifts gives the same commutator."""
    g = data.g
    emap = np.asarray(data.eta.map)
    reference = q_table(data)
    for a in range(data.gammaB.order):
        la = np.flatnonzero(emap == a)
        for b in range(data.gammaB.order):
            lb = np.flatnonzero(emap == b)
            ab = g.mul[np.ix_(la, lb)].astype(np.int64)
            ai_bi = g.mul[np.ix_(g.inv[la], g.inv[lb])].astype(np.int64)
            vals = g.mul[ab, ai_bi]
            if not np.all(vals == reference[a, b]):
                return False
    return True


@dataclass
class QProperty:
    name: str
    law: str
    passed: bool
    counterexample: Optional[tuple] = None

    def as_dict(self) -> dict:
        out = {"property": self.name, "pass": self.passed}
        out["counterexample"] = (
            list(self.counterexample) if self.counterexample else []
        )
        return out


def _prime_power_base(k: int) -> int:
    """p when k = p^j for a prime p and j >= 1, else 0."""
    if k < 2:
        return 0
    p = 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            return p if k == 1 else 0
        p += 1
    return k  # k itself prime


def verify_q_properties(data: CentralData) -> list[QProperty]:
    """Exhaustive check of the four pairing laws over all element tuples."""
    g, gb = data.g, data.gammaB
    nb = gb.order
    Q = q_table(data)
    mulB = gb.mul.astype(np.int64)
    mulg = g.mul
    ordB = all_element_orders(gb)
    ordQ = all_element_orders(g)[Q]
    e = g.identity
    results: list[QProperty] = []

    lhs_left = Q[mulB]                       # [a,b,c] -> Q(ab, c)
    rhs_left = mulg[Q[:, None, :], Q[None, :, :]]
    lhs_right = Q[:, mulB]                   # [a,b,c] -> Q(a, bc)
    rhs_right = mulg[Q[:, :, None], Q[:, None, :]]
    ok_bi = np.array_equal(lhs_left, rhs_left) and np.array_equal(
        lhs_right, rhs_right
    )
    diag_ok = (
        np.all(np.diagonal(Q) == e)
        and np.all(Q[0, :] == e)
        and np.all(Q[:, 0] == e)
    )
    ce = None
    if not ok_bi:
        bad = np.argwhere(lhs_left != rhs_left)
        ce = tuple(int(v) for v in bad[0]) if len(bad) else None
        if ce is None:
            bad = np.argwhere(lhs_right != rhs_right)
            ce = tuple(int(v) for v in bad[0])
    results.append(
        QProperty(
            "biadditive",
            "Q(ab,c)=Q(a,c)Q(b,c), Q(a,bc)=Q(a,b)Q(a,c), Q(a,a)=Q(1,a)=Q(a,1)=1",
            bool(ok_bi and diag_ok),
            ce,
        )
    )

    gcd_ok = np.gcd.outer(ordB, ordB) % ordQ == 0
    ce = None if gcd_ok.all() else tuple(int(v) for v in np.argwhere(~gcd_ok)[0])
    results.append(
        QProperty(
            "order-divides-gcd",
            "the order of Q(a,b) divides gcd(ord(a), ord(b))",
            bool(gcd_ok.all()),
            ce,
        )
    )

    base = np.array([_prime_power_base(int(o)) for o in ordB])
    pa, pb = base[:, None], base[None, :]
    cross = (pa > 0) & (pb > 0) & (pa != pb)
    cross_ok = np.all(Q[cross] == e) if cross.any() else True
    ce = None
    if not cross_ok:
        bad = np.argwhere(cross & (Q != e))
        ce = tuple(int(v) for v in bad[0])
    results.append(
        QProperty(
            "cross-prime-vanishing",
            "Q(a,b)=1 when a and b are elements of coprime prime-power order",
            bool(cross_ok),
            ce,
        )
    )

    same = (pa > 0) & (pa == pb)
    bound = np.maximum(ordB[:, None], ordB[None, :])
    p_ok = np.all(ordQ[same] <= bound[same]) if same.any() else True
    ce = None
    if not p_ok:
        bad = np.argwhere(same & (ordQ > bound))
        ce = tuple(int(v) for v in bad[0])
    results.append(
        QProperty(
            "p-order-bound",
            "for p-elements a, b the order of Q(a,b) is at most max(ord(a), ord(b))",
            bool(p_ok),
            ce,
        )
    )
    return results


def _require_dc_hypotheses(data: CentralData) -> SubgroupMask:
    if len(abelian_invariant_factors(data.gammaB)) > 2:
        raise HypothesisViolation("quotient is not generated by two elements")
    comm = commutator_subgroup(data.g)
    if not np.all(center(data.g).bits[comm.indices()]):
        raise HypothesisViolation("commutator subgroup is not central")
    sub, _ = subgroup_table(data.g, comm)
    if not is_cyclic(sub):
        raise HypothesisViolation("commutator subgroup is not cyclic")
    return comm


def commutator_order_dc(data: CentralData) -> int:
    """|[G,G]| under the pairing hypotheses (2-generated quotient, cyclic center)."""
    return _require_dc_hypotheses(data).size


@dataclass
class DcBoundReport:
    d_c: int
    gamma_b_order: int
    bound_holds: bool
    generator_pair: Optional[tuple[int, int]]
    generator_attains: bool


def check_dc_bound(data: CentralData) -> DcBoundReport:
    """Verify d_c^2 <= |B| and that a single pairing value generates [G,G]."""
    comm = _require_dc_hypotheses(data)
    d_c = comm.size
    nb = data.gammaB.order
    Q = q_table(data)
    ordQ = all_element_orders(data.g)[Q]
    top = int(ordQ.max()) if Q.size else 1
    pair = None
    if Q.size:
        a, b = np.argwhere(ordQ == top)[0]
        pair = (int(a), int(b))
    return DcBoundReport(
        d_c=d_c,
        gamma_b_order=nb,
        bound_holds=d_c * d_c <= nb,
        generator_pair=pair,
        generator_attains=top == d_c,
    )


@dataclass
class PullbackResult:
    gamma_ab: SubgroupMask
    index: int
    cyclic_generator: int  # element of the quotient spanning the chosen factor


def abelian_pullback(data: CentralData) -> PullbackResult:
    """Preimage of a maximal cyclic subgroup of the quotient; always abelian.

    The quotient splits as Z_{n1} x Z_{n2} with n2 | n1; pulling back the
    larger factor gives an abelian subgroup of index n2 = min(n1, n2),
    which is sharper than the square-root bound it certifies.
    """
    gb = data.gammaB
    factors = abelian_invariant_factors(gb)
    if len(factors) > 2:
        raise HypothesisViolation("quotient is not generated by two elements")
    expected_index = factors[1] if len(factors) == 2 else 1
    if gb.order == 1:
        x1 = gb.identity
        cyc = closure(gb, [x1])
    else:
        orders = all_element_orders(gb)
        x1 = int(np.flatnonzero(orders == orders.max())[0])
        cyc = closure(gb, [x1])
    index = gb.order // cyc.size
    if index != expected_index:
        raise RuntimeError("cyclic factor extraction disagrees with invariants")
    if index * index > gb.order and gb.order > 1:
        raise RuntimeError("cyclic subgroup misses the square-root bound")
    bits = cyc.bits[np.asarray(data.eta.map)]
    mask = SubgroupMask(data.g, bits)
    if not mask.is_abelian():
        raise RuntimeError("pullback of a cyclic subgroup must be abelian")
    return PullbackResult(mask, index, x1)
