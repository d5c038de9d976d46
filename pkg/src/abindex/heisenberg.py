"""Finite Heisenberg groups, their order-6 twist, and related constructions.

The upper-unitriangular element A(x, y, z) is stored with doubled third
coordinate ``z2 = 2z`` so that half-integral z stays exact: the twist h sends
integral elements to half-integral ones whenever y is odd, and the extended
group below is closed only in the half-integral ambient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    CapExceeded,
    DetNotOne,
    ModulusMismatch,
    NonIntegralInput,
    OddModulus,
)
from .group_core import (
    DEFAULT_ORDER_CAP,
    GroupTable,
    Homomorphism,
    SubgroupMask,
    build_from_generators,
    cyclic_table,
    is_normal,
)

CHI_MATRIX = ((0, -1), (1, 1))  # order-6 torus symmetry (x,y) -> (-y, x+y)


# ---------------------------------------------------------------------------
# element domains


@dataclass(frozen=True)
class HeisElem:
    """Triple A(x, y, z) mod n with z2 = 2z tracked mod 2n."""

    n: int
    x: int
    y: int
    z2: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be positive")
        if not (0 <= self.x < self.n and 0 <= self.y < self.n):
            raise ValueError("x, y must be reduced mod n")
        if not 0 <= self.z2 < 2 * self.n:
            raise ValueError("z2 must be reduced mod 2n")

    @property
    def z(self) -> Fraction:
        return Fraction(self.z2, 2)

    def is_integral(self) -> bool:
        return self.z2 % 2 == 0

    def __str__(self) -> str:
        return f"A({self.x},{self.y},{_format_half(self.z2)})"


def heis_identity(n: int) -> HeisElem:
    return HeisElem(n, 0, 0, 0)


def heis_elem(n: int, x: int, y: int, z) -> HeisElem:
    """Build an element from integral or half-integral z."""
    zf = Fraction(z)
    if zf.denominator not in (1, 2):
        raise ValueError("z must be integral or half-integral")
    return HeisElem(n, x % n, y % n, int(zf * 2) % (2 * n))


def heis_mul(a: HeisElem, b: HeisElem) -> HeisElem:
    """(x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y')."""
    if a.n != b.n:
        raise ModulusMismatch(f"moduli differ: {a.n} vs {b.n}")
    n = a.n
    return HeisElem(
        n,
        (a.x + b.x) % n,
        (a.y + b.y) % n,
        (a.z2 + b.z2 + 2 * a.x * b.y) % (2 * n),
    )


def heis_inv(a: HeisElem) -> HeisElem:
    n = a.n
    return HeisElem(n, (-a.x) % n, (-a.y) % n, (-a.z2 + 2 * a.x * a.y) % (2 * n))


def h_auto(e: HeisElem) -> HeisElem:
    """The order-6 twist (x,y,z) -> (-y, x+y, z - xy - y^2/2); needs 2 | n."""
    if e.n % 2 != 0:
        raise OddModulus("the twist is only defined for even moduli")
    n = e.n
    return HeisElem(
        n,
        (-e.y) % n,
        (e.x + e.y) % n,
        (e.z2 - 2 * e.x * e.y - e.y * e.y) % (2 * n),
    )


@dataclass(frozen=True)
class IntHeisElem:
    """Integer triple with exact rational z of denominator 1 or 2."""

    x: int
    y: int
    z: Fraction

    def __post_init__(self):
        z = Fraction(self.z)
        if z.denominator not in (1, 2):
            raise ValueError("z must have denominator 1 or 2")
        object.__setattr__(self, "z", z)

    def __str__(self) -> str:
        return f"A({self.x},{self.y},{self.z})"


def int_heis_mul(a: IntHeisElem, b: IntHeisElem) -> IntHeisElem:
    return IntHeisElem(a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y)


def h_auto_int(e: IntHeisElem) -> IntHeisElem:
    return IntHeisElem(-e.y, e.x + e.y, e.z - e.x * e.y - Fraction(e.y * e.y, 2))


def h_prime_auto(e: IntHeisElem) -> IntHeisElem:
    """Integral variant of the twist: z - xy - (y^2 - y)/2; preserves T(Z,Z)."""
    if e.z.denominator != 1:
        raise NonIntegralInput("the integral twist needs an integral element")
    out = IntHeisElem(-e.y, e.x + e.y, e.z - e.x * e.y - Fraction(e.y * e.y - e.y, 2))
    assert out.z.denominator == 1
    return out


def _format_half(z2: int) -> str:
    return str(z2 // 2) if z2 % 2 == 0 else f"{z2}/2"


def parse_heis_literal(text: str, n: int) -> HeisElem:
    """Parse "A(x,y,z)" with z an integer or a half-integer "k/2"."""
    s = text.strip()
    if not (s.startswith("A(") and s.endswith(")")):
        raise ValueError(f"not an element literal: {text!r}")
    parts = s[2:-1].split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three coordinates: {text!r}")
    x, y = int(parts[0]), int(parts[1])
    zs = parts[2].strip()
    if "/" in zs:
        num, den = zs.split("/")
        if int(den) != 2:
            raise ValueError("half-integers must be written as k/2")
        z = Fraction(int(num), 2)
    else:
        z = Fraction(int(zs))
    return heis_elem(n, x, y, z)


# ---------------------------------------------------------------------------
# the group Gamma_n


def gamma_n(n: int, cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """Heisenberg group mod n: order n^3, integral z; any n >= 2."""
    return _gamma_n_cached(int(n), int(cap))


@lru_cache(maxsize=None)
def _gamma_n_cached(n: int, cap: int) -> GroupTable:
    if n < 2:
        raise ValueError("modulus must be at least 2")
    if n**3 > cap:
        raise CapExceeded(f"order {n**3} exceeds cap {cap}")
    m = n**3
    codes = np.arange(m)
    xy, z = np.divmod(codes, n)
    x, y = np.divmod(xy, n)
    mul = np.zeros((m, m), dtype=np.int16 if m <= 32767 else np.int32)
    for i in range(m):
        xi, yi, zi = int(x[i]), int(y[i]), int(z[i])
        rx = (xi + x) % n
        ry = (yi + y) % n
        rz = (zi + z + xi * y) % n
        mul[i] = (rx * n + ry) * n + rz
    labels = [f"A({int(a)},{int(b)},{int(c)})" for a, b, c in zip(x, y, z)]
    return GroupTable(mul, labels=labels, name=f"Gamma_{n}")


def gamma_elem_index(n: int, x: int, y: int, z: int) -> int:
    return ((x % n) * n + (y % n)) * n + (z % n)


def gamma_center_mask(g: GroupTable, n: int) -> SubgroupMask:
    bits = np.zeros(g.order, dtype=bool)
    bits[[gamma_elem_index(n, 0, 0, z) for z in range(n)]] = True
    return SubgroupMask(g, bits)


# ---------------------------------------------------------------------------
# the extended group generated by Gamma_n and the twist


@dataclass(frozen=True)
class HatElem:
    """Pair (translation part, twist power) of the extended group."""

    g: HeisElem
    k: int

    def __post_init__(self):
        if not 0 <= self.k < 6:
            raise ValueError("twist power must be reduced mod 6")

    def __str__(self) -> str:
        return f"{self.g}h^{self.k}"


def hat_mul(a: HatElem, b: HatElem) -> HatElem:
    """(g, k)(g', k') = (g * h^k(g'), k + k')."""
    if a.g.n != b.g.n:
        raise ModulusMismatch(f"moduli differ: {a.g.n} vs {b.g.n}")
    img = b.g
    for _ in range(a.k):
        img = h_auto(img)
    return HatElem(heis_mul(a.g, img), (a.k + b.k) % 6)


@dataclass
class HatGroup:
    """Closure of the translation group and the twist, with its bookkeeping."""

    n: int
    table: GroupTable
    theta: Homomorphism          # projection onto the order-6 quotient
    gamma_image: SubgroupMask    # image of the integral translation group
    theta_kernel: SubgroupMask
    coords: np.ndarray           # (order, 4) rows (x, y, z2, k)
    code_lookup: np.ndarray      # packed coordinate code -> element index

    @property
    def order(self) -> int:
        return self.table.order

    def index_of(self, e: HatElem) -> int:
        if e.g.n != self.n:
            raise ModulusMismatch(f"element modulus {e.g.n}, group modulus {self.n}")
        code = ((e.g.x * self.n + e.g.y) * (2 * self.n) + e.g.z2) * 6 + e.k
        idx = int(self.code_lookup[code])
        if idx < 0:
            raise ValueError(f"{e} is not in the closure")
        return idx

    def element_at(self, idx: int) -> HatElem:
        x, y, z2, k = (int(v) for v in self.coords[idx])
        return HatElem(HeisElem(self.n, x, y, z2), k)

    @property
    def gamma_image_normal(self) -> bool:
        cached = getattr(self, "_gamma_normal", None)
        if cached is None:
            cached = is_normal(self.table, self.gamma_image)
            self._gamma_normal = cached
        return cached

    @property
    def gamma_image_index(self) -> int:
        return self.table.order // self.gamma_image.size

    @property
    def theta_kernel_order(self) -> int:
        return self.theta_kernel.size

    @property
    def theta_surjective(self) -> bool:
        return self.theta.is_surjective()


def _h_coords(n: int, x, y, z2):
    return (-y) % n, (x + y) % n, (z2 - 2 * x * y - y * y) % (2 * n)


def hat_gamma_n(n: int, cap: int = DEFAULT_ORDER_CAP) -> HatGroup:
    """Closure of {(gamma, 0)} and (identity, 1) in the twisted pair group.

    Pairs (g, k) with g half-integral mod n and k mod 6 compose as
    (g, k)(g', k') = (g * h^k(g'), k + k').  The closure is computed, not
    assumed: it decides for itself whether half-integral central elements
    appear (they do, for every even n, which makes the kernel of the
    order-6 projection twice the size of the translation image).
    """
    return _hat_gamma_cached(int(n), int(cap))


@lru_cache(maxsize=None)
def _hat_gamma_cached(n: int, cap: int) -> HatGroup:
    if n < 2 or n % 2 != 0:
        raise OddModulus("the extended group needs an even modulus >= 2")
    ambient = 12 * n**3
    if ambient > cap:
        raise CapExceeded(f"ambient order {ambient} exceeds cap {cap}")

    def hk(g: tuple, k: int) -> tuple:
        x, y, z2 = g
        for _ in range(k):
            x, y, z2 = _h_coords(n, x, y, z2)
        return x, y, z2

    def prod(a: tuple, b: tuple) -> tuple:
        x, y, z2, k = a
        x2, y2, z22, k2 = b
        hx, hy, hz2 = hk((x2, y2, z22), k)
        return (
            (x + hx) % n,
            (y + hy) % n,
            (z2 + hz2 + 2 * x * hy) % (2 * n),
            (k + k2) % 6,
        )

    ident = (0, 0, 0, 0)
    gens = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1)]
    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = prod(a, s)
                if b not in index:
                    index[b] = len(elements)
                    elements.append(b)
                    nxt.append(b)
        frontier = nxt
    m = len(elements)

    arr = np.array(elements, dtype=np.int64)
    X, Y, Z2, K = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
    code_of = ((X * n + Y) * (2 * n) + Z2) * 6 + K
    lookup = np.full(12 * n**3, -1, dtype=np.int64)
    lookup[code_of] = np.arange(m)

    # h^k applied to every element, vectorized once per power
    HX, HY, HZ2 = [X.copy()], [Y.copy()], [Z2.copy()]
    for _ in range(5):
        hx, hy, hz2 = _h_coords(n, HX[-1], HY[-1], HZ2[-1])
        HX.append(hx)
        HY.append(hy)
        HZ2.append(hz2)

    mul = np.zeros((m, m), dtype=np.int16 if m <= 32767 else np.int32)
    for i in range(m):
        xi, yi, z2i, ki = int(X[i]), int(Y[i]), int(Z2[i]), int(K[i])
        hx, hy, hz2 = HX[ki], HY[ki], HZ2[ki]
        rx = (xi + hx) % n
        ry = (yi + hy) % n
        rz2 = (z2i + hz2 + 2 * xi * hy) % (2 * n)
        rk = (ki + K) % 6
        row = lookup[((rx * n + ry) * (2 * n) + rz2) * 6 + rk]
        if row.min() < 0:
            raise RuntimeError("closure is not closed; construction bug")
        mul[i] = row

    labels = [
        f"A({int(a)},{int(b)},{_format_half(int(c))})h^{int(k)}"
        for a, b, c, k in elements
    ]
    table = GroupTable(mul, labels=labels, name=f"HatGamma_{n}")
    theta = Homomorphism(table, cyclic_table(6, name="C6"), K.copy())
    gamma_image = SubgroupMask(table, (K == 0) & (Z2 % 2 == 0))
    theta_kernel = SubgroupMask(table, K == 0)
    return HatGroup(n, table, theta, gamma_image, theta_kernel, arr, lookup)


# ---------------------------------------------------------------------------
# the base group B_n on the n x n torus


@dataclass
class BnData:
    n: int
    table: GroupTable
    translations: SubgroupMask
    zeta: Homomorphism           # projection onto the order-6 point part
    chi_idx: int
    ta_idx: int
    tb_idx: int


def _chi_pow(n: int, k: int) -> tuple:
    a, b, c, d = 1, 0, 0, 1
    for _ in range(k % 6):
        # left-multiply by [[0,-1],[1,1]]
        a, b, c, d = (-c) % n, (-d) % n, (a + c) % n, (b + d) % n
    return a, b, c, d


def b_n_components(n: int, cap: int = DEFAULT_ORDER_CAP) -> BnData:
    """Pair group (Z_n)^2 x Z_6 with (v,k)(v',k') = (v + chi^k v', k+k').

    The translation part acts on the torus by addition, the order-6 part by
    the matrix chi; k is kept as data mod 6, so the extension has order
    6 n^2 for every n (for n <= 2 the matrix action alone would collapse to
    a smaller bijection group).
    """
    return _b_n_cached(int(n), int(cap))


@lru_cache(maxsize=None)
def _b_n_cached(n: int, cap: int) -> BnData:
    if n < 1:
        raise ValueError("n must be positive")
    if 6 * n * n > cap:
        raise CapExceeded(f"order {6 * n * n} exceeds cap {cap}")

    def prod(p: tuple, q: tuple) -> tuple:
        u, v, k = p
        u2, v2, k2 = q
        a, b, c, d = _chi_pow(n, k)
        return ((u + a * u2 + b * v2) % n, (v + c * u2 + d * v2) % n, (k + k2) % 6)

    ident = (0, 0, 0)
    chi = (0, 0, 1)
    ta = (1 % n, 0, 0)
    tb = (0, 1 % n, 0)
    table, index = build_from_generators(
        ident,
        [chi, ta, tb],
        prod,
        cap=cap,
        labeler=lambda e: f"t({e[0]},{e[1]})chi^{e[2]}",
        name=f"B_{n}",
    )
    k_of = np.zeros(table.order, dtype=np.int64)
    for elem, i in index.items():
        k_of[i] = elem[2]
    translations = SubgroupMask(table, k_of == 0)
    zeta = Homomorphism(table, cyclic_table(6, name="C6"), k_of)
    return BnData(n, table, translations, zeta, index[chi], index[ta], index[tb])


def b_n_group(n: int, cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """The order-6 extension of the n x n translation torus; order 6 n^2."""
    return b_n_components(n, cap).table


def fixed_points_chi_power(n: int, k: int) -> set[tuple[int, int]]:
    """Fixed points of the k-th power of (u,v) -> (u+v, -u) on (Z_n)^2."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if n < 1:
        raise ValueError("n must be positive")
    out = set()
    for u in range(n):
        for v in range(n):
            a, b = u, v
            for _ in range(k):
                a, b = (a + b) % n, (-a) % n
            if (a, b) == (u, v):
                out.add((u, v))
    return out


# ---------------------------------------------------------------------------
# doubling and SL(2,Z) lifts


def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % d == 0:
            return False
        d += 1
    return True


def doubling_embed(p: int, cap: int = DEFAULT_ORDER_CAP) -> Homomorphism:
    """A(x,y,z) -> A(2x,2y,4z) from the mod-p group into the mod-2p group."""
    if p < 3 or not _is_prime(p):
        raise ValueError("doubling needs an odd prime")
    src = gamma_n(p, cap=cap)
    tgt = gamma_n(2 * p, cap=cap)
    codes = np.arange(src.order)
    xy, z = np.divmod(codes, p)
    x, y = np.divmod(xy, p)
    m = 2 * p
    img = ((2 * x % m) * m + (2 * y % m)) * m + (4 * z % m)
    return Homomorphism(src, tgt, img.astype(np.int64))


@dataclass(frozen=True)
class SL2Matrix:
    """Integer matrix [[a, b], [c, d]] with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DetNotOne(f"det is {self.a * self.d - self.b * self.c}, not 1")

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return self.a * x + self.b * y, self.c * x + self.d * y

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def entry_bound(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))


def q_form_coeffs(F: SL2Matrix) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (x^2, xy, y^2) of the quadratic correction attached to F."""
    return (
        Fraction(F.a * F.c, 2),
        Fraction(F.a * F.d + F.b * F.c - 1, 2),
        Fraction(F.b * F.d, 2),
    )


@dataclass(frozen=True)
class SL2Lift:
    """Automorphism of the rational-z Heisenberg group over a matrix F.

    Sends A(x,y,z) to A(F(x,y), z + q_F(x,y) + lin . (x,y)); it fixes the
    center, and is a group morphism exactly because det F = 1.
    """

    F: SL2Matrix
    lin: tuple[Fraction, Fraction]

    def __call__(self, e: IntHeisElem) -> IntHeisElem:
        qxx, qxy, qyy = q_form_coeffs(self.F)
        nx, ny = self.F.apply(e.x, e.y)
        nz = (
            e.z
            + qxx * e.x * e.x
            + qxy * e.x * e.y
            + qyy * e.y * e.y
            + self.lin[0] * e.x
            + self.lin[1] * e.y
        )
        return IntHeisElem(nx, ny, nz)


def sl2_lift(F: SL2Matrix, lin=(0, 0)) -> SL2Lift:
    lx, ly = Fraction(lin[0]), Fraction(lin[1])
    if lx.denominator not in (1, 2) or ly.denominator not in (1, 2):
        raise ValueError("linear corrections must have denominator 1 or 2")
    return SL2Lift(F, (lx, ly))


@dataclass(frozen=True)
class CocycleCheck:
    is_cocycle_mod_linear: bool
    linear_defect: tuple[Fraction, Fraction]
    quadratic_defect: tuple[Fraction, Fraction, Fraction]


def q_form_cocycle_check(F: SL2Matrix, G: SL2Matrix) -> CocycleCheck:
    """Expand q_FG - q_F(G(x,y)) - q_G symbolically and report its defect.

    The difference is a quadratic form in x, y; its three coefficients are
    returned together with the (identically vanishing) linear part, so a
    nonzero quadratic defect would show the lift family failing to compose.
    """
    txx, txy, tyy = q_form_coeffs(F @ G)
    fxx, fxy, fyy = q_form_coeffs(F)
    gxx, gxy, gyy = q_form_coeffs(G)
    # substitute (x,y) -> (a x + b y, c x + d y) into q_F
    a, b, c, d = G.a, G.b, G.c, G.d
    sxx = fxx * a * a + fxy * a * c + fyy * c * c
    sxy = 2 * fxx * a * b + fxy * (a * d + b * c) + 2 * fyy * c * d
    syy = fxx * b * b + fxy * b * d + fyy * d * d
    dxx, dxy, dyy = txx - sxx - gxx, txy - sxy - gxy, tyy - syy - gyy
    ok = dxx == 0 and dxy == 0 and dyy == 0
    return CocycleCheck(ok, (Fraction(0), Fraction(0)), (dxx, dxy, dyy))


def random_sl2(rng: np.random.Generator, entry_bound: int = 20) -> SL2Matrix:
    """Seeded random walk on the standard generators, entries kept bounded."""
    T = SL2Matrix(1, 1, 0, 1)
    Ti = SL2Matrix(1, -1, 0, 1)
    S = SL2Matrix(0, -1, 1, 0)
    cur = SL2Matrix(1, 0, 0, 1)
    for _ in range(int(rng.integers(1, 12))):
        nxt = cur @ [T, Ti, S][int(rng.integers(0, 3))]
        if nxt.entry_bound() <= entry_bound:
            cur = nxt
    return cur
