"""Generic finite-group engine on dense multiplication tables.

Elements of a group of order ``n`` are the integers ``0..n-1``; index 0 is
always the identity in every construction of this package.  Subgroups are
boolean masks over the index range, and the heavy loops are vectorized with
numpy so that groups up to order ~20000 stay practical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import CapExceeded, NotNormal, PrimeDoesNotDivide, SearchTimeout

EXHAUSTIVE_ASSOC_LIMIT = 512
SAMPLED_ASSOC_TRIPLES = 100_000
DEFAULT_ORDER_CAP = 20_000
DEFAULT_AUT_CAP = 120

_BLOCK_ELEMS = 1 << 22  # elements per block in O(n^2) scans


def _index_dtype(order: int):
    return np.int16 if order <= np.iinfo(np.int16).max else np.int32


def _blocks(n: int):
    step = max(1, _BLOCK_ELEMS // max(n, 1))
    for lo in range(0, n, step):
        yield lo, min(n, lo + step)


class GroupTable:
    """A finite group as an indexed element set with a full Cayley table."""

    def __init__(
        self,
        mul: np.ndarray,
        labels: Optional[Sequence[str]] = None,
        name: str = "",
    ):
        mul = np.asarray(mul)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise ValueError("multiplication table must be square")
        order = int(mul.shape[0])
        if order == 0:
            raise ValueError("empty table")
        if mul.min() < 0 or mul.max() >= order:
            raise ValueError("table entry out of range")
        self.order = order
        self.mul = mul.astype(_index_dtype(order), copy=False)
        self.name = name
        if labels is not None:
            labels = [str(x) for x in labels]
            if len(labels) != order:
                raise ValueError("labels length does not match order")
        self.labels = labels
        self.identity = self._find_identity()
        self.inv = self._build_inverse_table()
        self._check_associativity()

    def _find_identity(self) -> int:
        rng = np.arange(self.order)
        # constructions in this package put the identity at index 0
        if np.array_equal(self.mul[0], rng) and np.array_equal(self.mul[:, 0], rng):
            return 0
        for e in range(1, self.order):
            if np.array_equal(self.mul[e], rng) and np.array_equal(self.mul[:, e], rng):
                return int(e)
        raise ValueError("table has no identity element")

    def _build_inverse_table(self) -> np.ndarray:
        n = self.order
        inv = np.empty(n, dtype=np.int64)
        for lo, hi in _blocks(n):
            inv[lo:hi] = np.argmax(self.mul[lo:hi] == self.identity, axis=1)
        rng = np.arange(n)
        e = np.full(n, self.identity)
        if not np.array_equal(self.mul[rng, inv], e) or not np.array_equal(
            self.mul[inv, rng], e
        ):
            raise ValueError("inverse law fails; table is not a group")
        return inv

    def _check_associativity(self) -> None:
        n = self.order
        mul = self.mul
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            for a in range(n):
                if not np.array_equal(mul[mul[a]], mul[a][mul]):
                    raise ValueError(f"table not associative at row {a}")
        else:
            rng = np.random.default_rng(0)
            a = rng.integers(0, n, SAMPLED_ASSOC_TRIPLES)
            b = rng.integers(0, n, SAMPLED_ASSOC_TRIPLES)
            c = rng.integers(0, n, SAMPLED_ASSOC_TRIPLES)
            if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
                raise ValueError("table not associative on sampled triples")

    def mul_idx(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inv_idx(self, a: int) -> int:
        return int(self.inv[a])

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def is_abelian(self) -> bool:
        cached = getattr(self, "_is_abelian", None)
        if cached is None:
            cached = bool(_center_bits(self.mul).all())
            self._is_abelian = cached
        return cached

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.name or 'group'}, order={self.order})"


class SubgroupMask:
    """A subset of element indices closed under the group law."""

    def __init__(self, owner: GroupTable, bits: np.ndarray, _validated: bool = False):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (owner.order,):
            raise ValueError("mask length does not match group order")
        self.owner = owner
        self.bits = bits
        self.size = int(np.count_nonzero(bits))
        if not _validated:
            self._validate()

    def _validate(self) -> None:
        g = self.owner
        if not self.bits[g.identity]:
            raise ValueError("subgroup mask must contain the identity")
        if self.size == g.order:
            return
        idx = self.indices()
        if not self.bits[g.inv[idx]].all():
            raise ValueError("mask not closed under inversion")
        for lo in range(0, len(idx), 2048):
            prods = g.mul[np.ix_(idx[lo : lo + 2048], idx)]
            if not self.bits[prods].all():
                raise ValueError("mask not closed under multiplication")

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def contains(self, a: int) -> bool:
        return bool(self.bits[a])

    def index_in_parent(self) -> int:
        return self.owner.order // self.size

    def is_abelian(self) -> bool:
        idx = self.indices()
        sub = self.owner.mul[np.ix_(idx, idx)]
        return bool(np.array_equal(sub, sub.T))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupMask)
            and other.owner is self.owner
            and np.array_equal(other.bits, self.bits)
        )

    def __hash__(self) -> int:
        return hash((id(self.owner), self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"SubgroupMask(size={self.size} of {self.owner.order})"


@dataclass(frozen=True)
class AutMap:
    """A group automorphism as a permutation of element indices."""

    perm: np.ndarray

    def verify(self, g: GroupTable) -> bool:
        p = self.perm
        if p[g.identity] != g.identity:
            return False
        return bool(np.array_equal(p[g.mul], g.mul[np.ix_(p, p)]))

    def apply_mask(self, mask: SubgroupMask) -> SubgroupMask:
        bits = np.zeros(mask.owner.order, dtype=bool)
        bits[self.perm[mask.indices()]] = True
        return SubgroupMask(mask.owner, bits, _validated=True)


@dataclass
class Homomorphism:
    """A group homomorphism given by an index-to-index map."""

    source: GroupTable
    target: GroupTable
    map: np.ndarray

    def verify(self) -> bool:
        m = np.asarray(self.map, dtype=np.int64)
        s, t = self.source, self.target
        for lo, hi in _blocks(s.order):
            if not np.array_equal(m[s.mul[lo:hi]], t.mul[np.ix_(m[lo:hi], m)]):
                return False
        return True

    def image_mask(self) -> SubgroupMask:
        bits = np.zeros(self.target.order, dtype=bool)
        bits[self.map] = True
        return SubgroupMask(self.target, bits)

    def kernel_mask(self) -> SubgroupMask:
        return SubgroupMask(self.source, np.asarray(self.map) == self.target.identity)

    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.source.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order


# ---------------------------------------------------------------------------
# construction


def build_from_generators(
    identity,
    gens: Iterable,
    product: Callable,
    cap: int = DEFAULT_ORDER_CAP,
    labeler: Optional[Callable] = None,
    name: str = "",
) -> tuple[GroupTable, dict]:
    """Close a generating set under an associative product and tabulate it.

    ``identity`` and the generators must be hashable values of a common
    domain; ``product`` is the domain's associative operation.  Returns the
    table (identity at index 0) together with the element-to-index map.
    Raises CapExceeded when the closure grows past ``cap``.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for a in frontier:
            for s in gens:
                b = product(a, s)
                if b not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(
                            f"closure exceeded cap {cap}; generator set may be wrong"
                        )
                    index[b] = len(elements)
                    elements.append(b)
                    next_frontier.append(b)
        frontier = next_frontier
    n = len(elements)
    mul = np.zeros((n, n), dtype=_index_dtype(n))
    for i, a in enumerate(elements):
        row = mul[i]
        for j, b in enumerate(elements):
            row[j] = index[product(a, b)]
    labels = [labeler(x) for x in elements] if labeler is not None else None
    return GroupTable(mul, labels=labels, name=name), index


def table_to_json(g: GroupTable) -> dict:
    """Interchange form: row-major table, element 0 is the identity."""
    doc = {"order": g.order, "mul": g.mul.astype(int).tolist()}
    if g.labels is not None:
        doc["labels"] = list(g.labels)
    return doc


def table_from_json(doc: dict) -> GroupTable:
    mul = np.asarray(doc["mul"], dtype=np.int64)
    g = GroupTable(mul, labels=doc.get("labels"))
    if g.identity != 0:
        raise ValueError("interchange format requires the identity at index 0")
    return g


# ---------------------------------------------------------------------------
# subgroup machinery


def closure(g: GroupTable, seed: Iterable[int]) -> SubgroupMask:
    """Smallest subgroup containing the seed indices."""
    bits = np.zeros(g.order, dtype=bool)
    bits[g.identity] = True
    work = []
    for s in seed:
        s = int(s)
        if not 0 <= s < g.order:
            raise ValueError(f"seed index {s} out of range")
        if not bits[s]:
            bits[s] = True
            work.append(s)
    members = list(np.flatnonzero(bits))
    frontier = list(work)
    while frontier:
        new = []
        for x in frontier:
            prods = np.concatenate([g.mul[x, members], g.mul[members, x]])
            for y in np.unique(prods):
                if not bits[y]:
                    bits[y] = True
                    new.append(int(y))
        members.extend(new)
        frontier = new
    return SubgroupMask(g, bits, _validated=True)


def _center_bits(mul: np.ndarray) -> np.ndarray:
    n = mul.shape[0]
    out = np.empty(n, dtype=bool)
    mt = mul.T
    for lo, hi in _blocks(n):
        out[lo:hi] = (mul[lo:hi] == mt[lo:hi]).all(axis=1)
    return out


def center(g: GroupTable) -> SubgroupMask:
    """Elements commuting with the whole group; always normal."""
    return SubgroupMask(g, _center_bits(g.mul), _validated=True)


def centralizer(g: GroupTable, s) -> SubgroupMask:
    """Elements commuting with every element of ``s`` (mask or index set)."""
    if isinstance(s, SubgroupMask):
        idx = s.indices()
    else:
        idx = sorted(int(x) for x in s)
    bits = np.ones(g.order, dtype=bool)
    for x in idx:
        bits &= g.mul[x, :] == g.mul[:, x]
    return SubgroupMask(g, bits, _validated=True)


def commutator_subgroup(g: GroupTable) -> SubgroupMask:
    """Subgroup generated by all commutators a b a^-1 b^-1."""
    n = g.order
    mul, inv = g.mul, g.inv
    seen = np.zeros(n, dtype=bool)
    for a in range(n):
        ab = mul[a, :]
        ab_ainv = mul[ab, inv[a]]
        seen[mul[ab_ainv, inv]] = True
    return closure(g, np.flatnonzero(seen))


def element_order(g: GroupTable, x: int) -> int:
    k, cur = 1, int(x)
    while cur != g.identity:
        cur = int(g.mul[cur, x])
        k += 1
    return k


def all_element_orders(g: GroupTable) -> np.ndarray:
    cached = getattr(g, "_orders_cache", None)
    if cached is not None:
        return cached
    n = g.order
    elems = np.arange(n)
    cur = elems.copy()
    orders = np.ones(n, dtype=np.int64)
    alive = cur != g.identity
    while alive.any():
        idx = np.flatnonzero(alive)
        cur[idx] = g.mul[cur[idx], elems[idx]]
        orders[idx] += 1
        alive[idx] = cur[idx] != g.identity
    g._orders_cache = orders
    return orders


def exponent(g: GroupTable) -> int:
    return int(np.lcm.reduce(all_element_orders(g)))


def is_cyclic(g: GroupTable) -> bool:
    return bool(all_element_orders(g).max() == g.order)


def is_normal(g: GroupTable, s: SubgroupMask) -> bool:
    rng = np.arange(g.order)
    for x in s.indices():
        conj = g.mul[g.mul[rng, x], g.inv[rng]]
        if not s.bits[conj].all():
            return False
    return True


def quotient_by_normal(g: GroupTable, s: SubgroupMask) -> tuple[GroupTable, Homomorphism]:
    """Quotient table plus the projection homomorphism; raises NotNormal."""
    if not is_normal(g, s):
        raise NotNormal("subgroup is not normal, cannot form the quotient")
    idx = s.indices()
    n = g.order
    coset_min = np.empty(n, dtype=np.int64)
    for x in range(n):
        coset_min[x] = g.mul[x, idx].min()
    reps = np.unique(coset_min)
    e_rep = coset_min[g.identity]
    reps = np.concatenate([[e_rep], reps[reps != e_rep]])
    rep_to_q = {int(r): i for i, r in enumerate(reps)}
    proj = np.array([rep_to_q[int(c)] for c in coset_min], dtype=np.int64)
    q = len(reps)
    qmul = np.zeros((q, q), dtype=_index_dtype(q))
    for i, r in enumerate(reps):
        qmul[i] = proj[g.mul[r, reps]]
    labels = None
    if g.labels is not None:
        labels = [f"[{g.labels[int(r)]}]" for r in reps]
    qt = GroupTable(qmul, labels=labels, name=f"{g.name}/N" if g.name else "")
    return qt, Homomorphism(g, qt, proj)


def subgroup_table(g: GroupTable, s: SubgroupMask) -> tuple[GroupTable, np.ndarray]:
    """Induced table on a subgroup mask, plus the map back to parent indices."""
    idx = s.indices()
    if idx[0] != g.identity:
        idx = np.concatenate([[g.identity], idx[idx != g.identity]])
    k = len(idx)
    lookup = np.full(g.order, -1, dtype=np.int64)
    lookup[idx] = np.arange(k)
    sub = lookup[g.mul[np.ix_(idx, idx)]].astype(_index_dtype(k))
    labels = [g.label(int(v)) for v in idx] if g.labels is not None else None
    return GroupTable(sub, labels=labels, name=f"{g.name}|sub" if g.name else ""), idx


# ---------------------------------------------------------------------------
# minimal abelian index


@dataclass
class AbelianIndexResult:
    index: int
    witness: SubgroupMask
    nodes_explored: int = 0
    runtime_s: float = 0.0


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return tuple(sorted(out))


def _largest_subgroup_bound(c_size: int, h_size: int, avail: int) -> int:
    """Largest divisor of c_size that is a multiple of h_size and <= avail."""
    best = 0
    for d in _divisors(c_size):
        if d > avail:
            break
        if d % h_size == 0:
            best = d
    return best


class _AbelianSearch:
    """Branch and bound for the largest abelian subgroup.

    Candidates grow inside iterated centralizers.  Elements central in the
    current centralizer are forced in (every inclusion-maximal abelian
    subgroup through the current one contains them), which collapses the
    branching over central chains; pruning is Lagrange on the centralizer
    order against the incumbent.  Branching order: ascending element order,
    then index, so the explored tree is deterministic.
    """

    def __init__(self, g: GroupTable, deadline: Optional[float]):
        self.g = g
        self.n = g.order
        self.mul = g.mul
        self.deadline = deadline
        self.orders = all_element_orders(g)
        self.cent_cache: dict[int, np.ndarray] = {}
        self.global_center: Optional[np.ndarray] = None
        self.best_size = 1
        self.best_mask: Optional[np.ndarray] = None
        self.nodes = 0

    def centralizer_bits(self, x: int) -> np.ndarray:
        hit = self.cent_cache.get(x)
        if hit is None:
            hit = self.mul[x, :] == self.mul[:, x]
            if len(self.cent_cache) < 4096:
                self.cent_cache[x] = hit
        return hit

    def center_bits(self) -> np.ndarray:
        if self.global_center is None:
            self.global_center = _center_bits(self.mul)
        return self.global_center

    def record(self, bits: np.ndarray, size: int) -> None:
        if size > self.best_size:
            self.best_size = size
            self.best_mask = bits.copy()

    def extend_abelian(self, h_bits: np.ndarray, x: int) -> tuple[np.ndarray, int]:
        """Product set H * <x> for x commuting with the abelian subgroup H."""
        out = h_bits.copy()
        h_idx = np.flatnonzero(h_bits)
        p = int(x)
        while not out[p]:
            out[self.mul[h_idx, p]] = True
            p = int(self.mul[p, x])
        return out, int(np.count_nonzero(out))

    def local_central_bits(self, c_idx: np.ndarray) -> np.ndarray:
        """Mask over G of the elements of C that commute with all of C."""
        bits = np.zeros(self.n, dtype=bool)
        k = len(c_idx)
        if k * k <= 16_000_000:
            sub = self.mul[np.ix_(c_idx, c_idx)]
            bits[c_idx[(sub == sub.T).all(axis=1)]] = True
        else:
            for z in c_idx:
                if np.array_equal(self.mul[z, c_idx], self.mul[c_idx, z]):
                    bits[z] = True
        return bits

    def check_time(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout(
                "abelian subgroup search exceeded its time budget",
                best_order_found=self.best_size,
            )

    def cyclic_meet(self, h_bits: np.ndarray, x: int) -> int:
        """|H meet <x>| by walking the powers of x."""
        meet = 0
        p = int(x)
        for _ in range(int(self.orders[x])):
            if h_bits[p]:
                meet += 1
            p = int(self.mul[p, x])
        return max(meet, 1)

    def greedy_seed(self) -> None:
        h_bits = self.center_bits().copy()
        h_bits[self.g.identity] = True
        h_size = int(np.count_nonzero(h_bits))
        c_bits = np.ones(self.n, dtype=bool)
        for z in np.flatnonzero(h_bits):
            c_bits &= self.centralizer_bits(int(z))
        while True:
            self.check_time()
            self.record(h_bits, h_size)
            cand = np.flatnonzero(c_bits & ~h_bits)
            if len(cand) == 0:
                return
            best_gain, best_x = h_size, -1
            for x in cand:
                grown = h_size * int(self.orders[x]) // self.cyclic_meet(h_bits, int(x))
                if grown > best_gain:
                    best_gain, best_x = grown, int(x)
            if best_x < 0:
                return
            h_bits, h_size = self.extend_abelian(h_bits, best_x)
            c_bits &= self.centralizer_bits(best_x)

    def run(self) -> None:
        self.greedy_seed()
        h_bits = np.zeros(self.n, dtype=bool)
        h_bits[self.g.identity] = True
        self.descend(h_bits, 1, np.ones(self.n, dtype=bool), np.zeros(self.n, dtype=bool))

    def descend(
        self,
        h_bits: np.ndarray,
        h_size: int,
        c_bits: np.ndarray,
        excluded: np.ndarray,
    ) -> None:
        self.check_time()
        self.nodes += 1
        while True:
            c_size = int(np.count_nonzero(c_bits))
            if c_size <= self.best_size:
                return
            if c_size == self.n:
                forced = self.center_bits() & ~h_bits
            else:
                forced = self.local_central_bits(np.flatnonzero(c_bits)) & ~h_bits
            if not forced.any():
                break
            if (forced & excluded).any():
                # every maximal abelian subgroup here needs an excluded element
                return
            for z in np.flatnonzero(forced):
                if not h_bits[z]:
                    h_bits, h_size = self.extend_abelian(h_bits, int(z))
                    c_bits = c_bits & self.centralizer_bits(int(z))
            if (h_bits & excluded).any():
                return
        self.record(h_bits, h_size)
        cand = np.flatnonzero(c_bits & ~h_bits & ~excluded)
        if len(cand) == 0:
            return
        cand = cand[np.lexsort((cand, self.orders[cand]))]
        excluded = excluded.copy()
        for x in cand:
            self.check_time()
            avail = c_size - int(np.count_nonzero(c_bits & excluded))
            if _largest_subgroup_bound(c_size, h_size, avail) <= self.best_size:
                return
            x = int(x)
            c2 = c_bits & self.centralizer_bits(x)
            if int(np.count_nonzero(c2)) > self.best_size:
                h2, h2_size = self.extend_abelian(h_bits, x)
                if not (h2 & excluded).any():
                    self.descend(h2, h2_size, c2, excluded)
            excluded[x] = True


def min_abelian_index(g: GroupTable, budget_s: Optional[float] = None) -> AbelianIndexResult:
    """Exact minimal index of an abelian subgroup, with a maximal witness.

    Deterministic branch and bound over commuting extensions.  When
    ``budget_s`` is given and exceeded, SearchTimeout is raised instead of
    returning a partial answer.
    """
    cached = getattr(g, "_min_abelian_cache", None)
    if cached is not None:
        return cached
    t0 = time.monotonic()
    if g.is_abelian():
        bits = np.ones(g.order, dtype=bool)
        result = AbelianIndexResult(1, SubgroupMask(g, bits, _validated=True))
        g._min_abelian_cache = result
        return result
    search = _AbelianSearch(g, None if budget_s is None else t0 + float(budget_s))
    search.run()
    witness = SubgroupMask(g, search.best_mask)
    if not witness.is_abelian() or g.order % witness.size != 0:
        raise RuntimeError("abelian search produced an invalid witness")
    result = AbelianIndexResult(
        g.order // witness.size,
        witness,
        nodes_explored=search.nodes,
        runtime_s=time.monotonic() - t0,
    )
    g._min_abelian_cache = result
    return result


# ---------------------------------------------------------------------------
# automorphisms


def _element_fingerprints(g: GroupTable) -> np.ndarray:
    """Per-element invariant preserved by every automorphism."""
    orders = all_element_orders(g)
    cent_sizes = np.empty(g.order, dtype=np.int64)
    for x in range(g.order):
        cent_sizes[x] = np.count_nonzero(g.mul[x, :] == g.mul[:, x])
    return orders * (g.order + 1) + cent_sizes


def minimal_generating_set(g: GroupTable) -> list[int]:
    n = g.order
    orders = all_element_orders(g)
    if orders.max() == n:
        return [int(np.argmax(orders == n))]
    pool = sorted((i for i in range(n) if i != g.identity), key=lambda i: (-orders[i], i))
    for size in (2, 3, 4):
        found = _gen_search(g, pool, [], size)
        if found is not None:
            return found
    gens: list[int] = []
    cur = closure(g, [g.identity])
    for x in pool:
        if not cur.contains(x):
            gens.append(x)
            cur = closure(g, gens)
            if cur.size == n:
                break
    return gens


def _gen_search(g: GroupTable, pool: list[int], chosen: list[int], size: int):
    if len(chosen) == size:
        return list(chosen) if closure(g, chosen).size == g.order else None
    partial = closure(g, chosen) if chosen else None
    start = pool.index(chosen[-1]) + 1 if chosen else 0
    for k in range(start, len(pool)):
        x = pool[k]
        if partial is not None and partial.contains(x):
            continue
        res = _gen_search(g, pool, chosen + [x], size)
        if res is not None:
            return res
    return None


def automorphisms(
    g: GroupTable,
    gen_hint: Optional[Sequence[int]] = None,
    cap: int = DEFAULT_AUT_CAP,
) -> list[AutMap]:
    """The full automorphism group, enumerated by generator images.

    Candidate images are filtered by an order/centralizer fingerprint; each
    candidate tuple is extended to a total map along the Cayley graph and
    kept only if it verifies as a bijective homomorphism.
    """
    if g.order > cap:
        raise CapExceeded(f"automorphism enumeration capped at order {cap}")
    if gen_hint is not None:
        gens = [int(x) for x in gen_hint]
        if closure(g, gens).size != g.order:
            raise ValueError("gen_hint does not generate the group")
    else:
        gens = minimal_generating_set(g)
    fp = _element_fingerprints(g)
    candidates = [np.flatnonzero(fp == fp[x]) for x in gens]
    # discovery order: every element as a word in the generators
    parent = np.full(g.order, -1, dtype=np.int64)
    via = np.full(g.order, -1, dtype=np.int64)
    discovery = [g.identity]
    seen = np.zeros(g.order, dtype=bool)
    seen[g.identity] = True
    qi = 0
    while qi < len(discovery):
        a = discovery[qi]
        qi += 1
        for j, s in enumerate(gens):
            b = int(g.mul[a, s])
            if not seen[b]:
                seen[b] = True
                parent[b] = a
                via[b] = j
                discovery.append(b)
    out: list[AutMap] = []
    img = np.full(g.order, -1, dtype=np.int64)
    img_of_gen = [0] * len(gens)

    def assign(depth: int) -> None:
        if depth == len(gens):
            img[g.identity] = g.identity
            for b in discovery[1:]:
                img[b] = g.mul[img[parent[b]], img_of_gen[via[b]]]
            if len(np.unique(img)) != g.order:
                return
            cand = AutMap(img.copy())
            if cand.verify(g):
                out.append(cand)
            return
        for y in candidates[depth]:
            img_of_gen[depth] = int(y)
            assign(depth + 1)

    assign(0)
    out.sort(key=lambda a: a.perm.tolist())
    return out


def sigma_orbit(
    g: GroupTable, h_prime: SubgroupMask, cap: int = DEFAULT_AUT_CAP
) -> list[SubgroupMask]:
    """Distinct images of a subgroup under the full automorphism group."""
    seen: dict[bytes, SubgroupMask] = {}
    for phi in automorphisms(g, cap=cap):
        m = phi.apply_mask(h_prime)
        seen.setdefault(m.bits.tobytes(), m)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# Sylow subgroups


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def sylow(g: GroupTable, p: int) -> SubgroupMask:
    """A subgroup whose order is the largest power of p dividing |G|."""
    n = g.order
    if p < 2 or n % p != 0:
        raise PrimeDoesNotDivide(f"{p} does not divide the group order {n}")
    target = 1
    m = n
    while m % p == 0:
        target *= p
        m //= p
    orders = all_element_orders(g)
    p_elts = [
        int(x)
        for x in np.lexsort((np.arange(n), orders))
        if orders[x] > 1 and _is_p_power(int(orders[x]), p)
    ]
    cur = closure(g, [g.identity])
    while cur.size < target:
        grown = None
        for x in p_elts:
            if cur.contains(x):
                continue
            trial = closure(g, list(cur.indices()) + [x])
            if _is_p_power(trial.size, p):
                grown = trial
                break
        if grown is None:
            raise RuntimeError("sylow growth stalled; table is corrupt")
        cur = grown
    return cur


def abelian_invariant_factors(g: GroupTable) -> list[int]:
    """Invariant factors n1 >= n2 >= ... of a finite abelian group.

    Brute force: a maximal-order element spans a direct summand, so peel it
    off by quotienting and repeat.
    """
    if not g.is_abelian():
        raise ValueError("invariant factors need an abelian group")
    factors: list[int] = []
    cur = g
    while cur.order > 1:
        orders = all_element_orders(cur)
        top = int(orders.max())
        x = int(np.flatnonzero(orders == top)[0])
        factors.append(top)
        cur, _ = quotient_by_normal(cur, closure(cur, [x]))
    return factors


# ---------------------------------------------------------------------------
# named small groups used across the package


def cyclic_table(n: int, name: str = "") -> GroupTable:
    rng = np.arange(n)
    return GroupTable((rng[:, None] + rng[None, :]) % n, name=name or f"C{n}")


def direct_product(a: GroupTable, b: GroupTable, name: str = "") -> GroupTable:
    na, nb = a.order, b.order
    ia, ib = np.divmod(np.arange(na * nb), nb)
    mul = a.mul[np.ix_(ia, ia)].astype(np.int64) * nb + b.mul[np.ix_(ib, ib)]
    return GroupTable(mul, name=name or f"{a.name}x{b.name}")
