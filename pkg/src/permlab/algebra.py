"""Ambient structures that arrangements live in: the integers, lexically
ordered integer vectors (the working model of an ordered torsion-free
group), finite abelian groups given as products of cyclic groups, and
table-based finite fields F_q for q = p**k up to 2**20.

Element convention: rank-1 structures (Integers, PrimeField, rank-1
CyclicProduct, and encoded field elements of PrimePowerField) use bare
ints; everything else uses tuples of ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .numtheory import factorize, is_prime

__all__ = [
    "Integers",
    "IntegerVectors",
    "CyclicProduct",
    "PrimeField",
    "PrimePowerField",
    "GroupSpec",
    "Element",
    "FieldView",
    "GroundSet",
    "Arrangement",
    "LINEAR",
    "CIRCULAR",
    "field_make",
    "field_view",
    "group_add",
    "group_sub",
    "group_neg",
    "group_double",
    "group_mul",
    "group_cmp",
    "group_order",
    "invariant_factors",
    "sylow2_cyclic",
    "validate_element",
    "element_coords",
    "element_from_coords",
    "spec_to_dict",
    "spec_from_dict",
]

MAX_FIELD_SIZE = 1 << 20


@dataclass(frozen=True)
class Integers:
    pass


@dataclass(frozen=True)
class IntegerVectors:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")


@dataclass(frozen=True)
class CyclicProduct:
    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(m) for m in self.moduli))
        if not self.moduli or any(m < 2 for m in self.moduli):
            raise ValueError("each modulus must be >= 2")


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


@dataclass(frozen=True)
class PrimePowerField:
    """F_{p**k} with k >= 2, as polynomials over F_p modulo `poly`.

    poly holds ascending coefficients of the monic degree-k modulus.
    Elements are encoded as ints in base p: sum(c_i * p**i).
    """

    p: int
    k: int
    poly: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 2:
            raise ValueError("use PrimeField for k = 1")
        if self.p**self.k > MAX_FIELD_SIZE:
            raise ValueError(f"field size {self.p}**{self.k} exceeds {MAX_FIELD_SIZE}")
        object.__setattr__(self, "poly", tuple(int(c) % self.p for c in self.poly[:-1]) + (1,))
        if len(self.poly) != self.k + 1:
            raise ValueError("modulus polynomial must have degree k")

    @property
    def q(self) -> int:
        return self.p**self.k


GroupSpec = Integers | IntegerVectors | CyclicProduct | PrimeField | PrimePowerField
Element = int | tuple


def rank(spec: GroupSpec) -> int:
    if isinstance(spec, IntegerVectors):
        return spec.rank
    if isinstance(spec, CyclicProduct):
        return len(spec.moduli)
    return 1


def _uses_tuples(spec: GroupSpec) -> bool:
    return (isinstance(spec, IntegerVectors) and spec.rank >= 1) or (
        isinstance(spec, CyclicProduct) and len(spec.moduli) > 1
    )


def is_ordered(spec: GroupSpec) -> bool:
    """Whether the spec carries an addition-compatible total order."""
    return isinstance(spec, (Integers, IntegerVectors))


def is_finite(spec: GroupSpec) -> bool:
    return isinstance(spec, (CyclicProduct, PrimeField, PrimePowerField))


def group_order(spec: GroupSpec) -> int:
    if isinstance(spec, CyclicProduct):
        n = 1
        for m in spec.moduli:
            n *= m
        return n
    if isinstance(spec, PrimeField):
        return spec.p
    if isinstance(spec, PrimePowerField):
        return spec.q
    raise ValueError("infinite group")


def validate_element(spec: GroupSpec, x: Element) -> None:
    if isinstance(spec, Integers):
        if not isinstance(x, int):
            raise ValueError(f"expected int, got {x!r}")
    elif isinstance(spec, IntegerVectors):
        if not (isinstance(x, tuple) and len(x) == spec.rank and all(isinstance(c, int) for c in x)):
            raise ValueError(f"expected {spec.rank}-tuple of ints, got {x!r}")
    elif isinstance(spec, CyclicProduct):
        if len(spec.moduli) == 1:
            if not (isinstance(x, int) and 0 <= x < spec.moduli[0]):
                raise ValueError(f"expected reduced residue mod {spec.moduli[0]}, got {x!r}")
        elif not (
            isinstance(x, tuple)
            and len(x) == len(spec.moduli)
            and all(isinstance(c, int) and 0 <= c < m for c, m in zip(x, spec.moduli))
        ):
            raise ValueError(f"expected reduced tuple for moduli {spec.moduli}, got {x!r}")
    elif isinstance(spec, PrimeField):
        if not (isinstance(x, int) and 0 <= x < spec.p):
            raise ValueError(f"expected residue in [0, {spec.p}), got {x!r}")
    else:
        if not (isinstance(x, int) and 0 <= x < spec.q):
            raise ValueError(f"expected encoded field element in [0, {spec.q}), got {x!r}")


def group_add(spec: GroupSpec, x: Element, y: Element) -> Element:
    if isinstance(spec, Integers):
        return x + y
    if isinstance(spec, IntegerVectors):
        return tuple(a + b for a, b in zip(x, y))
    if isinstance(spec, CyclicProduct):
        if len(spec.moduli) == 1:
            return (x + y) % spec.moduli[0]
        return tuple((a + b) % m for a, b, m in zip(x, y, spec.moduli))
    if isinstance(spec, PrimeField):
        return (x + y) % spec.p
    return _ppf_add(spec, x, y)


def group_neg(spec: GroupSpec, x: Element) -> Element:
    if isinstance(spec, Integers):
        return -x
    if isinstance(spec, IntegerVectors):
        return tuple(-a for a in x)
    if isinstance(spec, CyclicProduct):
        if len(spec.moduli) == 1:
            return -x % spec.moduli[0]
        return tuple(-a % m for a, m in zip(x, spec.moduli))
    if isinstance(spec, PrimeField):
        return -x % spec.p
    p = spec.p
    out, mul = 0, 1
    for _ in range(spec.k):
        out += (-x % p) * mul
        x //= p
        mul *= p
    return out


def group_sub(spec: GroupSpec, x: Element, y: Element) -> Element:
    return group_add(spec, x, group_neg(spec, y))


def group_double(spec: GroupSpec, x: Element) -> Element:
    return group_add(spec, x, x)


def group_mul(spec: GroupSpec, x: Element, y: Element) -> Element:
    """Ring/field product; defined for integers and the two field variants."""
    if isinstance(spec, Integers):
        return x * y
    if isinstance(spec, PrimeField):
        return x * y % spec.p
    if isinstance(spec, PrimePowerField):
        return field_view(spec).mul(x, y)
    raise ValueError(f"multiplication is not defined on {spec!r}")


def group_cmp(spec: GroupSpec, x: Element, y: Element) -> int:
    """-1/0/1 under the compatible total order (lexicographic for vectors).
    Finite groups admit no such order."""
    if not is_ordered(spec):
        raise ValueError(f"{spec!r} has no addition-compatible total order")
    if x == y:
        return 0
    return -1 if x < y else 1


def _ppf_add(spec: PrimePowerField, x: int, y: int) -> int:
    p = spec.p
    out, mul = 0, 1
    for _ in range(spec.k):
        out += ((x + y) % p) * mul
        x //= p
        y //= p
        mul *= p
    return out


# --- finite field tables ----------------------------------------------------


@dataclass(frozen=True)
class FieldView:
    """exp/log tables over a fixed generator, plus the square / nonsquare
    split of the multiplicative group."""

    spec: PrimeField | PrimePowerField
    q: int
    generator: int
    exp_table: tuple[int, ...]
    log_table: tuple[int, ...]
    squares: frozenset
    nonsquares: frozenset

    def add(self, x: int, y: int) -> int:
        return group_add(self.spec, x, y)

    def sub(self, x: int, y: int) -> int:
        return group_sub(self.spec, x, y)

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self.exp_table[(self.log_table[x] + self.log_table[y]) % (self.q - 1)]

    def is_primitive(self, x: int) -> bool:
        return x != 0 and gcd(self.log_table[x], self.q - 1) == 1

    def in_squares(self, x: int) -> bool:
        return x in self.squares

    def in_nonsquares(self, x: int) -> bool:
        return x in self.nonsquares


def _poly_mul_mod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    out = prod[:k]
    return out + [0] * (k - len(out))


def _poly_pow_x(e: int, mod: tuple[int, ...], p: int) -> list[int]:
    k = len(mod) - 1
    result = [1] + [0] * (k - 1)
    base = ([0, 1] + [0] * (k - 2))[:k] if k >= 2 else [0]
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod, p)
        base = _poly_mul_mod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        for d in range(len(r) - 1, len(b) - 2, -1):
            if len(r) < len(b):
                break
            c = r[-1] * inv % p
            shift = len(r) - len(b)
            for i, bc in enumerate(b):
                r[shift + i] = (r[shift + i] - c * bc) % p
            trim(r)
        a, b = b, r
    return a


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    # x**(p**k) == x mod f, and x**(p**(k/r)) - x coprime to f for prime r | k
    k = len(poly) - 1
    xq = _poly_pow_x(p**k, poly, p)
    target = [0, 1] + [0] * (k - 2)
    if xq != target[:k]:
        return False
    for r in factorize(k).primes():
        xe = _poly_pow_x(p ** (k // r), poly, p)
        diff = [(c - t) % p for c, t in zip(xe, target[:k])]
        g = _poly_gcd(diff, list(poly), p)
        if len(g) != 1:
            return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over F_p,
    comparing the low-coefficient tuple (c_0, ..., c_{k-1})."""
    total = p**k
    for code in range(total):
        coeffs = []
        c = code
        for _ in range(k):
            coeffs.append(c % p)
            c //= p
        poly = tuple(coeffs) + (1,)
        if poly[0] != 0 and _is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible polynomial found for p={p}, k={k}")


def _ppf_mul_raw(spec: PrimePowerField, x: int, y: int) -> int:
    p = spec.p
    a, b = [], []
    for v, out in ((x, a), (y, b)):
        for _ in range(spec.k):
            out.append(v % p)
            v //= p
    prod = _poly_mul_mod(a, b, spec.poly, p)
    out, mul = 0, 1
    for c in prod:
        out += c * mul
        mul *= p
    return out


@lru_cache(maxsize=None)
def field_view(spec: PrimeField | PrimePowerField) -> FieldView:
    """Build (and cache) the exp/log tables and square split for spec."""
    if isinstance(spec, PrimeField):
        q = spec.p
        mul = lambda x, y: x * y % q
    else:
        q = spec.q
        mul = lambda x, y: _ppf_mul_raw(spec, x, y)

    def order_is_full(g: int) -> bool:
        for r in factorize(q - 1).primes():
            e = (q - 1) // r
            acc, base = 1, g
            while e:
                if e & 1:
                    acc = mul(acc, base)
                base = mul(base, base)
                e >>= 1
            if acc == 1:
                return False
        return True

    if q == 2:
        generator = 1
    else:
        generator = next(g for g in range(2, q) if order_is_full(g))
    exp = [1] * (q - 1)
    for i in range(1, q - 1):
        exp[i] = mul(exp[i - 1], generator)
    log = [0] * q
    for i, v in enumerate(exp):
        log[v] = i
    if q % 2 == 1:
        squares = frozenset(exp[i] for i in range(0, q - 1, 2))
    else:
        squares = frozenset(exp)
    nonsquares = frozenset(range(1, q)) - squares
    return FieldView(spec, q, generator, tuple(exp), tuple(log), squares, nonsquares)


def field_make(p: int, k: int = 1) -> FieldView:
    """Field of size p**k (capacity-limited to 2**20).  For k >= 2 the
    modulus polynomial is the lexicographically smallest monic irreducible,
    so elements and tables are reproducible bit for bit."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be >= 1")
    if p**k > MAX_FIELD_SIZE:
        raise ValueError(f"field size {p}**{k} exceeds {MAX_FIELD_SIZE}")
    if k == 1:
        return field_view(PrimeField(p))
    return field_view(PrimePowerField(p, k, _smallest_irreducible(p, k)))


def field_spec_for(q: int) -> PrimeField | PrimePowerField:
    """The canonical GroupSpec for the field of size q."""
    f = factorize(q)
    if len(f.pairs) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, k = f.pairs[0]
    if k == 1:
        return PrimeField(p)
    return PrimePowerField(p, k, _smallest_irreducible(p, k))


# --- invariant factors ------------------------------------------------------


def invariant_factors(moduli: tuple[int, ...] | list[int]) -> tuple[int, ...]:
    """Invariant-factor form d_1 | d_2 | ... | d_t of prod Z/m_i, ascending."""
    by_prime: dict[int, list[int]] = {}
    for m in moduli:
        if m < 1:
            raise ValueError(f"modulus {m} out of range")
        if m == 1:
            continue
        for p, e in factorize(m):
            by_prime.setdefault(p, []).append(e)
    for exps in by_prime.values():
        exps.sort(reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))


def sylow2_cyclic(spec: CyclicProduct) -> bool:
    """Whether the group's 2-part is a single cyclic factor: at most one
    invariant factor is even."""
    return sum(1 for d in invariant_factors(spec.moduli) if d % 2 == 0) <= 1


# --- arrangements -----------------------------------------------------------

LINEAR = "linear"
CIRCULAR = "circular"


@dataclass(frozen=True)
class GroundSet:
    """The set an arrangement permutes, together with its ambient spec."""

    spec: GroupSpec
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("ground set is empty")
        seen = set()
        for x in self.elements:
            validate_element(self.spec, x)
            if x in seen:
                raise ValueError(f"duplicate element {x!r}")
            seen.add(x)

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Arrangement:
    """A linear or circular sequence of distinct elements.  For circular
    shape, adjacency wraps from the last element back to the first."""

    spec: GroupSpec
    shape: str
    elements: tuple

    def __post_init__(self):
        if self.shape not in (LINEAR, CIRCULAR):
            raise ValueError(f"shape must be linear or circular, got {self.shape!r}")
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("arrangement is empty")
        seen = set()
        for x in self.elements:
            validate_element(self.spec, x)
            if x in seen:
                raise ValueError(f"duplicate element {x!r}")
            seen.add(x)

    def __len__(self):
        return len(self.elements)

    def edge_index_pairs(self) -> list[tuple[int, int]]:
        """Directed adjacency (i, j) position pairs in traversal order.
        A circular pair wraps; a 2-cycle has both directed wrap edges and a
        singleton has none."""
        n = len(self.elements)
        if self.shape == LINEAR:
            return [(i, i + 1) for i in range(n - 1)]
        if n == 1:
            return []
        if n == 2:
            return [(0, 1), (1, 0)]
        return [(i, (i + 1) % n) for i in range(n)]

    def triple_index_runs(self) -> list[tuple[int, int, int]]:
        n = len(self.elements)
        if self.shape == LINEAR:
            return [(i, i + 1, i + 2) for i in range(n - 2)]
        if n < 3:
            return []
        return [(i, (i + 1) % n, (i + 2) % n) for i in range(n)]


# --- element / spec serialization -------------------------------------------


def element_coords(spec: GroupSpec, x: Element) -> list[int]:
    """Encode an element as its coordinate array (always a list of ints)."""
    if isinstance(spec, PrimePowerField):
        out = []
        for _ in range(spec.k):
            out.append(x % spec.p)
            x //= spec.p
        return out
    if isinstance(x, tuple):
        return list(x)
    return [x]


def element_from_coords(spec: GroupSpec, coords: list[int]) -> Element:
    coords = [int(c) for c in coords]
    if isinstance(spec, PrimePowerField):
        if len(coords) != spec.k:
            raise ValueError(f"expected {spec.k} coordinates")
        out, mul = 0, 1
        for c in coords:
            out += (c % spec.p) * mul
            mul *= spec.p
        return out
    expected = rank(spec)
    if len(coords) != expected:
        raise ValueError(f"expected {expected} coordinates, got {coords}")
    if _uses_tuples(spec):
        if isinstance(spec, CyclicProduct):
            return tuple(c % m for c, m in zip(coords, spec.moduli))
        return tuple(coords)
    x = coords[0]
    if isinstance(spec, CyclicProduct):
        return x % spec.moduli[0]
    if isinstance(spec, PrimeField):
        return x % spec.p
    return x


def spec_to_dict(spec: GroupSpec) -> dict:
    if isinstance(spec, Integers):
        return {"kind": "integers"}
    if isinstance(spec, IntegerVectors):
        return {"kind": "integer_vectors", "rank": spec.rank}
    if isinstance(spec, CyclicProduct):
        return {"kind": "cyclic_product", "moduli": list(spec.moduli)}
    if isinstance(spec, PrimeField):
        return {"kind": "prime_field", "p": spec.p}
    return {"kind": "prime_power_field", "p": spec.p, "k": spec.k, "poly": list(spec.poly)}


def spec_from_dict(d: dict) -> GroupSpec:
    kind = d.get("kind")
    if kind == "integers":
        return Integers()
    if kind == "integer_vectors":
        return IntegerVectors(int(d["rank"]))
    if kind == "cyclic_product":
        return CyclicProduct(tuple(int(m) for m in d["moduli"]))
    if kind == "prime_field":
        return PrimeField(int(d["p"]))
    if kind == "prime_power_field":
        return PrimePowerField(int(d["p"]), int(d["k"]), tuple(int(c) for c in d["poly"]))
    raise ValueError(f"unknown group kind {kind!r}")
