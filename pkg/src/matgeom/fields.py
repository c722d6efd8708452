"""Exact arithmetic in GF(p^k) over a fixed polynomial basis.

An element is identified by its canonical index ``sum(c[i] * p**i)`` where
``c`` are the coefficients of its representative polynomial (low degree
first).  All matrix code in the package works directly on these integer
indices through the precomputed tables of a :class:`FieldSpec`.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DivisionByZero, FieldMismatch, InvalidField

MAX_ORDER = 1024

# Conway polynomials, low degree first.
SHIPPED_POLYS: dict[int, tuple[int, int, tuple[int, ...]]] = {
    2: (2, 1, (0, 1)),
    3: (3, 1, (0, 1)),
    4: (2, 2, (1, 1, 1)),
    5: (5, 1, (0, 1)),
    7: (7, 1, (0, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (2, 2, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),
    25: (5, 2, (2, 4, 1)),
    27: (3, 3, (1, 2, 0, 1)),
}

_overrides: dict[int, FieldSpec] = {}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_mod(a: list[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` by the monic polynomial ``b`` over GF(p)."""
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return [x % p for x in a[:db]] if db > 0 else []


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_mod(list(poly), list(low) + [1], p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^k) = GF(p)[x]/(poly).

    Two specs compare equal only when ``(p, k, poly)`` match exactly; no
    isomorphism is ever applied silently.
    """

    p: int
    k: int
    poly: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(int(c) for c in self.poly))
        p, k, poly = self.p, self.k, self.poly
        if not _is_prime(p):
            raise InvalidField(f"p={p} is not prime")
        if k < 1:
            raise InvalidField(f"extension degree k={k} must be >= 1")
        if len(poly) != k + 1 or poly[-1] != 1:
            raise InvalidField(f"poly {poly} is not monic of degree {k}")
        if any(not 0 <= c < p for c in poly):
            raise InvalidField(f"poly coefficients must lie in [0, {p})")
        if p**k > MAX_ORDER:
            raise InvalidField(f"GF({p}^{k}) exceeds the supported order {MAX_ORDER}")
        if k > 1 and not _is_irreducible(poly, p):
            raise InvalidField(f"poly {poly} is reducible over GF({p})")

    def __repr__(self) -> str:
        return f"GF({self.q})"

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.q)

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def index(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k:
            raise InvalidField(f"expected {self.k} coefficients, got {len(coeffs)}")
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def _mul_raw(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.index(_poly_mod(prod, self.poly, self.p) if self.k > 1 else [prod[0] % self.p])

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        p, k = self.p, self.k
        return tuple(
            tuple(self.index([(x + y) % p for x, y in zip(self.coeffs(a), self.coeffs(b))]) for b in range(self.q))
            for a in range(self.q)
        ) if k > 1 else tuple(tuple((a + b) % p for b in range(p)) for a in range(p))

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self.index([(-c) % self.p for c in self.coeffs(a)]) for a in range(self.q))

    @cached_property
    def sub_table(self) -> tuple[tuple[int, ...], ...]:
        add, neg = self.add_table, self.neg_table
        return tuple(tuple(add[a][neg[b]] for b in range(self.q)) for a in range(self.q))

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self._mul_raw(a, b) for b in range(self.q)) for a in range(self.q))

    @cached_property
    def inv_table(self) -> tuple[int, ...]:
        mul = self.mul_table
        inv = [0] * self.q
        for a in range(1, self.q):
            inv[a] = next(b for b in range(1, self.q) if mul[a][b] == 1)
        return tuple(inv)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self!r}")
        return self.inv_table[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_table[result][base]
            base = self.mul_table[base][base]
            e >>= 1
        return result

    def elem(self, index: int) -> FieldElement:
        return FieldElement(self, index)

    def to_text(self) -> str:
        return f"field p={self.p} k={self.k} poly={','.join(map(str, self.poly))}"

    @classmethod
    def parse(cls, text: str | Sequence[str]) -> FieldSpec:
        """Parse ``field p=<p> k=<k> poly=<c0,...,ck>`` (the ``field`` word is optional).

        A bare order such as ``4`` or ``GF4`` selects the shipped polynomial.
        """
        if not isinstance(text, str):
            text = " ".join(text)
        text = text.strip()
        bare = re.fullmatch(r"(?:GF\(?)?(\d+)\)?", text, flags=re.IGNORECASE)
        if bare:
            return gf(int(bare.group(1)))
        tokens = text.split()
        if tokens and tokens[0] == "field":
            tokens = tokens[1:]
        kv = {}
        for tok in tokens:
            if "=" not in tok:
                raise InvalidField(f"malformed field token {tok!r}")
            key, value = tok.split("=", 1)
            kv[key] = value
        try:
            p, k = int(kv["p"]), int(kv["k"])
            poly = tuple(int(c) for c in kv["poly"].split(","))
        except (KeyError, ValueError) as exc:
            raise InvalidField(f"malformed field spec {text!r}") from exc
        return cls(p, k, poly)


def gf(q: int) -> FieldSpec:
    """The conventional field of order ``q`` (shipped table, unless overridden)."""
    if q in _overrides:
        return _overrides[q]
    if q in SHIPPED_POLYS:
        return FieldSpec(*SHIPPED_POLYS[q])
    for p in range(2, q + 1):
        if _is_prime(p):
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r == 1 and k >= 1:
                if k == 1:
                    return FieldSpec(p, 1, (0, 1))
                for low in itertools.product(range(p), repeat=k):
                    if low[0] and _is_irreducible(list(low) + [1], p):
                        return FieldSpec(p, k, tuple(low) + (1,))
            break
    raise InvalidField(f"{q} is not a prime power")


def override_fields(table: Mapping[int, FieldSpec]) -> None:
    """Replace the conventional polynomial for the given orders."""
    for q, spec in table.items():
        if spec.q != q:
            raise InvalidField(f"override for q={q} describes GF({spec.q})")
    _overrides.clear()
    _overrides.update(table)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.field.q:
            raise InvalidField(f"index {self.index} out of range for {self.field!r}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.index)

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.index, other.index))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.index, other.index))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.index, other.index))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inv()

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.index, e))

    def inv(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.index))

    def __bool__(self) -> bool:
        return self.index != 0

    def __repr__(self) -> str:
        return f"{self.field!r}[{self.index}]"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Apply ``op`` in {add, sub, mul, neg, inv, pow_i}; ``pow_i`` takes ``b`` as an int."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op == "pow_i":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(e: FieldElement, i: int) -> FieldElement:
    """Return ``e ** (p ** i)`` for ``0 <= i < k``."""
    if not 0 <= i < e.field.k:
        raise ValueError(f"Frobenius power {i} outside [0, {e.field.k})")
    return e ** (e.field.p**i)


@dataclass(frozen=True)
class FieldHom:
    """A unital ring homomorphism, materialized as a lookup table."""

    src: FieldSpec
    dst: FieldSpec
    table: tuple[int, ...] = field(repr=False)

    def __call__(self, a: int) -> int:
        return self.table[a]

    @property
    def surjective(self) -> bool:
        return len(set(self.table)) == self.dst.q

    def is_homomorphism(self) -> bool:
        s, d, t = self.src, self.dst, self.table
        if len(t) != s.q or t[1] != 1:
            return False
        for a in s.elements():
            for b in s.elements():
                if t[s.add(a, b)] != d.add(t[a], t[b]) or t[s.mul(a, b)] != d.mul(t[a], t[b]):
                    return False
        return len(set(t)) == s.q

    def compose(self, other: FieldHom) -> FieldHom:
        """``self`` after ``other``."""
        if other.dst != self.src:
            raise FieldMismatch("composition of incompatible homomorphisms")
        return FieldHom(other.src, self.dst, tuple(self.table[x] for x in other.table))


def identity_hom(f: FieldSpec) -> FieldHom:
    return FieldHom(f, f, tuple(f.elements()))


def _extend_generator(src: FieldSpec, dst: FieldSpec, root: int) -> FieldHom:
    """Map x -> root and extend additively/multiplicatively over the basis."""
    powers = [1]
    for _ in range(1, src.k):
        powers.append(dst.mul(powers[-1], root))
    table = []
    for a in src.elements():
        acc = 0
        for c, pw in zip(src.coeffs(a), powers):
            if c:
                acc = dst.add(acc, dst.mul(c, pw))
        table.append(acc)
    return FieldHom(src, dst, tuple(table))


def _eval_prime_poly(poly: Sequence[int], dst: FieldSpec, x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = dst.add(dst.mul(acc, x), c)
    return acc


def enumerate_field_homs(src: FieldSpec, dst: FieldSpec) -> list[FieldHom]:
    """All unital ring homomorphisms GF(p^k) -> GF(p'^l), one per root of the
    defining polynomial of ``src`` inside ``dst`` (ascending root index)."""
    if src.p != dst.p or dst.k % src.k:
        return []
    homs = []
    for r in dst.elements():
        if _eval_prime_poly(src.poly, dst, r) == 0:
            h = _extend_generator(src, dst, r) if src.k > 1 else FieldHom(src, dst, tuple(src.elements()))
            if not h.is_homomorphism():
                raise AssertionError(f"root {r} did not induce a homomorphism")
            homs.append(h)
        if src.k == 1 and homs:
            break
    return homs


def iter_field_specs(orders: Sequence[int]) -> Iterator[FieldSpec]:
    for q in orders:
        yield gf(q)
