"""Small finite fields F_{p^s} with table-driven arithmetic.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` are the
coefficients of the residue class of a polynomial modulo the defining
polynomial. The class of ``X`` is called the generator ``z``.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from itertools import product

import numpy as np

MAX_ORDER = 1024


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mulmod(a, b, mod, p):
    """Product of coefficient lists (low to high) modulo monic ``mod`` over F_p."""
    s = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, s - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(s + 1):
                prod[k - s + i] -= c * mod[i]
    out = [x % p for x in prod[:s]]
    return out + [0] * (s - len(out))


def _poly_divides(f, g, p):
    """True when monic ``f`` divides ``g`` over F_p (lists low to high)."""
    g = [x % p for x in g]
    df = len(f) - 1
    for k in range(len(g) - 1, df - 1, -1):
        c = g[k]
        if c:
            for i in range(df + 1):
                g[k - df + i] = (g[k - df + i] - c * f[i]) % p
    return not any(g[:df])


def is_irreducible(mod, p) -> bool:
    s = len(mod) - 1
    if s <= 1:
        return s == 1
    for deg in range(1, s // 2 + 1):
        for tail in product(range(p), repeat=deg):
            if _poly_divides(list(tail) + [1], mod, p):
                return False
    return True


def _monic_polys(p, s):
    for tail in product(range(p), repeat=s):
        yield list(reversed(tail)) + [1]


class FiniteField:
    """The field F_{p^s} = F_p[X]/(modulus)."""

    def __init__(self, p: int, modulus=None, degree: int | None = None):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if modulus is None:
            modulus = default_modulus(p, degree or 1)
        modulus = [int(c) % p for c in modulus]
        if modulus[-1] != 1:
            raise ValueError("residue polynomial must be monic")
        if degree is not None and len(modulus) - 1 != degree:
            raise ValueError("residue polynomial degree does not match residue degree")
        if not is_irreducible(modulus, p):
            raise ValueError(f"residue polynomial {modulus} is reducible over F_{p}")
        self.p = p
        self.degree = len(modulus) - 1
        self.modulus = tuple(modulus)
        self.q = p**self.degree
        if self.q > MAX_ORDER:
            raise ValueError(f"residue field of order {self.q} exceeds {MAX_ORDER}")
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"FiniteField(p={self.p}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.p == self.p and other.modulus == self.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    # -- encoding ---------------------------------------------------------
    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_coeffs(self, cs) -> int:
        cs = list(cs)
        if len(cs) > self.degree:
            cs = _poly_mulmod(cs, [1], self.modulus, self.p)
        v = 0
        for c in reversed(cs):
            v = v * self.p + (int(c) % self.p)
        return v

    def from_int(self, n: int) -> int:
        return n % self.p

    @property
    def gen(self) -> int:
        """Class of X modulo the defining polynomial."""
        if self.degree == 1:
            return (-self.modulus[0]) % self.p
        return self.p

    # -- tables -------------------------------------------------------------
    @cached_property
    def _coeff_array(self) -> np.ndarray:
        return np.array([self.coeffs(a) for a in range(self.q)], dtype=np.int64).reshape(self.q, self.degree)

    def _encode_array(self, cs: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.degree, dtype=np.int64)
        return (cs % self.p) @ weights

    @cached_property
    def _np_add(self) -> np.ndarray:
        cs = self._coeff_array
        return self._encode_array(cs[:, None, :] + cs[None, :, :]).astype(np.int32)

    @cached_property
    def _np_mul(self) -> np.ndarray:
        q, s, p = self.q, self.degree, self.p
        cs = self._coeff_array
        prod = np.zeros((q, q, 2 * s - 1), dtype=np.int64)
        for i in range(s):
            for j in range(s):
                prod[:, :, i + j] += cs[:, None, i] * cs[None, :, j]
        for k in range(2 * s - 2, s - 1, -1):
            c = prod[:, :, k] % p
            for i in range(s + 1):
                prod[:, :, k - s + i] -= c * self.modulus[i]
        return self._encode_array(prod[:, :, :s]).astype(np.int32)

    @cached_property
    def add_table(self):
        return self._np_add.tolist()

    @cached_property
    def mul_table(self):
        return self._np_mul.tolist()

    @cached_property
    def neg_table(self):
        return [self.from_coeffs([(-c) % self.p for c in self.coeffs(a)]) for a in range(self.q)]

    @cached_property
    def inv_table(self):
        inv = np.argmax(self._np_mul == 1, axis=1)
        inv[0] = 0
        return inv.tolist()

    @cached_property
    def np_tables(self):
        """(add, mul) tables as numpy int32 arrays for the enumeration kernels."""
        return self._np_add, self._np_mul

    # -- arithmetic -----------------------------------------------------------
    def add(self, a, b):
        if self.degree == 1:
            return (a + b) % self.p
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.degree == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def mul(self, a, b):
        if self.degree == 1:
            return (a * b) % self.p
        return self.mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        if self.degree == 1:
            return pow(a, -1, self.p)
        return self.inv_table[a]

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def frobenius(self, a, k: int = 1):
        """a -> a^(p^k); negative k gives the inverse Frobenius."""
        k %= self.degree
        return self.pow(a, self.p**k) if k else a

    def sqrt(self, a):
        """A square root of ``a`` in this field, or None."""
        for x in range(self.q):
            if self.mul(x, x) == a:
                return x
        return None

    def roots_of_power(self, a, m: int) -> list[int]:
        """All x with x^m == a."""
        return [x for x in range(self.q) if self.pow(x, m) == a]

    def order(self, a) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.q - 1
        for ell in prime_factors(n):
            while n % ell == 0 and self.pow(a, n // ell) == 1:
                n //= ell
        return n

    def is_primitive(self, a) -> bool:
        return a != 0 and self.order(a) == self.q - 1

    def elements(self):
        return range(self.q)

    def format(self, a) -> str:
        """Element as an expression in the generator ``z``."""
        if self.degree == 1:
            return str(a)
        terms = []
        for i, c in enumerate(self.coeffs(a)):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(reversed(terms)) if terms else "0"

    # -- embeddings ---------------------------------------------------------------
    def extension(self, r: int) -> "FiniteField":
        """A field of degree ``r`` over this one (as a standalone prime-field extension)."""
        return FiniteField(self.p, default_modulus(self.p, self.degree * r))

    def embedding_into(self, big: "FiniteField") -> list[int]:
        """Table of a field embedding self -> big (sends z to a root of our modulus)."""
        return _embedding(self, big)


def _x_order(mod, p) -> int:
    """Multiplicative order of X modulo ``mod`` (walks the powers of X)."""
    s = len(mod) - 1
    one = [1] + [0] * (s - 1)
    x = list(one)
    for k in range(1, p**s):
        # multiply by X and reduce the top coefficient
        top = x[-1]
        x = [0] + x[:-1]
        if top:
            x = [(c - top * m) % p for c, m in zip(x, mod)]
        if x == one:
            return k
    return 0


@lru_cache(maxsize=None)
def default_modulus(p: int, s: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree s whose root generates F_{p^s}^x.

    For s == 1 this is X - g with g the least primitive root mod p.
    """
    if s == 1:
        if p == 2:
            return (1, 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // ell, p) != 1 for ell in prime_factors(p - 1)):
                return ((-g) % p, 1)
    for mod in _monic_polys(p, s):
        if mod[0] == 0 or not is_irreducible(mod, p):
            continue
        if p**s > MAX_ORDER:
            raise ValueError(f"residue field of order {p**s} exceeds {MAX_ORDER}")
        if _x_order(mod, p) == p**s - 1:
            return tuple(mod)
    raise ValueError(f"no primitive polynomial of degree {s} over F_{p}")


@lru_cache(maxsize=None)
def _embedding_cached(p, small_mod, big_mod):
    small = FiniteField(p, small_mod)
    big = FiniteField(p, big_mod)
    if big.degree % small.degree:
        raise ValueError("no embedding: degree does not divide")
    # root of small's modulus in big
    root = None
    for x in range(big.q):
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, x), c)
        if acc == 0:
            root = x
            break
    table = []
    for a in range(small.q):
        acc = 0
        for c in reversed(small.coeffs(a)):
            acc = big.add(big.mul(acc, root), c)
        table.append(acc)
    return tuple(table)


def _embedding(small: FiniteField, big: FiniteField) -> list[int]:
    return list(_embedding_cached(small.p, small.modulus, big.modulus))
