"""Raw quotient-ring layers underneath :mod:`splitred.localfield`.

Each layer is a ring ``O / pi^cap`` (``pi`` the layer's uniformizer) whose
values are plain tuples. The layers know nothing about precision tracking;
``RingElem`` does that. All arithmetic here is exact in the quotient ring.

* :class:`UnramifiedMixed`  -- W(F_q) / p^M as (Z/p^M)[z]/(G)
* :class:`UnramifiedEqual`  -- F_q[[T]] / T^M
* :class:`EisensteinLayer`  -- prev[t]/(f) for an Eisenstein polynomial f
"""

from __future__ import annotations

from .finite_field import FiniteField


def _vp(x: int, p: int, cap: int) -> int:
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


class UnramifiedMixed:
    depth = 0

    def __init__(self, field: FiniteField, M: int, G=None):
        self.field = field
        self.p = field.p
        self.s = field.degree
        self.M = M
        self.cap = M
        self.mod = self.p**M
        self.zero = (0,) * self.s
        self.one = (1,) + (0,) * (self.s - 1)
        if G is None:
            G = teichmuller_modulus(field, M)
        self.G = tuple(int(c) % self.mod for c in G)

    @property
    def e_abs(self):
        return 1

    def is_zero(self, a):
        return not any(a)

    def add(self, a, b):
        m = self.mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a, b):
        m = self.mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a):
        m = self.mod
        return tuple((-x) % m for x in a)

    def mul(self, a, b):
        m = self.mod
        s = self.s
        if s == 1:
            return ((a[0] * b[0]) % m,)
        prod = [0] * (2 * s - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        G = self.G
        for k in range(2 * s - 2, s - 1, -1):
            c = prod[k] % m
            if c:
                for i in range(s):
                    prod[k - s + i] -= c * G[i]
        return tuple(x % m for x in prod[:s])

    def scalar(self, n: int):
        return (n % self.mod,) + (0,) * (self.s - 1)

    def valuation(self, a):
        best = None
        for x in a:
            if x:
                v = _vp(x, self.p, self.M)
                if best is None or v < best:
                    best = v
        return best

    def shift(self, a, k):
        """Exact division by p^k (caller guarantees divisibility)."""
        if k == 0:
            return a
        pk = self.p**k
        return tuple(x // pk for x in a)

    def mul_pi(self, a, k):
        if k == 0:
            return a
        if k >= self.M:
            return self.zero
        pk = self.p**k
        m = self.mod
        return tuple((x * pk) % m for x in a)

    def residue(self, a):
        p = self.p
        return self.field.from_coeffs([x % p for x in a])

    def lift(self, c):
        return tuple(self.field.coeffs(c))

    def unit_inverse(self, a):
        if self.s == 1:
            return (pow(a[0], -1, self.mod),)
        x = self.lift(self.field.inv(self.residue(a)))
        two = self.scalar(2)
        prec = 1
        while prec < self.cap:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        return x

    def pow(self, a, n):
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def coordinates(self, a):
        return list(a)


class UnramifiedEqual:
    depth = 0

    def __init__(self, field: FiniteField, M: int):
        self.field = field
        self.p = field.p
        self.s = field.degree
        self.M = M
        self.cap = M
        self.zero = (0,) * M
        self.one = (1,) + (0,) * (M - 1)

    @property
    def e_abs(self):
        return None

    def is_zero(self, a):
        return not any(a)

    def add(self, a, b):
        F = self.field
        if F.degree == 1:
            p = F.p
            return tuple((x + y) % p for x, y in zip(a, b))
        at = F.add_table
        return tuple(at[x][y] for x, y in zip(a, b))

    def neg(self, a):
        F = self.field
        return tuple(F.neg(x) for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        F = self.field
        M = self.M
        ia = [i for i, x in enumerate(a) if x]
        ib = [j for j, y in enumerate(b) if y]
        if F.degree == 1:
            p = F.p
            prod = [0] * M
            for i in ia:
                x = a[i]
                for j in ib:
                    if i + j >= M:
                        break
                    prod[i + j] += x * b[j]
            return tuple(c % p for c in prod)
        mt, at = F.mul_table, F.add_table
        prod = [0] * M
        for i in ia:
            row = mt[a[i]]
            for j in ib:
                k = i + j
                if k >= M:
                    break
                prod[k] = at[prod[k]][row[b[j]]]
        return tuple(prod)

    def scalar(self, n: int):
        return (self.field.from_int(n),) + (0,) * (self.M - 1)

    def valuation(self, a):
        for i, x in enumerate(a):
            if x:
                return i
        return None

    def shift(self, a, k):
        if k == 0:
            return a
        return a[k:] + (0,) * k

    def mul_pi(self, a, k):
        if k == 0:
            return a
        if k >= self.M:
            return self.zero
        return (0,) * k + a[: self.M - k]

    def residue(self, a):
        return a[0]

    def lift(self, c):
        return (c,) + (0,) * (self.M - 1)

    def unit_inverse(self, a):
        F = self.field
        inv0 = F.inv(a[0])
        b = [0] * self.M
        b[0] = inv0
        for k in range(1, self.M):
            acc = 0
            for i in range(1, k + 1):
                if a[i] and b[k - i]:
                    acc = F.add(acc, F.mul(a[i], b[k - i]))
            b[k] = F.neg(F.mul(inv0, acc))
        return tuple(b)

    def pow(self, a, n):
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r


class EisensteinLayer:
    """prev[t]/(t^e + a_{e-1} t^{e-1} + ... + a_0); values are tuples of e prev-values."""

    def __init__(self, prev, coeffs):
        self.prev = prev
        self.field = prev.field
        self.p = prev.p
        self.e = len(coeffs)
        self.a = tuple(coeffs)
        self.cap = self.e * prev.cap
        self.depth = prev.depth + 1
        P = prev
        self.zero = (P.zero,) * self.e
        self.one = (P.one,) + (P.zero,) * (self.e - 1)
        # pi_prev / pi = -(t^{e-1} + a_{e-1} t^{e-2} + ... + a_1) / u0,  a_0 = pi_prev * u0
        u0 = P.shift(self.a[0], 1)
        u0inv = P.unit_inverse(u0)
        negN = [P.neg(c) for c in self.a[1:]] + [P.neg(P.one)]
        self._down = tuple(P.mul(c, u0inv) for c in negN)

    @property
    def e_abs(self):
        prev = self.prev.e_abs
        return None if prev is None else prev * self.e

    def is_zero(self, a):
        P = self.prev
        return all(P.is_zero(c) for c in a)

    def add(self, a, b):
        P = self.prev
        return tuple(P.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        P = self.prev
        return tuple(P.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        P = self.prev
        return tuple(P.neg(x) for x in a)

    def mul(self, a, b):
        P = self.prev
        e = self.e
        prod = [P.zero] * (2 * e - 1)
        nzb = [(j, y) for j, y in enumerate(b) if not P.is_zero(y)]
        for i, x in enumerate(a):
            if P.is_zero(x):
                continue
            for j, y in nzb:
                prod[i + j] = P.add(prod[i + j], P.mul(x, y))
        A = self.a
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if P.is_zero(c):
                continue
            for i in range(e):
                if not P.is_zero(A[i]):
                    prod[k - e + i] = P.sub(prod[k - e + i], P.mul(c, A[i]))
        return tuple(prod[:e])

    def scalar(self, n: int):
        return (self.prev.scalar(n),) + (self.prev.zero,) * (self.e - 1)

    def embed(self, c):
        return (c,) + (self.prev.zero,) * (self.e - 1)

    def scale(self, a, c):
        """Multiply by a prev-level value."""
        P = self.prev
        return tuple(P.mul(x, c) for x in a)

    def valuation(self, a):
        P = self.prev
        e = self.e
        best = None
        for j, c in enumerate(a):
            v = P.valuation(c)
            if v is not None:
                w = e * v + j
                if best is None or w < best:
                    best = w
        return best

    def mul_pi(self, a, k):
        if k >= self.cap:
            return self.zero
        P = self.prev
        A = self.a
        for _ in range(k):
            c = a[-1]
            a = (P.zero,) + a[:-1]
            if not P.is_zero(c):
                a = tuple(P.sub(x, P.mul(c, ai)) for x, ai in zip(a, A))
        return a

    def shift(self, a, k):
        """Exact division by pi^k (caller guarantees v(a) >= k)."""
        P = self.prev
        down = self._down
        for _ in range(k):
            c0 = a[0]
            a = a[1:] + (P.zero,)
            if not P.is_zero(c0):
                c0s = P.shift(c0, 1)
                a = tuple(P.add(x, P.mul(c0s, dj)) for x, dj in zip(a, down))
        return a

    def residue(self, a):
        return self.prev.residue(a[0])

    def lift(self, c):
        return self.embed(self.prev.lift(c))

    def unit_inverse(self, a):
        x = self.lift(self.field.inv(self.residue(a)))
        two = self.scalar(2)
        prec = 1
        while prec < self.cap:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        return x

    def pow(self, a, n):
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r


def teichmuller_modulus(field: FiniteField, M: int):
    """Minimal polynomial over Z/p^M of the Teichmuller lift of the field generator.

    Using it as the defining polynomial of the unramified base makes the raw
    generator ``z`` itself a (q-1)-th root of unity.
    """
    p, s = field.p, field.degree
    if s == 1:
        mod = p**M
        w = field.gen
        for _ in range(M + 1):
            w = pow(w, field.q, mod)
        return ((-w) % mod, 1)
    tmp = UnramifiedMixed(field, M, G=list(field.modulus))
    w = tmp.lift(field.gen)
    for _ in range(M + 1):
        w = tmp.pow(w, field.q)
    # prod_{i<s} (X - w^{p^i}) with coefficients in tmp
    poly = [tmp.one]
    conj = w
    for _ in range(s):
        new = [tmp.zero] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = tmp.add(new[i + 1], c)
            new[i] = tmp.sub(new[i], tmp.mul(c, conj))
        poly = new
        conj = tmp.pow(conj, p)
    out = []
    for c in poly:
        if any(c[1:]):
            raise ArithmeticError("Teichmuller minimal polynomial has non-scalar coefficients")
        out.append(c[0])
    return tuple(out)
