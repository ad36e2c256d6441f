"""Small finite fields F_(l^d) as polynomial quotients over F_l.

Elements are ints whose base-l digits are the coefficients (x^0 first).
Characteristic two uses carry-less bit arithmetic; odd characteristic goes
through digit lists, which is fine at the sizes used here (l^d <= 2^20).
"""

from __future__ import annotations

import random
from typing import Optional

from .fp_linalg import is_prime


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """(l, f) with q = l^f and l prime, or None."""
    if q < 2:
        return None
    l = 2
    while q % l:
        l += 1
    f = 0
    while q % l == 0:
        q //= l
        f += 1
    return (l, f) if q == 1 else None


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, m: int) -> int:
    a %= m
    k, x = 1, a
    while x != 1:
        x = x * a % m
        k += 1
    return k


# -- polynomials over F_l as coefficient lists, lowest degree first ----------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(a: list[int], f: list[int], l: int) -> list[int]:
    a = [x % l for x in a]
    d = len(f) - 1
    inv_lead = pow(f[-1], -1, l)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] * inv_lead % l
        if c:
            for k in range(d + 1):
                a[i - d + k] = (a[i - d + k] - c * f[k]) % l
    return _trim(a[:d])


def _pmul(a: list[int], b: list[int], l: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] += x * y
    return _trim([x % l for x in out])


def _psub(a: list[int], b: list[int], l: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % l for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], l: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, l)
    return a


def _ppowmod(base: list[int], e: int, f: list[int], l: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, l)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, l), f, l)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, l), f, l)
    return result


def is_irreducible(f: list[int], l: int) -> bool:
    """Rabin's test for a monic polynomial of degree d over F_l."""
    d = len(f) - 1
    if d < 1:
        return False
    x = [0, 1]
    if _psub(_ppowmod(x, l**d, f, l), x, l):
        return False
    for r in prime_factors(d):
        h = _psub(_ppowmod(x, l ** (d // r), f, l), x, l)
        if len(_pgcd(f, h, l)) != 1:
            return False
    return True


def find_irreducible(l: int, d: int, rng: random.Random) -> list[int]:
    while True:
        f = [rng.randrange(l) for _ in range(d)] + [1]
        if f[0] and is_irreducible(f, l):
            return f


class GF:
    """The field F_l[x]/(modulus) of order l^d."""

    def __init__(self, l: int, modulus: list[int]):
        if not is_prime(l):
            raise ValueError(f"{l} is not prime")
        self.l = l
        self.modulus = list(modulus)
        self.d = len(modulus) - 1
        self.size = l**self.d
        if l == 2:
            self._mod_int = sum(c << i for i, c in enumerate(modulus))

    def __repr__(self) -> str:
        return f"GF({self.l}^{self.d})"

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.l)
            out.append(r)
        return _trim(out)

    def from_digits(self, ds: list[int]) -> int:
        return sum(c * self.l**i for i, c in enumerate(ds))

    def mul(self, a: int, b: int) -> int:
        if self.l == 2:
            r = 0
            top = 1 << self.d
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._mod_int
            return r
        return self.from_digits(_pmod(_pmul(self.digits(a), self.digits(b), self.l), self.modulus, self.l))

    def pow(self, a: int, e: int) -> int:
        e %= self.size - 1
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.size - 2)

    def is_generator(self, g: int) -> bool:
        if g == 0:
            return False
        order = self.size - 1
        return all(self.pow(g, order // r) != 1 for r in prime_factors(order))

    def find_generator(self, rng: random.Random, avoid: tuple = ()) -> int:
        while True:
            g = rng.randrange(2, self.size) if self.size > 2 else 1
            if g not in avoid and self.is_generator(g):
                return g

    def dlog(self, g: int, h: int) -> int:
        """log_g h for a generator g, by baby-step giant-step."""
        order = self.size - 1
        m = 1
        while m * m < order:
            m += 1
        baby = {}
        x = 1
        for k in range(m):
            baby.setdefault(x, k)
            x = self.mul(x, g)
        giant = self.inv(x)  # g^-m
        y = h
        for i in range(m + 1):
            if y in baby:
                return (i * m + baby[y]) % order
            y = self.mul(y, giant)
        raise ValueError("element is not in the group generated by g")
