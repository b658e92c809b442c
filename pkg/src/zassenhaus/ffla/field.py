"""Arithmetic in GF(p^m) on integer codes.

An element a_0 + a_1 x + ... + a_{m-1} x^{m-1} of GF(p)[x]/(f) is stored as
the integer code a_0 + a_1 p + ... + a_{m-1} p^{m-1}.  Every operation accepts
Python ints or numpy integer arrays and broadcasts.
"""

from __future__ import annotations

import functools

import numpy as np

# Conway polynomials, little-endian coefficients including the leading 1.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1),
    (2, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 14): (1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 15): (1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 16): (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
}


class FieldError(ValueError):
    pass


class FieldCtx:
    """The finite field GF(p^m) with a fixed Conway modulus.

    Use :func:`GF` to obtain instances; equal ``(p, m)`` always give the same
    object and hence the same modulus.
    """

    def __init__(self, p: int, m: int):
        if (p, m) not in CONWAY:
            raise FieldError(f"no modulus tabulated for GF({p}^{m})")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = CONWAY[(p, m)]
        self._pw = np.array([p**k for k in range(m)], dtype=np.int64)
        self._build_tables()
        # coefficients of x^j mod f for 0 <= j <= 2m-2; used by plane products
        red = np.zeros((2 * m - 1, m), dtype=np.int64)
        for j in range(2 * m - 1):
            red[j] = self.digits(self._xpow_code(j))
        self.reduction = red

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def __reduce__(self):
        return (GF, (self.p, self.m))

    # -- construction ----------------------------------------------------

    def _times_x(self, digits: list[int]) -> list[int]:
        p, m, f = self.p, self.m, self.modulus
        shifted = [0] + digits
        top = shifted[m]
        return [(shifted[k] - top * f[k]) % p for k in range(m)]

    def _xpow_code(self, j: int) -> int:
        d = [1] + [0] * (self.m - 1)
        for _ in range(j):
            d = self._times_x(d)
        return self._encode(d)

    def _encode(self, digits) -> int:
        return int(sum(int(c) * self.p**k for k, c in enumerate(digits)))

    def _powers_of_x(self) -> list[int]:
        q, p, m = self.q, self.p, self.m
        out = [1]
        if p == 2:
            mod_code = self._encode(self.modulus)
            a = 1
            for _ in range(q - 2):
                a <<= 1
                if a & q:
                    a ^= mod_code
                if a == 1:
                    break
                out.append(a)
            return out
        d = [1] + [0] * (m - 1)
        for _ in range(q - 2):
            d = self._times_x(d)
            a = self._encode(d)
            if a == 1:
                break
            out.append(a)
        return out

    def _build_tables(self):
        q = self.q
        exp = self._powers_of_x()
        if len(exp) != q - 1:
            raise FieldError(f"modulus of {self} is not primitive")
        self.generator = self._xpow_code(1)
        exp_arr = np.array(exp * 2, dtype=np.int64)
        log_arr = np.zeros(q, dtype=np.int64)
        log_arr[exp_arr[: q - 1]] = np.arange(q - 1)
        self._exp = exp_arr
        self._log = log_arr

    # -- coefficient planes ----------------------------------------------

    def digits(self, a):
        """Prime-field coordinates of ``a``, stacked on a new leading axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.stack([(a >> k) & 1 for k in range(self.m)])
        return np.stack([(a // self._pw[k]) % self.p for k in range(self.m)])

    def from_digits(self, planes):
        planes = np.asarray(planes, dtype=np.int64)
        return np.tensordot(self._pw, planes % self.p, axes=(0, 0))

    def coeff_string(self, a: int) -> str:
        return "".join(str(int(d)) for d in self.digits(int(a)))

    def parse_coeff_string(self, s: str) -> int:
        if len(s) != self.m or any(not ch.isdigit() or int(ch) >= self.p for ch in s):
            raise FieldError(f"bad coefficient string {s!r} for {self}")
        return self._encode([int(ch) for ch in s])

    # -- arithmetic ------------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return self.from_digits(self.digits(a) + self.digits(b))

    def neg(self, a):
        if self.p == 2:
            return a
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self.from_digits(-self.digits(a))

    def sub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[self._log[a] + self._log[b]]
        r = np.where((a == 0) | (b == 0), 0, r)
        return r if r.ndim else int(r)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        r = self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return r if r.ndim else int(r)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            r = np.ones_like(a)
        else:
            r = self._exp[(self._log[a] * (e % (self.q - 1) or (self.q - 1))) % (self.q - 1)]
            r = np.where(a == 0, 0, r)
        return r if r.ndim else int(r)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` in the prime field."""
        return k % self.p

    def elements(self) -> range:
        return range(self.q)

    def subfield(self, k: int) -> list[int]:
        """Codes of the subfield GF(p^k), sorted; requires k | m."""
        if k < 1 or self.m % k:
            raise FieldError(f"GF({self.p}^{k}) is not a subfield of {self}")
        els = np.arange(self.q)
        return [int(a) for a in els[self.pow(els, self.p**k) == els]]

    def random(self, rng: np.random.Generator, shape=None):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


@functools.cache
def GF(p: int, m: int = 1) -> FieldCtx:
    return FieldCtx(p, m)
