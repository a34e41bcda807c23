"""Table-driven GF(2^m) arithmetic, vectorised over numpy integer arrays."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["PRIMITIVE_POLYNOMIALS", "GF2m", "field"]

# Bit i is the coefficient of x^i.
PRIMITIVE_POLYNOMIALS = {
    2: 0b111,          # x^2 + x + 1
    3: 0b1011,         # x^3 + x + 1
    4: 0b10011,        # x^4 + x + 1
    5: 0b100101,       # x^5 + x^2 + 1
    6: 0b1000011,      # x^6 + x + 1
    7: 0b10001001,     # x^7 + x^3 + 1
    8: 0b100011101,    # x^8 + x^4 + x^3 + x^2 + 1
}


class GF2m:
    """The field GF(2^m) built from a primitive polynomial.

    Elements are integers in ``[0, 2^m)``.  ``alpha`` (the class of ``x``)
    generates the multiplicative group; ``exp[i] = alpha^i`` and
    ``log[alpha^i] = i``.  ``log[0]`` is a sentinel and must not be used.
    """

    def __init__(self, m: int, primitive: int | None = None):
        if m not in PRIMITIVE_POLYNOMIALS and primitive is None:
            raise ValueError(f"no default primitive polynomial for m={m}")
        self.m = int(m)
        self.order = 1 << self.m
        self.primitive = int(primitive if primitive is not None else PRIMITIVE_POLYNOMIALS[m])
        q1 = self.order - 1
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= self.primitive
        if len(set(exp[:q1].tolist())) != q1:
            raise ValueError(f"polynomial {self.primitive:#b} is not primitive for m={m}")
        exp[q1:] = exp[:q1]
        exp.flags.writeable = False
        log.flags.writeable = False
        self.exp = exp
        self.log = log
        a = np.arange(self.order)
        table = exp[(log[a][:, None] + log[a][None, :])]
        table[0, :] = 0
        table[:, 0] = 0
        inverse = np.zeros(self.order, dtype=np.int64)
        inverse[1:] = exp[(q1 - log[a[1:]]) % q1]
        table.flags.writeable = False
        inverse.flags.writeable = False
        self.mul_table = table
        self.inverse = inverse

    def __repr__(self):
        return f"GF2m(m={self.m}, primitive={self.primitive:#b})"

    def alpha_pow(self, e):
        return self.exp[np.mod(e, self.order - 1)]

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return self.mul_table[a, b]

    def div(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if np.any(b == 0):
            raise ZeroDivisionError("division by zero in GF(2^m)")
        return self.mul_table[a, self.inverse[b]]

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self.inverse[a]

    def poly_eval(self, coeffs, x):
        """Evaluate polynomials with coefficients lowest degree first.

        `coeffs` has shape ``(..., deg+1)``; `x` broadcasts against the
        leading axes.
        """
        coeffs = np.asarray(coeffs, dtype=np.int64)
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros(np.broadcast_shapes(coeffs.shape[:-1], x.shape), dtype=np.int64)
        for j in range(coeffs.shape[-1] - 1, -1, -1):
            acc = self.mul(acc, x) ^ coeffs[..., j]
        return acc


@lru_cache(maxsize=None)
def field(m: int, primitive: int | None = None) -> GF2m:
    """Shared, immutable field instance."""
    return GF2m(m, primitive)
