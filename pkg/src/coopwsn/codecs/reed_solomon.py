"""
Hard-decision Reed-Solomon RS(N, K) over GF(2^m), ``N = 2^m - 1``.

Encoding is systematic: a codeword is the K message symbols followed by
``N - K`` parity symbols, and reads as the polynomial
``c(x) = sum_i c_i x^(N-1-i)`` (first symbol = highest degree).  The
generator has roots ``alpha^1 .. alpha^(N-K)``.

Decoding is syndrome computation, Berlekamp-Massey for the error locator,
Chien search for its roots and Forney's formula for the error values.  All
steps are vectorised over a batch of received words; the scalar helpers
:func:`rs_encode` / :func:`rs_decode` wrap a batch of one.
"""

from __future__ import annotations

import numpy as np

from .gf import GF2m, field
from .status import DecodeResult, DecodeStatus

__all__ = ["ReedSolomon", "rs_encode", "rs_decode"]


class ReedSolomon:
    """RS(n, k) codec with t = floor((n - k) / 2).

    Parameters
    ----------
    n, k : int
        Code length and message length in symbols.  ``n`` must be
        ``2^m - 1``.
    primitive : int, optional
        Field polynomial; defaults to the table in :mod:`coopwsn.codecs.gf`.
    """

    def __init__(self, n: int, k: int, primitive: int | None = None):
        m = int(n + 1).bit_length() - 1
        if n < 3 or (1 << m) - 1 != n:
            raise ValueError(f"RS length must be 2^m - 1, got n={n}")
        if not 1 <= k < n:
            raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
        if (n - k) // 2 < 1:
            raise ValueError(f"RS({n},{k}) cannot correct any error")
        self.n, self.k, self.m = int(n), int(k), m
        self.nsym = self.n - self.k
        self.t = self.nsym // 2
        self.gf: GF2m = field(m) if primitive is None else GF2m(m, primitive)
        gf = self.gf
        q1 = gf.order - 1

        g = np.array([1], dtype=np.int64)
        for j in range(1, self.nsym + 1):
            nxt = np.zeros(len(g) + 1, dtype=np.int64)
            nxt[:-1] = g
            nxt[1:] ^= gf.mul(g, gf.exp[j])
            g = nxt
        self.generator = g  # highest degree first, monic

        pos = np.arange(self.n)
        power = self.n - 1 - pos
        js = np.arange(1, self.nsym + 1)
        self._shifts = np.arange(m - 1, -1, -1)
        self._weights = (1 << self._shifts).astype(np.int32)
        self._bit_table = self._bits(np.arange(gf.order))
        # Multiplication by a constant is GF(2)-linear, so every "evaluate at
        # fixed points" step below is one binary matrix product on bits.
        self._syn_map = self._linear_map(gf.exp[(power[:, None] * js[None, :]) % q1])
        inv_pows = gf.exp[(-(np.arange(self.nsym + 1)[:, None] * power[None, :])) % q1]
        self._chien_map = self._linear_map(inv_pows[: self.t + 1])
        self._omega_map = self._linear_map(inv_pows[: self.nsym])
        # formal derivative in characteristic 2 keeps the odd coefficients
        odd = np.zeros_like(inv_pows[: self.t + 1])
        odd[1::2] = inv_pows[0 : self.t : 2]
        self._deriv_map = self._linear_map(odd)
        par = np.zeros((self.k, self.nsym), dtype=np.int64)
        for i in range(self.k):
            unit = np.zeros((1, self.k), dtype=np.int64)
            unit[0, i] = 1
            par[i] = self._parity_lfsr(unit)[0]
        self._parity_map = self._linear_map(par)

    def _linear_map(self, coeffs):
        """Binary matrix for ``y_j = sum_i x_i * coeffs[i, j]`` on bit vectors."""
        gf = self.gf
        rows_in, cols = coeffs.shape
        m = self.m
        out = np.zeros((rows_in * m, cols * m), dtype=np.float32)
        for i in range(rows_in):
            for bit in range(m):
                prod = gf.mul(1 << (m - 1 - bit), coeffs[i])
                out[i * m + bit] = self._bits(prod).reshape(-1)
        return out

    def _bits(self, symbols):
        return ((np.asarray(symbols)[..., None] >> self._shifts) & 1).astype(np.float32)

    def _apply(self, matrix, symbols):
        x = self._bit_table[symbols].reshape(symbols.shape[0], -1)
        y = (x @ matrix).astype(np.int32) & 1
        return self._pack(y, matrix.shape[1] // self.m)

    def _pack(self, bits, nsym):
        return (bits.reshape(bits.shape[0], nsym, self.m) * self._weights).sum(axis=-1, dtype=np.int64)

    def __repr__(self):
        return f"ReedSolomon(n={self.n}, k={self.k}, m={self.m})"

    # -- encoding -----------------------------------------------------------

    def _check_symbols(self, arr, length, what):
        arr = np.asarray(arr)
        if arr.shape[-1] != length:
            raise ValueError(f"{what} must have {length} symbols, got {arr.shape[-1]}")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise ValueError(f"{what} symbols must be integers")
        arr = arr.astype(np.int64)
        if np.any(arr < 0) or np.any(arr >= self.gf.order):
            raise ValueError(f"{what} symbols must lie in [0, {self.gf.order})")
        return arr

    def parity(self, messages) -> np.ndarray:
        msgs = self._check_symbols(messages, self.k, "message")
        batch = msgs.reshape(-1, self.k)
        return self._apply(self._parity_map, batch).reshape(msgs.shape[:-1] + (self.nsym,))

    def _parity_lfsr(self, batch):
        gf = self.gf
        tail = self.generator[1:]
        reg = np.zeros((batch.shape[0], self.nsym), dtype=np.int64)
        for i in range(self.k):
            fb = batch[:, i] ^ reg[:, 0]
            reg[:, :-1] = reg[:, 1:]
            reg[:, -1] = 0
            reg ^= gf.mul(fb[:, None], tail[None, :])
        return reg

    def encode(self, messages) -> np.ndarray:
        """Systematic encoding of ``(..., k)`` messages into ``(..., n)`` words."""
        msgs = self._check_symbols(messages, self.k, "message")
        return np.concatenate([msgs, self.parity(msgs)], axis=-1)

    # -- decoding -----------------------------------------------------------

    def syndromes(self, received) -> np.ndarray:
        """``S_j = r(alpha^j)`` for j = 1..n-k, shape ``(batch, n-k)``."""
        r = np.asarray(received, dtype=np.int64).reshape(-1, self.n)
        return self._apply(self._syn_map, r)

    def _berlekamp_massey(self, S):
        gf = self.gf
        rows = S.shape[0]
        width = self.nsym + 1
        C = np.zeros((rows, width), dtype=np.int64)
        C[:, 0] = 1
        Bx = np.zeros((rows, width), dtype=np.int64)
        Bx[:, 1] = 1
        L = np.zeros(rows, dtype=np.int64)
        bcoef = np.ones(rows, dtype=np.int64)
        for r in range(self.nsym):
            d = np.zeros(rows, dtype=np.int64)
            for i in range(r + 1):
                d ^= gf.mul(C[:, i], S[:, r - i])
            nz = d != 0
            coef = np.where(nz, gf.div(d, bcoef), 0)
            newC = C ^ gf.mul(coef[:, None], Bx)
            swap = nz & (2 * L <= r)
            base = np.where(swap[:, None], C, Bx)
            Bx = np.zeros_like(base)
            Bx[:, 1:] = base[:, :-1]
            L = np.where(swap, r + 1 - L, L)
            bcoef = np.where(swap, d, bcoef)
            C = newC
        return C, L

    def decode_batch(self, received, guard: bool = True):
        """Decode a batch of received words.

        Parameters
        ----------
        received : array_like, shape ``(..., n)``
        guard : bool
            Re-encode every decoded message and declare a failure when the
            parity does not match the corrected word.

        Returns
        -------
        messages : ndarray, shape ``(..., k)``
            Corrected messages; for failures the received systematic part.
        corrected : ndarray of int
            Number of symbols corrected (0 for clean words and failures).
        failed : ndarray of bool
        """
        r_in = self._check_symbols(received, self.n, "received word")
        lead = r_in.shape[:-1]
        r = r_in.reshape(-1, self.n)
        rows = r.shape[0]
        out = r.copy()
        count = np.zeros(rows, dtype=np.int64)
        failed = np.zeros(rows, dtype=bool)

        S_all = self.syndromes(r)
        dirty = np.nonzero(S_all.any(axis=1))[0]
        if dirty.size:
            fixed, cnt, bad = self._correct(r[dirty], S_all[dirty], guard)
            out[dirty] = fixed
            count[dirty] = cnt
            failed[dirty] = bad
        msgs = out[:, : self.k]
        return (
            msgs.reshape(lead + (self.k,)),
            count.reshape(lead),
            failed.reshape(lead),
        )

    def _correct(self, r, S, guard):
        gf = self.gf
        t = self.t
        rows = r.shape[0]
        C, L = self._berlekamp_massey(S)
        bad = (L > t) | C[:, t + 1 :].any(axis=1)
        fixed = r.copy()
        count = np.zeros(rows, dtype=np.int64)
        cand = np.nonzero(~bad)[0]
        if cand.size == 0:
            return fixed, count, bad
        C, S, rc, Lc = C[cand], S[cand], r[cand], L[cand]

        # Chien search over every position: Lambda(X_i^-1) == 0
        roots = self._apply(self._chien_map, C[:, : t + 1]) == 0
        nroots = roots.sum(axis=1)
        bad_c = nroots != Lc

        # Forney: e = Omega(X^-1) / Lambda'(X^-1)
        omega = np.zeros((rc.shape[0], self.nsym), dtype=np.int64)
        for kdeg in range(self.nsym):
            for j in range(min(kdeg, t) + 1):
                omega[:, kdeg] ^= gf.mul(C[:, j], S[:, kdeg - j])
        om = self._apply(self._omega_map, omega)
        dl = self._apply(self._deriv_map, C[:, : t + 1])
        bad_c |= (roots & (dl == 0)).any(axis=1)
        safe_dl = np.where(dl == 0, 1, dl)
        err = np.where(roots, gf.div(om, safe_dl), 0)
        fc = rc ^ err

        if guard:
            bad_c |= (self.parity(fc[:, : self.k]) != fc[:, self.k :]).any(axis=1)
        else:
            bad_c |= self.syndromes(fc).any(axis=1)
        good = ~bad_c
        fixed[cand[good]] = fc[good]
        count[cand[good]] = nroots[good]
        bad[cand] = bad_c
        return fixed, count, bad

    def decode(self, received, guard: bool = True):
        """Decode one word into ``(message, DecodeResult)``."""
        r = np.asarray(received)
        if r.ndim != 1:
            raise ValueError("decode() takes a single word; use decode_batch() for batches")
        msg, cnt, bad = self.decode_batch(r, guard=guard)
        if bad:
            return msg, DecodeResult(DecodeStatus.FAILURE)
        if cnt:
            return msg, DecodeResult(DecodeStatus.CORRECTED, int(cnt))
        return msg, DecodeResult(DecodeStatus.CLEAN)


def _codec(spec) -> ReedSolomon:
    if isinstance(spec, ReedSolomon):
        return spec
    from .spec import CodeKind

    if getattr(spec, "kind", None) is not CodeKind.REED_SOLOMON:
        raise ValueError("a Reed-Solomon CodeSpec is required")
    return spec.reed_solomon()


def rs_encode(message, spec) -> np.ndarray:
    """Encode K symbols into N symbols for a Reed-Solomon `spec`."""
    return _codec(spec).encode(message)


def rs_decode(received, spec, guard: bool = True):
    """Decode N received symbols; returns ``(message, DecodeResult)``."""
    return _codec(spec).decode(received, guard=guard)
