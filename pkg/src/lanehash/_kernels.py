"""JIT-compiled scalar kernels for the statistical harnesses.

The avalanche and round-count experiments hash hundreds of millions of
short messages; the interpreted reference implementations are far too
slow for that. These numba kernels reimplement HighwayHash-64 and the
SipHash family with scalar 64-bit locals and are verified bit-exact
against :mod:`lanehash.highway` and :mod:`lanehash.sip` by the test
suite. Import of this module requires numba; callers treat it as an
optional accelerator.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

from .highway import INIT0, INIT1

# Algorithm ids understood by the generic kernels.
ALGO_HIGHWAY64 = 0
ALGO_SIPHASH = 1
ALGO_SIPTREE = 2

_I00, _I01, _I02, _I03 = (uint64(x) for x in INIT0)
_I10, _I11, _I12, _I13 = (uint64(x) for x in INIT1)

_M32 = uint64(0xFFFFFFFF)


@njit(inline="always")
def _zip_lo(lo, hi):
    return (
        (((lo & uint64(0xFF000000)) | (hi & uint64(0xFF00000000))) >> uint64(24))
        | (lo & uint64(0xFF0000))
        | (((lo & uint64(0xFF0000000000)) | (hi & uint64(0xFF000000000000))) >> uint64(16))
        | ((lo & uint64(0xFF00)) << uint64(32))
        | ((hi & uint64(0xFF00000000000000)) >> uint64(8))
        | (lo << uint64(56))
    )


@njit(inline="always")
def _zip_hi(lo, hi):
    return (
        (((hi & uint64(0xFF000000)) | (lo & uint64(0xFF00000000))) >> uint64(24))
        | (hi & uint64(0xFF0000))
        | ((hi & uint64(0xFF0000000000)) >> uint64(16))
        | ((hi & uint64(0xFF00)) << uint64(24))
        | ((lo & uint64(0xFF000000000000)) >> uint64(8))
        | ((hi & uint64(0xFF)) << uint64(48))
        | (lo & uint64(0xFF00000000000000))
    )


@njit(inline="always")
def _rot32(x):
    return (x >> uint64(32)) | (x << uint64(32))


@njit(inline="always")
def _hw_update(p0, p1, p2, p3, s):
    v00, v01, v02, v03, v10, v11, v12, v13, m00, m01, m02, m03, m10, m11, m12, m13 = s
    v10 += p0 + m00
    m00 ^= (v10 & _M32) * (v00 >> uint64(32))
    v00 += m10
    m10 ^= (v00 & _M32) * (v10 >> uint64(32))
    v11 += p1 + m01
    m01 ^= (v11 & _M32) * (v01 >> uint64(32))
    v01 += m11
    m11 ^= (v01 & _M32) * (v11 >> uint64(32))
    v12 += p2 + m02
    m02 ^= (v12 & _M32) * (v02 >> uint64(32))
    v02 += m12
    m12 ^= (v02 & _M32) * (v12 >> uint64(32))
    v13 += p3 + m03
    m03 ^= (v13 & _M32) * (v03 >> uint64(32))
    v03 += m13
    m13 ^= (v03 & _M32) * (v13 >> uint64(32))
    v00 += _zip_lo(v10, v11)
    v01 += _zip_hi(v10, v11)
    v02 += _zip_lo(v12, v13)
    v03 += _zip_hi(v12, v13)
    v10 += _zip_lo(v00, v01)
    v11 += _zip_hi(v00, v01)
    v12 += _zip_lo(v02, v03)
    v13 += _zip_hi(v02, v03)
    return (v00, v01, v02, v03, v10, v11, v12, v13,
            m00, m01, m02, m03, m10, m11, m12, m13)


@njit(inline="always")
def _load_word(msg, off):
    x = uint64(0)
    for b in range(8):
        x |= uint64(msg[off + b]) << uint64(8 * b)
    return x


@njit(inline="always")
def _hw_state(keylanes, msg, rounds):
    """State after absorbing msg and running the finalization rounds."""
    k0, k1, k2, k3 = keylanes[0], keylanes[1], keylanes[2], keylanes[3]
    s = (
        k0 ^ _I00, k1 ^ _I01, k2 ^ _I02, k3 ^ _I03,
        _rot32(k0) ^ _I10, _rot32(k1) ^ _I11, _rot32(k2) ^ _I12, _rot32(k3) ^ _I13,
        _I00, _I01, _I02, _I03, _I10, _I11, _I12, _I13,
    )
    n = msg.shape[0]
    full = n & ~31
    for off in range(0, full, 32):
        s = _hw_update(
            _load_word(msg, off), _load_word(msg, off + 8),
            _load_word(msg, off + 16), _load_word(msg, off + 24), s,
        )
    r = n - full
    if r:
        rr = uint64(r)
        sh = uint64(r)
        inv = uint64(32 - r)
        v0 = [s[0], s[1], s[2], s[3]]
        v1 = [s[4], s[5], s[6], s[7]]
        for i in range(4):
            lo = (v0[i] & _M32) + rr
            hi = (v0[i] >> uint64(32)) + rr
            v0[i] = ((hi & _M32) << uint64(32)) | (lo & _M32)
            lo = v1[i] & _M32
            hi = v1[i] >> uint64(32)
            lo = ((lo << sh) | (lo >> inv)) & _M32
            hi = ((hi << sh) | (hi >> inv)) & _M32
            v1[i] = (hi << uint64(32)) | lo
        pk = np.zeros(32, np.uint8)
        whole = r & ~3
        for b in range(whole):
            pk[b] = msg[full + b]
        for b in range(whole, r):
            pk[28 + b - whole] = msg[full + b]
        s = (
            v0[0], v0[1], v0[2], v0[3], v1[0], v1[1], v1[2], v1[3],
            s[8], s[9], s[10], s[11], s[12], s[13], s[14], s[15],
        )
        s = _hw_update(
            _load_word(pk, 0), _load_word(pk, 8),
            _load_word(pk, 16), _load_word(pk, 24), s,
        )
    for _ in range(rounds):
        s = _hw_update(_rot32(s[2]), _rot32(s[3]), _rot32(s[0]), _rot32(s[1]), s)
    return s


@njit
def highway64(keylanes, msg, rounds):
    """HighwayHash-64 of a uint8 array with a given finalization depth."""
    s = _hw_state(keylanes, msg, rounds)
    return s[0] + s[4] + s[8] + s[12]


@njit
def highway256(keylanes, msg, rounds):
    """HighwayHash-256 as four 64-bit lanes (lane-wise state sum)."""
    s = _hw_state(keylanes, msg, rounds)
    return (
        s[0] + s[4] + s[8] + s[12],
        s[1] + s[5] + s[9] + s[13],
        s[2] + s[6] + s[10] + s[14],
        s[3] + s[7] + s[11] + s[15],
    )


@njit(inline="always")
def _sip_round(v0, v1, v2, v3):
    v0 += v1
    v1 = ((v1 << uint64(13)) | (v1 >> uint64(51))) ^ v0
    v0 = _rot32(v0)
    v2 += v3
    v3 = ((v3 << uint64(16)) | (v3 >> uint64(48))) ^ v2
    v0 += v3
    v3 = ((v3 << uint64(21)) | (v3 >> uint64(43))) ^ v0
    v2 += v1
    v1 = ((v1 << uint64(17)) | (v1 >> uint64(47))) ^ v2
    v2 = _rot32(v2)
    return v0, v1, v2, v3


@njit(inline="always")
def _sip_core(k0, k1, msg, n, c, d):
    v0 = k0 ^ uint64(0x736F6D6570736575)
    v1 = k1 ^ uint64(0x646F72616E646F6D)
    v2 = k0 ^ uint64(0x6C7967656E657261)
    v3 = k1 ^ uint64(0x7465646279746573)
    full = n & ~7
    for off in range(0, full, 8):
        m = _load_word(msg, off)
        v3 ^= m
        for _ in range(c):
            v0, v1, v2, v3 = _sip_round(v0, v1, v2, v3)
        v0 ^= m
    m = uint64(n & 0xFF) << uint64(56)
    for b in range(n - full):
        m |= uint64(msg[full + b]) << uint64(8 * b)
    v3 ^= m
    for _ in range(c):
        v0, v1, v2, v3 = _sip_round(v0, v1, v2, v3)
    v0 ^= m
    v2 ^= uint64(0xFF)
    for _ in range(d):
        v0, v1, v2, v3 = _sip_round(v0, v1, v2, v3)
    return v0 ^ v1 ^ v2 ^ v3


@njit
def siphash(keylanes, msg, c, d):
    """SipHash-c-d of a uint8 array; key words in keylanes[0..1]."""
    return _sip_core(keylanes[0], keylanes[1], msg, msg.shape[0], c, d)


@njit
def siptreehash(keylanes, msg, c, d):
    """4-lane interleaved tree SipHash of a uint8 array."""
    k0, k1 = keylanes[0], keylanes[1]
    n = msg.shape[0]
    nwords = ((n + 31) & ~31) // 8
    per_lane = nwords // 4
    lane_bytes = np.zeros(per_lane * 8, np.uint8)
    fold = np.zeros(32, np.uint8)
    for j in range(4):
        for w in range(per_lane):
            src = (4 * w + j) * 8
            for b in range(8):
                pos = src + b
                lane_bytes[8 * w + b] = msg[pos] if pos < n else uint64(0)
        h = _sip_core(k0, k1, lane_bytes, lane_bytes.shape[0], c, d)
        for b in range(8):
            fold[8 * j + b] = (h >> uint64(8 * b)) & uint64(0xFF)
    return _sip_core(k0, k1, fold, 32, c, d)


@njit(inline="always")
def _dispatch(algo, keylanes, msg, p1, p2):
    if algo == 0:
        return highway64(keylanes, msg, p1)
    elif algo == 1:
        return siphash(keylanes, msg, p1, p2)
    else:
        return siptreehash(keylanes, msg, p1, p2)


@njit
def avalanche_counts(algo, keylanes, msgs, p1, p2):
    """Per-(input bit, output bit) flip tallies over a message batch.

    msgs is (iterations, size) uint8 and is restored in place after each
    bit flip. Returns int64 counts of shape (8 * size, 64).
    """
    iters, size = msgs.shape
    counts = np.zeros((8 * size, 64), np.int64)
    for it in range(iters):
        msg = msgs[it]
        base = _dispatch(algo, keylanes, msg, p1, p2)
        for bit in range(8 * size):
            msg[bit >> 3] ^= uint64(1) << uint64(bit & 7)
            diff = _dispatch(algo, keylanes, msg, p1, p2) ^ base
            msg[bit >> 3] ^= uint64(1) << uint64(bit & 7)
            for out_bit in range(64):
                counts[bit, out_bit] += (diff >> uint64(out_bit)) & uint64(1)
    return counts


@njit
def hash_batch(algo, keylanes, msgs, p1, p2):
    """Hash every row of a (n, size) uint8 batch; returns (n,) uint64."""
    out = np.empty(msgs.shape[0], np.uint64)
    for i in range(msgs.shape[0]):
        out[i] = _dispatch(algo, keylanes, msgs[i], p1, p2)
    return out
