#!/usr/bin/env python3
"""Regenerates the golden vectors embedded in tests/test_chacha20.cpp and
tests/test_keyschedule.cpp using an independent ChaCha20 implementation
(the `cryptography` package). Run from the repo root:

    python3 scripts/make_golden.py
"""
import math
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms


def chacha_keystream(key: bytes, nonce12: bytes, nbytes: int, counter: int = 0) -> bytes:
    full_nonce = counter.to_bytes(4, "little") + nonce12
    enc = Cipher(algorithms.ChaCha20(key, full_nonce), mode=None).encryptor()
    return enc.update(b"\x00" * nbytes)


class Stream:
    """Sequential keystream reader with unbiased bounded draws."""

    def __init__(self, key: bytes):
        self.key = key
        self.buf = b""
        self.off = 0
        self.produced = 0

    def _refill(self, n: int) -> None:
        chunk = max(n, 4096)
        new = chacha_keystream(self.key, b"\x00" * 12, self.produced + chunk)[self.produced:]
        self.buf = self.buf[self.off:] + new
        self.off = 0
        self.produced += chunk

    def bytes(self, n: int) -> bytes:
        while len(self.buf) - self.off < n:
            self._refill(n)
        out = self.buf[self.off:self.off + n]
        self.off += n
        return out

    def u32(self) -> int:
        return int.from_bytes(self.bytes(4), "little")

    def uniform(self, m: int) -> int:
        limit = (2**32 // m) * m
        while True:
            w = self.u32()
            if w < limit:
                return w % m


def fisher_yates(stream: Stream, n: int):
    a = list(range(n))
    for i in range(n - 1, 0, -1):
        j = stream.uniform(i + 1)
        a[i], a[j] = a[j], a[i]
    return a


MASTER = bytes(range(32))
NONCE = bytes(range(12))

print("== chacha20 keystream, key=00..1f nonce=00..0b counter=0, first 64 bytes ==")
print(chacha_keystream(MASTER, NONCE, 64).hex())

print("== step keys (keystream bytes [32i,32i+32)) ==")
ks = chacha_keystream(MASTER, NONCE, 128)
subkeys = [ks[32 * i:32 * i + 32] for i in range(4)]
for i, k in enumerate(subkeys):
    print(f"k{i + 1} = {k.hex()}")

print("== golden permutation, k1 stream, n=4 ==")
print(fisher_yates(Stream(subkeys[0]), 4))
print("== golden permutation, k1 stream, n=16 ==")
print(fisher_yates(Stream(subkeys[0]), 16))

print("== golden poses, k2 stream, n=3 (idx = rot + 4*flip) ==")
s2 = Stream(subkeys[1])
print([s2.uniform(8) for _ in range(3)])

print("== golden polarity bits, k3 stream, n=8 ==")
s3 = Stream(subkeys[2])
print([s3.uniform(2) for _ in range(8)])

print("== golden channel perms, k4 stream, n=5 (lexicographic index) ==")
s4 = Stream(subkeys[3])
print([s4.uniform(6) for _ in range(5)])


def round_half_away(x: float) -> int:
    return math.floor(x + 0.5) if x >= 0 else math.ceil(x - 0.5)


def clamp8(v: int) -> int:
    return 0 if v < 0 else 255 if v > 255 else v


def rgb_to_ycbcr(r, g, b):
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = -0.1687 * r - 0.3313 * g + 0.5 * b + 128.0
    cr = 0.5 * r - 0.4187 * g - 0.0813 * b + 128.0
    return tuple(clamp8(round_half_away(v)) for v in (y, cb, cr))


def ycbcr_to_rgb(y, cb, cr):
    r = y + 1.402 * (cr - 128.0)
    g = y - 0.3441 * (cb - 128.0) - 0.7141 * (cr - 128.0)
    b = y + 1.772 * (cb - 128.0)
    return tuple(clamp8(round_half_away(v)) for v in (r, g, b))


print("== color round-trip max error over the 16x16x16 lattice ==")
worst = 0
for r in range(0, 256, 17):
    for g in range(0, 256, 17):
        for b in range(0, 256, 17):
            rr, gg, bb = ycbcr_to_rgb(*rgb_to_ycbcr(r, g, b))
            worst = max(worst, abs(rr - r), abs(gg - g), abs(bb - b))
print("max per-channel error:", worst)
print("spot checks:", rgb_to_ycbcr(255, 0, 0), rgb_to_ycbcr(128, 128, 128), rgb_to_ycbcr(255, 255, 255))
