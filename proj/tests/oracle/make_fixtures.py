#!/usr/bin/env python3
"""Independent reference computations for the frozen test vectors.

Uses only hashlib (BLAKE2b) and the `cryptography` package (Argon2id,
AES-128-CBC, PKCS#7). Nothing here calls into the C++ code. Re-run to
regenerate tests/fixtures/golden.json:

    python3 tests/oracle/make_fixtures.py > tests/fixtures/golden.json
"""

import hashlib
import json
import struct
import sys

from cryptography.hazmat.primitives import padding
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.kdf.argon2 import Argon2id

LAMBDA = 128
ARGON2_SALT = b"archivesafe.kdf1"


class Stream:
    """DeterministicRandom: block i = BLAKE2b-512(LE64(seed) || LE64(i))."""

    def __init__(self, seed):
        self.seed = seed
        self.counter = 0
        self.buf = b""

    def take(self, n):
        while len(self.buf) < n:
            self.buf += hashlib.blake2b(
                struct.pack("<Q", self.seed) + struct.pack("<Q", self.counter)
            ).digest()
            self.counter += 1
        out, self.buf = self.buf[:n], self.buf[n:]
        return out


def suite_hash(suite, prefix, data):
    msg = bytes([prefix]) + data
    if suite == 2:
        return hashlib.blake2b(msg, digest_size=16).digest()
    if suite == 1:
        return Argon2id(salt=ARGON2_SALT, length=16, iterations=2, lanes=8,
                        memory_cost=102400).derive(msg)
    raise ValueError(suite)


def h1(suite, data):
    return suite_hash(suite, 0x01, data)


def h2(suite, data):
    return suite_hash(suite, 0x02, data)


def partial_seed(r, d):
    """Drop the first d bits of r (MSB-first), pack left-aligned."""
    bits = LAMBDA - d
    value = int.from_bytes(r, "big") & ((1 << bits) - 1)
    nbytes = (bits + 7) // 8
    if bits == 0:
        return bits, b""
    aligned = value << (nbytes * 8 - bits)
    return bits, aligned.to_bytes(nbytes, "big")


def aes_cbc(key, iv, m):
    padder = padding.PKCS7(128).padder()
    padded = padder.update(m) + padder.finalize()
    enc = Cipher(algorithms.AES(key), modes.CBC(iv)).encryptor()
    return enc.update(padded) + enc.finalize()


def container(suite, d, salted, layered, checksum, r, s, iv, body):
    bits, packed = partial_seed(r, d)
    flags = (1 if salted else 0) | (2 if layered else 0) | (4 if checksum else 0)
    out = b"ASAF" + bytes([1, suite, flags]) + struct.pack(">H", LAMBDA) + struct.pack(">H", bits)
    out += h1(suite, r)
    if salted:
        out += s
    out += packed + iv + struct.pack(">Q", len(body))
    if checksum:
        out += suite_hash(suite, 0x03, body)
    return out + body


def main():
    fx = {}

    fx["rng_seed42_first80"] = Stream(42).take(80).hex()

    zero = bytes(16)
    fx["kdf"] = {
        "suite2_h1_zero16": h1(2, zero).hex(),
        "suite2_h2_zero16": h2(2, zero).hex(),
        "suite1_h1_zero16": h1(1, zero).hex(),
        "suite1_h2_zero16": h2(1, zero).hex(),
    }

    vectors = []
    params = [(1, 8, 1, 16), (2, 64, 2, 32), (4, 256, 3, 16), (8, 1024, 2, 64),
              (8, 512, 1, 100), (3, 96, 2, 1024), (1, 100, 4, 65)]
    for i, (lanes, mem, it, tag) in enumerate(params):
        pwd = hashlib.blake2b(b"pwd%d" % i, digest_size=1 + 7 * i).digest()
        salt = hashlib.blake2b(b"salt%d" % i, digest_size=8 + i).digest()
        out = Argon2id(salt=salt, length=tag, iterations=it, lanes=lanes,
                       memory_cost=mem).derive(pwd)
        vectors.append({"lanes": lanes, "memory_kib": mem, "iterations": it, "tag_bytes": tag,
                        "password": pwd.hex(), "salt": salt.hex(), "tag": out.hex()})
    fx["argon2id"] = vectors

    key = bytes(range(16))
    iv = bytes(range(16, 32))
    msg = b"archivesafe known answer"
    fx["aes_cbc"] = {"key": key.hex(), "iv": iv.hex(), "plaintext": msg.hex(),
                     "body": aes_cbc(key, iv, msg).hex()}

    st = Stream(7)
    r = st.take(16)
    bits, packed = partial_seed(r, 8)
    fx["wrap_suite2_d8_seed7"] = {"seed": r.hex(), "checksum": h1(2, r).hex(),
                                  "key": h2(2, r).hex(), "partial_bits": bits,
                                  "partial_seed": packed.hex()}

    st = Stream(9)
    r, s = st.take(16), st.take(16)
    bits, packed = partial_seed(r, 12)
    fx["wrap_suite2_d12_salted_seed9"] = {"seed": r.hex(), "salt": s.hex(),
                                          "checksum": h1(2, r).hex(), "key": h2(2, r + s).hex(),
                                          "partial_bits": bits, "partial_seed": packed.hex()}

    st = Stream(11)
    r, s, iv = st.take(16), st.take(16), st.take(16)
    m = b"golden container fixture\n"
    body = aes_cbc(h2(2, r + s), iv, m)
    fx["container_suite2_d12_salted_checksum_seed11"] = {
        "plaintext": m.hex(), "difficulty": 12,
        "bytes": container(2, 12, True, False, True, r, s, iv, body).hex()}

    st = Stream(13)
    r, iv = st.take(16), st.take(16)
    body = aes_cbc(h2(2, r), iv, b"")
    fx["container_suite2_d0_plain_seed13"] = {
        "plaintext": "", "difficulty": 0,
        "bytes": container(2, 0, False, False, False, r, None, iv, body).hex()}

    json.dump(fx, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
