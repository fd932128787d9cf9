#!/usr/bin/env python3
"""Reference digests for the hash transforms, computed with hashlib/mmh3/zlib.

Output: tests/data/digest_vectors.json (hex of the raw big-endian digest).
Conventions frozen here:
  * Murmur3-32  = x86_32, seed 0, 4 bytes big-endian.
  * Murmur3-64  = first 64-bit word (h1) of x64_128, seed 0, big-endian.
  * Murmur3-128 = x64_128 h1 || h2, each big-endian (murmurhash3js hex order).
  * CRC32 / Adler-32 = 4 bytes big-endian.
"""
import hashlib, json, sys, zlib
import mmh3

INPUTS = [
    b"",
    b"abc",
    b"example.email@domain.com",
    b"098765432109",
    b"example_text_area",
    b"ExamplePassword1!",
    b"example-website.com",
    b"The quick brown fox jumps over the lazy dog",
    bytes(range(256)),
    b"\x1f\x8b\x08\x00" + b"\xff" * 61,
]

def m3_32(b):  return mmh3.hash(b, 0, signed=False).to_bytes(4, "big")
def m3_128(b):
    h1, h2 = mmh3.hash64(b, 0, signed=False)
    return h1.to_bytes(8, "big") + h2.to_bytes(8, "big")
def m3_64(b):  return m3_128(b)[:8]

HASHES = {
    "MD5": lambda b: hashlib.md5(b).digest(),
    "SHA-1": lambda b: hashlib.sha1(b).digest(),
    "SHA-224": lambda b: hashlib.sha224(b).digest(),
    "SHA-256": lambda b: hashlib.sha256(b).digest(),
    "SHA-384": lambda b: hashlib.sha384(b).digest(),
    "SHA-512": lambda b: hashlib.sha512(b).digest(),
    "SHA3-224": lambda b: hashlib.sha3_224(b).digest(),
    "SHA3-256": lambda b: hashlib.sha3_256(b).digest(),
    "SHA3-384": lambda b: hashlib.sha3_384(b).digest(),
    "SHA3-512": lambda b: hashlib.sha3_512(b).digest(),
    "Murmur3-32": m3_32,
    "Murmur3-64": m3_64,
    "Murmur3-128": m3_128,
    "CRC32": lambda b: (zlib.crc32(b) & 0xFFFFFFFF).to_bytes(4, "big"),
    "Adler-32": lambda b: (zlib.adler32(b) & 0xFFFFFFFF).to_bytes(4, "big"),
}

out = {"inputs_hex": [i.hex() for i in INPUTS],
       "digests": {name: [f(i).hex() for i in INPUTS] for name, f in HASHES.items()}}
json.dump(out, open(sys.argv[1], "w"), indent=1)
