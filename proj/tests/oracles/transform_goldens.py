#!/usr/bin/env python3
"""Golden outputs for encoders/compressors from reference Python tooling.

Parameter sets frozen here (must match the C++ engine):
  Deflate: raw deflate, level 6, wbits -15      Zlib: level 6
  Gzip:    gzip.compress(level 9, mtime 0)      Brotli: quality 11, lgwin 22
  LZ-string: lzstring compressToBase64 / compressToUTF16 over latin-1 chars
  LZW:     8-bit initial dictionary, 12-bit codes packed MSB-first,
           dictionary frozen at 4096 entries, no clear code.
Run with PYTHONPATH pointing at a `future` shim if lzstring needs it.
"""
import base64, codecs, gzip, json, sys, urllib.parse, zlib
import brotli, lzstring

INPUTS = [b"A", b"example", b"example.email@domain.com", b"example_text_area",
          b"ExamplePassword1!", b"<a href='x'>&\"</a>", b"\x00\x00\x01\xfe\xff"]

def b58(b):
    alpha = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
    n = int.from_bytes(b, "big"); s = ""
    while n:
        n, r = divmod(n, 58); s = alpha[r] + s
    pad = len(b) - len(b.lstrip(b"\0"))
    return ("1" * pad + s).encode()

def html(b):
    m = {ord("&"): "&amp;", ord("<"): "&lt;", ord(">"): "&gt;", ord('"'): "&quot;", ord("'"): "&#39;"}
    return "".join(m.get(c, chr(c) if c < 0x80 else "&#%d;" % c) for c in b).encode()

def lzw(b):
    d = {bytes([i]): i for i in range(256)}; nxt = 256; w = b""; codes = []
    for c in b:
        wc = w + bytes([c])
        if wc in d: w = wc; continue
        codes.append(d[w])
        if nxt < 4096: d[wc] = nxt; nxt += 1
        w = bytes([c])
    if w: codes.append(d[w])
    bits = "".join(format(c, "012b") for c in codes)
    bits += "0" * (-len(bits) % 8)
    return bytes(int(bits[i:i+8], 2) for i in range(0, len(bits), 8))

def deflate(b):
    c = zlib.compressobj(6, zlib.DEFLATED, -15); return c.compress(b) + c.flush()

L = lzstring.LZString()
ENC = {
    "Base16": lambda b: base64.b16encode(b),
    "Base32": lambda b: base64.b32encode(b),
    "Base58": b58,
    "Base64": lambda b: base64.b64encode(b),
    "URL-encode": lambda b: urllib.parse.quote(b, safe="-_.!~*'()").encode(),
    "ROT13": lambda b: codecs.encode(b.decode("latin-1"), "rot13").encode("latin-1"),
    "HTML-entity": html,
    "binary-string": lambda b: "".join(format(c, "08b") for c in b).encode(),
    "Deflate": deflate,
    "Gzip": lambda b: gzip.compress(b, 9, mtime=0),
    "Zlib": lambda b: zlib.compress(b, 6),
    "Brotli": lambda b: brotli.compress(b, quality=11, lgwin=22),
    "LZ-string/base64": lambda b: L.compressToBase64(b.decode("latin-1")).encode(),
    "LZ-string/utf16": lambda b: L.compressToUTF16(b.decode("latin-1")).encode("utf-8"),
    "LZW": lzw,
}
out = {"inputs_hex": [i.hex() for i in INPUTS],
       "outputs_hex": {k: [f(i).hex() for i in INPUTS] for k, f in ENC.items()},
       "gzip_base64_example_text_area": base64.b64encode(gzip.compress(b"example_text_area", 9, mtime=0)).decode()}
json.dump(out, open(sys.argv[1], "w"), indent=1)
