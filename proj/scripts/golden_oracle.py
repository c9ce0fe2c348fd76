#!/usr/bin/env python3
"""Independent reference computations for the golden values frozen in tests/.

Everything here is implemented directly on hashlib/hmac/zlib so it shares no
code with the C++ library. Run it after touching fixtures and update the
frozen constants if anything changes.
"""
import hashlib
import hmac
import json
import os
import re
import struct
import zlib

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIX = os.path.join(ROOT, "fixtures")


def hkdf_sha256(ikm, info, salt=b"", length=32):
    prk = hmac.new(salt if salt else bytes(32), ikm, hashlib.sha256).digest()
    okm, t, i = b"", b"", 1
    while len(okm) < length:
        t = hmac.new(prk, t + info + bytes([i]), hashlib.sha256).digest()
        okm += t
        i += 1
    return okm[:length]


# ------------------------------------------------------------- mnemonic ----
WORDS = open(os.path.join(FIX, "wordlist-2048.txt")).read().split()
assert len(WORDS) == 2048 and len(set(WORDS)) == 2048


def checksum_nibble(entropy):
    return hashlib.sha256(entropy).digest()[0] >> 4


def encode_mnemonic(entropy):
    assert len(entropy) == 16
    payload = int.from_bytes(entropy, "big") << 4 | checksum_nibble(entropy)
    return [WORDS[(payload >> (11 * (11 - i))) & 0x7FF] for i in range(12)]


def parse_mnemonic(words):
    payload = 0
    for w in words:
        payload = payload << 11 | WORDS.index(w)
    entropy = (payload >> 4).to_bytes(16, "big")
    if payload & 0xF != checksum_nibble(entropy):
        return None
    return entropy


zero_phrase = encode_mnemonic(bytes(16))
print("zero-entropy checksum nibble:", checksum_nibble(bytes(16)))
print("zero-entropy phrase:", " ".join(zero_phrase))

fixture_entropy = bytes(range(16))  # 000102...0f
fixture_phrase = encode_mnemonic(fixture_entropy)
print("fixture entropy phrase:", " ".join(fixture_phrase))
assert parse_mnemonic(fixture_phrase) == fixture_entropy

# Enumerate single-word swaps until one checksum failure and one collision.
fail_case = collide_case = None
for pos in range(12):
    for w in WORDS:
        if w == fixture_phrase[pos]:
            continue
        trial = list(fixture_phrase)
        trial[pos] = w
        got = parse_mnemonic(trial)
        if got is None and fail_case is None:
            fail_case = (pos, w)
        if got is not None and collide_case is None:
            collide_case = (pos, w, got.hex())
        if fail_case and collide_case:
            break
    if fail_case and collide_case:
        break
print("swap failing  (pos, word):", fail_case)
print("swap colliding (pos, word, parsed-entropy):", collide_case)

# -------------------------------------------------------------- time key ----
window = struct.pack(">QQ", 0, 3600)
golden = hkdf_sha256(bytes(32), b"timekey-v1" + window + bytes(16))
print("timekey golden:", golden.hex())

k_auth = hkdf_sha256(bytes(16), b"auth-v1")
commitment = hashlib.sha256(k_auth).digest()
nonce = bytes.fromhex("000102030405060708090a0b0c0d0e0f")
mask = hmac.new(commitment, nonce, hashlib.sha256).digest()
proof = bytes(a ^ b for a, b in zip(k_auth, mask))
print("auth commitment:", commitment.hex())
print("auth proof for fixture nonce:", proof.hex())

# --------------------------------------------------------- 3-gram jaccard ----
def trigrams(text):
    words = re.sub(r"[^a-z0-9 ]", " ", text.lower().replace("\n", " ")).split()
    return {" ".join(words[i:i + 3]) for i in range(len(words) - 2)}


salary = open(os.path.join(FIX, "corpora", "tenant_h", "salary.txt")).read()
para = open(os.path.join(FIX, "paraphrase", "salary_paraphrase.txt")).read()
a, b = trigrams(para), trigrams(salary)
jac = len(a & b) / len(a | b)
containment = len(a & b) / len(b)
print("paraphrase jaccard vs salary doc: %d/%d = %.6f" % (len(a & b), len(a | b), jac))
print("paraphrase containment of doc 3-grams: %d/%d = %.6f"
      % (len(a & b), len(b), containment))
assert jac >= 0.5 and containment >= 0.5
assert "CNRY-" not in para

refusal = "This request is outside your tenant's authorized scope."
for t in ("h", "f", "r"):
    for fn in os.listdir(os.path.join(FIX, "corpora", "tenant_" + t)):
        doc = open(os.path.join(FIX, "corpora", "tenant_" + t, fn)).read()
        assert not (trigrams(refusal) & trigrams(doc)), (t, fn)
print("refusal template shares no 3-grams with any corpus: ok")

# ------------------------------------------------------------ pdf / docx ----
def pdf_text(path):
    raw = open(path, "rb").read()
    out = []
    for m in re.finditer(rb"stream\r?\n(.*?)endstream", raw, re.S):
        data = m.group(1)
        try:
            data = zlib.decompress(data)
        except zlib.error:
            pass
        for op in re.finditer(rb"\((?:[^()\\]|\\.)*\)\s*Tj|T\*", data):
            tok = op.group(0)
            if tok == b"T*":
                out.append("\n")
            else:
                lit = re.match(rb"\((.*)\)", tok, re.S).group(1)
                out.append(lit.decode("latin-1"))
    text = "".join(out)
    return text + ("\n" if text and not text.endswith("\n") else "")


got = pdf_text(os.path.join(FIX, "documents", "review.pdf"))
want = open(os.path.join(FIX, "documents", "review.pdf.golden.txt")).read()
assert got == want, (got, want)
print("pdf golden text verified")

import zipfile

with zipfile.ZipFile(os.path.join(FIX, "documents", "minutes.docx")) as z:
    xml = z.read("word/document.xml").decode()
paras = re.findall(r"<w:t[^>]*>(.*?)</w:t>", xml)
assert "\n".join(paras) + "\n" == open(
    os.path.join(FIX, "documents", "minutes.docx.golden.txt")).read()
print("docx golden text verified")

# --------------------------------------------------------------- metrics ----
print("ctlr example: (0.1 + 5*0)/6 =", (0.1 + 0) / 6)
rounded = [round(100 - 100 * r) for r in (3 / 30, 4 / 30, 1 / 2, 2 / 10)]
print("table-3 rounded successes:", rounded, "avg:", sum(rounded) / 4)
print("unrounded successes avg:", sum(100 - 100 * r for r in (3 / 30, 4 / 30, 1 / 2, 2 / 10)) / 4)
print("combined defense 51/55 =", 51 / 55)
