"""Asymmetric crypto backing certificates: RSA keys, signatures, hybrid encryption.

Key generation accepts an optional random.Random so the whole artifact can be
replayed deterministically under a seed; the stock `cryptography` generator
has no seeding hook, so primes are drawn from the RNG and finished with
gmpy2.next_prime. Signatures use PKCS#1 v1.5 (deterministic), encryption is
hybrid RSA-OAEP + AES-256-GCM, and private keys at rest are sealed under a
scrypt-derived key.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from cryptography.exceptions import InvalidSignature, InvalidTag, UnsupportedAlgorithm
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import padding, rsa
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.scrypt import Scrypt

from .errors import DecryptionFailed, WrongPassphrase

PUBLIC_EXPONENT = 65537

# scrypt parameters, fixed project-wide
_SCRYPT_N = 2**14
_SCRYPT_R = 8
_SCRYPT_P = 1

_OAEP = padding.OAEP(
    mgf=padding.MGF1(algorithm=hashes.SHA256()),
    algorithm=hashes.SHA256(),
    label=None,
)


def _random_bytes(n: int, rng: random.Random | None) -> bytes:
    return os.urandom(n) if rng is None else rng.randbytes(n)


def _draw_prime(bits: int, rng: random.Random) -> int:
    # Top two bits set so p*q lands on exactly `2*bits` bits.
    cand = rng.getrandbits(bits) | (1 << (bits - 1)) | (1 << (bits - 2)) | 1
    return int(gmpy2.next_prime(cand))


def generate_rsa_key(bits: int, rng: random.Random | None = None) -> rsa.RSAPrivateKey:
    """Generate an RSA private key of `bits` modulus size.

    With an rng the same seed always yields the same key; without one the
    primes are drawn from OS entropy through a throwaway Random.
    """
    if rng is None:
        rng = random.Random(int.from_bytes(os.urandom(32), "big"))
    half = bits // 2
    while True:
        p = _draw_prime(half, rng)
        q = _draw_prime(half, rng)
        if p == q:
            continue
        if gmpy2.gcd(PUBLIC_EXPONENT, (p - 1) * (q - 1)) != 1:
            continue
        n = p * q
        if n.bit_length() != bits:
            continue
        break
    if p < q:
        p, q = q, p
    d = int(gmpy2.invert(PUBLIC_EXPONENT, (p - 1) * (q - 1)))
    numbers = rsa.RSAPrivateNumbers(
        p=p,
        q=q,
        d=d,
        dmp1=d % (p - 1),
        dmq1=d % (q - 1),
        iqmp=int(gmpy2.invert(q, p)),
        public_numbers=rsa.RSAPublicNumbers(PUBLIC_EXPONENT, n),
    )
    return numbers.private_key()


def public_key_der(key: rsa.RSAPrivateKey) -> bytes:
    """Canonical public-key encoding: DER SubjectPublicKeyInfo."""
    return key.public_key().public_bytes(
        serialization.Encoding.DER,
        serialization.PublicFormat.SubjectPublicKeyInfo,
    )


def load_public_key(der: bytes) -> rsa.RSAPublicKey:
    return serialization.load_der_public_key(der)


def sign(key: rsa.RSAPrivateKey, data: bytes) -> bytes:
    return key.sign(data, padding.PKCS1v15(), hashes.SHA256())


def verify(public_der: bytes, data: bytes, signature: bytes) -> bool:
    try:
        load_public_key(public_der).verify(
            signature, data, padding.PKCS1v15(), hashes.SHA256()
        )
    except (InvalidSignature, ValueError, TypeError, AttributeError, UnsupportedAlgorithm):
        return False
    return True


def encrypt(public_der: bytes, plaintext: bytes, rng: random.Random | None = None) -> bytes:
    """Hybrid encryption: RSA-OAEP wraps a fresh AES-256 session key."""
    session_key = _random_bytes(32, rng)
    nonce = _random_bytes(12, rng)
    wrapped = load_public_key(public_der).encrypt(session_key, _OAEP)
    body = AESGCM(session_key).encrypt(nonce, plaintext, None)
    return len(wrapped).to_bytes(2, "big") + wrapped + nonce + body


def decrypt(key: rsa.RSAPrivateKey, blob: bytes) -> bytes:
    try:
        wlen = int.from_bytes(blob[:2], "big")
        wrapped, nonce, body = blob[2 : 2 + wlen], blob[2 + wlen : 2 + wlen + 12], blob[2 + wlen + 12 :]
        session_key = key.decrypt(wrapped, _OAEP)
        return AESGCM(session_key).decrypt(nonce, body, None)
    except (ValueError, InvalidTag, IndexError) as exc:
        raise DecryptionFailed(str(exc) or "ciphertext rejected") from None


@dataclass(frozen=True)
class EncryptedPrivateKey:
    """Private key DER sealed with AES-GCM under a scrypt-derived key."""

    salt: bytes
    nonce: bytes
    ciphertext: bytes

    def to_bytes(self) -> bytes:
        return self.salt + self.nonce + self.ciphertext

    @classmethod
    def from_bytes(cls, raw: bytes) -> "EncryptedPrivateKey":
        if len(raw) < 16 + 12 + 16:
            raise ValueError("encrypted key blob too short")
        return cls(salt=raw[:16], nonce=raw[16:28], ciphertext=raw[28:])


def _derive_key(passphrase: str, salt: bytes) -> bytes:
    kdf = Scrypt(salt=salt, length=32, n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P)
    return kdf.derive(passphrase.encode("utf-8"))


def lock_private_key(
    key: rsa.RSAPrivateKey, passphrase: str, rng: random.Random | None = None
) -> EncryptedPrivateKey:
    der = key.private_bytes(
        serialization.Encoding.DER,
        serialization.PrivateFormat.PKCS8,
        serialization.NoEncryption(),
    )
    salt = _random_bytes(16, rng)
    nonce = _random_bytes(12, rng)
    ciphertext = AESGCM(_derive_key(passphrase, salt)).encrypt(nonce, der, None)
    return EncryptedPrivateKey(salt=salt, nonce=nonce, ciphertext=ciphertext)


@lru_cache(maxsize=64)
def _unlock_cached(blob: bytes, passphrase: str) -> rsa.RSAPrivateKey:
    enc = EncryptedPrivateKey.from_bytes(blob)
    try:
        der = AESGCM(_derive_key(passphrase, enc.salt)).decrypt(enc.nonce, enc.ciphertext, None)
    except InvalidTag:
        raise WrongPassphrase("passphrase does not unlock this key") from None
    return serialization.load_der_private_key(der, password=None)


def unlock_private_key(enc: EncryptedPrivateKey, passphrase: str) -> rsa.RSAPrivateKey:
    # Agent-style in-process cache: the KDF is deliberately slow, so repeated
    # unlocks within one process reuse the derived key object.
    return _unlock_cached(enc.to_bytes(), passphrase)
