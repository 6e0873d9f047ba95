"""Bitcoin-backed PGP-style certificates.

A certificate carries the usual PGP fields (holder identity, public key,
validity period, preferred symmetric algorithm) plus two Bitcoin addresses
hidden in the comment field as "<id-address>|<revocation-address>": the
first receives identity-verification stakes, the second marks the
certificate revoked once the owner pays it from the first.

Certificates are immutable values. The self-signature covers a canonical
byte encoding of every field except the endorsement list, so endorsements
can be appended (producing a new value) without invalidating anything.
"""

from __future__ import annotations

import base64
import enum
import random
import time
from dataclasses import dataclass, replace
from functools import cached_property
from hashlib import sha256

from . import crypto
from .errors import (
    BadSignatureEncoding,
    InvalidAddress,
    MalformedArmor,
    MalformedComment,
    UnsupportedKeyLength,
)
from .ledger import Wallet, validate_address

CERT_VERSION = "BTCPGP-1"
ALLOWED_KEY_LENGTHS = (1024, 2048, 4096, 8192)
DEFAULT_VALIDITY_SECONDS = 2 * 365 * 24 * 3600  # two years
DEFAULT_SYMMETRIC_ALG = "AES-256-equivalent"

ARMOR_BEGIN = "-----BEGIN BTCPGP CERTIFICATE-----"
ARMOR_END = "-----END BTCPGP CERTIFICATE-----"
ARMOR_WIDTH = 64


class TrustLevel(enum.IntEnum):
    """PGP endorsement weights."""

    NONE = 0
    MARGINAL = 1
    COMPLETE = 2


@dataclass(frozen=True)
class KeyId:
    """8-byte key identifier: the low 8 bytes of the public-key hash."""

    id64: bytes

    def __post_init__(self):
        if len(self.id64) != 8:
            raise ValueError("KeyId must be exactly 8 bytes")

    @property
    def short3(self) -> bytes:
        """Low-order 3 bytes; the value embedded in key-server fragment headers."""
        return self.id64[-3:]

    @property
    def hex(self) -> str:
        return self.id64.hex()

    @classmethod
    def from_public_key(cls, public_der: bytes) -> "KeyId":
        return cls(sha256(public_der).digest()[-8:])

    @classmethod
    def from_hex(cls, text: str) -> "KeyId":
        return cls(bytes.fromhex(text))


@dataclass(frozen=True)
class CertificateParams:
    name: str
    email: str
    passphrase: str
    key_length: int = 2048
    key_type: str = "RSA"


@dataclass(frozen=True)
class Endorsement:
    """A third party's signature over a certificate plus its incentive fee.

    The endorser's public key rides along so the signature stays verifiable
    without a key lookup; signed_at records when the signature was produced,
    which is how signing-before-fee ordering stays observable. fee_txid is
    None when signing succeeded but the fee payment failed.
    """

    endorser_keyid: KeyId
    endorser_address: str
    trust_level: TrustLevel
    endorser_public_key: bytes
    signature: bytes
    signed_at: int
    fee_txid: bytes | None = None


@dataclass(frozen=True)
class BitcoinPgpCertificate:
    version: str
    holder_name: str
    holder_email: str
    comment: str
    public_key: bytes  # DER SubjectPublicKeyInfo
    algorithm: str
    key_length: int
    validity_start: int
    validity_end: int
    preferred_symmetric_alg: str
    self_signature: bytes = b""
    endorsements: tuple[Endorsement, ...] = ()
    # set only for locally generated certificates; never serialized
    encrypted_private_key: crypto.EncryptedPrivateKey | None = None

    @cached_property
    def keyid(self) -> KeyId:
        return KeyId.from_public_key(self.public_key)

    def with_endorsement(self, endorsement: Endorsement) -> "BitcoinPgpCertificate":
        return replace(self, endorsements=self.endorsements + (endorsement,))

    def same_certificate(self, other: "BitcoinPgpCertificate") -> bool:
        return canonical_bytes(self) == canonical_bytes(other)


# --- canonical encoding -----------------------------------------------------

def _lp(data: bytes, width: int = 4) -> bytes:
    return len(data).to_bytes(width, "big") + data


def _lps(text: str) -> bytes:
    return _lp(text.encode("utf-8"), 2)


def canonical_bytes(cert: BitcoinPgpCertificate) -> bytes:
    """Deterministic encoding of all fields except endorsements and the
    self-signature; this is what gets signed."""
    return b"".join(
        (
            _lps(cert.version),
            _lps(cert.holder_name),
            _lps(cert.holder_email),
            _lps(cert.comment),
            _lp(cert.public_key),
            _lps(cert.algorithm),
            cert.key_length.to_bytes(4, "big"),
            cert.validity_start.to_bytes(8, "big"),
            cert.validity_end.to_bytes(8, "big"),
            _lps(cert.preferred_symmetric_alg),
        )
    )


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise ValueError("truncated field")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def take_int(self, width: int) -> int:
        return int.from_bytes(self.take(width), "big")

    def take_lp(self, width: int = 4) -> bytes:
        return self.take(self.take_int(width))

    def take_str(self) -> str:
        return self.take_lp(2).decode("utf-8")

    def done(self) -> bool:
        return self.pos == len(self.data)


def _decode_canonical(data: bytes) -> BitcoinPgpCertificate:
    r = _Reader(data)
    cert = BitcoinPgpCertificate(
        version=r.take_str(),
        holder_name=r.take_str(),
        holder_email=r.take_str(),
        comment=r.take_str(),
        public_key=r.take_lp(),
        algorithm=r.take_str(),
        key_length=r.take_int(4),
        validity_start=r.take_int(8),
        validity_end=r.take_int(8),
        preferred_symmetric_alg=r.take_str(),
    )
    if not r.done():
        raise ValueError("trailing bytes in canonical certificate")
    return cert


def certificate_body_bytes(cert: BitcoinPgpCertificate) -> bytes:
    """Binary body stored in armor and on the key server: canonical bytes,
    self-signature, endorsement records."""
    parts = [_lp(canonical_bytes(cert)), _lp(cert.self_signature)]
    parts.append(len(cert.endorsements).to_bytes(2, "big"))
    for e in cert.endorsements:
        parts.append(e.endorser_keyid.id64)
        parts.append(_lps(e.endorser_address))
        parts.append(bytes([int(e.trust_level)]))
        parts.append(e.signed_at.to_bytes(8, "big"))
        parts.append(_lp(e.endorser_public_key))
        parts.append(_lp(e.signature))
        if e.fee_txid is None:
            parts.append(b"\x00")
        else:
            parts.append(b"\x01" + e.fee_txid)
    return b"".join(parts)


def parse_certificate_body(body: bytes) -> BitcoinPgpCertificate:
    r = _Reader(body)
    try:
        canonical = r.take_lp()
        cert = _decode_canonical(canonical)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedArmor(f"unreadable certificate body: {exc}") from None
    try:
        self_signature = r.take_lp()
    except ValueError as exc:
        raise BadSignatureEncoding(str(exc)) from None
    endorsements = []
    try:
        count = r.take_int(2)
        for _ in range(count):
            keyid = KeyId(r.take(8))
            address = r.take_str()
            level = TrustLevel(r.take_int(1))
            signed_at = r.take_int(8)
            public_key = r.take_lp()
            try:
                signature = r.take_lp()
            except ValueError as exc:
                raise BadSignatureEncoding(str(exc)) from None
            fee_txid = r.take(32) if r.take_int(1) else None
            endorsements.append(
                Endorsement(keyid, address, level, public_key, signature, signed_at, fee_txid)
            )
        if not r.done():
            raise ValueError("trailing bytes after endorsements")
    except BadSignatureEncoding:
        raise
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedArmor(f"unreadable endorsement block: {exc}") from None
    return replace(cert, self_signature=self_signature, endorsements=tuple(endorsements))


# --- armor ------------------------------------------------------------------

def serialize_certificate(cert: BitcoinPgpCertificate) -> str:
    body = base64.b64encode(certificate_body_bytes(cert)).decode("ascii")
    lines = [ARMOR_BEGIN]
    lines.extend(body[i : i + ARMOR_WIDTH] for i in range(0, len(body), ARMOR_WIDTH))
    lines.append(ARMOR_END)
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> BitcoinPgpCertificate:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if not lines or lines[0] != ARMOR_BEGIN:
        raise MalformedArmor("missing BEGIN line")
    if ARMOR_END not in lines:
        raise MalformedArmor("missing END line")
    end = lines.index(ARMOR_END)
    b64 = "".join(lines[1:end])
    try:
        body = base64.b64decode(b64, validate=True)
    except (ValueError, base64.binascii.Error) as exc:
        raise MalformedArmor(f"invalid base64 body: {exc}") from None
    return parse_certificate_body(body)


# --- operations ---------------------------------------------------------------

def generate_certificate(
    params: CertificateParams,
    wallet: Wallet,
    rng: random.Random | None = None,
    now: int | None = None,
    validity_seconds: int = DEFAULT_VALIDITY_SECONDS,
) -> BitcoinPgpCertificate:
    """Create a self-signed certificate with fresh identity-verification and
    revocation addresses registered in `wallet`."""
    if params.key_length not in ALLOWED_KEY_LENGTHS:
        raise UnsupportedKeyLength(
            f"key length {params.key_length} not in {ALLOWED_KEY_LENGTHS}"
        )
    id_address = wallet.new_address(rng)
    rev_address = wallet.new_address(rng)
    key = crypto.generate_rsa_key(params.key_length, rng)
    start = int(time.time()) if now is None else int(now)
    cert = BitcoinPgpCertificate(
        version=CERT_VERSION,
        holder_name=params.name,
        holder_email=params.email,
        comment=f"{id_address}|{rev_address}",
        public_key=crypto.public_key_der(key),
        algorithm=params.key_type,
        key_length=params.key_length,
        validity_start=start,
        validity_end=start + validity_seconds,
        preferred_symmetric_alg=DEFAULT_SYMMETRIC_ALG,
    )
    return replace(
        cert,
        self_signature=crypto.sign(key, canonical_bytes(cert)),
        encrypted_private_key=crypto.lock_private_key(key, params.passphrase, rng),
    )


def verify_self_signature(cert: BitcoinPgpCertificate) -> bool:
    return crypto.verify(cert.public_key, canonical_bytes(cert), cert.self_signature)


def attach_private_key(
    cert: BitcoinPgpCertificate, enc: crypto.EncryptedPrivateKey
) -> BitcoinPgpCertificate:
    """Reunite a parsed (public) certificate with its stored key material."""
    return replace(cert, encrypted_private_key=enc)


def extract_addresses(cert: BitcoinPgpCertificate) -> tuple[str, str]:
    """Split the comment into (id-verification address, revocation address)."""
    parts = cert.comment.split("|")
    if len(parts) != 2:
        raise MalformedComment(
            f"comment must hold exactly two addresses, found {len(parts)} parts"
        )
    id_address, rev_address = parts
    try:
        validate_address(id_address)
        validate_address(rev_address)
    except InvalidAddress as exc:
        raise MalformedComment(str(exc)) from None
    if id_address == rev_address:
        raise MalformedComment("identity and revocation addresses must differ")
    return id_address, rev_address


def _unlock(cert: BitcoinPgpCertificate, passphrase: str):
    if cert.encrypted_private_key is None:
        raise MalformedArmor("certificate carries no private key material")
    return crypto.unlock_private_key(cert.encrypted_private_key, passphrase)


def sign_message(cert: BitcoinPgpCertificate, passphrase: str, message: str) -> bytes:
    return crypto.sign(_unlock(cert, passphrase), message.encode("utf-8"))


def verify_message(cert: BitcoinPgpCertificate, message: str, signature: bytes) -> bool:
    return crypto.verify(cert.public_key, message.encode("utf-8"), signature)


def encrypt_message(recipient_cert: BitcoinPgpCertificate, message: str) -> bytes:
    return crypto.encrypt(recipient_cert.public_key, message.encode("utf-8"))


def decrypt_message(cert: BitcoinPgpCertificate, passphrase: str, ciphertext: bytes) -> str:
    return crypto.decrypt(_unlock(cert, passphrase), ciphertext).decode("utf-8")
