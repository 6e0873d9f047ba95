"""Decentralized key storage in the ledger's data outputs.

A certificate is cut into 75-byte chunks, each prefixed with a 5-byte header
(3 low-order key-id bytes, fragment index, total fragment count) so the whole
message fits the 80-byte data-output limit. Fragments ride individual data
transactions that also pay dust to the owner's address, which is how
retrieval finds them: query the address, decode headers, filter by key id,
check completeness, reorder by fragment index, concatenate.

Fragments may land in different blocks in any order; the header makes
reassembly independent of placement.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certificate import BitcoinPgpCertificate, KeyId, certificate_body_bytes
from .errors import (
    DuplicateFragment,
    EmptyPayload,
    HeaderInvariantViolated,
    IncompleteKey,
    InconsistentHeaders,
    InsufficientFunds,
    KeyIdMismatch,
    KeyTooLarge,
    NoFragmentsFound,
    PayloadTooShort,
)
from .ledger import Ledger, Wallet

CHUNK_SIZE = 75
HEADER_SIZE = 5
MAX_FRAGMENTS = 255
MAX_KEY_BYTES = MAX_FRAGMENTS * CHUNK_SIZE  # 19,125
STORAGE_FEE = 100_000  # 0.001 coins per fragment transaction


@dataclass(frozen=True)
class FragmentHeader:
    key_short3: bytes  # low 3 bytes of the 8-byte key id, big-endian
    fid: int  # 0-based fragment index
    total: int

    def encode(self) -> bytes:
        return self.key_short3 + bytes([self.fid, self.total])

    @classmethod
    def decode(cls, raw: bytes) -> "FragmentHeader":
        header = cls(key_short3=raw[:3], fid=raw[3], total=raw[4])
        if header.total == 0 or header.fid >= header.total:
            raise HeaderInvariantViolated(
                f"fid {header.fid} incompatible with total {header.total}"
            )
        return header


@dataclass(frozen=True)
class FragmentMessage:
    header: FragmentHeader
    data: bytes

    def encode(self) -> bytes:
        return self.header.encode() + self.data


@dataclass(frozen=True)
class StorageReceipt:
    keyid: KeyId
    owner_address: str
    txids: tuple[bytes, ...]
    total: int


def fragment_key(keyid: KeyId, payload: bytes) -> list[FragmentMessage]:
    """Split `payload` into ceil(len/75) fragments carrying consistent headers."""
    if not payload:
        raise EmptyPayload("cannot fragment an empty payload")
    if len(payload) > MAX_KEY_BYTES:
        raise KeyTooLarge(
            f"{len(payload)} bytes exceeds {MAX_KEY_BYTES} (255 fragments of 75 bytes)"
        )
    total = (len(payload) + CHUNK_SIZE - 1) // CHUNK_SIZE
    return [
        FragmentMessage(
            header=FragmentHeader(keyid.short3, fid, total),
            data=payload[fid * CHUNK_SIZE : (fid + 1) * CHUNK_SIZE],
        )
        for fid in range(total)
    ]


def decode_fragment(payload: bytes) -> FragmentMessage:
    """Parse a stored data payload back into a fragment message."""
    if len(payload) < HEADER_SIZE + 1:
        raise PayloadTooShort(f"{len(payload)} bytes; need header plus data")
    return FragmentMessage(
        header=FragmentHeader.decode(payload[:HEADER_SIZE]),
        data=payload[HEADER_SIZE:],
    )


def reassemble(fragments: list[FragmentMessage]) -> bytes:
    """Order fragments by index and concatenate their data.

    Raises when headers disagree, fragments are missing or duplicated with
    different data, or an interior fragment is not full-sized.
    """
    if not fragments:
        raise NoFragmentsFound("no fragments to reassemble")
    totals = {f.header.total for f in fragments}
    shorts = {f.header.key_short3 for f in fragments}
    if len(totals) > 1 or len(shorts) > 1:
        raise InconsistentHeaders(
            f"fragments disagree: totals {sorted(totals)}, key ids "
            f"{sorted(s.hex() for s in shorts)}"
        )
    total = totals.pop()
    by_fid: dict[int, FragmentMessage] = {}
    for f in fragments:
        seen = by_fid.get(f.header.fid)
        if seen is not None and seen.data != f.data:
            raise DuplicateFragment(
                f"fragment {f.header.fid} appears with differing data"
            )
        by_fid[f.header.fid] = f
    missing = sorted(set(range(total)) - set(by_fid))
    if missing:
        raise IncompleteKey(missing)
    ordered = [by_fid[fid] for fid in range(total)]
    for f in ordered[:-1]:
        if len(f.data) != CHUNK_SIZE:
            raise InconsistentHeaders(
                f"interior fragment {f.header.fid} is {len(f.data)} bytes, expected {CHUNK_SIZE}"
            )
    return b"".join(f.data for f in ordered)


def store_payload(
    ledger: Ledger,
    wallet: Wallet,
    keyid: KeyId,
    payload: bytes,
    owner_address: str,
) -> StorageReceipt:
    """Send one data transaction per fragment, in fragment order, each paying
    the fixed per-fragment fee and dust to `owner_address`."""
    messages = fragment_key(keyid, payload)
    txids: list[bytes] = []
    for message in messages:
        try:
            txid = ledger.send_data(
                wallet, owner_address, message.encode(), fee=STORAGE_FEE, minconf=0
            )
        except InsufficientFunds as exc:
            # Sent fragments stay on the chain; report progress so the caller
            # can fund the wallet and resume from the first missing fid.
            raise InsufficientFunds(
                f"stored fragments 0..{len(txids) - 1} of {len(messages)} "
                f"before running out of funds: {exc}"
            ) from None
        txids.append(txid)
    return StorageReceipt(
        keyid=keyid,
        owner_address=owner_address,
        txids=tuple(txids),
        total=len(messages),
    )


def store_key(
    ledger: Ledger,
    wallet: Wallet,
    cert: BitcoinPgpCertificate,
    owner_address: str,
) -> StorageReceipt:
    """Store a certificate's serialized body under its key id."""
    return store_payload(
        ledger, wallet, cert.keyid, certificate_body_bytes(cert), owner_address
    )


def retrieve_key(ledger: Ledger, owner_address: str, keyid: KeyId) -> bytes:
    """Recover a stored payload from the chain.

    Queries data payloads by address, decodes fragment headers (non-fragment
    data at the address is skipped), filters by the key id's low 3 bytes,
    verifies the fragment count, reorders, and concatenates.
    """
    fragments: list[FragmentMessage] = []
    for entry in ledger.list_data_by_address(owner_address):
        try:
            fragments.append(decode_fragment(entry.payload))
        except (PayloadTooShort, HeaderInvariantViolated):
            continue
    if not fragments:
        raise NoFragmentsFound(f"no key fragments stored at {owner_address}")
    matching = [f for f in fragments if f.header.key_short3 == keyid.short3]
    if not matching:
        raise KeyIdMismatch(
            f"no fragment at {owner_address} matches key id {keyid.hex}"
        )
    return reassemble(matching)
