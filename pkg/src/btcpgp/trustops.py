"""Trust protocols built on ledger transactions.

Identity verification is a two-transaction handshake: a verifier stakes an
amount of their choosing to the certificate's embedded id address (Tx-1) and
the owner proves key control by returning the same amount to the verifier's
declared return address (Tx-2). The pair is "equal" when amounts match and
the endpoints mirror, which is also what the on-chain check looks for.

Revocation is a payment between the certificate's two embedded addresses,
possible only for whoever holds the id address keys. Endorsement is a
signature over the target certificate followed by a fixed 0.001-coin
incentive fee, owner to endorser, with signing strictly first.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, replace

from . import crypto
from .certificate import (
    BitcoinPgpCertificate,
    Endorsement,
    KeyId,
    TrustLevel,
    canonical_bytes,
    extract_addresses,
    _unlock,
)
from .errors import (
    AlreadyReturned,
    AlreadyRevoked,
    FeePaymentFailed,
    InsufficientFunds,
    InvalidAmount,
    MissingConfirmation,
    NotConfirmedVerifier,
    NotOwner,
    RevokedCertificate,
)
from .ledger import (
    Ledger,
    PaymentOutput,
    Wallet,
    address_from_pubkey,
    validate_address,
)

ENDORSEMENT_FEE = 100_000  # 0.001 coins, fixed; neither party can change it
DEFAULT_REVOCATION_AMOUNT = 1_700  # 0.000017 coins


class VerificationStatus(enum.Enum):
    INITIATED = "Initiated"
    RETURNED = "Returned"
    CONFIRMED = "Confirmed"
    FAILED = "Failed"


class Validity(enum.Enum):
    VALID = "Valid"
    MARGINAL = "MarginalValidity"
    INVALID = "Invalid"


@dataclass
class VerificationRecord:
    """One Tx-1/Tx-2 handshake as seen by the verifier."""

    cert_keyid: KeyId
    verifier_return_address: str
    amount: int
    tx1: bytes
    tx2: bytes | None = None
    status: VerificationStatus = VerificationStatus.INITIATED


def record_to_line(record: VerificationRecord) -> str:
    tx2 = record.tx2.hex() if record.tx2 else "-"
    return (
        f"{record.cert_keyid.hex} {record.verifier_return_address} "
        f"{record.amount} {record.tx1.hex()} {tx2} {record.status.value}"
    )


def record_from_line(line: str) -> VerificationRecord:
    keyid_hex, return_address, amount, tx1_hex, tx2_hex, status = line.split()
    return VerificationRecord(
        cert_keyid=KeyId.from_hex(keyid_hex),
        verifier_return_address=return_address,
        amount=int(amount),
        tx1=bytes.fromhex(tx1_hex),
        tx2=None if tx2_hex == "-" else bytes.fromhex(tx2_hex),
        status=VerificationStatus(status),
    )


# --- identity verification ---------------------------------------------------

def initiate_verification(
    ledger: Ledger,
    verifier_wallet: Wallet,
    cert: BitcoinPgpCertificate,
    amount: int,
    return_address: str,
) -> VerificationRecord:
    """Send Tx-1, the verifier-chosen stake, to the certificate's id address."""
    if amount <= 0:
        raise InvalidAmount("verification stake must be positive")
    validate_address(return_address)
    id_address, _ = extract_addresses(cert)
    revocation = check_revocation_status(ledger, cert)
    if revocation is not None:
        raise RevokedCertificate(
            f"certificate revoked by transaction {revocation.hex()}"
        )
    tx1 = ledger.send_to_address(
        verifier_wallet, id_address, amount, comment="identity verification"
    )
    return VerificationRecord(
        cert_keyid=cert.keyid,
        verifier_return_address=return_address,
        amount=amount,
        tx1=tx1,
    )


def _tx1_id_address(ledger: Ledger, record: VerificationRecord) -> str:
    tx1 = ledger.get_transaction(record.tx1)
    if tx1 is None:
        raise InsufficientFunds("Tx-1 is not confirmed yet")
    for out in tx1.outputs:
        if isinstance(out, PaymentOutput):
            return out.address
    raise InsufficientFunds("Tx-1 carries no payment output")


def return_verification(
    ledger: Ledger, owner_wallet: Wallet, record: VerificationRecord
) -> bytes:
    """Send Tx-2: the owner returns the exact stake from the id address to the
    verifier's declared return address."""
    if record.tx2 is not None:
        raise AlreadyReturned(f"record already returned in {record.tx2.hex()}")
    id_address = _tx1_id_address(ledger, record)
    if not owner_wallet.owns(id_address):
        raise NotOwner(f"wallet does not control id address {id_address}")
    tx2 = ledger.send_to_address(
        owner_wallet,
        record.verifier_return_address,
        record.amount,
        source_address=id_address,
        comment="return verification",
    )
    record.tx2 = tx2
    record.status = VerificationStatus.RETURNED
    return tx2


def check_verification(ledger: Ledger, record: VerificationRecord) -> bool:
    """Compare Tx-1 and Tx-2 for equality: a confirmed transaction from the id
    address paying exactly the staked amount to the return address."""
    tx1 = ledger.get_transaction(record.tx1)
    if tx1 is None:
        return False
    id_address = _tx1_id_address(ledger, record)
    match = ledger.find_transaction(
        id_address, record.verifier_return_address, record.amount
    )
    if match is None:
        return False
    record.status = VerificationStatus.CONFIRMED
    if record.tx2 is None:
        record.tx2 = match
    return True


def trust_weight(
    ledger: Ledger, cert: BitcoinPgpCertificate
) -> tuple[list[tuple[str, int]], int]:
    """All confirmed verification round-trips for `cert`, in chain order, plus
    the effective trust weight.

    A round-trip pairs an incoming stake at the id address with a later equal
    payment out of it; returns to the revocation address do not count. Only
    the first round-trip per distinct verifier return address contributes to
    the weight, so repeat verifications cannot inflate trust.
    """
    id_address, rev_address = extract_addresses(cert)
    unmatched: list[int] = []
    entries: list[tuple[str, int]] = []
    for block in ledger.blocks:
        for tx in block.transactions:
            if tx.is_coinbase:
                continue
            input_addresses = {address_from_pubkey(inp.pubkey) for inp in tx.inputs}
            if id_address not in input_addresses:
                stake = sum(
                    out.amount
                    for out in tx.outputs
                    if isinstance(out, PaymentOutput) and out.address == id_address
                )
                if stake > 0:
                    unmatched.append(stake)
                continue
            for out in tx.outputs:
                if not isinstance(out, PaymentOutput):
                    continue
                if out.address in (id_address, rev_address):
                    continue
                if out.amount in unmatched:
                    unmatched.remove(out.amount)
                    entries.append((out.address, out.amount))
    first_per_verifier: dict[str, int] = {}
    for address, amount in entries:
        first_per_verifier.setdefault(address, amount)
    return entries, sum(first_per_verifier.values())


# --- revocation ---------------------------------------------------------------

def revoke_certificate(
    ledger: Ledger,
    owner_wallet: Wallet,
    cert: BitcoinPgpCertificate,
    amount: int = DEFAULT_REVOCATION_AMOUNT,
) -> bytes:
    """Pay `amount` from the id address to the revocation address, marking the
    certificate revoked once confirmed. Only the id-address key holder can."""
    id_address, rev_address = extract_addresses(cert)
    if not owner_wallet.owns(id_address):
        raise NotOwner(f"wallet does not control id address {id_address}")
    existing = check_revocation_status(ledger, cert)
    if existing is not None:
        raise AlreadyRevoked(f"already revoked by transaction {existing.hex()}")
    return ledger.send_to_address(
        owner_wallet,
        rev_address,
        amount,
        source_address=id_address,
        comment="certificate revocation",
    )


def check_revocation_status(
    ledger: Ledger, cert: BitcoinPgpCertificate
) -> bytes | None:
    """Txid of the earliest confirmed id-to-revocation-address payment, or
    None while the certificate is still valid.

    Third-party payments to the revocation address never count: the funds
    must demonstrably leave the id address.
    """
    id_address, rev_address = extract_addresses(cert)
    for block in ledger.blocks:
        for tx in block.transactions:
            if tx.is_coinbase:
                continue
            if not any(
                address_from_pubkey(inp.pubkey) == id_address for inp in tx.inputs
            ):
                continue
            for out in tx.outputs:
                if (
                    isinstance(out, PaymentOutput)
                    and out.address == rev_address
                    and out.amount > 0
                ):
                    return tx.txid
    return None


# --- endorsement ----------------------------------------------------------------

def endorse_certificate(
    ledger: Ledger,
    endorser_cert: BitcoinPgpCertificate,
    endorser_passphrase: str,
    owner_wallet: Wallet,
    target_cert: BitcoinPgpCertificate,
    trust_level: TrustLevel,
    confirm: bool = False,
) -> tuple[BitcoinPgpCertificate, Endorsement]:
    """Sign the target certificate, then pay the fixed incentive fee.

    The endorser must have a confirmed identity verification of the target
    (return address = the endorser's own id address). Signing always precedes
    the fee; when the owner cannot pay, the signed endorsement stands with
    fee_txid left unset and a FeePaymentFailed warning is emitted.
    """
    if not confirm:
        raise MissingConfirmation(
            "endorsement is not automated; pass confirm=True explicitly"
        )
    revocation = check_revocation_status(ledger, target_cert)
    if revocation is not None:
        raise RevokedCertificate(
            f"target certificate revoked by transaction {revocation.hex()}"
        )
    endorser_address, _ = extract_addresses(endorser_cert)
    entries, _ = trust_weight(ledger, target_cert)
    if not any(address == endorser_address for address, _ in entries):
        raise NotConfirmedVerifier(
            "no confirmed identity verification by this endorser for the target"
        )
    key = _unlock(endorser_cert, endorser_passphrase)
    endorsement = Endorsement(
        endorser_keyid=endorser_cert.keyid,
        endorser_address=endorser_address,
        trust_level=TrustLevel(trust_level),
        endorser_public_key=endorser_cert.public_key,
        signature=crypto.sign(key, canonical_bytes(target_cert)),
        signed_at=ledger.now(),
    )
    owner_id_address, _ = extract_addresses(target_cert)
    try:
        fee_txid = ledger.send_to_address(
            owner_wallet,
            endorser_address,
            ENDORSEMENT_FEE,
            source_address=owner_id_address,
            comment="endorsement fee",
        )
        endorsement = replace(endorsement, fee_txid=fee_txid)
    except InsufficientFunds as exc:
        warnings.warn(
            f"endorsement signed but fee payment failed: {exc}", FeePaymentFailed
        )
    return target_cert.with_endorsement(endorsement), endorsement


def compute_validity(
    cert: BitcoinPgpCertificate, ledger: Ledger | None = None
) -> Validity:
    """PGP validity rule: one Complete or two Marginal endorsements make the
    key Valid; a single Marginal gives marginal validity. Revoked certificates
    are always Invalid. Endorsements with bad signatures are ignored."""
    if ledger is not None and check_revocation_status(ledger, cert) is not None:
        return Validity.INVALID
    target = canonical_bytes(cert)
    complete = marginal = 0
    for e in cert.endorsements:
        keyid_ok = KeyId.from_public_key(e.endorser_public_key) == e.endorser_keyid
        if not keyid_ok or not crypto.verify(e.endorser_public_key, target, e.signature):
            warnings.warn(
                f"ignoring endorsement with invalid signature (keyid {e.endorser_keyid.hex})"
            )
            continue
        if e.trust_level == TrustLevel.COMPLETE:
            complete += 1
        elif e.trust_level == TrustLevel.MARGINAL:
            marginal += 1
    if complete >= 1 or marginal >= 2:
        return Validity.VALID
    if marginal == 1:
        return Validity.MARGINAL
    return Validity.INVALID
