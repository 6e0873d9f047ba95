"""Domain error types.

Every failure mode surfaced by the library is a subclass of BtcPgpError so
the CLI can map any of them to a single-line diagnostic and exit code 2.
The class name is the stable error token printed to users.
"""


class BtcPgpError(Exception):
    """Base class for all domain errors."""


# --- ledger ---------------------------------------------------------------

class InvalidAddress(BtcPgpError):
    pass


class InvalidAmount(BtcPgpError):
    pass


class InsufficientFunds(BtcPgpError):
    pass


class PayloadTooLarge(BtcPgpError):
    pass


class ValidationFailure(BtcPgpError):
    """A transaction failed consensus checks; message names the offending txid."""

    def __init__(self, txid_hex: str, reason: str):
        super().__init__(f"transaction {txid_hex}: {reason}")
        self.txid_hex = txid_hex
        self.reason = reason


class CorruptLedger(BtcPgpError):
    pass


# --- certificate ----------------------------------------------------------

class UnsupportedKeyLength(BtcPgpError):
    pass


class MalformedArmor(BtcPgpError):
    pass


class BadSignatureEncoding(BtcPgpError):
    pass


class MalformedComment(BtcPgpError):
    pass


class WrongPassphrase(BtcPgpError):
    pass


class DecryptionFailed(BtcPgpError):
    pass


# --- trust operations -----------------------------------------------------

class RevokedCertificate(BtcPgpError):
    pass


class NotOwner(BtcPgpError):
    pass


class AlreadyReturned(BtcPgpError):
    pass


class AlreadyRevoked(BtcPgpError):
    pass


class NotConfirmedVerifier(BtcPgpError):
    pass


class MissingConfirmation(BtcPgpError):
    pass


class FeePaymentFailed(UserWarning):
    """Endorsement fee could not be paid after signing; the signed endorsement stands."""


# --- key server -----------------------------------------------------------

class EmptyPayload(BtcPgpError):
    pass


class KeyTooLarge(BtcPgpError):
    pass


class NoFragmentsFound(BtcPgpError):
    pass


class KeyIdMismatch(BtcPgpError):
    pass


class IncompleteKey(BtcPgpError):
    def __init__(self, missing_fids: list[int]):
        super().__init__(f"missing fragment ids {missing_fids}")
        self.missing_fids = missing_fids


class InconsistentHeaders(BtcPgpError):
    pass


class DuplicateFragment(BtcPgpError):
    pass


class PayloadTooShort(BtcPgpError):
    pass


class HeaderInvariantViolated(BtcPgpError):
    pass
