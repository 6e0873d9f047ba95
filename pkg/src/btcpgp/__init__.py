"""Bitcoin-backed PGP certificates on a deterministic simulated ledger."""

from .certificate import (
    BitcoinPgpCertificate,
    CertificateParams,
    Endorsement,
    KeyId,
    TrustLevel,
    canonical_bytes,
    decrypt_message,
    encrypt_message,
    extract_addresses,
    generate_certificate,
    parse_certificate,
    serialize_certificate,
    sign_message,
    verify_message,
    verify_self_signature,
)
from .keyserver import (
    FragmentHeader,
    FragmentMessage,
    StorageReceipt,
    decode_fragment,
    fragment_key,
    retrieve_key,
    store_key,
    store_payload,
)
from .ledger import (
    COIN,
    Block,
    DataEntry,
    DataOutput,
    Ledger,
    PaymentOutput,
    Transaction,
    TxInput,
    UtxoSet,
    Wallet,
    format_amount,
    parse_amount,
)
from .trustops import (
    Validity,
    VerificationRecord,
    VerificationStatus,
    check_revocation_status,
    check_verification,
    compute_validity,
    endorse_certificate,
    initiate_verification,
    return_verification,
    revoke_certificate,
    trust_weight,
)

__version__ = "0.1.0"
