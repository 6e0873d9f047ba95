"""Base58 and Base58Check encodings.

Same alphabet as the Bitcoin network; leading zero bytes map to leading
'1' characters so version-0 payloads produce addresses starting with '1'.
"""

from hashlib import sha256

ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"

_INDEX = {c: i for i, c in enumerate(ALPHABET)}


def b58encode(data: bytes) -> str:
    """Encode bytes as a Base58 string."""
    zeros = len(data) - len(data.lstrip(b"\0"))
    acc = int.from_bytes(data, "big")
    out = []
    while acc > 0:
        acc, mod = divmod(acc, 58)
        out.append(ALPHABET[mod])
    return ALPHABET[0] * zeros + "".join(reversed(out))


def b58decode(text: str) -> bytes:
    """Decode a Base58 string; raises ValueError on characters outside the alphabet."""
    zeros = len(text) - len(text.lstrip(ALPHABET[0]))
    acc = 0
    for c in text:
        try:
            acc = acc * 58 + _INDEX[c]
        except KeyError:
            raise ValueError(f"invalid base58 character {c!r}") from None
    body = acc.to_bytes((acc.bit_length() + 7) // 8, "big")
    return b"\0" * zeros + body


def b58check_encode(payload: bytes) -> str:
    """Append a 4-byte double-SHA256 checksum and Base58-encode."""
    digest = sha256(sha256(payload).digest()).digest()
    return b58encode(payload + digest[:4])


def b58check_decode(text: str) -> bytes:
    """Decode and verify the 4-byte checksum; raises ValueError on mismatch."""
    raw = b58decode(text)
    if len(raw) < 5:
        raise ValueError("base58check payload too short")
    payload, check = raw[:-4], raw[-4:]
    digest = sha256(sha256(payload).digest()).digest()
    if check != digest[:4]:
        raise ValueError("invalid checksum")
    return payload
