"""Deterministic in-process simulation of a Bitcoin-like ledger.

Money lives in unspent transaction outputs (UTXOs). A transaction consumes
previously unspent outputs and creates new ones; whatever value the outputs
do not claim is the implicit miner fee. Blocks are produced on request (no
proof-of-work), each carrying a coinbase that mints the fixed block reward
plus the fees it collected, so total UTXO value always equals total minted
value.

Two output kinds exist: payments (spendable, enter the UTXO set) and data
carriers (up to 80 bytes of arbitrary payload, provably unspendable, never
enter the UTXO set). Data transactions also pay a dust amount to a regular
address so their payloads stay discoverable by address query.

All amounts are integer satoshis (1 coin = 100,000,000 satoshis); floats
never touch ledger state. Wallet keys are Ed25519, whose signatures are
deterministic, making full replay determinism possible under a seeded RNG.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass
from functools import cached_property
from hashlib import sha256

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.serialization import (
    Encoding,
    NoEncryption,
    PrivateFormat,
    PublicFormat,
)

from .base58 import b58check_decode, b58check_encode
from .errors import (
    CorruptLedger,
    InsufficientFunds,
    InvalidAddress,
    InvalidAmount,
    PayloadTooLarge,
    ValidationFailure,
)

COIN = 100_000_000
BLOCK_REWARD = 50 * COIN
DEFAULT_PAYMENT_FEE = 1_000
DUST = 546
MAX_DATA_BYTES = 80

ADDRESS_VERSION = 0x00  # yields a leading '1'
LEDGER_FILE_HEADER = "BTCPGP-LEDGER v1"

_GENESIS_HASH = b"\x00" * 32


# --- amounts ----------------------------------------------------------------

def parse_amount(text: str) -> int:
    """Parse a decimal coin amount ("0.00856179") into satoshis.

    At most 8 fractional digits are accepted; anything finer is rejected
    rather than rounded.
    """
    text = text.strip()
    negative = text.startswith("-")
    body = text[1:] if negative else text
    whole, _, frac = body.partition(".")
    if not (whole or frac) or not (whole + frac).isdigit():
        raise InvalidAmount(f"not a decimal amount: {text!r}")
    if len(frac) > 8:
        raise InvalidAmount(f"more than 8 fractional digits: {text!r}")
    sats = int(whole or "0") * COIN + int((frac or "0").ljust(8, "0"))
    if negative and sats != 0:
        raise InvalidAmount(f"negative amount: {text!r}")
    return sats


def format_amount(satoshis: int) -> str:
    """Render satoshis as a decimal coin string, trailing zeros stripped."""
    whole, frac = divmod(satoshis, COIN)
    if frac == 0:
        return str(whole)
    return f"{whole}.{frac:08d}".rstrip("0")


# --- addresses --------------------------------------------------------------

def _pubkey_hash(pubkey: bytes) -> bytes:
    # RIPEMD-160 is not guaranteed by the runtime; a truncated SHA-256 of the
    # public key serves as the fixed project-wide 20-byte hash.
    return sha256(pubkey).digest()[:20]


def address_from_pubkey(pubkey: bytes) -> str:
    return b58check_encode(bytes([ADDRESS_VERSION]) + _pubkey_hash(pubkey))


def validate_address(text: str) -> str:
    """Check shape and checksum; returns the address or raises InvalidAddress."""
    if not (27 <= len(text) <= 34):
        raise InvalidAddress(f"address length {len(text)} outside 27-34: {text!r}")
    if text[0] not in ("1", "3"):
        raise InvalidAddress(f"address must start with '1' or '3': {text!r}")
    try:
        payload = b58check_decode(text)
    except ValueError as exc:
        raise InvalidAddress(f"{text!r}: {exc}") from None
    if len(payload) != 21:
        raise InvalidAddress(f"address payload is {len(payload)} bytes, expected 21")
    return text


# --- transactions -----------------------------------------------------------

@dataclass(frozen=True)
class PaymentOutput:
    address: str
    amount: int


@dataclass(frozen=True)
class DataOutput:
    """OP_RETURN-style carrier: unspendable, zero value, <= 80 bytes."""

    payload: bytes
    amount: int = 0


TxOutput = PaymentOutput | DataOutput


@dataclass(frozen=True)
class TxInput:
    prev_txid: bytes
    index: int
    pubkey: bytes  # raw 32-byte Ed25519 public key; also identifies the paying address
    signature: bytes = b""

    @property
    def outpoint(self) -> tuple[bytes, int]:
        return (self.prev_txid, self.index)


def _lp(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big") + data


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ValueError("truncated encoding")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def take_int(self, width: int) -> int:
        return int.from_bytes(self.take(width), "big")

    def take_lp(self) -> bytes:
        return self.take(self.take_int(4))

    def done(self) -> bool:
        return self.pos == len(self.data)


@dataclass(frozen=True)
class Transaction:
    """Payment and/or data outputs spending prior unspent outputs.

    Coinbase transactions have no inputs. The implicit miner fee is
    sum(inputs) - sum(outputs).
    """

    inputs: tuple[TxInput, ...]
    outputs: tuple[TxOutput, ...]
    comment: str = ""
    comment_to: str = ""

    @cached_property
    def txid(self) -> bytes:
        return sha256(encode_transaction(self)).digest()

    @property
    def txid_hex(self) -> str:
        return self.txid.hex()

    @property
    def is_coinbase(self) -> bool:
        return not self.inputs

    def signing_preimage(self) -> bytes:
        return encode_transaction(self, include_signatures=False)


def encode_transaction(tx: Transaction, include_signatures: bool = True) -> bytes:
    """Canonical encoding: length-prefixed fields in declaration order, big-endian."""
    parts = [len(tx.inputs).to_bytes(2, "big")]
    for inp in tx.inputs:
        parts.append(inp.prev_txid)
        parts.append(inp.index.to_bytes(4, "big"))
        parts.append(_lp(inp.pubkey))
        parts.append(_lp(inp.signature if include_signatures else b""))
    parts.append(len(tx.outputs).to_bytes(2, "big"))
    for out in tx.outputs:
        if isinstance(out, PaymentOutput):
            parts.append(b"\x00")
            parts.append(_lp(out.address.encode("ascii")))
            parts.append(out.amount.to_bytes(8, "big"))
        else:
            parts.append(b"\x01")
            parts.append(_lp(out.payload))
    parts.append(_lp(tx.comment.encode("utf-8")))
    parts.append(_lp(tx.comment_to.encode("utf-8")))
    return b"".join(parts)


def decode_transaction(data: bytes) -> Transaction:
    r = _Reader(data)
    inputs = []
    for _ in range(r.take_int(2)):
        prev_txid = r.take(32)
        index = r.take_int(4)
        pubkey = r.take_lp()
        signature = r.take_lp()
        inputs.append(TxInput(prev_txid, index, pubkey, signature))
    outputs: list[TxOutput] = []
    for _ in range(r.take_int(2)):
        kind = r.take_int(1)
        if kind == 0:
            address = r.take_lp().decode("ascii")
            amount = r.take_int(8)
            outputs.append(PaymentOutput(address, amount))
        elif kind == 1:
            outputs.append(DataOutput(r.take_lp()))
        else:
            raise ValueError(f"unknown output kind {kind}")
    comment = r.take_lp().decode("utf-8")
    comment_to = r.take_lp().decode("utf-8")
    if not r.done():
        raise ValueError("trailing bytes after transaction")
    return Transaction(tuple(inputs), tuple(outputs), comment, comment_to)


# --- blocks -----------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    height: int
    prev_hash: bytes
    timestamp: int
    transactions: tuple[Transaction, ...]

    @cached_property
    def block_hash(self) -> bytes:
        h = sha256()
        h.update(self.height.to_bytes(8, "big"))
        h.update(self.prev_hash)
        h.update(self.timestamp.to_bytes(8, "big"))
        for tx in self.transactions:
            h.update(tx.txid)
        return h.digest()


# --- UTXO set ---------------------------------------------------------------

class UtxoSet:
    """Map (txid, output index) -> payment output; data carriers never enter.

    An address index makes wallet queries and coin selection proportional to
    the wallet's own holdings rather than the whole set.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[bytes, int], PaymentOutput] = {}
        self._by_address: dict[str, set[tuple[bytes, int]]] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, outpoint: tuple[bytes, int]) -> bool:
        return outpoint in self._entries

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UtxoSet) and self._entries == other._entries

    def get(self, outpoint: tuple[bytes, int]) -> PaymentOutput | None:
        return self._entries.get(outpoint)

    def items(self):
        return self._entries.items()

    def outpoints_for(self, address: str) -> set[tuple[bytes, int]]:
        return self._by_address.get(address, set())

    def total_value(self) -> int:
        return sum(out.amount for out in self._entries.values())

    def copy(self) -> "UtxoSet":
        clone = UtxoSet()
        clone._entries = dict(self._entries)
        clone._by_address = {addr: set(ops) for addr, ops in self._by_address.items()}
        return clone

    def _add(self, outpoint: tuple[bytes, int], out: PaymentOutput) -> None:
        self._entries[outpoint] = out
        self._by_address.setdefault(out.address, set()).add(outpoint)

    def _remove(self, outpoint: tuple[bytes, int]) -> PaymentOutput:
        out = self._entries.pop(outpoint)
        owned = self._by_address[out.address]
        owned.discard(outpoint)
        if not owned:
            del self._by_address[out.address]
        return out

    def apply_transaction(self, tx: Transaction) -> list[tuple[tuple[bytes, int], PaymentOutput]]:
        """Consume inputs, add payment outputs; returns the consumed entries."""
        undo = []
        for inp in tx.inputs:
            undo.append((inp.outpoint, self._remove(inp.outpoint)))
        for i, out in enumerate(tx.outputs):
            if isinstance(out, PaymentOutput):
                self._add((tx.txid, i), out)
        return undo

    def apply_block(self, block: Block) -> list[tuple[tuple[bytes, int], PaymentOutput]]:
        undo = []
        for tx in block.transactions:
            undo.extend(self.apply_transaction(tx))
        return undo

    def revert_block(self, block: Block, undo: list[tuple[tuple[bytes, int], PaymentOutput]]) -> None:
        for tx in block.transactions:
            for i, out in enumerate(tx.outputs):
                if isinstance(out, PaymentOutput):
                    self._remove((tx.txid, i))
        for outpoint, out in undo:
            self._add(outpoint, out)


# --- wallet -----------------------------------------------------------------

class Wallet:
    """Holds signing keypairs; every owned address derives from a stored key."""

    def __init__(self, label: str = "default"):
        self.label = label
        self._keys: dict[str, Ed25519PrivateKey] = {}

    @property
    def addresses(self) -> list[str]:
        return list(self._keys)

    def new_address(self, rng: random.Random | None = None) -> str:
        """Generate a fresh keypair and register its address."""
        seed = os.urandom(32) if rng is None else rng.randbytes(32)
        key = Ed25519PrivateKey.from_private_bytes(seed)
        address = address_from_pubkey(_raw_public(key))
        self._keys[address] = key
        return address

    def owns(self, address: str) -> bool:
        return address in self._keys

    def key_for(self, address: str) -> Ed25519PrivateKey:
        return self._keys[address]

    def default_address(self, rng: random.Random | None = None) -> str:
        if not self._keys:
            return self.new_address(rng)
        return next(iter(self._keys))

    def save(self, path) -> None:
        lines = [f"BTCPGP-WALLET v1 {self.label}"]
        for address, key in self._keys.items():
            raw = key.private_bytes(Encoding.Raw, PrivateFormat.Raw, NoEncryption())
            lines.append(f"{address} {raw.hex()}")
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "Wallet":
        with open(path, encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or not lines[0].startswith("BTCPGP-WALLET v1"):
            raise ValueError(f"not a wallet file: {path}")
        wallet = cls(label=lines[0].split(" ", 2)[2] if len(lines[0].split(" ", 2)) > 2 else "default")
        for line in lines[1:]:
            address, key_hex = line.split(" ")
            key = Ed25519PrivateKey.from_private_bytes(bytes.fromhex(key_hex))
            if address_from_pubkey(_raw_public(key)) != address:
                raise ValueError(f"wallet key does not match address {address}")
            wallet._keys[address] = key
        return wallet


def _raw_public(key: Ed25519PrivateKey) -> bytes:
    return key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)


# --- ledger -----------------------------------------------------------------

@dataclass(frozen=True)
class DataEntry:
    """One stored data payload, addressable by the payment address it rode with."""

    txid: bytes
    payload: bytes
    height: int
    tx_index: int


class Ledger:
    """Single-writer chain of blocks plus the pending transaction pool.

    All mutation happens through submit/mine on one owner; reads go through
    query methods that never mutate. A fixed genesis block (empty coinbase,
    timestamp 0) anchors the chain so fresh ledgers share one genesis hash.
    """

    def __init__(self, payment_fee: int = DEFAULT_PAYMENT_FEE, clock=None):
        self.payment_fee = payment_fee
        self.clock = clock or (lambda: int(time.time()))
        genesis = Block(0, _GENESIS_HASH, 0, (Transaction((), (), comment="genesis"),))
        self.blocks: list[Block] = [genesis]
        self.utxos = UtxoSet()
        self.pending: list[Transaction] = []
        self.rejected_log: list[tuple[bytes, str]] = []
        self._tx_index: dict[bytes, tuple[Transaction, int, int]] = {}
        self._data_index: dict[str, list[DataEntry]] = {}
        self._pending_spent: set[tuple[bytes, int]] = set()
        self._pending_outputs: dict[tuple[bytes, int], PaymentOutput] = {}
        self._index_block(genesis)

    # -- queries --

    @property
    def height(self) -> int:
        return self.blocks[-1].height

    def now(self) -> int:
        return int(self.clock())

    def confirmations(self, txid: bytes) -> int:
        entry = self._tx_index.get(txid)
        if entry is None:
            return 0
        return self.height - entry[1] + 1

    def get_transaction(self, txid: bytes) -> Transaction | None:
        entry = self._tx_index.get(txid)
        return entry[0] if entry else None

    def get_balance(self, wallet: Wallet, minconf: int = 1) -> int:
        """Sum of unspent outputs payable to the wallet at depth >= minconf.

        minconf=0 additionally counts pending outputs and discounts pending
        spends, i.e. the wallet's effective spendable balance.
        """
        total = sum(out.amount for _, out, _ in self._spendable(wallet, minconf))
        return total

    def find_transaction(self, from_address: str, to_address: str, amount: int) -> bytes | None:
        """Earliest confirmed transaction spending `from_address` funds and
        paying exactly `amount` to `to_address`; None if absent."""
        for block in self.blocks:
            for tx in block.transactions:
                if not any(
                    address_from_pubkey(inp.pubkey) == from_address for inp in tx.inputs
                ):
                    continue
                for out in tx.outputs:
                    if (
                        isinstance(out, PaymentOutput)
                        and out.address == to_address
                        and out.amount == amount
                    ):
                        return tx.txid
        return None

    def list_data_by_address(self, address: str) -> list[DataEntry]:
        """All confirmed data payloads in transactions that also pay `address`,
        ordered by (block height, transaction index)."""
        return list(self._data_index.get(address, ()))

    # -- spending --

    def send_to_address(
        self,
        wallet: Wallet,
        dest: str,
        amount: int,
        minconf: int = 1,
        comment: str = "",
        comment_to: str = "",
        source_address: str | None = None,
    ) -> bytes:
        """Pay `amount` satoshis to `dest`, selecting wallet UTXOs oldest-first.

        With source_address, only outputs held by that address are spent and
        change returns to it; this is how protocol transactions guarantee
        they flow *from* a specific certificate address.
        """
        validate_address(dest)
        if amount <= 0:
            raise InvalidAmount("amount must be positive")
        outputs: list[TxOutput] = [PaymentOutput(dest, amount)]
        return self._spend(
            wallet, outputs, amount + self.payment_fee, minconf,
            comment, comment_to, source_address,
        )

    def send_data(
        self,
        wallet: Wallet,
        dest: str,
        payload: bytes,
        fee: int,
        minconf: int = 1,
        source_address: str | None = None,
    ) -> bytes:
        """Store `payload` in a data output, with a dust payment to `dest` so
        the data stays discoverable by address query."""
        validate_address(dest)
        if len(payload) > MAX_DATA_BYTES:
            raise PayloadTooLarge(f"{len(payload)} bytes exceeds {MAX_DATA_BYTES}")
        if fee < 0:
            raise InvalidAmount("fee must be non-negative")
        outputs: list[TxOutput] = [DataOutput(bytes(payload)), PaymentOutput(dest, DUST)]
        return self._spend(wallet, outputs, DUST + fee, minconf, "", "", source_address)

    def _spendable(self, wallet: Wallet, minconf: int, source_address: str | None = None):
        """Candidate outputs oldest-first: [(outpoint, output, sort_key)]."""
        if source_address is not None:
            addresses = [source_address] if wallet.owns(source_address) else []
        else:
            addresses = wallet.addresses
        candidates = []
        tip = self.height
        for address in addresses:
            for outpoint in self.utxos.outpoints_for(address):
                if outpoint in self._pending_spent:
                    continue
                _, height, tx_index = self._tx_index[outpoint[0]]
                if tip - height + 1 < max(minconf, 1):
                    continue
                out = self.utxos.get(outpoint)
                candidates.append((outpoint, out, (0, height, tx_index, outpoint[1])))
        if minconf == 0:
            admitted = set(addresses)
            for pool_pos, tx in enumerate(self.pending):
                for i, out in enumerate(tx.outputs):
                    if not isinstance(out, PaymentOutput) or out.address not in admitted:
                        continue
                    outpoint = (tx.txid, i)
                    if outpoint in self._pending_spent:
                        continue
                    candidates.append((outpoint, out, (1, pool_pos, 0, i)))
        candidates.sort(key=lambda c: c[2])
        return candidates

    def _spend(
        self,
        wallet: Wallet,
        outputs: list[TxOutput],
        required: int,
        minconf: int,
        comment: str,
        comment_to: str,
        source_address: str | None,
    ) -> bytes:
        selected = []
        total = 0
        for outpoint, out, _ in self._spendable(wallet, minconf, source_address):
            selected.append((outpoint, out))
            total += out.amount
            if total >= required:
                break
        if total < required:
            where = f" at {source_address}" if source_address else ""
            raise InsufficientFunds(
                f"need {format_amount(required)} but only "
                f"{format_amount(total)} spendable{where}"
            )
        change = total - required
        if change > 0:
            change_address = source_address or selected[0][1].address
            outputs = outputs + [PaymentOutput(change_address, change)]
        inputs = tuple(
            TxInput(op[0], op[1], _raw_public(wallet.key_for(out.address)))
            for op, out in selected
        )
        tx = Transaction(inputs, tuple(outputs), comment, comment_to)
        preimage = tx.signing_preimage()
        signed_inputs = tuple(
            TxInput(
                inp.prev_txid,
                inp.index,
                inp.pubkey,
                wallet.key_for(out.address).sign(preimage),
            )
            for inp, (_, out) in zip(inputs, selected)
        )
        tx = Transaction(signed_inputs, tuple(outputs), comment, comment_to)
        return self.submit(tx)

    # -- consensus --

    def submit(self, tx: Transaction) -> bytes:
        """Validate against current state and queue for the next block.

        A conflicting (double-spending) transaction still enters the pool when
        each tx is individually valid; mining resolves the race by sequential
        replay, keeping the first and dropping the rest.
        """
        self._validate(
            tx, lambda op: self._pending_outputs.get(op) or self.utxos.get(op)
        )
        self.pending.append(tx)
        self._pending_spent.update(inp.outpoint for inp in tx.inputs)
        for i, out in enumerate(tx.outputs):
            if isinstance(out, PaymentOutput):
                self._pending_outputs[(tx.txid, i)] = out
        return tx.txid

    def _validate(self, tx: Transaction, lookup) -> None:
        txid_hex = tx.txid_hex
        if tx.is_coinbase:
            raise ValidationFailure(txid_hex, "coinbase transactions cannot be submitted")
        seen: set[tuple[bytes, int]] = set()
        in_value = 0
        preimage = tx.signing_preimage()
        for inp in tx.inputs:
            if inp.outpoint in seen:
                raise ValidationFailure(txid_hex, "duplicate input")
            seen.add(inp.outpoint)
            prev = lookup(inp.outpoint)
            if prev is None:
                raise ValidationFailure(
                    txid_hex, f"spends missing or spent output {inp.prev_txid.hex()}:{inp.index}"
                )
            if address_from_pubkey(inp.pubkey) != prev.address:
                raise ValidationFailure(txid_hex, "public key does not match output address")
            try:
                Ed25519PublicKey.from_public_bytes(inp.pubkey).verify(inp.signature, preimage)
            except (InvalidSignature, ValueError):
                raise ValidationFailure(txid_hex, "bad signature") from None
            in_value += prev.amount
        out_value = 0
        for out in tx.outputs:
            if isinstance(out, PaymentOutput):
                if out.amount <= 0:
                    raise ValidationFailure(txid_hex, "non-positive payment output")
                out_value += out.amount
            else:
                if len(out.payload) > MAX_DATA_BYTES:
                    raise ValidationFailure(txid_hex, "data payload exceeds 80 bytes")
        if in_value < out_value:
            raise ValidationFailure(
                txid_hex,
                f"outputs {format_amount(out_value)} exceed inputs {format_amount(in_value)}",
            )

    def mine_block(self, miner: Wallet) -> Block:
        """Produce the next block: include every pending transaction that is
        still valid, pay reward plus collected fees to the miner.

        Pending transactions replay sequentially against an overlay of the
        confirmed set, so in-block chains work and conflicting spends past the
        first are dropped (and recorded in rejected_log)."""
        miner_address = miner.default_address()
        spent: set[tuple[bytes, int]] = set()
        created: dict[tuple[bytes, int], PaymentOutput] = {}

        def lookup(outpoint):
            if outpoint in spent:
                return None
            return created.get(outpoint) or self.utxos.get(outpoint)

        included: list[Transaction] = []
        fees = 0
        for tx in self.pending:
            try:
                self._validate(tx, lookup)
            except ValidationFailure as exc:
                self.rejected_log.append((tx.txid, exc.reason))
                continue
            out_value = 0
            for i, out in enumerate(tx.outputs):
                if isinstance(out, PaymentOutput):
                    created[(tx.txid, i)] = out
                    out_value += out.amount
            for inp in tx.inputs:
                fees += lookup(inp.outpoint).amount
                spent.add(inp.outpoint)
            fees -= out_value
            included.append(tx)
        height = self.height + 1
        coinbase = Transaction(
            (),
            (PaymentOutput(miner_address, BLOCK_REWARD + fees),),
            comment=f"coinbase height {height}",
        )
        block = Block(height, self.blocks[-1].block_hash, self.now(), (coinbase, *included))
        self._append_block(block)
        self.pending.clear()
        self._pending_spent.clear()
        self._pending_outputs.clear()
        return block

    def _append_block(self, block: Block) -> None:
        self.utxos.apply_block(block)
        self.blocks.append(block)
        self._index_block(block)

    def _index_block(self, block: Block) -> None:
        for tx_index, tx in enumerate(block.transactions):
            self._tx_index[tx.txid] = (tx, block.height, tx_index)
            payloads = [out.payload for out in tx.outputs if isinstance(out, DataOutput)]
            if not payloads:
                continue
            paid = {out.address for out in tx.outputs if isinstance(out, PaymentOutput)}
            for address in paid:
                entries = self._data_index.setdefault(address, [])
                for payload in payloads:
                    entries.append(DataEntry(tx.txid, payload, block.height, tx_index))

    # -- persistence --

    def save(self, path) -> None:
        """One block per line: height, prev_hash hex, timestamp, tx hex list."""
        lines = [LEDGER_FILE_HEADER]
        for block in self.blocks:
            txs = ",".join(encode_transaction(tx).hex() for tx in block.transactions)
            lines.append(f"{block.height} {block.prev_hash.hex()} {block.timestamp} {txs}")
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path, payment_fee: int = DEFAULT_PAYMENT_FEE, clock=None) -> "Ledger":
        """Rebuild a ledger, verifying the hash chain; raises CorruptLedger."""
        try:
            with open(path, encoding="ascii") as fh:
                lines = [ln.rstrip("\n") for ln in fh]
        except OSError as exc:
            raise CorruptLedger(f"cannot read ledger file: {exc}") from None
        lines = [ln for ln in lines if ln.strip()]
        if not lines or lines[0] != LEDGER_FILE_HEADER:
            raise CorruptLedger("missing ledger format header")
        ledger = cls.__new__(cls)
        ledger.payment_fee = payment_fee
        ledger.clock = clock or (lambda: int(time.time()))
        ledger.blocks = []
        ledger.utxos = UtxoSet()
        ledger.pending = []
        ledger.rejected_log = []
        ledger._tx_index = {}
        ledger._data_index = {}
        ledger._pending_spent = set()
        ledger._pending_outputs = {}
        prev_hash = _GENESIS_HASH
        for lineno, line in enumerate(lines[1:]):
            try:
                height_s, prev_s, ts_s, txs_s = line.split(" ")
                height = int(height_s)
                timestamp = int(ts_s)
                stored_prev = bytes.fromhex(prev_s)
                txs = tuple(decode_transaction(bytes.fromhex(part)) for part in txs_s.split(","))
            except (ValueError, IndexError) as exc:
                raise CorruptLedger(f"unparseable block record at line {lineno + 2}: {exc}") from None
            if height != lineno:
                raise CorruptLedger(f"block height {height} out of sequence at line {lineno + 2}")
            if stored_prev != prev_hash:
                raise CorruptLedger(f"hash chain break at height {height}")
            block = Block(height, stored_prev, timestamp, txs)
            if not block.transactions or not block.transactions[0].is_coinbase:
                raise CorruptLedger(f"block {height} lacks a leading coinbase")
            try:
                ledger._append_block(block)
            except KeyError:
                raise CorruptLedger(f"block {height} spends unknown outputs") from None
            prev_hash = block.block_hash
        if not ledger.blocks:
            raise CorruptLedger("ledger file contains no blocks")
        return ledger
