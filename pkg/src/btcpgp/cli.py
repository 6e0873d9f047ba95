"""Command-line front end.

Keeps everything in a state directory (ledger file, wallets, verification
records, certificate keys, config) and exposes one subcommand per library
operation. By default every transaction is mined immediately by an internal
miner wallet so commands observe confirmed state; --no-auto-mine plus the
`mine` command gives manual control.

Exit codes: 0 success (a false verification result is still success), 1 usage
error, 2 domain error with the error token on stderr. --seed and --time make
runs replay-deterministic.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from pathlib import Path

import click
from filelock import FileLock

from . import certificate as cert_mod
from . import keyserver as keyserver_mod
from . import trustops
from .certificate import (
    CertificateParams,
    KeyId,
    TrustLevel,
    extract_addresses,
    generate_certificate,
    parse_certificate,
    serialize_certificate,
    verify_self_signature,
)
from .crypto import EncryptedPrivateKey
from .errors import BtcPgpError, ValidationFailure
from .ledger import (
    DEFAULT_PAYMENT_FEE,
    Ledger,
    PaymentOutput,
    Wallet,
    decode_transaction,
    encode_transaction,
    format_amount,
    parse_amount,
)
from .trustops import (
    DEFAULT_REVOCATION_AMOUNT,
    VerificationRecord,
    record_from_line,
    record_to_line,
)

AUTO_MINER_LABEL = "_miner"

_CONFIG_DEFAULTS = {
    "auto_mine": True,
    "payment_fee": DEFAULT_PAYMENT_FEE,
    "default_revocation_amount": DEFAULT_REVOCATION_AMOUNT,
}


@dataclass
class CliConfig:
    state_dir: Path
    ledger_path: Path
    auto_mine: bool = True
    payment_fee: int = DEFAULT_PAYMENT_FEE
    default_revocation_amount: int = DEFAULT_REVOCATION_AMOUNT


def _load_config(state_dir: Path) -> CliConfig:
    values = dict(_CONFIG_DEFAULTS)
    path = state_dir / "config.toml"
    if path.exists():
        for line in path.read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, raw = line.partition("=")
            key, raw = key.strip(), raw.strip()
            if key == "auto_mine":
                values[key] = raw.lower() in ("true", "1", "yes")
            elif key in ("payment_fee", "default_revocation_amount"):
                values[key] = int(raw)
    else:
        path.write_text(
            "auto_mine = true\n"
            f"payment_fee = {DEFAULT_PAYMENT_FEE}\n"
            f"default_revocation_amount = {DEFAULT_REVOCATION_AMOUNT}\n"
        )
    return CliConfig(
        state_dir=state_dir,
        ledger_path=state_dir / "ledger.dat",
        auto_mine=bool(values["auto_mine"]),
        payment_fee=int(values["payment_fee"]),
        default_revocation_amount=int(values["default_revocation_amount"]),
    )


class CliState:
    """Loads and persists everything under the state directory."""

    def __init__(self, state_dir: Path, seed: int | None, fixed_time: int | None,
                 auto_mine: bool | None):
        state_dir.mkdir(parents=True, exist_ok=True)
        (state_dir / "wallets").mkdir(exist_ok=True)
        (state_dir / "records").mkdir(exist_ok=True)
        (state_dir / "keys").mkdir(exist_ok=True)
        self.config = _load_config(state_dir)
        if auto_mine is not None:
            self.config.auto_mine = auto_mine
        self.rng = random.Random(seed) if seed is not None else None
        clock = (lambda: fixed_time) if fixed_time is not None else None
        if self.config.ledger_path.exists():
            self.ledger = Ledger.load(
                self.config.ledger_path, payment_fee=self.config.payment_fee, clock=clock
            )
        else:
            self.ledger = Ledger(payment_fee=self.config.payment_fee, clock=clock)
        self._wallets: dict[str, Wallet] = {}
        self._load_pending()

    # -- pending pool persistence (survives commands when auto-mine is off) --

    @property
    def _pending_path(self) -> Path:
        return self.config.state_dir / "pending.dat"

    def _load_pending(self) -> None:
        if not self._pending_path.exists():
            return
        for line in self._pending_path.read_text().splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                self.ledger.submit(decode_transaction(bytes.fromhex(line)))
            except (ValueError, ValidationFailure):
                continue  # no longer valid against the current chain

    def _save_pending(self) -> None:
        lines = [encode_transaction(tx).hex() for tx in self.ledger.pending]
        self._pending_path.write_text("\n".join(lines) + ("\n" if lines else ""))

    # -- wallets --

    def wallet_path(self, label: str) -> Path:
        return self.config.state_dir / "wallets" / f"{label}.dat"

    def wallet(self, label: str, create: bool = False) -> Wallet:
        if label in self._wallets:
            return self._wallets[label]
        path = self.wallet_path(label)
        if path.exists():
            wallet = Wallet.load(path)
        elif create:
            wallet = Wallet(label)
        else:
            raise click.UsageError(f"no wallet named {label!r}; run `wallet new` first")
        self._wallets[label] = wallet
        return wallet

    def auto_miner(self) -> Wallet:
        miner = self.wallet(AUTO_MINER_LABEL, create=True)
        if not miner.addresses:
            miner.new_address(self.rng)
        return miner

    def mine_if_auto(self) -> None:
        if self.config.auto_mine and self.ledger.pending:
            self.ledger.mine_block(self.auto_miner())

    # -- records --

    def record_path(self, record_id: str) -> Path:
        return self.config.state_dir / "records" / f"{record_id}.rec"

    def save_record(self, record: VerificationRecord) -> str:
        record_id = record.tx1.hex()[:16]
        self.record_path(record_id).write_text(record_to_line(record) + "\n")
        return record_id

    def load_record(self, record_id: str) -> VerificationRecord:
        path = self.record_path(record_id)
        if not path.exists():
            raise click.UsageError(f"no verification record {record_id!r}")
        return record_from_line(path.read_text().strip())

    # -- certificate private keys --

    def save_cert_key(self, keyid: KeyId, enc: EncryptedPrivateKey) -> None:
        (self.config.state_dir / "keys" / f"{keyid.hex}.key").write_bytes(enc.to_bytes())

    def load_cert_key(self, keyid: KeyId) -> EncryptedPrivateKey | None:
        path = self.config.state_dir / "keys" / f"{keyid.hex}.key"
        if not path.exists():
            return None
        return EncryptedPrivateKey.from_bytes(path.read_bytes())

    def commit(self) -> None:
        self.ledger.save(self.config.ledger_path)
        self._save_pending()
        for wallet in self._wallets.values():
            wallet.save(self.wallet_path(wallet.label))


def _load_cert(state: CliState, path: str):
    file = Path(path)
    if not file.exists():
        raise click.UsageError(f"certificate file not found: {path}")
    cert = parse_certificate(file.read_text())
    key = state.load_cert_key(cert.keyid)
    if key is not None:
        cert = cert_mod.attach_private_key(cert, key)
    return cert


pass_state = click.make_pass_decorator(CliState)


@click.group()
@click.option("--state-dir", envvar="BTCPGP_STATE_DIR", default="~/.btcpgp",
              show_default=True, help="Directory holding ledger, wallets, and records.")
@click.option("--seed", type=int, default=None,
              help="Seed key generation for deterministic replay.")
@click.option("--time", "fixed_time", type=int, default=None,
              help="Fixed timestamp for blocks and certificates.")
@click.option("--auto-mine/--no-auto-mine", "auto_mine", default=None,
              help="Override the configured auto-mine setting.")
@click.pass_context
def cli(ctx, state_dir, seed, fixed_time, auto_mine):
    """Bitcoin-backed PGP certificates on a local simulated ledger."""
    state_dir = Path(state_dir).expanduser()
    state_dir.mkdir(parents=True, exist_ok=True)
    lock = FileLock(str(state_dir / ".lock"))
    lock.acquire(timeout=30)
    ctx.call_on_close(lock.release)
    ctx.obj = CliState(state_dir, seed, fixed_time, auto_mine)


# --- wallet ------------------------------------------------------------------

@cli.group()
def wallet():
    """Create, fund, and inspect wallets."""


@wallet.command("new")
@click.option("--label", required=True)
@pass_state
def wallet_new(state: CliState, label):
    """Create a wallet with one fresh address."""
    if state.wallet_path(label).exists():
        raise click.UsageError(f"wallet {label!r} already exists")
    w = state.wallet(label, create=True)
    address = w.new_address(state.rng)
    state.commit()
    click.echo(f"Wallet: {label}")
    click.echo(f"Address: {address}")


@wallet.command("balance")
@click.option("--label", required=True)
@click.option("--minconf", type=int, default=1, show_default=True)
@pass_state
def wallet_balance(state: CliState, label, minconf):
    """Print the wallet balance in coins."""
    w = state.wallet(label)
    click.echo(f"Current Balance is: {format_amount(state.ledger.get_balance(w, minconf))}")


@wallet.command("fund")
@click.option("--label", required=True)
@click.option("--blocks", type=int, default=1, show_default=True,
              help="Number of reward blocks to mine to this wallet.")
@pass_state
def wallet_fund(state: CliState, label, blocks):
    """Mine block rewards into the wallet."""
    w = state.wallet(label, create=True)
    if not w.addresses:
        w.new_address(state.rng)
    for _ in range(blocks):
        state.ledger.mine_block(w)
    state.commit()
    click.echo(f"Mined {blocks} block(s) to {label}")
    click.echo(f"Current Balance is: {format_amount(state.ledger.get_balance(w))}")


@wallet.command("address")
@click.option("--label", required=True)
@pass_state
def wallet_address(state: CliState, label):
    """Generate a fresh receiving address."""
    w = state.wallet(label)
    address = w.new_address(state.rng)
    state.commit()
    click.echo(f"Address: {address}")


# --- certificates --------------------------------------------------------------

@cli.group()
def cert():
    """Generate and inspect certificates."""


@cert.command("generate")
@click.option("--wallet", "wallet_label", required=True,
              help="Wallet that receives the two embedded addresses.")
@click.option("--name", required=True)
@click.option("--email", required=True)
@click.option("--passphrase", required=True)
@click.option("--key-length", type=int, default=2048, show_default=True)
@click.option("--out", "out_path", default=None,
              help="Armored output file [default: <state-dir>/<name>.cert]")
@pass_state
def cert_generate(state: CliState, wallet_label, name, email, passphrase, key_length, out_path):
    """Generate a self-signed certificate with embedded Bitcoin addresses."""
    w = state.wallet(wallet_label, create=True)
    cert = generate_certificate(
        CertificateParams(name=name, email=email, passphrase=passphrase, key_length=key_length),
        w,
        rng=state.rng,
        now=state.ledger.now(),
    )
    id_address, rev_address = extract_addresses(cert)
    out = Path(out_path) if out_path else state.config.state_dir / f"{name.lower()}.cert"
    out.write_text(serialize_certificate(cert))
    state.save_cert_key(cert.keyid, cert.encrypted_private_key)
    state.commit()
    click.echo(f"Key-Type: {cert.algorithm}")
    click.echo(f"Name-Comment: {id_address}|{rev_address}")
    click.echo(f"Passphrase: {passphrase}")
    click.echo(f"Name-Real: {name}")
    click.echo(f"Name-Email: {email}")
    click.echo(f"Key-Length: {key_length}")
    click.echo(f"Certificate written to {out}")


@cert.command("inspect")
@click.argument("cert_file")
@pass_state
def cert_inspect(state: CliState, cert_file):
    """Show certificate fields, addresses, endorsements, and status."""
    cert = _load_cert(state, cert_file)
    id_address, rev_address = extract_addresses(cert)
    click.echo(f"Version: {cert.version}")
    click.echo(f"Holder: {cert.holder_name} <{cert.holder_email}>")
    click.echo(f"KeyId: {cert.keyid.hex}")
    click.echo(f"Key: {cert.algorithm}-{cert.key_length}")
    click.echo(f"Identity-Verification Address: {id_address}")
    click.echo(f"Revocation Address: {rev_address}")
    click.echo(f"Validity Period: {cert.validity_start} .. {cert.validity_end}")
    click.echo(f"Preferred-Symmetric: {cert.preferred_symmetric_alg}")
    click.echo(f"Self-Signature: {'OK' if verify_self_signature(cert) else 'BAD'}")
    click.echo(f"Endorsements: {len(cert.endorsements)}")
    for e in cert.endorsements:
        fee = e.fee_txid.hex() if e.fee_txid else "unpaid"
        click.echo(f"  - keyid {e.endorser_keyid.hex} trust {e.trust_level.name} fee {fee}")
    revocation = trustops.check_revocation_status(state.ledger, cert)
    status = f"Revoked ({revocation.hex()})" if revocation else "Valid"
    click.echo(f"Status: {status}")
    click.echo(f"Validity: {trustops.compute_validity(cert, state.ledger).value}")


# --- identity verification -------------------------------------------------------

@cli.group()
def verify():
    """Tx-1/Tx-2 identity verification."""


@verify.command("start")
@click.option("--wallet", "wallet_label", required=True, help="Verifier wallet.")
@click.option("--cert", "cert_file", required=True)
@click.option("--amount", required=True, help="Stake in coins, e.g. 0.00856179")
@click.option("--return-address", required=True)
@pass_state
def verify_start(state: CliState, wallet_label, cert_file, amount, return_address):
    """Send Tx-1, the identity-verification stake."""
    w = state.wallet(wallet_label)
    cert = _load_cert(state, cert_file)
    sats = parse_amount(amount)
    id_address, _ = extract_addresses(cert)
    click.echo(f"Current Balance is: {format_amount(state.ledger.get_balance(w))}")
    record = trustops.initiate_verification(state.ledger, w, cert, sats, return_address)
    state.mine_if_auto()
    record_id = state.save_record(record)
    state.commit()
    click.echo(f"Sending {format_amount(sats)} to {id_address}")
    click.echo(f"Record: {record_id}")


@verify.command("return")
@click.option("--wallet", "wallet_label", required=True, help="Certificate owner wallet.")
@click.option("--record", "record_id", required=True)
@pass_state
def verify_return(state: CliState, wallet_label, record_id):
    """Send Tx-2, returning the staked funds."""
    w = state.wallet(wallet_label)
    record = state.load_record(record_id)
    click.echo(f"Current Balance is: {format_amount(state.ledger.get_balance(w))}")
    trustops.return_verification(state.ledger, w, record)
    state.mine_if_auto()
    state.save_record(record)
    state.commit()
    click.echo(f"Sending {format_amount(record.amount)} to {record.verifier_return_address}")


@verify.command("check")
@click.option("--record", "record_id", required=True)
@pass_state
def verify_check(state: CliState, record_id):
    """Compare Tx-1 and Tx-2; prints Result = True/False."""
    record = state.load_record(record_id)
    click.echo(f"Amount Sent: {format_amount(record.amount)}")
    result = trustops.check_verification(state.ledger, record)
    if result:
        click.echo(f"Transaction of {format_amount(record.amount)} Found!")
        state.save_record(record)
        state.commit()
    click.echo(f"Result = {result}")


# --- endorsement / revocation / status --------------------------------------------

@cli.command("endorse")
@click.option("--cert", "cert_file", required=True, help="Target certificate file.")
@click.option("--endorser-cert", "endorser_file", required=True)
@click.option("--passphrase", required=True, help="Endorser key passphrase.")
@click.option("--owner-wallet", "owner_label", required=True,
              help="Wallet controlling the target's id address; pays the fee.")
@click.option("--trust", type=click.Choice(["complete", "marginal"]), required=True)
@click.option("--confirm", is_flag=True, default=False,
              help="Required; endorsement is never automatic.")
@pass_state
def endorse(state: CliState, cert_file, endorser_file, passphrase, owner_label, trust, confirm):
    """Sign a verified certificate and pay the fixed 0.001 incentive fee."""
    target = _load_cert(state, cert_file)
    endorser = _load_cert(state, endorser_file)
    owner = state.wallet(owner_label)
    level = TrustLevel.COMPLETE if trust == "complete" else TrustLevel.MARGINAL
    updated, endorsement = trustops.endorse_certificate(
        state.ledger, endorser, passphrase, owner, target, level, confirm=confirm
    )
    state.mine_if_auto()
    Path(cert_file).write_text(serialize_certificate(updated))
    state.commit()
    fee = endorsement.fee_txid.hex() if endorsement.fee_txid else "UNPAID (FeePaymentFailed)"
    click.echo(f"Endorsed by {endorsement.endorser_keyid.hex} at trust {endorsement.trust_level.name}")
    click.echo(f"Endorsement fee transaction: {fee}")


@cli.command("revoke")
@click.option("--wallet", "wallet_label", required=True, help="Certificate owner wallet.")
@click.option("--cert", "cert_file", required=True)
@click.option("--amount", default=None, help="Revocation amount in coins [default: 0.000017]")
@pass_state
def revoke(state: CliState, wallet_label, cert_file, amount):
    """Revoke a certificate: pay from its id address to its revocation address."""
    w = state.wallet(wallet_label)
    cert = _load_cert(state, cert_file)
    sats = parse_amount(amount) if amount else state.config.default_revocation_amount
    _, rev_address = extract_addresses(cert)
    trustops.revoke_certificate(state.ledger, w, cert, sats)
    state.mine_if_auto()
    state.commit()
    click.echo(
        f"Sent Revocation Transaction of Amount: {format_amount(sats)} "
        f"to Revocation Address: {rev_address}"
    )
    click.echo("Certificate Successfully Revoked")


@cli.command("status")
@click.option("--cert", "cert_file", required=True)
@pass_state
def status(state: CliState, cert_file):
    """Report revocation status, validity level, and trust weight."""
    cert = _load_cert(state, cert_file)
    extract_addresses(cert)
    click.echo("Bitcoin Address Verified")
    revocation = trustops.check_revocation_status(state.ledger, cert)
    if revocation is None:
        click.echo("Certificate Status: Valid")
    else:
        tx = state.ledger.get_transaction(revocation)
        _, rev_address = extract_addresses(cert)
        paid = sum(
            out.amount
            for out in tx.outputs
            if isinstance(out, PaymentOutput) and out.address == rev_address
        )
        click.echo(f"Amount Sent: {format_amount(paid)}")
        click.echo(f"Revoke Transaction of {format_amount(paid)} Found!")
        click.echo(f"Certificate Status: Revoked ({revocation.hex()})")
    click.echo(f"Validity: {trustops.compute_validity(cert, state.ledger).value}")
    entries, weight = trustops.trust_weight(state.ledger, cert)
    click.echo(f"Trust Weight: {format_amount(weight)} ({len(entries)} verification(s))")


# --- key server ---------------------------------------------------------------

@cli.group()
def keyserver():
    """Store and fetch certificates via ledger data transactions."""


@keyserver.command("store")
@click.option("--wallet", "wallet_label", required=True, help="Wallet paying storage fees.")
@click.option("--cert", "cert_file", required=True)
@click.option("--address", "owner_address", default=None,
              help="Owner address for retrieval [default: the cert's id address]")
@pass_state
def keyserver_store(state: CliState, wallet_label, cert_file, owner_address):
    """Fragment a certificate and store it on the ledger."""
    w = state.wallet(wallet_label)
    cert = _load_cert(state, cert_file)
    if owner_address is None:
        owner_address, _ = extract_addresses(cert)
    receipt = keyserver_mod.store_key(state.ledger, w, cert, owner_address)
    state.mine_if_auto()
    state.commit()
    click.echo(f"Stored key {receipt.keyid.hex} at {receipt.owner_address}")
    click.echo(f"Fragments: {receipt.total}")


@keyserver.command("fetch")
@click.option("--address", "owner_address", required=True)
@click.option("--keyid", "keyid_hex", required=True, help="16 hex digits.")
@click.option("--out", "out_path", default=None,
              help="Write the armored certificate here instead of stdout.")
@pass_state
def keyserver_fetch(state: CliState, owner_address, keyid_hex, out_path):
    """Retrieve and reassemble a stored certificate."""
    try:
        keyid = KeyId.from_hex(keyid_hex)
    except ValueError as exc:
        raise click.UsageError(f"bad --keyid: {exc}")
    body = keyserver_mod.retrieve_key(state.ledger, owner_address, keyid)
    cert = cert_mod.parse_certificate_body(body)
    armored = serialize_certificate(cert)
    if out_path:
        Path(out_path).write_text(armored)
        click.echo(f"Certificate written to {out_path}")
    else:
        click.echo(armored, nl=False)


# --- mining -------------------------------------------------------------------

@cli.command("mine")
@click.option("--wallet", "wallet_label", default=AUTO_MINER_LABEL, show_default=True,
              help="Wallet receiving rewards and fees.")
@click.option("--count", type=int, default=1, show_default=True)
@pass_state
def mine(state: CliState, wallet_label, count):
    """Produce blocks, confirming pending transactions."""
    w = state.wallet(wallet_label, create=True)
    if not w.addresses:
        w.new_address(state.rng)
    for _ in range(count):
        block = state.ledger.mine_block(w)
        click.echo(f"Mined block {block.height} ({len(block.transactions) - 1} transaction(s))")
    state.commit()


# --- demo ---------------------------------------------------------------------

@cli.group()
def demo():
    """Scripted scenarios."""


@demo.command("run-paper-walkthrough")
@pass_state
def run_paper_walkthrough(state: CliState):
    """Replay the eight-step certificate lifecycle with its exact amounts."""
    alice_cert_path = state.config.state_dir / "alice.cert"
    if alice_cert_path.exists():
        raise click.UsageError(
            "walkthrough artifacts already present; use a fresh --state-dir"
        )
    ledger = state.ledger
    miner = state.wallet("miner", create=True)
    if not miner.addresses:
        miner.new_address(state.rng)
    alice = state.wallet("alice", create=True)
    bob = state.wallet("bob", create=True)
    bob_return = bob.new_address(state.rng)
    ledger.mine_block(miner)

    click.echo("Step 1: Alice (Certificate Owner) Generates Bitcoin-Based PGP Certificate:")
    cert = generate_certificate(
        CertificateParams(name="Alice", email="alice@bitcoinpgp.com",
                          passphrase="pwd", key_length=2048),
        alice,
        rng=state.rng,
        now=ledger.now(),
    )
    id_address, rev_address = extract_addresses(cert)
    alice_cert_path.write_text(serialize_certificate(cert))
    state.save_cert_key(cert.keyid, cert.encrypted_private_key)
    click.echo(f"Key-Type: {cert.algorithm}")
    click.echo(f"Name-Comment: {id_address}|{rev_address}")
    click.echo("Passphrase: pwd")
    click.echo("Name-Real: Alice")
    click.echo("Name-Email: alice@bitcoinpgp.com")
    click.echo(f"Key-Length: {cert.key_length}")

    click.echo("Step 2: Alice sends Certificate to Bob (performed out of band)")

    # Stage the walkthrough balances: Bob holds 0.033673, Alice's id address
    # 0.003424, so both balance lines come out exactly.
    ledger.send_to_address(miner, id_address, parse_amount("0.003424"), minconf=0)
    ledger.send_to_address(miner, bob_return, parse_amount("0.033673"), minconf=0)
    ledger.mine_block(miner)

    click.echo("Step 3: Bob sends Identity-Verification transaction to embedded Bitcoin Address")
    stake = parse_amount("0.00856179")
    click.echo(f"Current Balance is: {format_amount(ledger.get_balance(bob))}")
    record = trustops.initiate_verification(ledger, bob, cert, stake, bob_return)
    ledger.mine_block(miner)
    record_id = state.save_record(record)
    click.echo(f"Sending {format_amount(stake)} to {id_address}")

    click.echo("Step 4: Alice sends Identity-Verification funds back to Bob's Bitcoin address")
    click.echo(f"Current Balance is: {format_amount(ledger.get_balance(alice))}")
    trustops.return_verification(ledger, alice, record)
    ledger.mine_block(miner)
    state.save_record(record)
    click.echo(f"Sending {format_amount(stake)} to {bob_return}")

    click.echo("Step 5: Bob checks for return of Identity-Verification funds")
    click.echo(f"Amount Sent: {format_amount(stake)}")
    result = trustops.check_verification(ledger, record)
    if result:
        click.echo(f"Transaction of {format_amount(stake)} Found!")
        state.save_record(record)
    click.echo(f"Result = {result}")

    click.echo("Step 6: Bob checks Alice's certificate for validity")
    revocation = trustops.check_revocation_status(ledger, cert)
    click.echo(f"Certificate Status: {'Valid' if revocation is None else 'Revoked'}")

    click.echo("Step 7: Alice (at later date) revokes her certificate")
    revocation_amount = parse_amount("0.000017")
    trustops.revoke_certificate(ledger, alice, cert, revocation_amount)
    ledger.mine_block(miner)
    click.echo(
        f"Sent Revocation Transaction of Amount: {format_amount(revocation_amount)} "
        f"to Revocation Address: {rev_address}"
    )
    click.echo("Certificate Successfully Revoked")

    click.echo("Step 8: Bob checks Alice's certificate for validity")
    click.echo("Bitcoin Address Verified")
    revocation = trustops.check_revocation_status(ledger, cert)
    tx = ledger.get_transaction(revocation)
    paid = sum(
        out.amount
        for out in tx.outputs
        if isinstance(out, PaymentOutput) and out.address == rev_address
    )
    click.echo(f"Amount Sent: {format_amount(paid)}")
    click.echo(f"Revoke Transaction of {format_amount(paid)} Found!")
    click.echo(f"Record: {record_id}")
    state.commit()


# --- entry point -----------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    """Run the CLI, mapping errors to exit codes (1 usage, 2 domain)."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except BtcPgpError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
