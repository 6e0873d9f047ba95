"""Acceptance suite: one test per required behavior.

Each test prints a PASS line on success (visible with `pytest -s`); the test
names themselves give the per-criterion pass/fail report under `pytest -v`.
All tolerances are exact (satoshi-level) unless a runtime budget is stated.
"""

import itertools
import math
import time
from dataclasses import replace

from btcpgp import crypto
from btcpgp.certificate import (
    Endorsement,
    KeyId,
    TrustLevel,
    canonical_bytes,
    extract_addresses,
    parse_certificate,
)
from btcpgp.keyserver import (
    CHUNK_SIZE,
    MAX_KEY_BYTES,
    STORAGE_FEE,
    fragment_key,
    retrieve_key,
    store_payload,
)
from btcpgp.ledger import (
    BLOCK_REWARD,
    COIN,
    DataOutput,
    Ledger,
    PaymentOutput,
    Transaction,
    TxInput,
    Wallet,
    address_from_pubkey,
)
from btcpgp.trustops import (
    ENDORSEMENT_FEE,
    Validity,
    check_revocation_status,
    check_verification,
    compute_validity,
    endorse_certificate,
    initiate_verification,
    return_verification,
    revoke_certificate,
    trust_weight,
)

from conftest import LedgerEnv


def replay_utxos(ledger):
    """Sequential replay oracle: rebuilds the UTXO set and rejects any chain
    containing a double spend."""
    utxos = {}
    for block in ledger.blocks:
        for tx in block.transactions:
            for inp in tx.inputs:
                assert (inp.prev_txid, inp.index) in utxos, (
                    f"confirmed double spend in {tx.txid_hex}"
                )
                del utxos[(inp.prev_txid, inp.index)]
            for i, out in enumerate(tx.outputs):
                if isinstance(out, PaymentOutput):
                    utxos[(tx.txid, i)] = out
    return utxos


# --- 1. golden walkthrough ------------------------------------------------------

def test_golden_walkthrough(tmp_path, capsys):
    from btcpgp.cli import main

    started = time.perf_counter()
    code = main(
        [
            "--state-dir", str(tmp_path), "--seed", "2024", "--time", "1700000000",
            "demo", "run-paper-walkthrough",
        ]
    )
    elapsed = time.perf_counter() - started
    out = capsys.readouterr().out
    assert code == 0
    assert elapsed < 5.0, f"walkthrough took {elapsed:.2f}s"

    for line in [
        "Current Balance is: 0.033673",
        "Current Balance is: 0.01198579",
        "Amount Sent: 0.00856179",
        "Transaction of 0.00856179 Found!",
        "Result = True",
        "Sent Revocation Transaction of Amount: 0.000017",
        "Certificate Successfully Revoked",
        "Revoke Transaction of 0.000017 Found!",
    ]:
        assert line in out, f"missing output line: {line!r}"

    # Satoshi-exact ledger state, checked against the persisted chain.
    ledger = Ledger.load(tmp_path / "ledger.dat")
    cert = parse_certificate((tmp_path / "alice.cert").read_text())
    id_address, rev_address = extract_addresses(cert)
    bob = Wallet.load(tmp_path / "wallets" / "bob.dat")
    bob_return = bob.addresses[0]

    tx1 = ledger.find_transaction(bob_return, id_address, 856_179)
    tx2 = ledger.find_transaction(id_address, bob_return, 856_179)
    assert tx1 is not None and tx2 is not None and tx1 != tx2

    # Ledger shape: exactly one Tx-1, one Tx-2, one revocation transaction.
    def count_payments(from_address, to_address, amount):
        count = 0
        for block in ledger.blocks:
            for tx in block.transactions:
                if any(address_from_pubkey(i.pubkey) == from_address for i in tx.inputs) and any(
                    isinstance(o, PaymentOutput)
                    and o.address == to_address
                    and o.amount == amount
                    for o in tx.outputs
                ):
                    count += 1
        return count

    assert count_payments(bob_return, id_address, 856_179) == 1
    assert count_payments(id_address, bob_return, 856_179) == 1
    assert count_payments(id_address, rev_address, 1_700) == 1

    revocation = check_revocation_status(ledger, cert)
    assert revocation is not None
    rev_tx = ledger.get_transaction(revocation)
    rev_paid = [
        o.amount
        for o in rev_tx.outputs
        if isinstance(o, PaymentOutput) and o.address == rev_address
    ]
    assert rev_paid == [1_700]
    assert any(address_from_pubkey(i.pubkey) == id_address for i in rev_tx.inputs)

    # Bob ends with his stake back, having spent only Tx-1's miner fee.
    assert ledger.get_balance(bob) == 3_367_300 - 1_000
    print(f"\nPASS golden-walkthrough: exact amounts, Revoked status, {elapsed:.2f}s")


# --- 2. fragmentation law ---------------------------------------------------------

def test_fragmentation_law():
    keyid = KeyId(b"\x12\x34\x56\x78\x9a\xbc\xde\xf0")
    for length in itertools.chain(range(1, 401), (74, 75, 76, 149, 150, 151, MAX_KEY_BYTES)):
        fragments = fragment_key(keyid, bytes(length))
        assert len(fragments) == math.ceil(length / CHUNK_SIZE), length
        assert fragments[-1].header.total == len(fragments)
        assert all(len(f.encode()) <= 80 for f in fragments)
    assert len(fragment_key(keyid, bytes(75))) == 1
    print("\nPASS fragmentation-law: count == ceil(len/75) for 1..400 and boundaries")


# --- 3. key-server round-trip ------------------------------------------------------

def test_keyserver_roundtrip_200_random_payloads():
    started = time.perf_counter()
    env = LedgerEnv(seed=777)
    storer = env.wallet("storer")
    while env.ledger.get_balance(storer, minconf=0) < 30 * COIN:
        env.ledger.mine_block(storer)
    env.mine()

    stored = []
    scattered = 0
    for i in range(200):
        length = env.rng.randint(1, MAX_KEY_BYTES)
        payload = env.rng.randbytes(length)
        keyid = KeyId(env.rng.randbytes(8))
        owner = env.wallet(f"owner{i}").addresses[0]
        fragments = fragment_key(keyid, payload)
        if len(fragments) >= 3 and i % 2 == 1:
            # Fig-2 scenario: shuffled fragments confirmed across >= 3 blocks.
            order = list(range(len(fragments)))
            env.rng.shuffle(order)
            groups = [order[0::3], order[1::3], order[2::3]]
            for group in groups:
                for fid in group:
                    env.ledger.send_data(
                        storer, owner, fragments[fid].encode(),
                        fee=STORAGE_FEE, minconf=0,
                    )
                env.mine()
            heights = {e.height for e in env.ledger.list_data_by_address(owner)}
            assert len(heights) >= 3
            scattered += 1
        else:
            receipt = store_payload(env.ledger, storer, keyid, payload, owner)
            assert receipt.total == len(fragments)
            env.mine()
        stored.append((owner, keyid, payload))

    byte_errors = 0
    for owner, keyid, payload in stored:
        if retrieve_key(env.ledger, owner, keyid) != payload:
            byte_errors += 1
    elapsed = time.perf_counter() - started
    assert byte_errors == 0
    assert scattered >= 50
    assert elapsed < 60.0, f"keyserver suite took {elapsed:.1f}s"
    print(
        f"\nPASS keyserver-roundtrip: 200 payloads bit-identical "
        f"({scattered} scattered over >=3 blocks), {elapsed:.1f}s"
    )


# --- 4. validity rule table ---------------------------------------------------------

def _craft_endorsement(endorser_cert, target, level):
    key = crypto.unlock_private_key(endorser_cert.encrypted_private_key, "pw")
    return Endorsement(
        endorser_keyid=endorser_cert.keyid,
        endorser_address=extract_addresses(endorser_cert)[0],
        trust_level=level,
        endorser_public_key=endorser_cert.public_key,
        signature=crypto.sign(key, canonical_bytes(target)),
        signed_at=0,
    )


def test_validity_rule_table():
    env = LedgerEnv(seed=4242)
    endorsers = [
        env.cert(env.wallet(f"e{i}"), name=f"E{i}", email=f"e{i}@x.com", passphrase="pw")
        for i in range(3)
    ]
    target_wallet = env.wallet("target")
    target = env.cert(target_wallet, name="T", email="t@x.com")

    def oracle(levels):
        complete = sum(1 for l in levels if l is TrustLevel.COMPLETE)
        marginal = sum(1 for l in levels if l is TrustLevel.MARGINAL)
        if complete >= 1 or marginal >= 2:
            return Validity.VALID
        if marginal == 1:
            return Validity.MARGINAL
        return Validity.INVALID

    rank = {Validity.INVALID: 0, Validity.MARGINAL: 1, Validity.VALID: 2}
    levels = (TrustLevel.NONE, TrustLevel.MARGINAL, TrustLevel.COMPLETE)
    combos = 0
    for size in range(4):
        for combo in itertools.combinations_with_replacement(levels, size):
            endorsements = tuple(
                _craft_endorsement(endorsers[i], target, level)
                for i, level in enumerate(combo)
            )
            cert = replace(target, endorsements=endorsements)
            assert compute_validity(cert) is oracle(combo), combo
            combos += 1
            # Monotonicity: any added endorsement never lowers validity.
            if size < 3:
                base_rank = rank[compute_validity(cert)]
                for extra in levels:
                    grown = replace(
                        target,
                        endorsements=endorsements
                        + (_craft_endorsement(endorsers[size], target, extra),),
                    )
                    assert rank[compute_validity(grown)] >= base_rank

    # Revoked certificates are Invalid regardless of endorsements.
    id_address, _ = extract_addresses(target)
    env.fund(id_address, 100_000)
    endorsed = replace(
        target,
        endorsements=(_craft_endorsement(endorsers[0], target, TrustLevel.COMPLETE),),
    )
    assert compute_validity(endorsed, env.ledger) is Validity.VALID
    revoke_certificate(env.ledger, target_wallet, target)
    env.mine()
    assert compute_validity(endorsed, env.ledger) is Validity.INVALID
    print(f"\nPASS validity-rule-table: {combos} multisets match oracle; monotone; revoked=>Invalid")


# --- 5. endorsement fee exactness -----------------------------------------------------

def test_endorsement_fee_exactness_50_flows():
    env = LedgerEnv(seed=5150)
    owner_wallet = env.wallet("owner")
    target = env.cert(owner_wallet, name="Owner", email="o@x.com")
    target_id, _ = extract_addresses(target)
    env.fund(target_id, 20_000_000)

    endorsers = []
    for i in range(5):
        w = env.wallet(f"endorser{i}")
        cert = env.cert(w, name=f"E{i}", email=f"e{i}@x.com", passphrase="pw")
        env.fund(w.addresses[0], 5 * COIN)
        endorsers.append((w, cert))

    flows = 0
    for _ in range(50):
        w, endorser_cert = endorsers[env.rng.randrange(5)]
        endorser_id, _ = extract_addresses(endorser_cert)
        stake = env.rng.randint(10_000, 1_000_000)
        level = env.rng.choice((TrustLevel.MARGINAL, TrustLevel.COMPLETE))

        record = initiate_verification(env.ledger, w, target, stake, endorser_id)
        env.mine()
        return_verification(env.ledger, owner_wallet, record)
        env.mine()
        assert check_verification(env.ledger, record)

        target, endorsement = endorse_certificate(
            env.ledger, endorser_cert, "pw", owner_wallet, target, level, confirm=True
        )
        env.mine()

        fee_tx = env.ledger.get_transaction(endorsement.fee_txid)
        paid = [
            o.amount
            for o in fee_tx.outputs
            if isinstance(o, PaymentOutput) and o.address == endorser_id
        ]
        assert paid == [ENDORSEMENT_FEE], f"fee outputs {paid}"
        assert any(address_from_pubkey(i.pubkey) == target_id for i in fee_tx.inputs)
        # Signing precedes fee payment: the signature's timestamp is earlier
        # than the block that confirmed the fee.
        _, fee_height, _ = env.ledger._tx_index[endorsement.fee_txid]
        assert endorsement.signed_at < env.ledger.blocks[fee_height].timestamp
        flows += 1

    assert flows == 50
    assert len(target.endorsements) == 50
    print("\nPASS endorsement-fee: 50 flows, every fee exactly 100000 sats, signing first")


# --- 6. ledger conservation ------------------------------------------------------------

def test_ledger_conservation_1000_tx_50_blocks():
    env = LedgerEnv(seed=6006)
    wallets = [env.wallet(f"w{i}") for i in range(8)]
    for w in wallets:
        fee = env.ledger.payment_fee
        while env.ledger.get_balance(env.miner, minconf=0) < 5 * COIN + fee:
            env.ledger.mine_block(env.miner)
        env.ledger.send_to_address(env.miner, w.addresses[0], 5 * COIN, minconf=0)
    env.mine()

    def build_conflicting_pair(wallet):
        """Two hand-signed txs spending the same confirmed outpoint."""
        from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

        candidates = [
            op
            for address in wallet.addresses
            for op in env.ledger.utxos.outpoints_for(address)
            if op not in env.ledger._pending_spent
        ]
        if not candidates:
            return None
        outpoint = candidates[0]
        prev = env.ledger.utxos.get(outpoint)
        key = wallet.key_for(prev.address)
        pub = key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
        pair = []
        for dest_amount in (prev.amount - 1_000, prev.amount - 2_000):
            if dest_amount <= 0:
                return None
            outputs = (PaymentOutput(wallets[0].addresses[0], dest_amount),)
            unsigned = Transaction((TxInput(*outpoint, pub),), outputs)
            sig = key.sign(unsigned.signing_preimage())
            pair.append(Transaction((TxInput(*outpoint, pub, sig),), outputs))
        return pair

    sends = 0
    data_sends = 0
    conflict_pairs = []
    for block_round in range(50):
        if block_round % 2 == 0:
            # Inject the conflicting pair first, while the pool is empty and
            # confirmed outpoints are still unreserved.
            pair = build_conflicting_pair(env.rng.choice(wallets))
            if pair is not None:
                env.ledger.submit(pair[0])
                env.ledger.submit(pair[1])
                conflict_pairs.append(pair)
        for _ in range(20):
            src = env.rng.choice(wallets)
            dst = env.rng.choice(wallets)
            balance = env.ledger.get_balance(src, minconf=0)
            if balance <= env.ledger.payment_fee + 1:
                continue
            amount = env.rng.randint(1, balance - env.ledger.payment_fee)
            env.ledger.send_to_address(src, dst.addresses[0], amount, minconf=0)
            sends += 1
        if block_round % 5 == 0:
            src = env.rng.choice(wallets)
            balance = env.ledger.get_balance(src, minconf=0)
            if balance > STORAGE_FEE + 546 + 1:
                env.ledger.send_data(
                    src, wallets[0].addresses[0], env.rng.randbytes(40),
                    fee=1_000, minconf=0,
                )
                data_sends += 1
        env.mine()

        # Conservation at every boundary, via the independent replay oracle.
        utxos = replay_utxos(env.ledger)
        mined_blocks = len(env.ledger.blocks) - 1
        assert sum(o.amount for o in utxos.values()) == BLOCK_REWARD * mined_blocks
        assert env.ledger.utxos.total_value() == BLOCK_REWARD * mined_blocks

    total_submitted = sends + data_sends + 2 * len(conflict_pairs)
    assert total_submitted >= 1_000, f"only {total_submitted} transactions submitted"
    assert len(conflict_pairs) >= 20
    confirmed = lambda tx: env.ledger.get_transaction(tx.txid) is not None
    for pair in conflict_pairs:
        assert sum(1 for tx in pair if confirmed(tx)) == 1, "double spend not rejected"
    assert all(
        isinstance(out, PaymentOutput) for _, out in env.ledger.utxos.items()
    )
    assert not any(
        isinstance(out, DataOutput) for _, out in env.ledger.utxos.items()
    )
    print(
        f"\nPASS ledger-conservation: {total_submitted} transactions over 50 blocks "
        f"conserve value; {len(conflict_pairs)} double-spend pairs each resolved "
        f"to one confirmation"
    )


# --- 7. revocation permanence ----------------------------------------------------------

def test_revocation_permanence_and_adversarial_status():
    env = LedgerEnv(seed=7007)
    alice = env.wallet("alice")
    cert = env.cert(alice)
    id_address, rev_address = extract_addresses(cert)
    env.fund(id_address, 1_000_000)
    revoke_certificate(env.ledger, alice, cert)
    env.mine()
    assert check_revocation_status(env.ledger, cert) is not None

    noise = [env.wallet(f"n{i}") for i in range(3)]
    for w in noise:
        env.fund(w.addresses[0], 2 * COIN)
    for i in range(100):
        src = env.rng.choice(noise)
        balance = env.ledger.get_balance(src, minconf=0)
        if balance > env.ledger.payment_fee + 1:
            dest = rev_address if i % 7 == 0 else env.rng.choice(noise).addresses[0]
            amount = env.rng.randint(1, min(balance - env.ledger.payment_fee, COIN))
            env.ledger.send_to_address(src, dest, amount, minconf=0)
        env.mine()
        assert check_revocation_status(env.ledger, cert) is not None, (
            f"status flipped to Valid at extension block {i}"
        )

    # Third-party payments to the revocation address never revoke a live cert.
    bob = env.wallet("bob2")
    cert2 = env.cert(bob, name="Bob", email="b@x.com")
    _, rev2 = extract_addresses(cert2)
    stranger = env.wallet("stranger")
    env.fund(stranger.addresses[0], 2 * COIN)
    for _ in range(20):
        env.ledger.send_to_address(stranger, rev2, env.rng.randint(1_000, 100_000), minconf=0)
        env.mine()
        assert check_revocation_status(env.ledger, cert2) is None
    print("\nPASS revocation-permanence: 100 blocks never un-revoke; third parties never revoke")


# --- 8. first-per-verifier trust weight ---------------------------------------------------

def test_first_per_verifier_weight_100_schedules():
    for schedule in range(100):
        env = LedgerEnv(seed=8000 + schedule)
        owner = env.wallet("owner")
        cert = env.cert(owner)
        id_address, _ = extract_addresses(cert)

        fee = env.ledger.payment_fee
        n_verifiers = env.rng.randint(1, 3)
        verifiers = []
        while env.ledger.get_balance(env.miner, minconf=0) < 20 * COIN:
            env.ledger.mine_block(env.miner)
        env.ledger.send_to_address(env.miner, id_address, 5 * COIN, minconf=0)
        for i in range(n_verifiers):
            w = env.wallet(f"v{i}")
            env.ledger.send_to_address(env.miner, w.addresses[0], 5 * COIN, minconf=0)
            verifiers.append(w)
        env.mine()

        def round_trip(verifier, amount):
            record = initiate_verification(
                env.ledger, verifier, cert, amount, verifier.addresses[0]
            )
            env.mine()
            return_verification(env.ledger, owner, record)
            env.mine()
            assert check_verification(env.ledger, record)

        expected_first = {}
        for w in verifiers:
            amount = env.rng.randint(1_000, 2_000_000)
            round_trip(w, amount)
            expected_first[w.addresses[0]] = amount
        baseline = sum(expected_first.values())
        entries, weight = trust_weight(env.ledger, cert)
        assert weight == baseline

        for _ in range(env.rng.randint(1, 3)):
            w = env.rng.choice(verifiers)
            round_trip(w, env.rng.randint(1_000, 3_000_000))
            entries, weight = trust_weight(env.ledger, cert)
            assert weight == baseline, f"schedule {schedule}: repeat changed weight"
    print("\nPASS first-per-verifier: 100 random schedules keep effective weight invariant")
