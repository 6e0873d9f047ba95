import itertools
import random

import pytest

from btcpgp import CertificateParams, Ledger, Wallet, generate_certificate


class LedgerEnv:
    """A deterministic ledger, a miner, and exact-amount funding helpers.

    The clock is a monotonic counter so block timestamps strictly increase,
    and all randomness flows through one seeded RNG.
    """

    def __init__(self, seed: int = 0xBEEF, start_time: int = 1_700_000_000):
        self.rng = random.Random(seed)
        self._time = itertools.count(start_time)
        self.ledger = Ledger(clock=lambda: next(self._time))
        self.miner = Wallet("miner")
        self.miner.new_address(self.rng)

    def wallet(self, label: str = "w") -> Wallet:
        w = Wallet(label)
        w.new_address(self.rng)
        return w

    def mine(self, count: int = 1):
        block = None
        for _ in range(count):
            block = self.ledger.mine_block(self.miner)
        return block

    def fund(self, address: str, satoshis: int) -> bytes:
        """Pay an exact amount to `address` from mined rewards, then confirm."""
        fee = self.ledger.payment_fee
        while self.ledger.get_balance(self.miner, minconf=0) < satoshis + fee:
            self.ledger.mine_block(self.miner)
        txid = self.ledger.send_to_address(self.miner, address, satoshis, minconf=0)
        self.ledger.mine_block(self.miner)
        return txid

    def cert(
        self,
        wallet: Wallet,
        name: str = "Alice",
        email: str = "alice@bitcoinpgp.com",
        passphrase: str = "pwd",
        key_length: int = 1024,
    ):
        return generate_certificate(
            CertificateParams(
                name=name, email=email, passphrase=passphrase, key_length=key_length
            ),
            wallet,
            rng=self.rng,
            now=self.ledger.now(),
        )


@pytest.fixture
def env() -> LedgerEnv:
    return LedgerEnv()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
