"""Account and module-account bookkeeping with supply tracking.

The bank holds user accounts and a fixed registry of named module accounts
(fee collection, burn staging, community pool, bond pools, treasury, reward
accrual). Every mint and burn is recorded so the supply identity

    total supply == genesis supply + cumulative minted - cumulative burned

can be checked per denomination at any block boundary, alongside the
balance-sum identity (total supply == sum of every account and module
balance).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coins import coins_ge, coins_as_strings, normalize
from .errors import InsufficientFunds, InvariantViolation, UnknownModule

FEE_COLLECTOR = "FeeCollector"
BURN_MODULE = "BurnModule"
COMMUNITY_POOL = "CommunityPool"
BONDED_POOL = "BondedPool"
NOT_BONDED_POOL = "NotBondedPool"
TREASURY = "Treasury"
DISTRIBUTION = "Distribution"

# Registered once at genesis; names are unique and never change afterwards.
DEFAULT_MODULE_ACCOUNTS = (
    FEE_COLLECTOR,
    BURN_MODULE,
    COMMUNITY_POOL,
    BONDED_POOL,
    NOT_BONDED_POOL,
    TREASURY,
    DISTRIBUTION,
)


@dataclass
class SupplyLedger:
    """Per-denom running totals backing the supply identity."""

    totals: dict = field(default_factory=dict)
    genesis_totals: dict = field(default_factory=dict)
    cumulative_minted: dict = field(default_factory=dict)
    cumulative_burned: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        return {
            "totals": coins_as_strings(self.totals),
            "genesis": coins_as_strings(self.genesis_totals),
            "minted": coins_as_strings(self.cumulative_minted),
            "burned": coins_as_strings(self.cumulative_burned),
        }


class Bank:
    """Mutable balance store. All operations either complete or raise."""

    def __init__(self, module_names=DEFAULT_MODULE_ACCOUNTS):
        self.accounts: dict = {}
        self.modules: dict = {name: {} for name in module_names}
        self.supply = SupplyLedger()

    # -- genesis seeding ---------------------------------------------------

    def genesis_credit_account(self, address: str, denom: str, amount: int) -> None:
        self._credit(self.accounts.setdefault(address, {}), denom, amount)
        self._bump(self.supply.totals, denom, amount)
        self._bump(self.supply.genesis_totals, denom, amount)

    def genesis_credit_module(self, name: str, denom: str, amount: int) -> None:
        self._require_module(name)
        self._credit(self.modules[name], denom, amount)
        self._bump(self.supply.totals, denom, amount)
        self._bump(self.supply.genesis_totals, denom, amount)

    # -- queries -----------------------------------------------------------

    def balance(self, address: str, denom: str) -> int:
        return self.accounts.get(address, {}).get(denom, 0)

    def balances(self, address: str) -> dict:
        return dict(self.accounts.get(address, {}))

    def module_balance(self, name: str, denom: str) -> int:
        self._require_module(name)
        return self.modules[name].get(denom, 0)

    def module_balances(self, name: str) -> dict:
        self._require_module(name)
        return dict(self.modules[name])

    def total_supply(self, denom: str) -> int:
        return self.supply.totals.get(denom, 0)

    # -- transfers ---------------------------------------------------------

    def transfer(self, sender: str, recipient: str, coins: dict) -> None:
        coins = normalize(dict(coins))
        if not coins:
            return
        src = self.accounts.get(sender, {})
        if not coins_ge(src, coins):
            raise InsufficientFunds(f"{sender} cannot cover {coins}")
        self._debit(src, coins)
        dst = self.accounts.setdefault(recipient, {})
        for d, a in coins.items():
            self._credit(dst, d, a)

    def send_account_to_module(self, sender: str, module: str, coins: dict) -> None:
        self._require_module(module)
        coins = normalize(dict(coins))
        if not coins:
            return
        src = self.accounts.get(sender, {})
        if not coins_ge(src, coins):
            raise InsufficientFunds(f"{sender} cannot cover {coins}")
        self._debit(src, coins)
        for d, a in coins.items():
            self._credit(self.modules[module], d, a)

    def send_module_to_account(self, module: str, recipient: str, coins: dict) -> None:
        self._require_module(module)
        coins = normalize(dict(coins))
        if not coins:
            return
        src = self.modules[module]
        if not coins_ge(src, coins):
            raise InsufficientFunds(f"module {module} cannot cover {coins}")
        self._debit(src, coins)
        dst = self.accounts.setdefault(recipient, {})
        for d, a in coins.items():
            self._credit(dst, d, a)

    def send_module_to_module(self, src_module: str, dst_module: str, coins: dict) -> None:
        self._require_module(src_module)
        self._require_module(dst_module)
        coins = normalize(dict(coins))
        if not coins:
            return
        src = self.modules[src_module]
        if not coins_ge(src, coins):
            raise InsufficientFunds(f"module {src_module} cannot cover {coins}")
        self._debit(src, coins)
        for d, a in coins.items():
            self._credit(self.modules[dst_module], d, a)

    # -- supply changes ----------------------------------------------------

    def mint(self, module: str, coins: dict) -> None:
        """Create coins inside a module account, growing total supply."""
        self._require_module(module)
        coins = normalize(dict(coins))
        for d, a in coins.items():
            self._credit(self.modules[module], d, a)
            self._bump(self.supply.totals, d, a)
            self._bump(self.supply.cumulative_minted, d, a)

    def burn(self, module: str, coins: dict) -> None:
        """Destroy coins held by a module account, shrinking total supply."""
        self._require_module(module)
        coins = normalize(dict(coins))
        if not coins:
            return
        src = self.modules[module]
        if not coins_ge(src, coins):
            raise InsufficientFunds(f"module {module} cannot burn {coins}")
        self._debit(src, coins)
        for d, a in coins.items():
            self._bump(self.supply.totals, d, -a)
            self._bump(self.supply.cumulative_burned, d, a)

    # -- identity checks ---------------------------------------------------

    def verify_supply_identity(self) -> None:
        denoms = set(self.supply.totals) | set(self.supply.genesis_totals)
        denoms |= set(self.supply.cumulative_minted) | set(self.supply.cumulative_burned)
        held: dict = {}
        for bal in self.accounts.values():
            for d, a in bal.items():
                held[d] = held.get(d, 0) + a
        for bal in self.modules.values():
            for d, a in bal.items():
                held[d] = held.get(d, 0) + a
        for d in denoms | set(held):
            total = self.supply.totals.get(d, 0)
            expected = (
                self.supply.genesis_totals.get(d, 0)
                + self.supply.cumulative_minted.get(d, 0)
                - self.supply.cumulative_burned.get(d, 0)
            )
            if total != expected:
                raise InvariantViolation(
                    f"supply identity broken for {d}: total {total} != genesis+minted-burned {expected}"
                )
            if total != held.get(d, 0):
                raise InvariantViolation(
                    f"balance sum broken for {d}: total {total} != held {held.get(d, 0)}"
                )

    def canonical(self) -> dict:
        return {
            "accounts": {
                addr: coins_as_strings(bal)
                for addr, bal in sorted(self.accounts.items())
                if bal
            },
            "modules": {name: coins_as_strings(bal) for name, bal in sorted(self.modules.items())},
            "supply": self.supply.canonical(),
        }

    # -- internals ----------------------------------------------------------

    def _require_module(self, name: str) -> None:
        if name not in self.modules:
            raise UnknownModule(f"module account {name!r} is not registered")

    @staticmethod
    def _credit(store: dict, denom: str, amount: int) -> None:
        if amount < 0:
            raise ValueError("credit amount must be non-negative")
        store[denom] = store.get(denom, 0) + amount

    @staticmethod
    def _debit(store: dict, coins: dict) -> None:
        for d, a in coins.items():
            rem = store[d] - a
            if rem:
                store[d] = rem
            else:
                del store[d]

    @staticmethod
    def _bump(store: dict, denom: str, delta: int) -> None:
        new = store.get(denom, 0) + delta
        if new:
            store[denom] = new
        else:
            store.pop(denom, None)

    def __deepcopy__(self, memo):
        clone = Bank.__new__(Bank)
        clone.accounts = {a: dict(b) for a, b in self.accounts.items()}
        clone.modules = {m: dict(b) for m, b in self.modules.items()}
        clone.supply = SupplyLedger(
            totals=dict(self.supply.totals),
            genesis_totals=dict(self.supply.genesis_totals),
            cumulative_minted=dict(self.supply.cumulative_minted),
            cumulative_burned=dict(self.supply.cumulative_burned),
        )
        return clone
