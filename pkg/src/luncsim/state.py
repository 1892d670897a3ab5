"""The assembled chain state: one self-contained, copyable, hashable value.

Everything block production needs lives here -- balances, staking, treasury,
distribution, governance, the mempool, armed delegation snipers, proposer
rotation credit -- so a deep copy is a complete snapshot and a canonical
serialization of two equal states hashes identically. Amounts serialize as
decimal strings and rationals as "p/q" so the canonical form is stable and
unbounded-precision safe.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field

from .ante import AnteConfig, Tx
from .coins import Coin
from .distribution import DistributionState
from .errors import InvariantViolation
from .governance import GovernanceState
from .ledger import BONDED_POOL, NOT_BONDED_POOL, Bank
from .staking import StakingState
from .treasury import TreasuryState


@dataclass
class PendingTx:
    """A tx waiting in the mempool for its inclusion height."""

    tx: Tx
    inclusion_height: int
    seq: int

    def canonical(self) -> dict:
        return {
            "tx": self.tx.canonical(),
            "inclusion_height": self.inclusion_height,
            "seq": self.seq,
        }


@dataclass
class SniperState:
    """An armed delegation bot: fires once the chain reaches its target."""

    target_height: int
    delegator: str
    validator: str
    amount: Coin
    gas_limit: int = 0
    declared_fee: dict = field(default_factory=dict)
    fired: bool = False

    def canonical(self) -> dict:
        return {
            "target_height": self.target_height,
            "delegator": self.delegator,
            "validator": self.validator,
            "amount": {"denom": self.amount.denom, "amount": str(self.amount.amount)},
            "gas_limit": self.gas_limit,
            "declared_fee": {d: str(a) for d, a in sorted(self.declared_fee.items())},
            "fired": self.fired,
        }


@dataclass
class ChainState:
    bank: Bank
    staking: StakingState
    treasury: TreasuryState
    distribution: DistributionState
    governance: GovernanceState
    ante: AnteConfig
    chain_id: str = "sim-1"
    genesis_height: int = 0
    genesis_time: int = 0
    height: int = 0
    halted: bool = False
    transfer_params: dict = field(default_factory=lambda: {"SendEnabled": False,
                                                           "ReceiveEnabled": False})
    proposer_priority: dict = field(default_factory=dict)
    mempool: list = field(default_factory=list)
    snipers: list = field(default_factory=list)
    # [(effective_height, proposal_id, ParamChange), ...]
    pending_block_changes: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    next_seq: int = 0
    contract_counter: int = 0

    def clone(self) -> "ChainState":
        return copy.deepcopy(self)

    def canonical(self) -> dict:
        return {
            "chain_id": self.chain_id,
            "genesis_height": self.genesis_height,
            "genesis_time": self.genesis_time,
            "height": self.height,
            "halted": self.halted,
            "bank": self.bank.canonical(),
            "staking": self.staking.canonical(),
            "treasury": self.treasury.canonical(),
            "distribution": self.distribution.canonical(),
            "governance": self.governance.canonical(),
            "ante": self.ante.canonical(),
            "transfer": {k: self.transfer_params[k] for k in sorted(self.transfer_params)},
            "proposer_priority": {
                a: str(p) for a, p in sorted(self.proposer_priority.items())
            },
            "mempool": [p.canonical() for p in self.mempool],
            "snipers": [s.canonical() for s in self.snipers],
            "pending_block_changes": [
                {"effective_height": h, "proposal": pid, "change": c.canonical()}
                for h, pid, c in self.pending_block_changes
            ],
            "warnings": list(self.warnings),
            "next_seq": self.next_seq,
            "contract_counter": self.contract_counter,
        }


def state_hash(state: ChainState) -> str:
    """Digest of the canonical serialization: sorted keys, string amounts."""
    blob = json.dumps(state.canonical(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def verify_invariants(state: ChainState) -> None:
    """Check the conservation identities; raises InvariantViolation."""
    state.bank.verify_supply_identity()

    shares_by_validator: dict = {}
    for per_val in state.staking.delegations.values():
        for val, shares in per_val.items():
            shares_by_validator[val] = shares_by_validator.get(val, 0) + shares
    for addr, v in state.staking.validators.items():
        total_shares = shares_by_validator.get(addr, 0)
        if total_shares != v.tokens:
            raise InvariantViolation(
                f"share identity broken for {addr}: shares {total_shares} != tokens {v.tokens}"
            )

    bond_denom = state.staking.params.bond_denom
    bonded = sum(v.tokens for v in state.staking.validators.values())
    pool = state.bank.module_balance(BONDED_POOL, bond_denom)
    if bonded != pool:
        raise InvariantViolation(
            f"stake conservation broken: validators hold {bonded}, bonded pool {pool}"
        )
    unbonding = sum(e.amount for e in state.staking.unbonding)
    not_bonded = state.bank.module_balance(NOT_BONDED_POOL, bond_denom)
    if unbonding != not_bonded:
        raise InvariantViolation(
            f"unbonding conservation broken: entries {unbonding}, pool {not_bonded}"
        )
