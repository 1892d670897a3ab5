"""Tax-rate policy, epoch burn accounting, and seigniorage recycling.

The treasury owns the transfer-tax rate and reward weight, each constrained
by a policy window (rate_min/rate_max plus a per-update change bound). Burns
executed by the fee pipeline accumulate in a per-epoch counter; at every
epoch boundary the counted amount is minted back to the treasury, a
reward-weight share of it is burned for good, and the remainder is paid out
to the community pool and bonded validators. Policy updates queued by
governance also activate at the boundary, so a new tax policy takes effect no
earlier than the first block of the next epoch.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .coins import Coin, coins_as_strings
from .errors import MalformedProposal
from .ledger import TREASURY

log = logging.getLogger("luncsim.treasury")

# One week of 7-second blocks.
DEFAULT_EPOCH_LENGTH_BLOCKS = 86_400

# Effectively-unbounded default cap; explicit per-denom caps override it.
DEFAULT_TAX_CAP = 2**100


@dataclass
class PolicyConstraints:
    """Bounds a treasury-controlled rate: interval plus per-update delta."""

    rate_min: Fraction
    rate_max: Fraction
    cap: Coin
    change_rate_max: Fraction

    def __post_init__(self):
        if self.rate_min < 0 or self.rate_max < self.rate_min:
            raise ValueError("policy requires 0 <= rate_min <= rate_max")
        if self.change_rate_max < 0:
            raise ValueError("change_rate_max must be non-negative")

    def clamp(self, rate: Fraction) -> Fraction:
        return max(self.rate_min, min(self.rate_max, rate))

    def canonical(self) -> dict:
        return {
            "rate_min": str(self.rate_min),
            "rate_max": str(self.rate_max),
            "cap": {"denom": self.cap.denom, "amount": str(self.cap.amount)},
            "change_rate_max": str(self.change_rate_max),
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "PolicyConstraints":
        try:
            cap_cfg = cfg.get("cap", {"denom": "usdr", "amount": 0})
            return cls(
                rate_min=Fraction(str(cfg["rate_min"])),
                rate_max=Fraction(str(cfg["rate_max"])),
                cap=Coin(cap_cfg["denom"], int(cap_cfg["amount"])),
                change_rate_max=Fraction(str(cfg.get("change_rate_max", 0))),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise MalformedProposal(f"bad policy constraints: {exc}") from exc


def _default_tax_policy() -> PolicyConstraints:
    return PolicyConstraints(Fraction(0), Fraction(1), Coin("usdr", 0), Fraction(1))


def _default_reward_policy() -> PolicyConstraints:
    return PolicyConstraints(Fraction(0), Fraction(1), Coin("usdr", 0), Fraction(1))


@dataclass
class TreasuryState:
    tax_policy: PolicyConstraints = field(default_factory=_default_tax_policy)
    reward_policy: PolicyConstraints = field(default_factory=_default_reward_policy)
    tax_rate: Fraction = Fraction(0)
    reward_weight: Fraction = Fraction(1)
    epoch_length_blocks: int = DEFAULT_EPOCH_LENGTH_BLOCKS
    tax_caps: dict = field(default_factory=dict)
    default_tax_cap: int = DEFAULT_TAX_CAP
    epoch_burned: dict = field(default_factory=dict)
    # [(proposal_id, key, PolicyConstraints), ...] applied at the boundary.
    pending_policies: list = field(default_factory=list)

    def canonical(self) -> dict:
        return {
            "tax_policy": self.tax_policy.canonical(),
            "reward_policy": self.reward_policy.canonical(),
            "tax_rate": str(self.tax_rate),
            "reward_weight": str(self.reward_weight),
            "epoch_length_blocks": self.epoch_length_blocks,
            "tax_caps": coins_as_strings(self.tax_caps),
            "default_tax_cap": str(self.default_tax_cap),
            "epoch_burned": coins_as_strings(self.epoch_burned),
            "pending_policies": [
                {"proposal": pid, "key": key, "policy": pol.canonical()}
                for pid, key, pol in self.pending_policies
            ],
        }


def get_tax_rate(ts: TreasuryState) -> Fraction:
    return ts.tax_rate


def get_tax_cap(ts: TreasuryState, denom: str) -> int:
    return ts.tax_caps.get(denom, ts.default_tax_cap)


def set_tax_rate(ts: TreasuryState, requested: Fraction) -> Fraction:
    """Clamp a requested rate into the policy window and the per-update bound."""
    target = ts.tax_policy.clamp(requested)
    lo = ts.tax_rate - ts.tax_policy.change_rate_max
    hi = ts.tax_rate + ts.tax_policy.change_rate_max
    ts.tax_rate = max(lo, min(hi, target))
    return ts.tax_rate


def set_reward_weight(ts: TreasuryState, requested: Fraction) -> Fraction:
    target = ts.reward_policy.clamp(requested)
    lo = ts.reward_weight - ts.reward_policy.change_rate_max
    hi = ts.reward_weight + ts.reward_policy.change_rate_max
    ts.reward_weight = max(lo, min(hi, target))
    return ts.reward_weight


def record_epoch_burn(ts: TreasuryState, coins: dict) -> None:
    for d, a in coins.items():
        if a:
            ts.epoch_burned[d] = ts.epoch_burned.get(d, 0) + a


def queue_policy_update(ts: TreasuryState, proposal_id: int, key: str,
                        policy: PolicyConstraints) -> None:
    if key not in ("TaxPolicy", "RewardPolicy"):
        raise MalformedProposal(f"unknown treasury policy key {key!r}")
    ts.pending_policies.append((proposal_id, key, policy))


def apply_pending_policies(ts: TreasuryState) -> list:
    """Swap in queued policies; the active rates snap into the new windows."""
    applied = []
    for pid, key, policy in ts.pending_policies:
        if key == "TaxPolicy":
            ts.tax_policy = policy
            ts.tax_rate = policy.clamp(ts.tax_rate)
        else:
            ts.reward_policy = policy
            ts.reward_weight = policy.clamp(ts.reward_weight)
        applied.append((pid, key))
    ts.pending_policies = []
    return applied


def epoch_transition(bank, ts: TreasuryState, dist_state, staking_state,
                     height: int) -> dict:
    """Run the end-of-epoch seigniorage cycle and activate queued policies.

    Mints exactly what the epoch burned, burns the reward-weight share of it,
    hands the rest to the distribution module, then resets the counter.
    """
    if height % ts.epoch_length_blocks != 0:
        raise ValueError(f"height {height} is not an epoch boundary")
    from . import distribution as dist_mod

    minted = {d: a for d, a in sorted(ts.epoch_burned.items()) if a}
    burned = {}
    distributed = {}
    if minted:
        bank.mint(TREASURY, minted)
        w = ts.reward_weight
        burned = {
            d: (w.numerator * a) // w.denominator
            for d, a in minted.items()
            if (w.numerator * a) // w.denominator
        }
        if burned:
            bank.burn(TREASURY, burned)
        distributed = {d: minted[d] - burned.get(d, 0) for d in minted}
        distributed = {d: a for d, a in distributed.items() if a}
        if distributed:
            dist_mod.allocate_seigniorage(bank, dist_state, staking_state, distributed)
    applied = apply_pending_policies(ts)
    for pid, key in applied:
        log.info("epoch %d: proposal %s activated %s", height // ts.epoch_length_blocks, pid, key)
    ts.epoch_burned = {}
    return {"minted": minted, "burned": burned, "distributed": distributed,
            "policies_applied": applied}
