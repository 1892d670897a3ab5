"""Transaction admission: fee checking, fee deduction, and the burn tax.

A transaction passes through two stages. The fee stage verifies the declared
fee covers gas plus the transfer tax owed by the message contents and moves
the whole declared fee into the fee collector. The burn stage (inert while
simulating, and below the tax activation height) recomputes the tax owed --
deliberately redundant, the two computations must agree -- then moves that
amount from the fee collector into the burn staging account, destroys it,
and records the burn in the treasury's epoch counter.

Tax owed per eligible message is, per denomination,

    min(floor(taxRate * amount), taxCap[denom])

with exempt denominations paying zero. Eligible kinds: send, multi-send
(per output), swap-send (the offered coins), instantiate-contract and
execute-contract (attached funds), and exec (recursing into wrapped
messages). Staking and governance messages owe nothing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .coins import Coin, coins_add, coins_ge, normalize
from .errors import InsufficientFunds, InternalInconsistency
from .ledger import BURN_MODULE, FEE_COLLECTOR
from . import treasury as treasury_mod


class MsgKind(enum.Enum):
    SEND = "send"
    MULTI_SEND = "multi-send"
    SWAP_SEND = "swap-send"
    INSTANTIATE_CONTRACT = "instantiate-contract"
    EXECUTE_CONTRACT = "execute-contract"
    EXEC = "exec"
    DELEGATE = "delegate"
    UNDELEGATE = "undelegate"
    CREATE_VALIDATOR = "create-validator"
    VOTE = "vote"
    SUBMIT_PROPOSAL = "submit-proposal"


TAXABLE_KINDS = {
    MsgKind.SEND,
    MsgKind.MULTI_SEND,
    MsgKind.SWAP_SEND,
    MsgKind.INSTANTIATE_CONTRACT,
    MsgKind.EXECUTE_CONTRACT,
}


@dataclass
class Msg:
    kind: MsgKind
    payload: dict

    def canonical(self) -> dict:
        def enc(v):
            if isinstance(v, Msg):
                return v.canonical()
            if isinstance(v, list):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(v[k]) for k in sorted(v)}
            if isinstance(v, Coin):
                return {"denom": v.denom, "amount": str(v.amount)}
            if isinstance(v, int) and not isinstance(v, bool):
                return str(v)
            return v

        return {"kind": self.kind.value, "payload": enc(self.payload)}


@dataclass
class Tx:
    msgs: list
    fee_payer: str
    declared_fee: dict = field(default_factory=dict)
    gas_limit: int = 0

    def __post_init__(self):
        if not self.msgs:
            raise ValueError("a tx must carry at least one msg")
        if not self.fee_payer:
            raise ValueError("a tx needs a fee payer")
        if self.gas_limit < 0:
            raise ValueError("gas limit must be non-negative")
        self.declared_fee = normalize(dict(self.declared_fee))

    def canonical(self) -> dict:
        return {
            "msgs": [m.canonical() for m in self.msgs],
            "fee_payer": self.fee_payer,
            "declared_fee": {d: str(a) for d, a in sorted(self.declared_fee.items())},
            "gas_limit": self.gas_limit,
        }


@dataclass
class TaxComputationParams:
    tax_rate: Fraction
    tax_caps: dict = field(default_factory=dict)
    default_tax_cap: int = treasury_mod.DEFAULT_TAX_CAP
    exempt_denoms: frozenset = frozenset({"stake"})
    tax_power_upgrade_height: int = 0

    def cap_for(self, denom: str) -> int:
        return self.tax_caps.get(denom, self.default_tax_cap)


@dataclass
class AnteConfig:
    """Genesis-owned admission settings."""

    tax_power_upgrade_height: int = 0
    exempt_denoms: frozenset = frozenset({"stake"})
    gas_price: Fraction = Fraction(0)
    gas_denom: str = "uluna"

    def canonical(self) -> dict:
        return {
            "tax_power_upgrade_height": self.tax_power_upgrade_height,
            "exempt_denoms": sorted(self.exempt_denoms),
            "gas_price": str(self.gas_price),
            "gas_denom": self.gas_denom,
        }


def tax_params(ts: treasury_mod.TreasuryState, cfg: AnteConfig) -> TaxComputationParams:
    return TaxComputationParams(
        tax_rate=ts.tax_rate,
        tax_caps=dict(ts.tax_caps),
        default_tax_cap=ts.default_tax_cap,
        exempt_denoms=cfg.exempt_denoms,
        tax_power_upgrade_height=cfg.tax_power_upgrade_height,
    )


def compute_tax(principal: dict, params: TaxComputationParams) -> dict:
    """Tax owed on one transfer principal, floored and capped per denom."""
    rate = params.tax_rate
    out = {}
    for denom in sorted(principal):
        if denom in params.exempt_denoms:
            continue
        amount = principal[denom]
        owed = (rate.numerator * amount) // rate.denominator
        owed = min(owed, params.cap_for(denom))
        if owed:
            out[denom] = owed
    return out


def taxable_principals(msg: Msg) -> list:
    """The transfer principals a message owes tax on, one coin set each.

    Multi-send is taxed per output, not on the summed total, which matters
    because the flooring happens per principal.
    """
    if msg.kind == MsgKind.SEND:
        return [msg.payload["coins"]]
    if msg.kind == MsgKind.MULTI_SEND:
        return [out["coins"] for out in msg.payload["outputs"]]
    if msg.kind == MsgKind.SWAP_SEND:
        offer = msg.payload["offer"]
        return [{offer.denom: offer.amount}]
    if msg.kind in (MsgKind.INSTANTIATE_CONTRACT, MsgKind.EXECUTE_CONTRACT):
        funds = msg.payload.get("funds", {})
        return [funds] if funds else []
    return []


def filter_msgs_and_compute_tax(msgs: list, params: TaxComputationParams) -> dict:
    """Sum the tax owed across messages, recursing through exec wrappers."""
    total: dict = {}
    for msg in msgs:
        if msg.kind == MsgKind.EXEC:
            total = coins_add(total, filter_msgs_and_compute_tax(msg.payload["msgs"], params))
        elif msg.kind in TAXABLE_KINDS:
            for principal in taxable_principals(msg):
                total = coins_add(total, compute_tax(principal, params))
    return total


def required_gas_fee(cfg: AnteConfig, gas_limit: int) -> dict:
    """Flat gas price times limit, rounded up to whole micro-units."""
    if cfg.gas_price == 0 or gas_limit == 0:
        return {}
    num = cfg.gas_price.numerator * gas_limit
    den = cfg.gas_price.denominator
    return {cfg.gas_denom: -(-num // den)}


def burn_tax_decorator(bank, ts: treasury_mod.TreasuryState, tx: Tx, height: int,
                       params: TaxComputationParams) -> dict:
    """Burn the tax owed by an admitted tx out of the collected fee.

    Assumes the declared fee already sits in the fee collector. Returns the
    burned coin set.
    """
    if height < params.tax_power_upgrade_height:
        return {}
    taxes = filter_msgs_and_compute_tax(tx.msgs, params)
    if not taxes:
        return {}
    bank.send_module_to_module(FEE_COLLECTOR, BURN_MODULE, taxes)
    bank.burn(BURN_MODULE, taxes)
    treasury_mod.record_epoch_burn(ts, taxes)
    return taxes


def run_ante_pipeline(bank, ts: treasury_mod.TreasuryState, cfg: AnteConfig,
                      tx: Tx, height: int, simulate: bool = False) -> dict:
    """Admit a tx: fee checks, fee deduction, then the burn stage.

    Raises InsufficientFunds when the declared fee cannot cover gas plus tax
    or the payer cannot cover the declared fee; in that case no state was
    touched. Returns the coins burned as tax (empty when inert).
    """
    params = tax_params(ts, cfg)
    tax_active = (not simulate) and height >= cfg.tax_power_upgrade_height
    expected_tax = filter_msgs_and_compute_tax(tx.msgs, params) if tax_active else {}
    required = coins_add(required_gas_fee(cfg, tx.gas_limit), expected_tax)
    if not coins_ge(tx.declared_fee, required):
        raise InsufficientFunds(
            f"declared fee {tx.declared_fee} does not cover gas+tax {required}"
        )
    if tx.declared_fee:
        bank.send_account_to_module(tx.fee_payer, FEE_COLLECTOR, tx.declared_fee)
    if not tax_active:
        return {}
    burned = burn_tax_decorator(bank, ts, tx, height, params)
    # The fee stage and the burn stage compute the tax independently; a
    # mismatch means the pipeline itself is broken, not the tx.
    if burned != expected_tax:
        raise InternalInconsistency(
            f"fee stage saw tax {expected_tax}, burn stage saw {burned}"
        )
    return burned
