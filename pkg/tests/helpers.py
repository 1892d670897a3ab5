"""Shared builders for the test modules."""

from fractions import Fraction

from luncsim.ante import AnteConfig
from luncsim.distribution import DistributionParams, DistributionState
from luncsim.governance import GovernanceState, GovParams
from luncsim.ledger import DEFAULT_MODULE_ACCOUNTS, Bank
from luncsim.staking import HeightGates, StakingParams, StakingState, genesis_bond
from luncsim.state import ChainState
from luncsim.treasury import TreasuryState

# gates far away from the heights most tests use
FAR_GATES = HeightGates(
    staking_power_upgrade_height=10**9,
    delegate_power_revert_height=10**9 + 1,
    staking_power_revert_height=2 * 10**9,
    protect_power_height=10**9 + 2,
)


def fresh_bank(accounts=None) -> Bank:
    bank = Bank(DEFAULT_MODULE_ACCOUNTS)
    for address, denom, amount in accounts or []:
        bank.genesis_credit_account(address, denom, amount)
    return bank


def staking_fixture(bank=None, validators=None, gates=FAR_GATES,
                    params=None) -> StakingState:
    """Validators as (address, tokens[, version]) with stake self-bonded."""
    bank = bank if bank is not None else fresh_bank()
    st = StakingState(gates=gates, params=params or StakingParams())
    for entry in validators or []:
        address, tokens = entry[0], entry[1]
        version = entry[2] if len(entry) > 2 else "v21"
        bank.genesis_credit_account(address, st.params.bond_denom, tokens)
        genesis_bond(bank, st, address, tokens, version)
    return st


def chain_fixture(accounts=None, validators=None, gates=FAR_GATES,
                  tax_rate="0", epoch_length=86_400, **overrides) -> ChainState:
    bank = fresh_bank(accounts)
    st = staking_fixture(bank=bank, validators=validators, gates=gates)
    kwargs = dict(
        bank=bank,
        staking=st,
        treasury=TreasuryState(tax_rate=Fraction(tax_rate),
                               epoch_length_blocks=epoch_length),
        distribution=DistributionState(params=DistributionParams()),
        governance=GovernanceState(params=GovParams()),
        ante=AnteConfig(),
    )
    kwargs.update(overrides)
    return ChainState(**kwargs)
