"""Bundled genesis+scenario fixtures, each exercising one capability.

Every builder returns (genesis_config, scenario_config) as plain JSON-ready
dicts that flow through the normal parsers, so they double as schema
examples. Heights, stakes, and rates are calibrated so the interesting
things happen exactly where the tests assert them.
"""

from __future__ import annotations

from .coins import MICRO

# Testnet-calibrated gate set: the shortened delegate revert rehearses the
# re-enable while create-validator keeps the mainnet revert height.
TESTNET_GATES = {
    "staking_power_upgrade_height": 7_603_700,
    "delegate_power_revert_height": 7_684_490,
    "staking_power_revert_height": 8_905_758,
}

MAINNET_GATES_CFG = {
    "staking_power_upgrade_height": 7_603_700,
    "delegate_power_revert_height": 8_208_649,
    "staking_power_revert_height": 8_905_758,
}


def _lunc(n: int) -> int:
    return n * MICRO


def _coin(denom: str, amount: int) -> dict:
    return {"denom": denom, "amount": str(amount)}


def rebel1_replay() -> tuple:
    """Six validators, four upgraded (64% of power), one delegation sniper.

    The sniper arms for the delegate revert height 7,684,490; its tx lands
    two blocks later and splits the set: the upgraded 64% accepts, the rest
    rejects, no side holds 2/3, and the chain halts at 7,684,492. Upgrading
    a fifth validator pushes agreement to 82% and the halted block commits.
    """
    upgraded = [f"val{i}" for i in range(1, 5)]
    stale = ["val5", "val6"]
    genesis = {
        "chain_id": "rebel1-sim",
        "genesis_height": 7_559_600,
        "accounts": [
            {"address": "sniper", "denom": "uluna", "amount": str(_lunc(100_000))},
        ],
        "staking": {
            "gates": dict(TESTNET_GATES),
            "validators": (
                [{"address": v, "tokens": str(_lunc(9_600)), "version": "v20"}
                 for v in upgraded]
                + [{"address": v, "tokens": str(_lunc(10_800)), "version": "v20"}
                   for v in stale]
            ),
        },
        "treasury": {"tax_rate": "0", "reward_weight": "1"},
        "ante": {"gas_price": "0"},
    }
    events = [
        {"at_height": 7_610_000 + i * 10_000, "action": "upgrade-validator",
         "validator": v, "version": "v21"}
        for i, v in enumerate(upgraded)
    ]
    events.append({
        "at_height": 7_650_000,
        "action": "sniper-arm",
        "target_height": 7_684_490,
        "delegator": "sniper",
        "validator": "val1",
        "amount": _coin("uluna", _lunc(1_000)),
    })
    # wall-clock recovery: the two stale validators upgrade during the halt
    events.append({"at_height": 7_684_493, "action": "upgrade-validator",
                   "validator": "val5", "version": "v21"})
    events.append({"at_height": 7_684_494, "action": "upgrade-validator",
                   "validator": "val6", "version": "v21"})
    scenario = {
        "name": "rebel1-replay",
        "end_height": 7_684_600,
        "inclusion_delay": 2,
        "events": events,
    }
    return genesis, scenario


def burn_tax_activation() -> tuple:
    """Tax policy passes mid-epoch, activates at the boundary, burns 1.2%."""
    genesis = {
        "chain_id": "burntax-sim",
        "genesis_height": 0,
        "accounts": [
            {"address": "alice", "denom": "uluna", "amount": str(_lunc(10_000_000))},
            {"address": "bob", "denom": "uluna", "amount": "0"},
        ],
        "staking": {
            "gates": {
                "staking_power_upgrade_height": 1_000_000_000,
                "delegate_power_revert_height": 1_000_000_001,
                "staking_power_revert_height": 2_000_000_000,
            },
            "validators": [
                {"address": "val1", "tokens": str(_lunc(10_000)), "version": "v21"},
                {"address": "val2", "tokens": str(_lunc(10_000)), "version": "v21"},
            ],
        },
        "treasury": {
            "tax_rate": "0",
            "reward_weight": "1",
            "epoch_length_blocks": 100,
        },
        "governance": {"voting_period_blocks": 20},
        "ante": {"tax_power_upgrade_height": 10, "gas_price": "0.01",
                 "gas_denom": "uluna"},
    }

    def send(amount: int, fee: int) -> dict:
        return {
            "fee_payer": "alice",
            "gas_limit": 100_000,
            "declared_fee": [_coin("uluna", fee)],
            "msgs": [{"kind": "send", "sender": "alice", "recipient": "bob",
                      "coins": [_coin("uluna", amount)]}],
        }

    tax_policy = {
        "rate_min": "0.012", "rate_max": "0.012",
        "cap": {"denom": "usdr", "amount": "1000000"},
        "change_rate_max": "0.0",
    }
    reward_policy = {
        "rate_min": "1.0", "rate_max": "1.0",
        "cap": {"denom": "usdr", "amount": "0"},
        "change_rate_max": "0.0",
    }
    events = [
        {"at_height": 5, "action": "submit-proposal", "proposer": "val1",
         "proposal": {"kind": "param-change", "title": "enable the burn tax",
                      "changes": [
                          {"subspace": "treasury", "key": "TaxPolicy",
                           "value": tax_policy},
                          {"subspace": "treasury", "key": "RewardPolicy",
                           "value": reward_policy},
                      ]}},
        {"at_height": 6, "action": "cast-vote", "voter": "val1",
         "proposal_id": 1, "option": "yes"},
        {"at_height": 7, "action": "cast-vote", "voter": "val2",
         "proposal_id": 1, "option": "yes"},
        # rate is still zero until the epoch boundary at 100
        {"at_height": 50, "action": "submit-tx", "tx": send(1_000_000, 1_000)},
        # from 101 on, 1.2% of the principal burns: 12,000 per million
        {"at_height": 110, "action": "submit-tx", "tx": send(1_000_000, 13_000)},
        {"at_height": 120, "action": "submit-tx", "tx": {
            "fee_payer": "alice",
            "gas_limit": 100_000,
            "declared_fee": [_coin("uluna", 4_600)],
            "msgs": [{"kind": "multi-send", "sender": "alice", "outputs": [
                {"recipient": "bob", "coins": [_coin("uluna", 100_000)]},
                {"recipient": "val2", "coins": [_coin("uluna", 200_000)]},
            ]}],
        }},
        {"at_height": 130, "action": "submit-tx", "tx": {
            "fee_payer": "alice",
            "gas_limit": 100_000,
            "declared_fee": [_coin("uluna", 13_000)],
            "msgs": [{"kind": "exec", "sender": "alice", "msgs": [
                {"kind": "send", "sender": "alice", "recipient": "bob",
                 "coins": [_coin("uluna", 1_000_000)]},
            ]}],
        }},
        # underpays the tax: rejected, state untouched
        {"at_height": 150, "action": "submit-tx", "tx": send(1_000_000, 1_000)},
    ]
    scenario = {
        "name": "burn-tax-activation",
        "end_height": 210,
        "events": events,
    }
    return genesis, scenario


def distribution_4080() -> tuple:
    """Fee-split parameters move to (0.5, 0.03, 0.12) by proposal."""
    genesis = {
        "chain_id": "dist-sim",
        "genesis_height": 0,
        "accounts": [
            {"address": "alice", "denom": "uluna", "amount": str(_lunc(1_000_000))},
            {"address": "bob", "denom": "uluna", "amount": "0"},
        ],
        "staking": {
            "gates": {
                "staking_power_upgrade_height": 1_000_000_000,
                "delegate_power_revert_height": 1_000_000_001,
                "staking_power_revert_height": 2_000_000_000,
            },
            "validators": [
                {"address": "val1", "tokens": str(_lunc(30_000)), "version": "v21"},
                {"address": "val2", "tokens": str(_lunc(20_000)), "version": "v21"},
                {"address": "val3", "tokens": str(_lunc(10_000)), "version": "v21"},
            ],
        },
        "distribution": {"community_tax": "0", "base_proposer_reward": "0.01",
                         "bonus_proposer_reward": "0.04"},
        "governance": {"voting_period_blocks": 20},
        "ante": {"gas_price": "0.01", "gas_denom": "uluna"},
    }

    def send_with_fee(height: int, fee: int) -> dict:
        return {"at_height": height, "action": "submit-tx", "tx": {
            "fee_payer": "alice",
            "gas_limit": 100_000,
            "declared_fee": [_coin("uluna", fee)],
            "msgs": [{"kind": "send", "sender": "alice", "recipient": "bob",
                      "coins": [_coin("uluna", 500_000)]}],
        }}

    events = [
        {"at_height": 5, "action": "submit-proposal", "proposer": "val1",
         "proposal": {"kind": "param-change", "title": "reshape the fee split",
                      "changes": [
                          {"subspace": "distribution", "key": "communitytax",
                           "value": "0.5"},
                          {"subspace": "distribution", "key": "baseproposerreward",
                           "value": "0.03"},
                          {"subspace": "distribution", "key": "bonusproposerreward",
                           "value": "0.12"},
                      ]}},
        {"at_height": 6, "action": "cast-vote", "voter": "val1",
         "proposal_id": 1, "option": "yes"},
        {"at_height": 7, "action": "cast-vote", "voter": "val2",
         "proposal_id": 1, "option": "yes"},
        {"at_height": 8, "action": "cast-vote", "voter": "val3",
         "proposal_id": 1, "option": "abstain"},
        # old params at height 10, new params from 26 on
        send_with_fee(10, 10_000),
        send_with_fee(30, 10_000),
        send_with_fee(40, 10_000),
        # the community pool funds a burn, the old deflation lever
        {"at_height": 60, "action": "community-spend", "recipient": "burn",
         "coins": [_coin("uluna", 3_000)]},
    ]
    scenario = {
        "name": "distribution-4080",
        "end_height": 80,
        "events": events,
    }
    return genesis, scenario


def power_cap_probe() -> tuple:
    """Delegations probing the exact 25% boundary inside the protect window."""
    genesis = {
        "chain_id": "cap-sim",
        "genesis_height": 0,
        "accounts": [
            {"address": "whale", "denom": "uluna", "amount": str(_lunc(100_000))},
        ],
        "staking": {
            "gates": {
                "staking_power_upgrade_height": 5,
                "delegate_power_revert_height": 10,
                "staking_power_revert_height": 100_000,
                "protect_power_height": 1_000,
            },
            "validators": [
                {"address": "val1", "tokens": str(_lunc(5_000)), "version": "v21"},
                {"address": "val2", "tokens": str(_lunc(15_000)), "version": "v21"},
                {"address": "val3", "tokens": str(_lunc(10_000)), "version": "v21"},
                {"address": "val4", "tokens": str(_lunc(10_000)), "version": "v21"},
            ],
        },
        "ante": {"gas_price": "0"},
    }

    def delegate(height: int, validator: str, lunc: int) -> dict:
        return {"at_height": height, "action": "submit-tx", "tx": {
            "fee_payer": "whale",
            "msgs": [{"kind": "delegate", "delegator": "whale",
                      "validator": validator,
                      "amount": _coin("uluna", _lunc(lunc))}],
        }}

    events = [
        delegate(7, "val1", 100),        # inside the gate window: rejected
        # (5000 + d) / (40000 + d) == 1/4 at d == 6666.67 whole tokens
        delegate(20, "val1", 6_666),     # lands exactly under the cap
        delegate(30, "val1", 1),         # one more token tips it over
        delegate(1_001, "val2", 50_000),  # window over: any size goes
    ]
    scenario = {
        "name": "power-cap-probe",
        "end_height": 1_010,
        "events": events,
    }
    return genesis, scenario


def mainnet_gates() -> tuple:
    """Drives staking txs across the delegate re-enable at 8,208,649.

    From inside the window the upgrade-height constant keeps both messages
    rejected; at the revert height delegation returns (cap enforced, the
    window reaches to 8,949,183) while create-validator stays dark until
    8,905,758. The exact strict-inequality edges of all three constants are
    pinned by the gate-sweep tests at function level.
    """
    genesis = {
        "chain_id": "gates-sim",
        "genesis_height": 8_208_600,
        "accounts": [
            {"address": "delegator", "denom": "uluna", "amount": str(_lunc(200_000))},
        ],
        "staking": {
            "gates": dict(MAINNET_GATES_CFG),
            "validators": [
                {"address": "val1", "tokens": str(_lunc(8_000)), "version": "v21"},
                {"address": "val2", "tokens": str(_lunc(16_000)), "version": "v21"},
                {"address": "val3", "tokens": str(_lunc(16_000)), "version": "v21"},
            ],
        },
        "ante": {"gas_price": "0"},
    }

    def tx(height: int, msg: dict) -> dict:
        return {"at_height": height, "action": "submit-tx", "tx": {
            "fee_payer": "delegator", "msgs": [msg],
        }}

    def delegate_msg(lunc: int) -> dict:
        return {"kind": "delegate", "delegator": "delegator",
                "validator": "val1", "amount": _coin("uluna", _lunc(lunc))}

    events = [
        tx(8_208_601, delegate_msg(100)),                 # window still closed
        tx(8_208_648, delegate_msg(100)),                 # last closed block
        tx(8_208_649, delegate_msg(100)),                 # re-enabled, cap ok
        tx(8_208_650, delegate_msg(50_000)),              # cap exceeded
        tx(8_208_660, {"kind": "create-validator",
                       "operator": "val-new", "version": "v21"}),  # until 8,905,758
    ]
    scenario = {
        "name": "mainnet-gates",
        "end_height": 8_208_700,
        "events": events,
    }
    return genesis, scenario


BUILDERS = {
    "rebel1-replay": rebel1_replay,
    "burn-tax-activation": burn_tax_activation,
    "distribution-4080": distribution_4080,
    "power-cap-probe": power_cap_probe,
    "mainnet-gates": mainnet_gates,
}


def build(name: str) -> tuple:
    try:
        return BUILDERS[name]()
    except KeyError:
        raise KeyError(f"no bundled scenario named {name!r}; "
                       f"choose from {sorted(BUILDERS)}") from None
