"""Scenario files: a timeline of operator and user actions to replay.

Schema:

    {
      "name": "rebel1-replay",
      "end_height": 7684600,            # required: last block to produce
      "inclusion_delay": 2,             # blocks between sniper fire and inclusion
      "strict_halt": false,             # halt ends the run instead of recovering
      "invariant_interval": 0,          # 0 = auto (event blocks + every 1000)
      "precommit_overrides": {"7684495": "0.8"},
      "events": [ {"at_height": H, "action": ..., ...}, ... ]
    }

Actions:

    submit-tx           tx: {fee_payer, gas_limit, declared_fee: [coin...],
                             msgs: [msg...]}  (included exactly at at_height)
    upgrade-validator   validator, version          (effective next block)
    submit-proposal     proposer, proposal: {kind, title, changes: [...]}
    cast-vote           voter, proposal_id, option
    sniper-arm          target_height, delegator, validator,
                        amount: coin [, gas_limit, declared_fee]
    community-spend     recipient ("burn" to destroy), coins: [coin...]
    rollback-to         target_height  (restore that block's snapshot, drop mempool)

Msg encoding: {"kind": "send", "sender": ..., "recipient": ...,
"coins": [{"denom": ..., "amount": ...}]} and so on per kind; "exec" wraps
{"sender": ..., "msgs": [...]}. Events at the same height run in declaration
order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ante import Msg, MsgKind, Tx
from .coins import Coin, coins_from_config
from .errors import ParseError

ACTIONS = (
    "submit-tx",
    "upgrade-validator",
    "submit-proposal",
    "cast-vote",
    "sniper-arm",
    "community-spend",
    "rollback-to",
)


@dataclass
class ScenarioEvent:
    at_height: int
    action: str
    payload: dict
    order: int = 0


@dataclass
class Scenario:
    name: str
    end_height: int
    events: list = field(default_factory=list)
    inclusion_delay: int = 2
    strict_halt: bool = False
    invariant_interval: int = 0
    precommit_overrides: dict = field(default_factory=dict)


def _coin(raw, label: str) -> Coin:
    try:
        return Coin(raw["denom"], int(raw["amount"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad coin for {label}: {raw!r}") from exc


def parse_msg(raw: dict) -> Msg:
    try:
        kind = MsgKind(raw["kind"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad msg kind in {raw!r}") from exc
    try:
        if kind == MsgKind.SEND:
            payload = {
                "sender": raw["sender"],
                "recipient": raw["recipient"],
                "coins": coins_from_config(raw["coins"]),
            }
        elif kind == MsgKind.MULTI_SEND:
            payload = {
                "sender": raw["sender"],
                "outputs": [
                    {"recipient": o["recipient"], "coins": coins_from_config(o["coins"])}
                    for o in raw["outputs"]
                ],
            }
        elif kind == MsgKind.SWAP_SEND:
            payload = {
                "sender": raw["sender"],
                "recipient": raw["recipient"],
                "offer": _coin(raw["offer"], "swap-send offer"),
                "ask_denom": raw["ask_denom"],
            }
        elif kind == MsgKind.INSTANTIATE_CONTRACT:
            payload = {
                "sender": raw["sender"],
                "funds": coins_from_config(raw.get("funds", [])),
                "label": raw.get("label", ""),
            }
        elif kind == MsgKind.EXECUTE_CONTRACT:
            payload = {
                "sender": raw["sender"],
                "contract": raw["contract"],
                "funds": coins_from_config(raw.get("funds", [])),
            }
        elif kind == MsgKind.EXEC:
            payload = {
                "sender": raw["sender"],
                "msgs": [parse_msg(m) for m in raw["msgs"]],
            }
        elif kind == MsgKind.DELEGATE or kind == MsgKind.UNDELEGATE:
            payload = {
                "delegator": raw["delegator"],
                "validator": raw["validator"],
                "amount": _coin(raw["amount"], kind.value),
            }
        elif kind == MsgKind.CREATE_VALIDATOR:
            payload = {
                "operator": raw["operator"],
                "version": raw.get("version", "v21"),
            }
        elif kind == MsgKind.VOTE:
            payload = {
                "voter": raw["voter"],
                "proposal_id": int(raw["proposal_id"]),
                "option": raw["option"],
            }
        else:  # MsgKind.SUBMIT_PROPOSAL
            payload = {
                "proposer": raw["proposer"],
                "proposal": raw["proposal"],
            }
    except (KeyError, TypeError) as exc:
        raise ParseError(f"msg {kind.value} missing field: {exc}") from exc
    return Msg(kind=kind, payload=payload)


def parse_tx(raw: dict) -> Tx:
    try:
        msgs = [parse_msg(m) for m in raw["msgs"]]
        return Tx(
            msgs=msgs,
            fee_payer=raw["fee_payer"],
            declared_fee=coins_from_config(raw.get("declared_fee", [])),
            gas_limit=int(raw.get("gas_limit", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad tx: {exc}") from exc


def parse_event(raw: dict, order: int) -> ScenarioEvent:
    try:
        at_height = int(raw["at_height"])
        action = raw["action"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"event needs at_height and action: {raw!r}") from exc
    if action not in ACTIONS:
        raise ParseError(f"unknown action {action!r}")
    payload: dict
    try:
        if action == "submit-tx":
            payload = {"tx": parse_tx(raw["tx"])}
        elif action == "upgrade-validator":
            payload = {"validator": raw["validator"], "version": raw["version"]}
        elif action == "submit-proposal":
            prop = raw["proposal"]
            payload = {
                "proposer": raw.get("proposer", ""),
                "kind": prop["kind"],
                "title": prop.get("title", ""),
                "changes": prop.get("changes", []),
            }
        elif action == "cast-vote":
            payload = {
                "voter": raw["voter"],
                "proposal_id": int(raw["proposal_id"]),
                "option": raw["option"],
            }
        elif action == "sniper-arm":
            payload = {
                "target_height": int(raw["target_height"]),
                "delegator": raw["delegator"],
                "validator": raw["validator"],
                "amount": _coin(raw["amount"], "sniper amount"),
                "gas_limit": int(raw.get("gas_limit", 0)),
                "declared_fee": coins_from_config(raw.get("declared_fee", [])),
            }
        elif action == "community-spend":
            payload = {
                "recipient": raw["recipient"],
                "coins": coins_from_config(raw["coins"]),
            }
        else:  # rollback-to
            payload = {"target_height": int(raw["target_height"])}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"event {action} missing field: {exc}") from exc
    return ScenarioEvent(at_height=at_height, action=action, payload=payload, order=order)


def parse_scenario(cfg: dict) -> Scenario:
    if not isinstance(cfg, dict):
        raise ParseError("scenario must be a mapping")
    try:
        end_height = int(cfg["end_height"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("scenario needs an integer end_height") from exc
    events = [parse_event(e, i) for i, e in enumerate(cfg.get("events", []))]
    events.sort(key=lambda e: (e.at_height, e.order))
    overrides = {}
    for h, frac in cfg.get("precommit_overrides", {}).items():
        try:
            value = Fraction(str(frac))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad precommit override {h}: {frac}") from exc
        if not Fraction(2, 3) <= value <= 1:
            raise ParseError(f"precommit override {h} outside [2/3, 1]: {frac}")
        overrides[int(h)] = value
    delay = int(cfg.get("inclusion_delay", 2))
    if delay < 0:
        raise ParseError("inclusion_delay must be non-negative")
    return Scenario(
        name=cfg.get("name", "unnamed"),
        end_height=end_height,
        events=events,
        inclusion_delay=delay,
        strict_halt=bool(cfg.get("strict_halt", False)),
        invariant_interval=int(cfg.get("invariant_interval", 0)),
        precommit_overrides=overrides,
    )


def load_scenario_file(path: str) -> dict:
    """Read a scenario JSON file; pair with parse_scenario for the object."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ParseError("scenario config must be a JSON object")
    return cfg
