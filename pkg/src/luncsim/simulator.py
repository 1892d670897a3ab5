"""Deterministic block production with version-divergence halts.

Blocks are produced one height at a time. When the active validator set runs
more than one software version and a block carries transactions, the block
is evaluated once per version; versions whose per-tx results and resulting
state hash match form an agreement class, and the block commits only if one
class controls at least 2/3 of the voting power. Otherwise the chain halts
at that height. A halt is recoverable: pending upgrade events (wall-clock
operator actions) are consumed one at a time and the halted height is
re-processed until a class reaches 2/3 or nothing is left to upgrade.

The two version behaviors differ only in staking-message gating: the patch
version rejects delegate/create-validator above the upgrade height forever,
while the successor re-enables them at their revert heights and enforces the
delegation power cap inside the protect window. Everything else -- fee
admission, tax burning, transfers, governance -- is version-independent.

Scenario events at a height run before that block's transactions, in
declaration order; `submit-tx` events are included at exactly their height,
while snipers submit through the mempool and land after the configured
inclusion delay. Validator upgrades scheduled at a height take effect from
the next block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import ante as ante_mod
from . import distribution as dist_mod
from . import governance as gov_mod
from . import staking as staking_mod
from . import treasury as treasury_mod
from .ante import Msg, MsgKind, Tx
from .blocktime import block_timestamp
from .coins import normalize
from .errors import (
    ChainHalted,
    ParseError,
    SimError,
    UnknownValidator,
)
from .governance import PASSED, TEXT, VOTING
from .ledger import FEE_COLLECTOR
from .scenario import Scenario
from .state import ChainState, PendingTx, SniperState, state_hash, verify_invariants
from .treasury import PolicyConstraints

log = logging.getLogger("luncsim.simulator")

TWO_THIRDS = Fraction(2, 3)

COMMITTED = "committed"
HALTED = "halted"


@dataclass
class BlockContext:
    height: int
    timestamp_seconds: int
    proposer: str | None
    precommit_power_fraction: Fraction


@dataclass
class ConsensusOutcome:
    status: str
    height: int
    compatible_power_fraction: Fraction
    block: BlockContext | None = None
    tx_results: list = field(default_factory=list)


@dataclass
class RunResult:
    final_state: ChainState
    scenario_name: str
    end_height: int
    blocks_committed: int
    halt_heights: list
    terminal_halted: bool
    denoms: list
    rows: list
    tally_outcomes: dict
    warnings: list
    epoch_events: list
    trajectory: list
    tx_log: dict = field(default_factory=dict)

    @property
    def final_hash(self) -> str:
        return state_hash(self.final_state)


def version_behavior(version: str, msg: Msg, height: int, state: ChainState) -> str | None:
    """Gate verdict for one message under one software version.

    Returns None to accept or the rejection kind. Only staking messages are
    version-sensitive.
    """
    st = state.staking
    if msg.kind == MsgKind.DELEGATE:
        if staking_mod.delegate_gate_blocks(st.gates, height, version):
            return "MsgNotSupported"
        if version != staking_mod.V20 and staking_mod.power_cap_window_active(st.gates, height):
            val = st.validators.get(msg.payload["validator"])
            if val is not None and val.status == staking_mod.ACTIVE:
                ok = staking_mod.check_power_cap(
                    staking_mod.tokens_to_consensus_power(val.tokens, st.params.power_reduction),
                    staking_mod.total_voting_power(st),
                    msg.payload["amount"].amount,
                    st.params,
                )
                if not ok:
                    return "PowerCapExceeded"
    elif msg.kind == MsgKind.CREATE_VALIDATOR:
        if staking_mod.create_validator_gate_blocks(st.gates, height, version):
            return "MsgNotSupported"
    return None


def execute_msg(state: ChainState, msg: Msg, height: int, version: str) -> None:
    """Apply one message's effects. Raises a SimError subclass to fail."""
    bank = state.bank
    p = msg.payload
    if msg.kind == MsgKind.SEND:
        bank.transfer(p["sender"], p["recipient"], p["coins"])
    elif msg.kind == MsgKind.MULTI_SEND:
        for out in p["outputs"]:
            bank.transfer(p["sender"], out["recipient"], out["coins"])
    elif msg.kind == MsgKind.SWAP_SEND:
        # the swap market is out of scope: the offered coins move as-is
        offer = p["offer"]
        bank.transfer(p["sender"], p["recipient"], {offer.denom: offer.amount})
    elif msg.kind == MsgKind.INSTANTIATE_CONTRACT:
        address = f"contract-{state.contract_counter}"
        state.contract_counter += 1
        funds = p.get("funds", {})
        if funds:
            bank.transfer(p["sender"], address, funds)
    elif msg.kind == MsgKind.EXECUTE_CONTRACT:
        funds = p.get("funds", {})
        if funds:
            bank.transfer(p["sender"], p["contract"], funds)
    elif msg.kind == MsgKind.EXEC:
        for inner in p["msgs"]:
            execute_msg(state, inner, height, version)
    elif msg.kind == MsgKind.DELEGATE:
        staking_mod.delegate(bank, state.staking, p["delegator"], p["validator"],
                             p["amount"], height, acting_version=version)
    elif msg.kind == MsgKind.UNDELEGATE:
        staking_mod.undelegate(bank, state.staking, p["delegator"], p["validator"],
                               p["amount"], height)
    elif msg.kind == MsgKind.CREATE_VALIDATOR:
        staking_mod.create_validator(bank, state.staking, p["operator"], height,
                                     software_version=p.get("version", staking_mod.V21),
                                     acting_version=version)
    elif msg.kind == MsgKind.VOTE:
        gov_mod.cast_vote(state.governance, p["voter"], p["proposal_id"], p["option"])
    elif msg.kind == MsgKind.SUBMIT_PROPOSAL:
        prop = p["proposal"]
        gov_mod.submit_proposal(state.governance, prop.get("kind", TEXT), height,
                                title=prop.get("title", ""),
                                changes=prop.get("changes"))
    else:  # pragma: no cover - MsgKind is closed
        raise SimError(f"unhandled msg kind {msg.kind}")


def apply_txs(state: ChainState, pending: list, height: int, version: str):
    """Run txs against a state the caller owns; returns (state, results).

    Each tx is atomic: an admission failure restores the pre-tx state
    bit-for-bit, and a message failure restores the post-admission state so
    fees stay collected.
    """
    results = []
    for ptx in pending:
        tx = ptx.tx
        pre = state.clone()
        try:
            ante_mod.run_ante_pipeline(state.bank, state.treasury, state.ante,
                                       tx, height)
        except SimError as exc:
            state = pre
            results.append(("rejected", type(exc).__name__))
            continue
        post_ante = state.clone()
        try:
            for msg in tx.msgs:
                execute_msg(state, msg, height, version)
        except SimError as exc:
            state = post_ante
            results.append(("failed", type(exc).__name__))
            continue
        results.append(("ok", ""))
    return state, results


_ROLLED_BACK = "rolled-back"


class Chain:
    """Owns a ChainState and replays a scenario against it."""

    def __init__(self, state: ChainState, scenario: Scenario,
                 collect_rows: bool = True, collect_trajectory: bool = False):
        self.state = state
        self.scenario = scenario
        self.events = scenario.events
        self._cursor = 0
        self._consumed: set = set()
        self._pending_upgrades: list = []
        self.halt_heights: list = []
        self.tally_outcomes: dict = {}
        self.epoch_events: list = []
        self.tx_log: dict = {}
        self.rows: list = []
        self.trajectory: list = []
        self.collect_rows = collect_rows
        self.collect_trajectory = collect_trajectory
        self.denoms = sorted(state.bank.supply.totals)
        self._snap_enabled = any(e.action == "rollback-to" for e in self.events)
        self._snapshots: dict = {}
        if self._snap_enabled:
            self._snapshots[state.height] = state.clone()

    # -- event plumbing ----------------------------------------------------

    def _next_events(self, height: int):
        """Consume every not-yet-consumed event with at_height <= height."""
        out = []
        while self._cursor < len(self.events):
            ev = self.events[self._cursor]
            if ev.at_height > height:
                break
            if self._cursor not in self._consumed:
                out.append(ev)
            self._consumed.add(self._cursor)
            self._cursor += 1
        return out

    def _apply_event(self, ev, height: int) -> str | None:
        state = self.state
        p = ev.payload
        if ev.action == "submit-tx":
            state.mempool.append(PendingTx(tx=p["tx"], inclusion_height=ev.at_height,
                                           seq=state.next_seq))
            state.next_seq += 1
        elif ev.action == "upgrade-validator":
            if p["validator"] not in state.staking.validators:
                raise UnknownValidator(p["validator"])
            self._pending_upgrades.append((p["validator"], p["version"]))
        elif ev.action == "submit-proposal":
            prop = gov_mod.submit_proposal(state.governance, p["kind"], height,
                                           title=p["title"], changes=p["changes"] or None)
            log.info("height %d: proposal %d submitted (%s)", height,
                     prop.proposal_id, p["kind"])
        elif ev.action == "cast-vote":
            gov_mod.cast_vote(state.governance, p["voter"], p["proposal_id"], p["option"])
        elif ev.action == "sniper-arm":
            state.snipers.append(SniperState(
                target_height=p["target_height"],
                delegator=p["delegator"],
                validator=p["validator"],
                amount=p["amount"],
                gas_limit=p["gas_limit"],
                declared_fee=p["declared_fee"],
            ))
        elif ev.action == "community-spend":
            dist_mod.community_pool_spend(state.bank, p["recipient"], p["coins"])
        elif ev.action == "rollback-to":
            target = p["target_height"]
            snap = self._snapshots.get(target)
            if snap is None:
                raise ParseError(f"rollback-to {target}: no snapshot stored")
            restored = snap.clone()
            # a fork abandons the old mempool and any not-yet-fired snipers
            restored.mempool = []
            for sniper in restored.snipers:
                sniper.fired = True
            self.state = restored
            log.info("rolled back to height %d", target)
            return _ROLLED_BACK
        return None

    def _fire_snipers(self, height: int) -> None:
        state = self.state
        for sniper in state.snipers:
            if sniper.fired or height < sniper.target_height:
                continue
            sniper.fired = True
            tx = Tx(
                msgs=[Msg(MsgKind.DELEGATE, {
                    "delegator": sniper.delegator,
                    "validator": sniper.validator,
                    "amount": sniper.amount,
                })],
                fee_payer=sniper.delegator,
                declared_fee=dict(sniper.declared_fee),
                gas_limit=sniper.gas_limit,
            )
            state.mempool.append(PendingTx(
                tx=tx,
                inclusion_height=height + self.scenario.inclusion_delay,
                seq=state.next_seq,
            ))
            state.next_seq += 1
            log.info("sniper fired at height %d, inclusion at %d", height,
                     height + self.scenario.inclusion_delay)

    # -- parameter activation ------------------------------------------------

    def _activate_block_changes(self, height: int) -> None:
        state = self.state
        if not state.pending_block_changes:
            return
        due = [e for e in state.pending_block_changes if e[0] <= height]
        if not due:
            return
        state.pending_block_changes = [e for e in state.pending_block_changes
                                       if e[0] > height]
        for _, pid, change in due:
            try:
                self._activate_change(change)
            except (ValueError, TypeError) as exc:
                w = f"proposal {pid}: change {change.subspace}/{change.key} failed to apply: {exc}"
                state.warnings.append(w)
                log.warning(w)
            self._mark_activated(pid)

    def _activate_change(self, change) -> None:
        state = self.state
        if change.subspace == "distribution":
            params = state.distribution.params
            fields = {
                "community_tax": params.community_tax,
                "base_proposer_reward": params.base_proposer_reward,
                "bonus_proposer_reward": params.bonus_proposer_reward,
            }
            key_map = {
                "communitytax": "community_tax",
                "baseproposerreward": "base_proposer_reward",
                "bonusproposerreward": "bonus_proposer_reward",
            }
            fields[key_map[change.key]] = Fraction(str(change.value))
            state.distribution.params = dist_mod.DistributionParams(**fields)
        elif change.subspace == "staking":
            if change.key == "UnbondingPeriodBlocks":
                state.staking.params.unbonding_period_blocks = int(change.value)
            else:
                state.staking.params.max_delegation_power_fraction = Fraction(str(change.value))
        elif change.subspace == "transfer":
            v = change.value if isinstance(change.value, bool) \
                else str(change.value).lower() == "true"
            state.transfer_params[change.key] = v

    def _mark_activated(self, proposal_id: int) -> None:
        prop = self.state.governance.proposals.get(proposal_id)
        if prop is None:
            return
        prop.pending_activations -= 1
        if prop.pending_activations <= 0 and prop.status == PASSED:
            prop.status = gov_mod.APPLIED

    # -- block production ----------------------------------------------------

    def _select_proposer(self) -> str | None:
        st = self.state.staking
        powers = {}
        for addr, val in st.validators.items():
            if val.status != staking_mod.ACTIVE:
                continue
            power = staking_mod.tokens_to_consensus_power(val.tokens, st.params.power_reduction)
            if power:
                powers[addr] = power
        if not powers:
            return None
        pr = self.state.proposer_priority
        for addr in list(pr):
            if addr not in powers:
                del pr[addr]
        total = 0
        for addr, power in powers.items():
            pr[addr] = pr.get(addr, 0) + power
            total += power
        proposer = min(sorted(powers), key=lambda a: (-pr[a], a))
        pr[proposer] -= total
        return proposer

    def _version_groups(self):
        st = self.state.staking
        powers: dict = {}
        for val in st.validators.values():
            if val.status != staking_mod.ACTIVE:
                continue
            power = staking_mod.tokens_to_consensus_power(val.tokens, st.params.power_reduction)
            powers[val.software_version] = powers.get(val.software_version, 0) + power
        return powers

    def _produce_block(self, height: int) -> ConsensusOutcome | str:
        if self.state.halted:
            raise ChainHalted(f"chain is halted at height {self.state.height}")
        state = self.state
        activity = False

        self._activate_block_changes(height)
        for ev in self._next_events(height):
            activity = True
            if self._apply_event(ev, height) == _ROLLED_BACK:
                return _ROLLED_BACK
        if state.snipers:
            self._fire_snipers(height)

        pending = [p for p in state.mempool if p.inclusion_height <= height] \
            if state.mempool else []

        version_power = self._version_groups()
        total_power = sum(version_power.values())
        compatible = Fraction(1)
        tx_results: list = []

        if pending:
            activity = True
            versions = sorted(v for v, p in version_power.items() if p)
            if len(versions) > 1:
                evaluated = {}
                for ver in versions:
                    st2, results = apply_txs(self.state.clone(), pending, height, ver)
                    sig = (tuple(results), state_hash(st2))
                    evaluated.setdefault(sig, [[], None])[0].append(ver)
                    evaluated[sig][1] = st2
                best_sig = max(
                    evaluated,
                    key=lambda s: (sum(version_power[v] for v in evaluated[s][0]), s),
                )
                best_power = sum(version_power[v] for v in evaluated[best_sig][0])
                compatible = Fraction(best_power, total_power)
                if compatible < TWO_THIRDS:
                    self.state.halted = True
                    log.warning(
                        "halt at height %d: best agreement class holds %s of power",
                        height, compatible,
                    )
                    return ConsensusOutcome(status=HALTED, height=height,
                                            compatible_power_fraction=compatible)
                self.state = evaluated[best_sig][1]
                tx_results = list(best_sig[0])
            else:
                ver = versions[0] if versions else staking_mod.V21
                self.state, tx_results = apply_txs(self.state, pending, height, ver)
            state = self.state
            included = {p.seq for p in pending}
            state.mempool = [p for p in state.mempool if p.seq not in included]

        # -- end of block: rewards, maturities, tallies, epoch ----------------
        proposer = self._select_proposer()
        precommit = self.scenario.precommit_overrides.get(height)
        if precommit is None:
            precommit = min(Fraction(1), max(TWO_THIRDS, compatible))
        fees = normalize(dict(state.bank.modules[FEE_COLLECTOR]))
        if fees and proposer is not None:
            activity = True
            dist_mod.allocate_block_fees(state.bank, state.distribution, state.staking,
                                         fees, proposer, precommit)

        if state.staking.unbonding and \
                state.staking.unbonding[0].completion_height <= height:
            activity = True
            staking_mod.mature_unbondings(state.bank, state.staking, height)

        gov = state.governance
        for pid in sorted(gov.proposals):
            prop = gov.proposals[pid]
            if prop.status == VOTING and prop.voting_end_height <= height:
                activity = True
                status = gov_mod.tally(gov, state.staking, pid, height)
                self.tally_outcomes[pid] = status
                log.info("height %d: proposal %d %s", height, pid, status)
                if status == PASSED:
                    self._schedule_changes(prop, height)

        if height % state.treasury.epoch_length_blocks == 0:
            activity = True
            summary = treasury_mod.epoch_transition(
                state.bank, state.treasury, state.distribution, state.staking, height)
            summary["height"] = height
            self.epoch_events.append(summary)
            for pid, _key in summary["policies_applied"]:
                self._mark_activated(pid)

        state.height = height
        for validator, version in self._pending_upgrades:
            state.staking.validators[validator].software_version = version
        self._pending_upgrades = []

        if self._snap_enabled:
            self._snapshots[height] = state.clone()
        self._check_invariants(height, activity)
        if self.collect_rows:
            self.rows.append(self._report_row(height))
        if self.collect_trajectory:
            self.trajectory.append((height, state_hash(state)))
        block = BlockContext(
            height=height,
            timestamp_seconds=block_timestamp(state.genesis_time, state.genesis_height, height),
            proposer=proposer,
            precommit_power_fraction=precommit,
        )
        if tx_results:
            self.tx_log[height] = list(tx_results)
        return ConsensusOutcome(status=COMMITTED, height=height,
                                compatible_power_fraction=compatible,
                                block=block, tx_results=tx_results)

    def _schedule_changes(self, prop, height: int) -> None:
        state = self.state
        if prop.kind == TEXT:
            prop.status = gov_mod.APPLIED
            return
        if gov_mod.lone_tax_policy_warning(prop):
            w = (f"proposal {prop.proposal_id}: TaxPolicy updated without RewardPolicy "
                 f"in the same proposal; burned taxes will not recycle as intended")
            state.warnings.append(w)
            log.warning(w)
        for change in prop.changes:
            if change.subspace == "treasury":
                policy = PolicyConstraints.from_config(change.value)
                treasury_mod.queue_policy_update(state.treasury, prop.proposal_id,
                                                 change.key, policy)
            else:
                state.pending_block_changes.append((height + 1, prop.proposal_id, change))
            prop.pending_activations += 1

    def _check_invariants(self, height: int, activity: bool) -> None:
        interval = self.scenario.invariant_interval
        if interval > 0:
            if height % interval == 0:
                verify_invariants(self.state)
        elif activity or height % 1000 == 0:
            verify_invariants(self.state)

    def _report_row(self, height: int) -> tuple:
        bank = self.state.bank
        supply = bank.supply
        row = [height]
        row.extend(supply.totals.get(d, 0) for d in self.denoms)
        row.extend(supply.cumulative_burned.get(d, 0) for d in self.denoms)
        community = bank.modules["CommunityPool"]
        row.extend(community.get(d, 0) for d in self.denoms)
        row.append(1 if self.state.halted else 0)
        return tuple(row)

    def _apply_one_recovery_upgrade(self) -> bool:
        """During a halt, apply the next pending upgrade (wall-clock action)."""
        if self._pending_upgrades:
            validator, version = self._pending_upgrades.pop(0)
            self.state.staking.validators[validator].software_version = version
            log.info("halt recovery: %s upgraded to %s", validator, version)
            return True
        for idx in range(self._cursor, len(self.events)):
            if idx in self._consumed:
                continue
            ev = self.events[idx]
            if ev.action != "upgrade-validator":
                continue
            self._consumed.add(idx)
            validator = ev.payload["validator"]
            if validator not in self.state.staking.validators:
                raise UnknownValidator(validator)
            self.state.staking.validators[validator].software_version = ev.payload["version"]
            log.info("halt recovery: %s upgraded to %s", validator, ev.payload["version"])
            return True
        return False

    def step(self) -> ConsensusOutcome | str:
        """Produce the next block; halts are returned, not recovered."""
        return self._produce_block(self.state.height + 1)

    def run(self) -> RunResult:
        end = self.scenario.end_height
        if end < self.state.height:
            raise ParseError(f"end_height {end} is before the current height "
                             f"{self.state.height}")
        blocks = 0
        terminal = False
        while self.state.height < end:
            height = self.state.height + 1
            outcome = self._produce_block(height)
            if outcome == _ROLLED_BACK:
                continue
            if outcome.status == COMMITTED:
                blocks += 1
                continue
            # halt episode at `height`
            self.halt_heights.append(height)
            if self.collect_rows:
                self.rows.append(self._report_row(height))
            if self.scenario.strict_halt:
                terminal = True
                break
            recovered = False
            while self._apply_one_recovery_upgrade():
                self.state.halted = False
                outcome = self._produce_block(height)
                if outcome == _ROLLED_BACK or outcome.status == COMMITTED:
                    recovered = True
                    if outcome != _ROLLED_BACK:
                        blocks += 1
                    break
            if not recovered:
                self.state.halted = True
                terminal = True
                break
        verify_invariants(self.state)
        return RunResult(
            final_state=self.state,
            scenario_name=self.scenario.name,
            end_height=end,
            blocks_committed=blocks,
            halt_heights=list(self.halt_heights),
            terminal_halted=terminal,
            denoms=list(self.denoms),
            rows=self.rows,
            tally_outcomes=dict(self.tally_outcomes),
            warnings=list(self.state.warnings),
            epoch_events=list(self.epoch_events),
            trajectory=self.trajectory,
            tx_log=dict(self.tx_log),
        )


def run_scenario(state: ChainState, scenario: Scenario,
                 collect_rows: bool = True,
                 collect_trajectory: bool = False) -> RunResult:
    """Replay a scenario from a genesis state; the input state is not shared."""
    return Chain(state, scenario, collect_rows=collect_rows,
                 collect_trajectory=collect_trajectory).run()
