"""Run reports: a per-block CSV and a JSON summary.

The CSV has one row per committed block (plus a flagged row for a block
height at which the chain halted before committing): height, then for each
denomination in sorted order the total supply, cumulative burn, and
community-pool balance, then the halt flag. The summary carries final
figures with every amount rendered as a decimal string, so values beyond
53-bit float safety survive any JSON reader.
"""

from __future__ import annotations

import csv
import json
import os

from .coins import coins_as_strings
from .ledger import COMMUNITY_POOL
from .simulator import RunResult
from .state import state_hash

CSV_NAME = "blocks.csv"
SUMMARY_NAME = "summary.json"


def csv_header(denoms: list) -> list:
    header = ["height"]
    header.extend(f"supply_{d}" for d in denoms)
    header.extend(f"burned_{d}" for d in denoms)
    header.extend(f"community_{d}" for d in denoms)
    header.append("halted")
    return header


def write_block_csv(path: str, result: RunResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(csv_header(result.denoms))
        writer.writerows(result.rows)


def build_summary(result: RunResult) -> dict:
    state = result.final_state
    return {
        "scenario": result.scenario_name,
        "chain_id": state.chain_id,
        "end_height": result.end_height,
        "final_height": state.height,
        "blocks_committed": result.blocks_committed,
        "final_state_hash": state_hash(state),
        "halted": result.terminal_halted,
        "halt_heights": list(result.halt_heights),
        "tally_outcomes": {str(k): v for k, v in sorted(result.tally_outcomes.items())},
        "tx_results": {
            str(h): [list(r) for r in results]
            for h, results in sorted(result.tx_log.items())
        },
        "warnings": list(result.warnings),
        "supply": coins_as_strings(state.bank.supply.totals),
        "cumulative_burned": coins_as_strings(state.bank.supply.cumulative_burned),
        "cumulative_minted": coins_as_strings(state.bank.supply.cumulative_minted),
        "community_pool": coins_as_strings(state.bank.module_balances(COMMUNITY_POOL)),
        "epochs": [
            {
                "height": e["height"],
                "minted": coins_as_strings(e["minted"]),
                "burned": coins_as_strings(e["burned"]),
                "distributed": coins_as_strings(e["distributed"]),
                "policies_applied": [
                    {"proposal": pid, "key": key} for pid, key in e["policies_applied"]
                ],
            }
            for e in result.epoch_events
        ],
    }


def write_reports(out_dir: str, result: RunResult) -> dict:
    """Write blocks.csv and summary.json into out_dir; returns the summary."""
    os.makedirs(out_dir, exist_ok=True)
    write_block_csv(os.path.join(out_dir, CSV_NAME), result)
    summary = build_summary(result)
    with open(os.path.join(out_dir, SUMMARY_NAME), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
