"""Replay of the testnet delegation-sniping halt.

Four of six validators run the successor release (64% of power). A
pre-armed delegation lands two blocks after the delegate revert height,
the two camps disagree on its validity, and no side holds 2/3. The chain
stops at 7,684,492 until a fifth operator upgrades.
"""

import time

from luncsim import build_bundled, build_state, parse_scenario, run_scenario

genesis_cfg, scenario_cfg = build_bundled("rebel1-replay")
state = build_state(genesis_cfg)
scenario = parse_scenario(scenario_cfg)

t0 = time.time()
result = run_scenario(state, scenario)
elapsed = time.time() - t0

print(f"replayed {result.blocks_committed} blocks in {elapsed:.2f}s")
print("halt heights:", result.halt_heights)
print("terminal halt:", result.terminal_halted)

# the flagged row shows the halt before the recovered commit overwrote it
for row in result.rows:
    if row[0] in (7_684_491, 7_684_492):
        print("row", row)

final = result.final_state
versions = {v.operator_address: v.software_version
            for v in final.staking.validators.values()}
print("final versions:", versions)
print("sniper's delegation landed:",
      final.staking.delegations["sniper"]["val1"], "shares on val1")
