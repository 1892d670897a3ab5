"""Treasury parameter changes wait for the epoch boundary.

A tax-policy proposal that passes at height 25 does nothing until the
epoch turns at height 100; a distribution change from the same vote takes
effect the very next block. The run below prints the tax rate around both
moments so the latency is visible.
"""

from luncsim import build_bundled, build_state, parse_scenario
from luncsim.simulator import Chain

genesis_cfg, scenario_cfg = build_bundled("burn-tax-activation")
chain = Chain(build_state(genesis_cfg), parse_scenario(scenario_cfg))

watch = {24, 25, 26, 99, 100, 101}
while chain.state.height < 210:
    outcome = chain.step()
    if outcome.height in watch:
        rate = chain.state.treasury.tax_rate
        queued = sorted(k for _, k, _pol in chain.state.treasury.pending_policies)
        print(f"height {outcome.height}: tax rate {rate}, queued policies {queued}")

print()
print("tally outcomes:", chain.tally_outcomes)
print("epoch events:")
for e in chain.epoch_events:
    print(" ", e)
print("total burned:", dict(chain.state.bank.supply.cumulative_burned))
