"""
Probing the 25% delegation power cap
====================================

Inside the protect window a delegation is refused when it would push its
validator above a quarter of total power, counting the new tokens on both
sides of the ratio. The boundary is exact integer arithmetic, so we can
sit right on it.
"""

from fractions import Fraction

from luncsim import build_bundled, build_state, parse_scenario, run_scenario
from luncsim.staking import StakingParams, check_power_cap

params = StakingParams()

# validator at 5,000 power of 40,000 total; cap trips past d = 6,666
for extra in (6_665, 6_666, 6_667, 6_668):
    ok = check_power_cap(5_000, 40_000, extra * 1_000_000, params)
    share = Fraction(5_000 + extra, 40_000 + extra)
    print(f"delegate {extra:>5} -> new share {float(share):.6f} "
          f"{'accepted' if ok else 'REFUSED'}")

# the worked pair from the window's design discussion
print()
print("30 of 110:", check_power_cap(20, 100, 10_000_000, params), "(27% > cap)")
print("25 of 105:", check_power_cap(20, 100, 5_000_000, params), "(23.8% fits)")

# and end to end: the bundled probe scenario
genesis_cfg, scenario_cfg = build_bundled("power-cap-probe")
result = run_scenario(build_state(genesis_cfg), parse_scenario(scenario_cfg))
print()
for height, outcomes in sorted(result.tx_log.items()):
    print(f"height {height}: {outcomes}")
print("whale delegations:", result.final_state.staking.delegations["whale"])
