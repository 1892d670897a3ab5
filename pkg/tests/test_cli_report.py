import csv
import json

from luncsim.cli import main
from luncsim.genesis import build_state
from luncsim.report import build_summary, csv_header, write_reports
from luncsim.scenario import parse_scenario
from luncsim.simulator import run_scenario

GENESIS = {
    "chain_id": "cli-t",
    "genesis_height": 0,
    "accounts": [{"address": "alice", "denom": "uluna", "amount": "50000"},
                 {"address": "alice", "denom": "uusd", "amount": "7"}],
    "staking": {
        "gates": {"staking_power_upgrade_height": 5,
                  "delegate_power_revert_height": 10,
                  "staking_power_revert_height": 10**6,
                  "protect_power_height": 10},
        "validators": [{"address": "val1", "tokens": "10000000"},
                       {"address": "val2", "tokens": "10000000",
                        "version": "v20"}],
    },
    "ante": {"gas_price": "0"},
}

HALTING = {
    "name": "halting", "end_height": 30, "strict_halt": True,
    "events": [{"at_height": 20, "action": "submit-tx", "tx": {
        "fee_payer": "alice",
        "msgs": [{"kind": "delegate", "delegator": "alice",
                  "validator": "val1",
                  "amount": {"denom": "uluna", "amount": "1000"}}],
    }}],
}


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_report_files_round_trip(tmp_path):
    scn = {"name": "quiet", "end_height": 8, "events": [
        {"at_height": 3, "action": "submit-tx", "tx": {
            "fee_payer": "alice",
            "msgs": [{"kind": "send", "sender": "alice", "recipient": "bob",
                      "coins": [{"denom": "uluna", "amount": "123"}]}],
        }},
    ]}
    result = run_scenario(build_state(GENESIS), parse_scenario(scn))
    summary = write_reports(str(tmp_path), result)

    with open(tmp_path / "blocks.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == csv_header(["uluna", "uusd"])
    assert len(rows) == 1 + 8                       # header + one per block
    assert rows[0] == ["height", "supply_uluna", "supply_uusd",
                       "burned_uluna", "burned_uusd",
                       "community_uluna", "community_uusd", "halted"]
    assert rows[3][0] == "3" and rows[3][-1] == "0"

    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk == json.loads(json.dumps(summary))
    assert on_disk["supply"]["uluna"] == "20050000"
    assert on_disk["tx_results"] == {"3": [["ok", ""]]}
    assert on_disk["final_state_hash"] == result.final_hash


def test_summary_marks_terminal_halt():
    result = run_scenario(build_state(GENESIS), parse_scenario(HALTING))
    summary = build_summary(result)
    assert summary["halted"] is True
    assert summary["halt_heights"] == [20]
    assert summary["final_height"] == 19


def test_cli_run_writes_reports_and_exits_zero(tmp_path, capsys):
    g = _write(tmp_path, "g.json", GENESIS)
    s = _write(tmp_path, "s.json", {"name": "quiet", "end_height": 5,
                                    "events": []})
    code = main(["run", "--genesis", g, "--scenario", s,
                 "--out", str(tmp_path / "out")])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["blocks_committed"] == 5
    assert (tmp_path / "out" / "blocks.csv").exists()
    assert (tmp_path / "out" / "summary.json").exists()


def test_cli_terminal_halt_exit_code(tmp_path):
    g = _write(tmp_path, "g.json", GENESIS)
    s = _write(tmp_path, "s.json", HALTING)
    assert main(["run", "--genesis", g, "--scenario", s]) == 2


def test_cli_strict_halt_flag_overrides_scenario(tmp_path):
    g = _write(tmp_path, "g.json", GENESIS)
    soft = dict(HALTING, strict_halt=False)
    s = _write(tmp_path, "s.json", soft)
    # without upgrades the halt is unrecoverable either way
    assert main(["run", "--genesis", g, "--scenario", s,
                 "--strict-halt"]) == 2


def test_cli_parse_failures_exit_four(tmp_path):
    missing = str(tmp_path / "nope.json")
    ok = _write(tmp_path, "s.json", {"name": "x", "end_height": 3,
                                     "events": []})
    assert main(["run", "--genesis", missing, "--scenario", ok]) == 4
    g = _write(tmp_path, "g.json", GENESIS)
    assert main(["run", "--genesis", g, "--scenario", missing]) == 4
    assert main(["replay", "made-up-name"]) == 4
    assert main(["replay"]) == 4


def test_cli_replay_list(capsys):
    assert main(["replay", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert "rebel1-replay" in names
    assert "mainnet-gates" in names
    assert names == sorted(names)


def test_cli_replay_runs_bundled_scenario(tmp_path, capsys):
    code = main(["--seed", "7", "replay", "power-cap-probe",
                 "--out", str(tmp_path)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["scenario"] == "power-cap-probe"
    assert (tmp_path / "genesis.json").exists()
    assert (tmp_path / "scenario.json").exists()


def test_cli_estimate_fee(capsys):
    code = main(["estimate-fee", "--amount", "1000000", "--rate", "0.012",
                 "--gas", "250"])
    assert code == 0
    quote = json.loads(capsys.readouterr().out)
    assert quote["total_fee"] == "12250"
    # non-native denominations are refused without a traceback
    assert main(["estimate-fee", "--amount", "5", "--denom", "wbtc"]) == 1


def test_cli_log_env_accepted(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LUNCSIM_LOG", "debug")
    assert main(["replay", "--list"]) == 0
