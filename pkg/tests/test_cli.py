import json

from autoexp import cli, presets


def run(argv):
    return cli.main(argv)


def test_sum_ok(capsys):
    code = run(["sum", "--auto", "thue_morse_even", "--f", "1/X",
                "--q", "1009", "--x", "1009"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "re,im,abs"
    assert "17.2381" in out


def test_sum_not_well_defined(capsys):
    code = run(["sum", "--auto", "thue_morse_even", "--f", "1/(3X)",
                "--q", "15", "--x", "10"])
    err = capsys.readouterr().err
    assert code == 1
    assert "not well-defined" in err


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("AUTOEXP_BUDGET", "100")
    code = run(["carry-scan", "--transducer", "thue_morse", "--lam", "10",
                "--alpha", "3", "--rho-list", "2"])
    assert code == 2
    assert "budget" in capsys.readouterr().err


def test_unknown_preset(capsys):
    assert run(["preset", "definitely-not-a-preset"]) == 1


def test_every_preset_resolves():
    for name in presets.PRESETS:
        cfg = presets.preset(name)
        assert cfg.command in cli._HANDLERS


def test_preset_configurations_pin_the_experiments():
    pv = presets.preset("pv-thue-morse")
    assert pv.args["q_list"] == "1009,10007,100003"
    assert pv.args["theta"] == 0.75
    assert pv.args["y"] == "0,q,10q"
    weil = presets.preset("weil-grid")
    assert weil.args["primes_max"] == 499 and weil.args["kloosterman"]


def test_vdc_check_seeded_byte_identity(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["vdc-check", "--trials", "50", "--seed", "9"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_preset_prints_config(capsys):
    assert run(["preset", "pv-thue-morse", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["rows"][0][0] == "scan-pv"


def test_preset_run_cheap_ones(capsys):
    for name in ("exact-sums", "carry-decay", "sync-decay", "crt-check",
                 "gcd-lemma"):
        assert run(["preset", name, "--run"]) == 0, name
        capsys.readouterr()


def test_csv_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["scan-pv", "--auto", "thue_morse_even", "--f", "1/X",
            "--q-list", "101,257", "--theta", "0.75", "--y", "0,q"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_output(capsys):
    assert run(["eval", "--auto", "digit_sum_mod(2,2)", "--n", "3",
                "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["columns"] == ["n", "re", "im"]
    assert obj["rows"][0] == [3, 1.0, 0.0]


def test_correlate(capsys):
    assert run(["correlate", "--f", "1/X", "--q", "101", "--x", "101",
                "--h", "5"]) == 0
    out = capsys.readouterr().out
    assert "8.622355" in out


def test_verify_gcd_clean(capsys):
    assert run(["verify-gcd", "--f-list", "1/X", "--r-list", "1",
                "--ell-list", "0", "--p-min", "5", "--p-max", "61"]) == 0


def test_sync_word_and_block_decompose(capsys):
    assert run(["sync-word", "--auto", "block_11"]) == 0
    assert run(["block-decompose", "--auto", "block_11", "--x", "256",
                "--sigma", "3", "--g-one"]) == 0


def test_weyl_decompose_cli(capsys):
    assert run(["weyl-decompose", "--transducer", "thue_morse", "--tau", "evil",
                "--g-f", "1/X", "--g-q", "101", "--x", "2000",
                "--l1", "1", "--l2", "1", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["metadata"]["identities_ok"] is True


def test_vdc_check_cli(capsys):
    assert run(["vdc-check", "--trials", "200", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("trials,min_rel_slack")


def test_check_unknown_property(capsys):
    assert run(["check", "--property", "nope"]) == 1


def test_count_congruence_json(capsys):
    assert run(["count-congruence", "--set", "thue_morse_even", "--f",
                "1/X,1/X", "--q", "101", "--m", "0",
                "--brute-check-max", "101", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    row = obj["rows"][0]
    assert row[0] == 101 and row[2] == int(row[6])


def test_automaton_file_via_cli(tmp_path, capsys):
    from autoexp.automata import rudin_shapiro
    path = tmp_path / "rs.dfao"
    rudin_shapiro().save(path)
    assert run(["eval", "--auto", str(path), "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[1].startswith("3,-1.0")
