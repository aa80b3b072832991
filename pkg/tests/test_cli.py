"""CLI behavior: subcommands, exit codes, determinism."""

import json

import pytest

from forcing_lab.cli import main


@pytest.fixture()
def len_family(tmp_path):
    path = tmp_path / "len.json"
    path.write_text(json.dumps(
        {"carrier": "cohen", "sets": [{"type": "min-length"}] * 8}))
    return str(path)


@pytest.fixture()
def plane_family(tmp_path):
    path = tmp_path / "plane.json"
    path.write_text(json.dumps(
        {"carrier": "plane", "sets": [{"type": "square"}] * 6}))
    return str(path)


def test_pair_build_then_verify(tmp_path, len_family, capsys):
    out = str(tmp_path / "t.json")
    assert main(["entangle-pair", "--family", len_family,
                 "--payload", "hex:ff", "--stages", "8", "--out", out]) == 0
    assert main(["verify", "--trace", out]) == 0
    text = capsys.readouterr().out
    assert "PASS" in text and "pair-decode-roundtrip" in text


def test_decode_pair_zeros_is_no_marker(tmp_path, capsys):
    zeros = tmp_path / "zeros.bits"
    zeros.write_text("0" * 64 + "\n")
    rc = main(["decode-pair", "--c", str(zeros), "--d", str(zeros),
               "--count", "1", "--scan-budget", "256"])
    assert rc == 1
    assert "no marker" in capsys.readouterr().err


def test_tampered_trace_fails_verify(tmp_path, len_family, capsys):
    out = tmp_path / "t.json"
    main(["entangle-pair", "--family", len_family,
          "--payload", "bits:1111111111111111", "--stages", "8",
          "--out", str(out)])
    obj = json.loads(out.read_text())
    # flip one padding-region bit (inside the zero block before a marker)
    stream = next(s for s in obj["streams"] if s["name"] == "d")
    prefix = stream["prefix"]
    s0 = obj["boundaries"][0]
    assert prefix[s0 - 1] == "0"
    stream["prefix"] = prefix[:s0 - 1] + "1" + prefix[s0:]
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(obj))
    assert main(["verify", "--trace", str(tampered)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_many_build_verify_and_decode_files(tmp_path, capsys):
    fam = tmp_path / "prod.json"
    fam.write_text(json.dumps({"carrier": "product", "arity": 2,
                               "sets": [{"type": "min-length"}] * 6}))
    out = tmp_path / "many.json"
    assert main(["entangle-many", "--k", "3", "--family", str(fam),
                 "--payload", "seed:7", "--stages", "6",
                 "--out", str(out)]) == 0
    assert main(["verify", "--trace", str(out)]) == 0
    obj = json.loads(out.read_text())
    files = []
    for s in obj["streams"]:
        p = tmp_path / f"s{s['name']}.bits"
        p.write_text(s["prefix"] + "\n")
        files.append(str(p))
    capsys.readouterr()
    assert main(["decode-many", "--streams", *files, "--count", "18"]) == 0
    got = capsys.readouterr().out
    want = "".join(str(b) for b in obj["payload_bits"])
    assert want in got


def test_wide_build_verify_decode(tmp_path, len_family, capsys):
    fam = tmp_path / "len60.json"
    fam.write_text(json.dumps(
        {"carrier": "cohen", "sets": [{"type": "min-length"}] * 16}))
    out = tmp_path / "wide.json"
    assert main(["entangle-wide", "--family", str(fam),
                 "--payload", "bits:101101010101", "--steps", "12",
                 "--out", str(out)]) == 0
    assert main(["verify", "--trace", str(out)]) == 0
    capsys.readouterr()
    assert main(["decode-wide", "--trace", str(out)]) == 0
    assert "101101010101" in capsys.readouterr().out


def test_generics_and_bound_chain(tmp_path, plane_family, capsys):
    gen = tmp_path / "gen.json"
    assert main(["build-generics", "--family", plane_family, "--rows", "3",
                 "--horizon", "6", "--seed", "s1", "--out", str(gen)]) == 0
    assert main(["verify", "--trace", str(gen)]) == 0
    bound = tmp_path / "bound.json"
    assert main(["bound-chain", "--family", plane_family, "--rows", "3",
                 "--from-generics", str(gen), "--seed", "s1",
                 "--out", str(bound)]) == 0
    assert main(["verify", "--trace", str(bound)]) == 0
    bound2 = tmp_path / "bound2.json"
    assert main(["bound-chain", "--family", plane_family, "--rows", "2",
                 "--seed", "s2", "--out", str(bound2)]) == 0
    assert main(["verify", "--trace", str(bound2)]) == 0


def test_seed_determinism_byte_identical(tmp_path, plane_family):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["bound-chain", "--family", plane_family, "--rows", "2",
                     "--seed", "fixed", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_env_seed_default(tmp_path, plane_family, monkeypatch):
    monkeypatch.setenv("FORCING_LAB_SEED", "env-seed")
    a = tmp_path / "a.json"
    assert main(["build-generics", "--family", plane_family, "--rows", "1",
                 "--horizon", "4", "--out", str(a)]) == 0
    assert json.loads(a.read_text())["seed"] == "env-seed"


def test_seed_flag_reseeds_unseeded_family(tmp_path, len_family):
    plain, seeded = tmp_path / "p.json", tmp_path / "s.json"
    for out, extra in ((plain, []), (seeded, ["--seed", "dfree"])):
        assert main(["entangle-pair", "--family", len_family,
                     "--payload", "hex:a7", "--stages", "6",
                     "--out", str(out), *extra]) == 0
    assert json.loads(seeded.read_text())["family"]["seed"] == "dfree"
    assert "seed" not in json.loads(plain.read_text())["family"]
    assert main(["verify", "--trace", str(seeded)]) == 0


def test_usage_errors_exit_2(tmp_path, len_family):
    assert main(["entangle-pair", "--family", str(tmp_path / "nope.json"),
                 "--payload", "hex:ff", "--stages", "2"]) == 2
    assert main(["entangle-pair", "--family", len_family,
                 "--payload", "wat", "--stages", "2"]) == 2
    assert main(["entangle-pair", "--family", len_family,
                 "--payload", "bits:2", "--stages", "2"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_check_failures_exit_1(tmp_path, len_family):
    # too few dense sets for the requested stages
    assert main(["entangle-pair", "--family", len_family,
                 "--payload", "hex:ff", "--stages", "99"]) == 2
    # exhausted finite payload
    assert main(["entangle-pair", "--family", len_family,
                 "--payload", "bits:1", "--stages", "4"]) == 1
