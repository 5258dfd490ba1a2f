import json

import pytest

from qmaxflow import corpus
from qmaxflow.cli import main
from qmaxflow.netgraph import parse_network


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fig3_file(tmp_path, capsys):
    code, text, _ = run(capsys, "net", "fig3")
    assert code == 0
    path = tmp_path / "fig3.net"
    path.write_text(text)
    return str(path)


def test_qmc(capsys, fig3_file):
    code, out, _ = run(capsys, "qmc", fig3_file)
    assert code == 0 and json.loads(out) == {"qmc": 8}


def test_qmf(capsys, fig3_file):
    code, out, _ = run(capsys, "qmf", fig3_file, "--trials", "20", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and (rep["best"], rep["qmc"], rep["equals_qmc"]) == (7, 8, False)
    assert len(rep["seeds"]) == 20


def test_qmf2_and_complex(capsys, fig3_file):
    code, out, _ = run(capsys, "qmf2", fig3_file, "--trials", "3")
    assert code == 0 and json.loads(out)["trials"] == 3
    code, out, _ = run(capsys, "qmf", fig3_file, "--trials", "3", "--domain", "complex")
    assert code == 0 and json.loads(out)["best"] == 7


def test_missing_file_and_usage(capsys):
    assert run(capsys, "qmf", "nonexistent.net")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["qmf"])
    assert e.value.code == 2
    assert run(capsys, "net", "nope")[0] == 2


def test_bad_flags(capsys, fig3_file, tmp_path):
    assert run(capsys, "qmf", fig3_file, "--trials", "0")[0] == 2
    assert run(capsys, "qmf", fig3_file, "--prime", "15")[0] == 2
    assert run(capsys, "qmf", fig3_file, "--rtol", "2")[0] == 2
    bad = tmp_path / "bad.net"
    bad.write_text("e 2 S.2 T.1\n")
    assert run(capsys, "qmc", str(bad))[0] == 2


def test_computation_error_exits_one(capsys, fig3_file):
    code, _, err = run(capsys, "qmf", fig3_file, "--max-dim", "10")
    assert code == 1 and "ResourceLimit" in err
    code, _, err = run(capsys, "ee", fig3_file, "--path-tensors", "2")
    assert code == 1


def test_ee(capsys, tmp_path):
    path = tmp_path / "f6.net"
    path.write_text(run(capsys, "net", "fig6")[1])
    code, out, _ = run(capsys, "ee", str(path), "--path-tensors", "2")
    rep = json.loads(out)
    assert code == 0 and rep["entropy_bits"] == pytest.approx(3) and rep["qmc_log2_bound"] == 3
    code, out, _ = run(capsys, "ee", str(path), "--trials", "3")
    assert code == 0 and json.loads(out)["entropy_bits"] <= 3


def test_qsat(capsys, tmp_path):
    path = tmp_path / "c.qsat"
    path.write_text("q 2 2 2 2\nc 1 1 2\nc 2 2 3\nc 1 3 4\n")
    code, out, _ = run(capsys, "qsat", str(path))
    assert code == 0 and json.loads(out)["gqsat"] == 2


def test_scale_csv(capsys, fig3_file):
    code, out, _ = run(capsys, "scale", fig3_file, "--n-max", "2", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,qmc,qmf_sampled,gap" and lines[1] == "1,8,7,1"


def test_corpus_filter(capsys):
    code, out, _ = run(capsys, "corpus", "--filter", "fig5")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 1
    assert (rows[0]["expected"], rows[0]["observed"], rows[0]["result"]) == (3, 3, "pass")
    code, out, _ = run(capsys, "corpus", "--filter", "no-such-*")
    assert code == 0 and json.loads(out) == []


def test_corpus_deterministic(capsys):
    first = run(capsys, "corpus", "--filter", "fig[34]*")
    second = run(capsys, "corpus", "--filter", "fig[34]*")
    assert first == second and first[0] == 0


def test_corpus_entries_well_formed():
    for name, entry in corpus.corpus().items():
        assert entry.checks
        for c in entry.checks:
            assert c.provenance.startswith(corpus.PROVENANCE_PREFIXES)
            assert not any(ch.isdigit() for ch in c.provenance)
        if entry.network is not None:
            from qmaxflow.netgraph import serialize

            assert parse_network(serialize(entry.network)) == entry.network


def test_corpus_detects_mismatch(monkeypatch, capsys):
    entry = corpus.corpus()["fig3"]
    wrong = corpus.CorpusEntry("fig3", (corpus.Check("qmc", 9, "==", "Example: wrong on purpose"),), entry.network)
    monkeypatch.setitem(corpus.corpus(), "fig3", wrong)
    code, out, _ = run(capsys, "corpus", "--filter", "fig3")
    assert code == 1 and json.loads(out)[0]["result"] == "fail"
