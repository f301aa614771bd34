import json
import threading

import pytest

from lcsq import ENGINE
from lcsq.cli import main
from lcsq.intlat import AbGroup
from lcsq.ncalg import Presentation
from lcsq.records import CACHE_ENV, ResultCache, ResultRecord, cache_roundtrip
from lcsq.series import TotalDegree


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_table_row(capsys):
    code, out, _ = run(capsys, "compute", "-g", "2", "-r", "x^3+y^3", "--series", "N", "--k", "2",
                       "--max-degree", "8", "--format", "table")
    assert code == 0
    ranks = [int(line.split()[1]) for line in out.splitlines()[2:]]
    assert ranks[2:] == [1, 2, 1, 0, 0, 0, 0]


def test_compute_json_single_cell(capsys):
    code, out, _ = run(capsys, "compute", "-g", "5", "--series", "N", "--k", "3",
                       "--cell", "1,1,1,1,1", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["rank"] == 30 and obj["invariant_factors"] == [3]
    assert obj["cell"] == [1, 1, 1, 1, 1] and obj["engine"] == ENGINE
    assert obj["presentation"] == {"n": 5, "relation": None} and obj["grading"] == "multi"


def test_compute_trivial(capsys):
    code, out, _ = run(capsys, "compute", "-g", "2", "--series", "B", "--k", "2", "--cell", "1,0")
    assert code == 0
    assert out.splitlines()[-1].split() == ["1,0", "0", "0", "0"]


def test_compute_csv_and_output_file(tmp_path, capsys):
    dest = tmp_path / "out.csv"
    code, out, _ = run(capsys, "compute", "-g", "2", "-r", "x^3", "--series", "B", "--k", "2",
                       "--degree", "3", "--format", "csv", "-o", str(dest))
    assert code == 0 and out == ""
    lines = dest.read_text().splitlines()
    assert lines[0].startswith("n,relation,grading")
    assert len(lines) == 1 + 4  # cells (3,0) (2,1) (1,2) (0,3)


def test_output_is_deterministic(capsys):
    argv = ["compute", "-g", "2", "-r", "y*x-3*x*y", "--series", "N", "--k", "2",
            "--max-degree", "5", "--format", "json", "--no-timing"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_jobs_preserve_cell_order(capsys):
    base = ["compute", "-g", "2", "-r", "x^3", "--series", "B", "--k", "3", "--max-degree", "6",
            "--format", "json", "--no-timing"]
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--jobs", "3")
    assert serial == parallel


@pytest.mark.parametrize("argv", [
    ["compute", "-g", "2", "-r", "x^+", "--series", "N", "--k", "2", "--cell", "1,1"],
    ["compute", "-g", "2", "-r", "x^2+y", "--series", "N", "--k", "2", "--cell", "1,1"],
    ["compute", "-g", "2", "--series", "N", "--k", "3", "--max-degree", "2"],
    ["compute", "-g", "2", "--series", "N", "--k", "0", "--cell", "1,1"],
    ["oracle", "qpoly", "--q", "1", "--series", "N", "--k", "3", "--cell", "2,2"],
    ["oracle", "qpoly", "--q", "3", "--series", "N", "--k", "3", "--cell", "2,2,1"],
    ["oracle", "n2rank", "-r", "x*y-y*x", "--d", "3"],
    ["oracle", "jh", "--series", "B", "--k", "7", "--m", "3"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("lcsq:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["compute", "-g", "2", "--series", "Q", "--k", "2", "--cell", "1,1"])
    assert e.value.code == 2


@pytest.mark.parametrize("argv", [
    ["compute", "-g", "2", "-r", "x^3+y^3", "--series", "N", "--k", "2", "--cell", "2,1"],
    ["compute", "-g", "2", "-r", "x^3+y^3", "--grading", "multi", "--series", "N", "--k", "2",
     "--max-degree", "4"],
])
def test_grading_errors_exit_3(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and "grading" in err


def test_oracle_outputs(capsys):
    assert run(capsys, "oracle", "qpoly", "--q", "3", "--series", "N", "--k", "3",
               "--cell", "2,2")[1].startswith("Z/8  [")
    assert run(capsys, "oracle", "torsion3", "--n", "7")[1].startswith("22  [")
    assert run(capsys, "oracle", "n3conj", "--m", "4", "--d", "4")[1].startswith("5 (CONJECTURE)  [")
    assert run(capsys, "oracle", "skew", "--series", "N", "--k", "3", "--cell", "2,2")[1].startswith("Z  [")
    assert run(capsys, "oracle", "n2rank", "-r", "x^3+y^3", "--d", "4")[1].startswith("1  [")
    out = run(capsys, "oracle", "jh", "--series", "B", "--k", "4", "--m", "3", "--d", "5")[1]
    assert out.splitlines()[-1] == "rank in degree 5: 7"


def test_verify_table1(capsys):
    code, out, _ = run(capsys, "verify", "table1")
    assert code == 0 and "16/16 entries match" in out


def test_verify_reports_are_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "lemmas")
    _, b, _ = run(capsys, "verify", "lemmas")
    assert a == b


def test_verify_budget_exceeded_exits_4(capsys):
    code, out, _ = run(capsys, "verify", "table2", "--budget", "0")
    assert code == 4 and "exceeded" in out


def test_verify_mismatch_exits_1(capsys, monkeypatch):
    from lcsq import verify

    def broken():
        yield verify.Check("fake", "entry", "1", "2", False)
    monkeypatch.setitem(verify.SUITES, "table1", broken)
    code, out, _ = run(capsys, "verify", "table1")
    assert code == 1 and "DIFF" in out


def test_conjecture_suite_never_gates(capsys, monkeypatch):
    from lcsq import verify

    def soft():
        yield verify.Check("n3-conjecture", "entry", "1", "2", False, gating=False)
    monkeypatch.setitem(verify.SUITES, "n3-conjecture", soft)
    code, out, _ = run(capsys, "verify", "n3-conjecture")
    assert code == 0 and "report-only" in out


# records and cache

def _record(**kw):
    base = dict(n=2, relation="x^3 + y^3", grading="total", series="N", k=2,
                cell=TotalDegree(4), rank=1, invariant_factors=(3, 3), ms=12)
    base.update(kw)
    return ResultRecord(**base)


@pytest.mark.parametrize("rec", [
    _record(), _record(cell=(1, 1, 1, 1, 1), n=5, relation=None, grading="multi", rank=30,
                       invariant_factors=(3,)),
    _record(invariant_factors=(), rank=0, ms=0),
])
def test_json_round_trip(rec):
    assert ResultRecord.loads(rec.dumps()) == rec
    assert json.loads(rec.dumps()) == rec.to_json()
    assert rec.group == AbGroup(rec.rank, rec.invariant_factors)


def test_cache_round_trip(tmp_path):
    rec = _record()
    back = cache_roundtrip(rec, ResultCache(tmp_path))
    assert back == rec and back.ms == rec.ms


def test_cache_ignores_stale_engine(tmp_path):
    cache = ResultCache(tmp_path)
    rec = _record(engine="lcsq-0.0.0")
    cache.store(rec)
    assert cache.load(rec.key()) is None


def test_cache_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert ResultCache().root == tmp_path
    monkeypatch.delenv(CACHE_ENV)
    with pytest.raises(ValueError):
        ResultCache()


def test_concurrent_writers_distinct_keys(tmp_path):
    cache = ResultCache(tmp_path)
    recs = [_record(cell=TotalDegree(d)) for d in range(8)]
    threads = [threading.Thread(target=cache.store, args=(r,)) for r in recs]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert [cache.load(r.key()) for r in recs] == recs
    assert not list(tmp_path.glob("*.tmp"))


def test_compute_uses_cache(tmp_path, capsys):
    argv = ["compute", "-g", "2", "-r", "x^3", "--series", "B", "--k", "2", "--cell", "2,1",
            "--format", "json", "--cache-dir", str(tmp_path)]
    _, first, _ = run(capsys, *argv)
    files = list(tmp_path.glob("*.jsonl"))
    assert len(files) == 1
    # plant a recognisable record under the same key; the CLI must return it
    planted = ResultRecord.loads(first.strip())
    planted = ResultRecord(**{**planted.__dict__, "ms": 987654})
    ResultCache(tmp_path).store(planted)
    _, second, _ = run(capsys, *argv)
    assert json.loads(second)["ms"] == 987654
    # a stale engine version forces recomputation
    ResultCache(tmp_path).store(ResultRecord(**{**planted.__dict__, "engine": "lcsq-0.0.0"}))
    _, third, _ = run(capsys, *argv)
    assert json.loads(third)["ms"] != 987654
    assert json.loads(third)["engine"] == ENGINE


def test_presentation_fingerprint_separates_relations(tmp_path):
    a = _record(relation="x^3")
    b = _record(relation="x^3 + y^3")
    assert a.key() != b.key()
    assert Presentation.parse(2, "x^3").relation_text == "x^3"
