import json

import pytest

from oracles import gaussian_product
from qdivided.cli import emit_table, main
from qdivided.dalg import DElement
from qdivided.dmod import FPModule
from qdivided.qarith import QContext


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_qbinom(capsys):
    code, out = run_json(capsys, "qbinom", "5", "2", "--ell", "3", "--q", "2", "--integer")
    assert code == 0
    assert out["integer"] == gaussian_product(5, 2, 2) == 155
    assert out["value"] == 155 % 3


def test_seed_and_format_anywhere(capsys):
    _, a = run(capsys, "--json", "qbinom", "4", "2", "--ell", "5", "--q", "3")
    _, b = run(capsys, "qbinom", "4", "2", "--ell", "5", "--q", "3", "--seed", "3", "--json")
    assert a == b


def test_bad_context_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qbinom", "2", "1", "--ell", "2", "--q", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["qbinom", "2", "1", "--ell", "4", "--q", "3"])
    assert exc.value.code == 2


def test_dalg_mul_and_derive(capsys):
    code, out = run_json(capsys, "dalg", "mul", "[[1,1]]", "[[1,1]]", "--ell", "5", "--q", "2")
    assert code == 0 and out["result"] == [[2, 3]]
    _, out = run_json(capsys, "dalg", "derive", "[[3,1]]", "--times", "2", "--ell", "5", "--q", "2")
    assert out["result"] == [[1, 1]]


def test_dalg_taylor_and_ybasis(capsys):
    code, out = run_json(capsys, "dalg", "taylor", "[[2,1]]", "--ell", "3", "--q", "2")
    assert code == 0 and "taylor" in out
    code, out = run_json(capsys, "dalg", "ybasis", "[[3,1]]", "--ell", "3", "--q", "2")
    assert code == 0 and out["ybasis"]


def test_dmod_analyze(tmp_path, capsys):
    ctx = QContext(3, 2)
    M = FPModule(ctx, [0], [{0: DElement(ctx, {3: 1})}])
    path = tmp_path / "m.json"
    path.write_bytes(emit_table(M.to_json()))
    code, out = run_json(capsys, "dmod", "analyze", str(path), "--trunc", "30")
    assert code == 0
    assert out["hilbert"][:3] == [1, 1, 1]
    assert out["pass"] is True and out["period"] > 0


def test_fpmodule_round_trip():
    ctx = QContext(5, 3)
    M = FPModule(ctx, [0, 2], [{0: DElement(ctx, {4: 1}), 1: DElement(ctx, {2: 2})}])
    again = FPModule.from_json(json.loads(emit_table(M.to_json())))
    assert again.to_json() == M.to_json()


def test_bounds(capsys):
    code, out = run_json(capsys, "dmod", "bounds", "vimod", "--t", "1", "--t0", "1", "--t1", "1",
                         "--delta", "1", "--ell", "3", "--q", "2")
    assert code == 0 and out == {"epsilon": 6, "lambda": 3, "onset": 3, "period": 486}
    _, out = run_json(capsys, "dmod", "bounds", "unipotent", "--t", "0", "--d", "1", "--ell", "3", "--q", "2")
    assert out == {"onset": 7, "period": 486, "s": 2}
    code, out = run_json(capsys, "dmod", "bounds", "hom", "--eps", "1", "2", "3", "--lam", "0", "1",
                         "--ell", "3", "--q", "2")
    assert code == 0 and isinstance(out["epsilon"], int)
    code, out = run_json(capsys, "dmod", "bounds", "spectral", "--t", "1", "--k", "1",
                         "--eps1", '{"0": 1, "1": 2, "2": 1}', "--fl", '{"0": 0, "1": 1, "2": 0}',
                         "--ell", "3", "--q", "2")
    assert code == 0 and "epsilon" in out


def test_gcoh_dims_tsv(capsys):
    code, out = run(capsys, "gcoh", "dims", '{"family": "Sym", "n": 3}', "--ell", "3", "--tmax", "4", "--tsv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n\tt\tdim"
    assert [line.split("\t")[2] for line in lines[1:]] == ["1", "0", "0", "1", "1"]


def test_gcoh_dims_family_range(capsys):
    code, out = run_json(capsys, "gcoh", "dims", '{"family": "GL", "q": 2}', "--ell", "3", "--tmax", "1",
                         "--nmax", "2")
    assert code == 0 and [r["n"] for r in out["rows"]] == [1, 1, 2, 2]


def test_gcoh_verify(capsys):
    code, out = run_json(capsys, "gcoh", "verify", "leibniz", "--q", "2", "--ell", "3", "--tmax", "1",
                         "--nmax", "2")
    assert code == 0 and out["pass"]
    code, out = run_json(capsys, "gcoh", "verify", "midportion", "--q", "2", "--ell", "3", "--tmax", "1",
                         "--nmax", "2")
    assert code == 0 and len(out["results"]) == 1
    code, _ = run(capsys, "gcoh", "verify", "free", "--family", "Sym", "--ell", "2", "--tmax", "1",
                  "--nmax", "3")
    assert code == 0


def test_gcoh_verify_needs_q(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gcoh", "verify", "leibniz", "--ell", "3"])
    assert exc.value.code == 2


def test_specht(capsys, tmp_path):
    code, out = run_json(capsys, "specht", "dim", "--mu", "1,1,1", "--q", "2", "--ell", "3")
    assert code == 0 and out["dim"] == 8
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"q": 2, "series": [[n, 2**n - 1] for n in range(1, 6)]}))
    code, out = run_json(capsys, "specht", "fit", str(path))
    assert code == 0 and out["degree"] == 1
    path.write_text(json.dumps({"q": 2, "series": [[1, 1]]}))
    code, out = run_json(capsys, "specht", "fit", str(path))
    assert code == 1 and out["pass"] is False


def test_specht_series(capsys):
    code, out = run_json(capsys, "specht", "series", "--mu", "1", "--q", "2", "--ell", "3", "--nmax", "3")
    assert code == 0 and [v["n"] for v in out["values"]] == [2, 3]


def test_tsv_header_only():
    assert emit_table([], "tsv", ["a", "b"]) == b"a\tb\n"
    assert emit_table({"x": 1}, "tsv") == b"key\tvalue\nx\t1\n"


def test_emit_json_canonical():
    assert emit_table({"b": 1, "a": (2, 3)}) == b'{"a": [2, 3], "b": 1}\n'


def test_verify_small_grid(capsys):
    argv = ["verify", "all", "--q", "2", "--ell", "3", "--tmax", "1", "--nmax", "2", "--no-suites"]
    code, out = run(capsys, *argv)
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and rep["failures"] == 0 and rep["suites"] == []
    code, again = run(capsys, *argv)
    assert again == out
    code, tsv = run(capsys, *argv, "--tsv")
    assert tsv.splitlines()[0] == "check\tfamily\tq\tell\tt\tn\tm\tstatus"
