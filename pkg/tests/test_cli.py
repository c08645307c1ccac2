import json
import os

import pytest

from permlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


class TestConstruct:
    def test_thm12i(self, capsys):
        code, out, _ = run(capsys, "construct", "thm1.2i", "--n", "4")
        assert code == 0
        doc = json.loads(out)
        assert [c[0] for c in doc["elements"]] == [0, 3, 1, 2, 4]

    def test_thm15(self, capsys):
        code, out, _ = run(capsys, "construct", "thm1.5", "--n", "7")
        assert code == 0
        assert [c[0] for c in json.loads(out)["elements"]] == [3, 2, 6, 4, 5, 1]

    def test_thm13_elements(self, capsys):
        code, out, _ = run(capsys, "construct", "thm1.3", "--elements", "0,5,6,10")
        assert code == 0
        assert [c[0] for c in json.loads(out)["elements"]] == [0, 6, 5, 10]

    def test_thm16_not_found(self, capsys):
        code, out, _ = run(
            capsys, "construct", "thm1.6", "--q", "5", "--op", "sum", "--target", "S"
        )
        assert code == 1
        assert json.loads(out)["status"] == "not_found"

    def test_usage_error(self, capsys):
        code, _, err = run(capsys, "construct", "thm1.2ii", "--n", "5")
        assert code == 3
        assert "even" in err


class TestCheck:
    @pytest.fixture()
    def n20(self, tmp_path):
        doc = {
            "group": {"kind": "integers"},
            "shape": "circular",
            "elements": [
                [x]
                for x in (0, 3, 12, 9, 15, 18, 6, 20, 19, 14, 13, 4, 2, 7, 16,
                          17, 11, 10, 5, 8, 1)
            ],
        }
        p = tmp_path / "n20.json"
        p.write_text(json.dumps(doc))
        return p

    def test_pass(self, capsys, n20):
        code, out, _ = run(
            capsys, "check", "--arrangement", str(n20), "--conjecture", "3.16",
            "--params", "n=20",
        )
        assert code == 0 and "pass" in out

    def test_fail_localizes(self, capsys, n20, tmp_path):
        doc = json.loads(n20.read_text())
        doc["elements"][3], doc["elements"][4] = doc["elements"][4], doc["elements"][3]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code, out, _ = run(
            capsys, "check", "--arrangement", str(bad), "--conjecture", "3.16",
            "--params", "n=20",
        )
        assert code == 1
        assert "positions" in out

    def test_malformed(self, capsys, tmp_path):
        bad = tmp_path / "garbage.json"
        bad.write_text("{not json")
        code, _, err = run(
            capsys, "check", "--arrangement", str(bad), "--conjecture", "3.16",
            "--params", "n=20",
        )
        assert code == 3

    def test_constraint_file(self, capsys, tmp_path):
        arr = {
            "group": {"kind": "integers"},
            "shape": "circular",
            "elements": [[1], [2], [3], [4]],
        }
        cons = {"constraint": {"clauses": [{"predicate": {"kind": "prime"}, "labeler": "sum"}]}}
        pa = tmp_path / "a.json"
        pc = tmp_path / "c.json"
        pa.write_text(json.dumps(arr))
        pc.write_text(json.dumps(cons))
        code, out, _ = run(capsys, "check", "--arrangement", str(pa), "--constraint", str(pc))
        assert code == 0


class TestSearch:
    @pytest.fixture()
    def odd5(self, tmp_path):
        inst = {
            "group": {"kind": "integers"},
            "shape": "linear",
            "ground": [[1], [2], [3], [4], [5]],
            "constraint": {"clauses": [{"rainbow": "diff", "modulus": 5}]},
        }
        p = tmp_path / "odd5.json"
        p.write_text(json.dumps(inst))
        return p

    def test_exhausted_with_oracle(self, capsys, odd5):
        code, out, _ = run(capsys, "search", "--instance", str(odd5), "--all-small")
        assert code == 1
        doc = json.loads(out)
        assert doc["status"] == "exhausted"
        assert doc["brute_force_count"] == 0
        assert doc["verdicts_agree"]

    def test_witness(self, capsys, tmp_path):
        inst = {
            "group": {"kind": "integers"},
            "shape": "circular",
            "ground": [[x] for x in (1, 2, 3, 4, 5, 6)],
            "constraint": {"clauses": [{"predicate": {"kind": "prime"}, "labeler": "sum"}]},
        }
        p = tmp_path / "filz6.json"
        p.write_text(json.dumps(inst))
        code, out, _ = run(capsys, "search", "--instance", str(p))
        assert code == 0
        assert json.loads(out)["status"] == "witness"

    def test_budget(self, capsys, tmp_path):
        inst = {
            "group": {"kind": "integers"},
            "shape": "circular",
            "ground": [[x] for x in range(14)],
            "constraint": {"clauses": [{"rainbow": "sum"}]},
        }
        p = tmp_path / "hard.json"
        p.write_text(json.dumps(inst))
        code, out, _ = run(capsys, "search", "--instance", str(p), "--budget", "10")
        assert code == 2
        assert json.loads(out)["status"] == "budget"

    def test_all_small_capacity(self, capsys, tmp_path):
        inst = {
            "group": {"kind": "integers"},
            "shape": "circular",
            "ground": [[x] for x in range(12)],
            "constraint": {"clauses": [{"rainbow": "sum"}]},
        }
        p = tmp_path / "big.json"
        p.write_text(json.dumps(inst))
        code, _, err = run(capsys, "search", "--instance", str(p), "--all-small")
        assert code == 3


class TestVerify:
    def test_campaign_records(self, capsys, tmp_path):
        out_path = tmp_path / "r.jsonl"
        code, _, err = run(
            capsys, "verify", "--conjecture", "3.13", "--from", "1", "--to", "12",
            "--out", str(out_path),
        )
        assert code == 0
        rows = read_jsonl(out_path)
        assert rows[0]["type"] == "header"
        recs = rows[1:]
        assert len(recs) == 12
        assert all(r["status"] == "witness" for r in recs)

    def test_resume_skips_everything(self, capsys, tmp_path):
        out_path = tmp_path / "r.jsonl"
        run(capsys, "verify", "--conjecture", "3.13", "--from", "1", "--to", "8",
            "--out", str(out_path))
        before = out_path.read_text()
        code, _, err = run(
            capsys, "verify", "--conjecture", "3.13", "--from", "1", "--to", "8",
            "--out", str(out_path), "--resume",
        )
        assert code == 0
        assert "0 searched" in err
        assert out_path.read_text() == before

    def test_resume_redoes_truncated_line(self, capsys, tmp_path):
        out_path = tmp_path / "r.jsonl"
        run(capsys, "verify", "--conjecture", "3.13", "--from", "1", "--to", "6",
            "--out", str(out_path))
        whole = out_path.read_text()
        # chop the final record mid-line
        out_path.write_text(whole[: whole.rindex("status") + 3])
        code, _, err = run(
            capsys, "verify", "--conjecture", "3.13", "--from", "1", "--to", "6",
            "--out", str(out_path), "--resume",
        )
        assert code == 0
        assert "1 searched" in err
        rows = read_jsonl(out_path)
        assert [r["params"]["n"] for r in rows[1:]] == [1, 2, 3, 4, 5, 6]

    def test_exceptional_family_exit_zero(self, capsys):
        code, out, err = run(
            capsys, "verify", "--conjecture", "3.12i", "--family", "exceptional"
        )
        assert code == 0

    def test_unknown_id(self, capsys):
        code, _, err = run(capsys, "verify", "--conjecture", "9.99")
        assert code == 3
        assert "known ids" in err

    def test_budget_exit(self, capsys):
        code, out, err = run(
            capsys, "verify", "--conjecture", "3.7ii-sums", "--from", "23",
            "--to", "23", "--budget", "2",
        )
        assert code == 2
        assert '"status": "budget"' in out

    def test_budget_env_override(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("PERMLAB_BUDGET", "7")
        from permlab.cli import default_budget

        assert default_budget() == 7
        monkeypatch.setenv("PERMLAB_BUDGET", "zero")
        with pytest.raises(SystemExit):
            default_budget()


class TestFileRoundTrips:
    def test_arrangement_files(self):
        from permlab.algebra import (
            CIRCULAR,
            LINEAR,
            Arrangement,
            CyclicProduct,
            Integers,
            IntegerVectors,
            field_spec_for,
        )
        from permlab.cli import arrangement_from_dict, arrangement_to_dict

        fixtures = [
            Arrangement(Integers(), LINEAR, (3, -1, 4)),
            Arrangement(IntegerVectors(2), CIRCULAR, ((0, 1), (2, -3), (4, 0), (1, 1))),
            Arrangement(CyclicProduct((2, 2)), LINEAR, ((0, 0), (1, 1))),
            Arrangement(CyclicProduct((6,)), CIRCULAR, (0, 2, 5)),
            Arrangement(field_spec_for(9), CIRCULAR, (0, 1, 3, 7)),
        ]
        for arr in fixtures:
            doc = arrangement_to_dict(arr)
            again = arrangement_from_dict(json.loads(json.dumps(doc)))
            assert again == arr
            assert arrangement_to_dict(again) == doc

    def test_constraint_files(self):
        from permlab.algebra import Integers
        from permlab.cli import constraint_from_dict, constraint_to_dict
        from permlab.numtheory import PredicateSpec
        from permlab.search import Constraint, PredicateClause, RainbowClause

        spec = Integers()
        cons = Constraint(
            (
                RainbowClause("diff", modulus=12),
                PredicateClause(PredicateSpec("coprime_to", (8,)), "sum"),
                PredicateClause(
                    PredicateSpec("primitive_root_mod", (11,)), "affine_product", a0=2
                ),
            ),
            first=0,
            last=11,
        )
        doc = constraint_to_dict(cons, spec)
        again = constraint_from_dict(json.loads(json.dumps(doc)), spec)
        assert again == cons


class TestFixturesCommand:
    def test_all_conform(self, capsys, tmp_path):
        out_path = tmp_path / "fix.jsonl"
        code, out, _ = run(capsys, "fixtures", "--out", str(out_path))
        assert code == 0
        assert out.count("PASS") == 19  # 12 golden + 7 counterexample rows
        assert "FAIL" not in out
        rows = read_jsonl(out_path)
        assert len(rows) == 19
