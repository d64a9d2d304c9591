import csv
import io
import json
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest

from quatlat import storage
from quatlat.cli import main
from quatlat.errors import InvariantError
from quatlat.identities import GenusCache
from quatlat.ternary.enumeration import theta_series


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def schema(name):
    return json.loads(resources.files("quatlat").joinpath("schemas", name).read_text())


@pytest.fixture
def cdir(tmp_path):
    return str(tmp_path / "cache")


class TestExitCodes:
    def test_lattice(self, cdir):
        code, text = run("lattice", "--D", "2")
        assert code == 0
        assert "det 8" in text
        code, text = run("lattice", "--D", "3", "--json")
        assert json.loads(text)["det"] == 18

    def test_not_squarefree(self, capsys):
        assert run("lattice", "--D", "4")[0] == 2
        assert "squarefree" in capsys.readouterr().err

    def test_rep_indefinite_points_to_heegner(self, capsys, cdir):
        assert run("rep", "--D", "6", "--cache-dir", cdir)[0] == 2
        assert "heegner" in capsys.readouterr().err

    def test_verify_reduction_rejects_one(self, capsys, cdir):
        assert run("verify", "thm13", "--D", "1", "--p", "2", "--cache-dir", cdir)[0] == 2
        assert "Siegel-Weil" in capsys.readouterr().err

    def test_missing_arguments(self, cdir):
        assert run("verify", "thm11", "--D", "1", "--p", "2", "--cache-dir", cdir)[0] == 2
        assert run("theta")[0] == 2
        assert run("bogus", "--D", "2")[0] == 2

    def test_verify_ok(self, cdir):
        code, text = run("verify", "thm11", "--D", "1", "--p", "2", "--q", "3", "--m-max", "25", "--cache-dir", cdir)
        assert code == 0
        assert "holds" in text

    def test_violation_exit_one(self, monkeypatch, cdir):
        from quatlat import identities
        from quatlat.identities import IdentityReport, IdentityRow

        def broken(*args, **kwargs):
            return IdentityReport("thm11", {"D": 1}, [IdentityRow(1, Fraction(1), Fraction(2))])

        monkeypatch.setattr(identities, "verify_thm11", broken)
        code, text = run("verify", "thm11", "--D", "1", "--p", "2", "--q", "3", "--cache-dir", cdir)
        assert code == 1
        assert "VIOLATED" in text

    def test_corrupt_cache_exit_three(self, cdir):
        GenusCache(cdir).get(2, 1)
        path = storage.genus_cache_path(cdir, 2, 1)
        data = json.loads(path.read_text())
        data["mass"] = "1/2"
        path.write_text(json.dumps(data))
        assert run("genus", "--D", "2", "--cache-dir", cdir)[0] == 3


class TestOutputs:
    def test_theta(self, cdir):
        code, text = run("theta", "--D", "2", "--N", "1", "--M", "3", "--cache-dir", cdir)
        assert code == 0
        assert text.strip() == "1 + 6q + 12q^2 + 8q^3"

    def test_genus(self, cdir):
        code, text = run("genus", "--D", "2", "--cache-dir", cdir)
        assert "1 class(es), mass 1/48" in text

    def test_heegner_volume_column(self, cdir):
        code, text = run("heegner", "--D", "6", "--m-max", "5", "--csv", "--cache-dir", cdir)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(text)))
        assert [r["m"] for r in rows] == [str(m) for m in range(6)]
        assert {r["vol"] for r in rows} == {"1/3"}

    def test_rep_csv_header(self, cdir):
        code, text = run("rep", "--D", "3", "--m-max", "4", "--csv", "--cache-dir", cdir)
        lines = text.splitlines()
        assert lines[0] == "m,r"
        assert lines[1] == "0,1/1"

    def test_json_deterministic(self, cdir):
        args = ("verify", "cor12", "--D", "2", "--p", "3", "--q", "5", "--m-max", "8", "--json", "--cache-dir", cdir)
        a, b = run(*args), run(*args)
        assert a == b
        assert a[1].index('"identity"') < a[1].index('"mode"') < a[1].index('"rows"')

    def test_report_schema_and_file(self, tmp_path, cdir):
        out = tmp_path / "report.json"
        code, _ = run("verify", "thm13", "--D", "6", "--p", "5", "--m-max", "6", "--output", str(out), "--cache-dir", cdir)
        assert code == 0
        data = json.loads(out.read_text())
        jsonschema.validate(data, schema("report.schema.json"))
        assert data["mode"] == "cross-parity"
        assert data["verdict"] is True

    def test_cache_schema(self, cdir):
        run("genus", "--D", "3", "--N", "10", "--cache-dir", cdir)
        data = json.loads(storage.genus_cache_path(cdir, 3, 10).read_text())
        jsonschema.validate(data, schema("genus_cache.schema.json"))
        assert len(data["classes"]) == 2

    def test_rationals_lowest_terms(self, cdir):
        _, text = run("heegner", "--D", "10", "--m-max", "12", "--json", "--cache-dir", cdir)
        for row in json.loads(text)["rows"]:
            for key in ("r", "vol", "deg"):
                num, den = map(int, row[key].split("/"))
                assert Fraction(num, den).denominator == den


class TestCache:
    def test_round_trip(self, cdir):
        fresh = GenusCache(cdir).get(3, 10)
        loaded = storage.load_genus(cdir, 3, 10)
        assert loaded.mass == fresh.mass == loaded.recomputed_mass()
        assert [C.gram for C in loaded.classes] == [C.gram for C in fresh.classes]
        for a, b in zip(loaded.classes, fresh.classes):
            assert theta_series(a, 10) == theta_series(b, 10)

    def test_reload_uses_file(self, cdir):
        GenusCache(cdir).get(5, 1)
        again = GenusCache(cdir).get(5, 1)
        assert again.tag == (5, 1)

    def test_bad_schema_version(self, cdir):
        GenusCache(cdir).get(2, 1)
        path = storage.genus_cache_path(cdir, 2, 1)
        data = json.loads(path.read_text())
        data["schema_version"] = 99
        with pytest.raises(InvariantError):
            storage.genus_from_json(data)

    def test_env_var(self, monkeypatch, tmp_path):
        target = tmp_path / "from-env"
        monkeypatch.setenv(storage.CACHE_ENV_VAR, str(target))
        assert run("genus", "--D", "2")[0] == 0
        assert storage.genus_cache_path(target, 2, 1).exists()

    def test_flag_beats_env(self, monkeypatch, tmp_path, cdir):
        monkeypatch.setenv(storage.CACHE_ENV_VAR, str(tmp_path / "env"))
        assert storage.resolve_cache_dir(cdir) == storage.Path(cdir)

    def test_atomic_write_leaves_no_temp(self, tmp_path):
        storage.atomic_write(tmp_path / "x.json", "{}\n")
        assert [p.name for p in tmp_path.iterdir()] == ["x.json"]


class TestConfig:
    def test_config_defaults_and_override(self, tmp_path, cdir):
        cfg = tmp_path / "q.ini"
        cfg.write_text("[quatlat]\nneighbor_primes = 7, 11\nm_max = 4\nM = 2\n")
        code, text = run("theta", "--D", "2", "--config", str(cfg), "--cache-dir", cdir)
        assert text.strip() == "1 + 6q + 12q^2"
        code, text = run("rep", "--D", "2", "--config", str(cfg), "--csv", "--cache-dir", cdir)
        assert len(text.splitlines()) == 6
        code, text = run("rep", "--D", "2", "--config", str(cfg), "--m-max", "1", "--csv", "--cache-dir", cdir)
        assert len(text.splitlines()) == 3
        data = json.loads(storage.genus_cache_path(cdir, 2, 1).read_text())
        assert data["neighbor_primes"] == [7, 11]

    def test_missing_config(self, tmp_path):
        assert run("lattice", "--D", "2", "--config", str(tmp_path / "none.ini"))[0] == 2
