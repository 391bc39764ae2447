import json

import pytest

from boxsizer import Dims, evaluate, ShipmentRecord
from boxsizer.cli import main
from boxsizer.data import load_catalog, load_shipments, read_report


TINY_CATALOG = """id,length,width,height,velocity
a,1,1,1,1
b,2,1,1,1
c,10,1,1,1
"""

TINY_SHIPMENTS = """product_id,count
a,5
b,3
c,1
"""


@pytest.fixture
def tiny(tmp_path):
    catalog = tmp_path / "catalog.csv"
    catalog.write_text(TINY_CATALOG)
    shipments = tmp_path / "shipments.csv"
    shipments.write_text(TINY_SHIPMENTS)
    return catalog, shipments


@pytest.fixture
def synth_dir(tmp_path):
    out = tmp_path / "data"
    assert main(["gen", "--n", "150", "--seed", "3", "--out", str(out)]) == 0
    return out


class TestGen:
    def test_deterministic_bytes(self, tmp_path):
        out1, out2 = tmp_path / "d1", tmp_path / "d2"
        assert main(["gen", "--n", "80", "--seed", "5", "--out", str(out1)]) == 0
        assert main(["gen", "--n", "80", "--seed", "5", "--out", str(out2)]) == 0
        for name in (
            "catalog.csv",
            "shipments_train.csv",
            "shipments_valid.csv",
            "shipments_test.csv",
        ):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_files_loadable(self, synth_dir):
        catalog = load_catalog(synth_dir / "catalog.csv")
        assert len(catalog) == 150
        load_shipments(synth_dir / "shipments_test.csv")


class TestOptimize:
    def test_tiny_golden(self, tiny, tmp_path):
        catalog, _ = tiny
        out = tmp_path / "report.json"
        rc = main(
            ["optimize", "--catalog", str(catalog), "--k", "2", "--k-tilde", "3",
             "--out", str(out)]
        )
        assert rc == 0
        doc = read_report(out)
        assert doc["schema_version"] == 1
        assert len(doc["boxes"]) == 2
        # golden value verified against exhaustive enumeration: {a,b} + {c}
        assert doc["training"]["total_volume"] == 14.0
        assert doc["boxes"] == [[2.0, 1.0, 1.0], [10.0, 1.0, 1.0]]
        stages = [row["total_volume"] for row in doc["stage_log"]]
        assert stages[0] >= stages[-1]

    def test_forward_only_equals_k_tilde_k(self, tiny, tmp_path):
        catalog, _ = tiny
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        main(["optimize", "--catalog", str(catalog), "--k", "2", "--k-tilde", "2",
              "--out", str(out1)])
        main(["optimize", "--catalog", str(catalog), "--k", "2", "--forward-only",
              "--out", str(out2)])
        d1, d2 = read_report(out1), read_report(out2)
        assert d1["boxes"] == d2["boxes"]
        assert d1["training"] == d2["training"]

    def test_exhaustion_flagged(self, tmp_path):
        catalog = tmp_path / "catalog.csv"
        catalog.write_text(
            "id,length,width,height,velocity\na,2,2,2,1\nb,2,2,2,1\n"
        )
        out = tmp_path / "report.json"
        main(["optimize", "--catalog", str(catalog), "--k", "2", "--k-tilde", "2",
              "--out", str(out)])
        doc = read_report(out)
        assert doc["exhausted"] is True
        assert len(doc["boxes"]) == 1

    def test_deterministic_reports(self, synth_dir, tmp_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        args = ["optimize", "--catalog", str(synth_dir / "catalog.csv"),
                "--k", "4", "--k-tilde", "10"]
        main(args + ["--out", str(out1)])
        main(args + ["--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestEvaluate:
    def test_report_round_trip(self, synth_dir, tmp_path):
        opt = tmp_path / "opt.json"
        main(["optimize", "--catalog", str(synth_dir / "catalog.csv"),
              "--k", "3", "--k-tilde", "8", "--out", str(opt)])
        ev1 = tmp_path / "ev1.json"
        main(["evaluate", "--boxes", str(opt),
              "--catalog", str(synth_dir / "catalog.csv"),
              "--shipments", str(synth_dir / "shipments_test.csv"),
              "--out", str(ev1)])
        doc = read_report(ev1)
        # re-evaluate from the serialized boxes: identical V and xi
        catalog = load_catalog(synth_dir / "catalog.csv")
        shipments = load_shipments(synth_dir / "shipments_test.csv")
        boxes = [Dims(*row) for row in doc["boxes"]]
        again = evaluate(boxes, shipments, catalog)
        assert again.total_box_volume == doc["evaluation"]["total_box_volume"]
        assert again.xi == doc["evaluation"]["xi"]

    def test_eq3_hand_check(self, tmp_path):
        catalog = tmp_path / "catalog.csv"
        catalog.write_text("id,length,width,height,velocity\np,1,1,1,1\n")
        shipments = tmp_path / "shipments.csv"
        shipments.write_text("product_id,count\np,1\n")
        boxes = tmp_path / "boxes.csv"
        boxes.write_text("length,width,height\n2,2,2\n")
        out = tmp_path / "ev.json"
        rc = main(["evaluate", "--boxes", str(boxes), "--catalog", str(catalog),
                   "--shipments", str(shipments), "--out", str(out)])
        assert rc == 0
        assert read_report(out)["evaluation"]["xi"] == 87.5

    def test_unknown_product_is_cli_error(self, tiny, tmp_path):
        catalog, _ = tiny
        shipments = tmp_path / "bad.csv"
        shipments.write_text("product_id,count\nnope,1\n")
        boxes = tmp_path / "boxes.csv"
        boxes.write_text("length,width,height\n10,1,1\n")
        rc = main(["evaluate", "--boxes", str(boxes), "--catalog", str(catalog),
                   "--shipments", str(shipments)])
        assert rc == 2


class TestTune:
    def test_single_candidate_echoed(self, tiny, tmp_path):
        catalog, shipments = tiny
        out = tmp_path / "tune.json"
        rc = main(["tune", "--catalog", str(catalog), "--shipments", str(shipments),
                   "--k", "2", "--candidates", "3", "--out", str(out)])
        assert rc == 0
        doc = read_report(out)
        assert doc["k_tilde"] == 3
        assert len(doc["curve"]) == 1

    def test_curve_rows(self, synth_dir, tmp_path):
        out = tmp_path / "tune.json"
        main(["tune", "--catalog", str(synth_dir / "catalog.csv"),
              "--shipments", str(synth_dir / "shipments_valid.csv"),
              "--k", "3", "--candidates", "3,6,9", "--out", str(out)])
        doc = read_report(out)
        assert [row["k_start"] for row in doc["curve"]] == [3, 6, 9]
        assert doc["k_tilde"] in (3, 6, 9)


class TestSweep:
    def test_row_count_and_csv(self, synth_dir, tmp_path):
        out = tmp_path / "sweep.json"
        csv_out = tmp_path / "curve.csv"
        rc = main(["sweep", "--catalog", str(synth_dir / "catalog.csv"),
                   "--shipments", str(synth_dir / "shipments_test.csv"),
                   "--k-min", "4", "--k-max", "12", "--k-tilde", "20",
                   "--out", str(out), "--csv-out", str(csv_out)])
        assert rc == 0
        doc = read_report(out)
        assert [row["k"] for row in doc["k_curve"]] == list(range(4, 13))
        lines = csv_out.read_text().strip().splitlines()
        assert lines[0] == "k,total_volume,xi"
        assert len(lines) == 10
        assert doc["elbow_k"] in range(5, 12)

    def test_forward_only_variant(self, synth_dir, tmp_path):
        out = tmp_path / "sweep.json"
        rc = main(["sweep", "--catalog", str(synth_dir / "catalog.csv"),
                   "--shipments", str(synth_dir / "shipments_test.csv"),
                   "--k-min", "4", "--k-max", "8", "--forward-only",
                   "--out", str(out)])
        assert rc == 0
        doc = read_report(out)
        assert [row["k"] for row in doc["k_curve"]] == list(range(4, 9))


class TestBaseline:
    def test_example_value(self, tmp_path):
        catalog = tmp_path / "catalog.csv"
        catalog.write_text(
            "id,length,width,height,velocity\n"
            "a,1,1,1,1\nb,1,1,2,1\nc,1,1,100,1\n"
        )
        out = tmp_path / "base.json"
        rc = main(["baseline", "--catalog", str(catalog), "--k", "2",
                   "--out", str(out)])
        assert rc == 0
        assert read_report(out)["v_tilde"] == 104.0

    def test_k_above_n_is_error(self, tiny):
        catalog, _ = tiny
        assert main(["baseline", "--catalog", str(catalog), "--k", "9"]) == 2


class TestDeterminism:
    def test_all_commands_byte_identical(self, synth_dir, tmp_path):
        cat = str(synth_dir / "catalog.csv")
        test_ship = str(synth_dir / "shipments_test.csv")
        valid_ship = str(synth_dir / "shipments_valid.csv")
        runs = {
            "optimize": ["optimize", "--catalog", cat, "--k", "3", "--k-tilde", "6"],
            "baseline": ["baseline", "--catalog", cat, "--k", "3",
                          "--shipments", test_ship],
            "tune": ["tune", "--catalog", cat, "--shipments", valid_ship,
                      "--k", "3", "--candidates", "3,5"],
            "sweep": ["sweep", "--catalog", cat, "--shipments", test_ship,
                       "--k-min", "3", "--k-max", "5", "--k-tilde", "8"],
        }
        for name, args in runs.items():
            p1 = tmp_path / f"{name}1.json"
            p2 = tmp_path / f"{name}2.json"
            assert main(args + ["--out", str(p1)]) == 0
            assert main(args + ["--out", str(p2)]) == 0
            assert p1.read_bytes() == p2.read_bytes(), name
