import csv
import io
import json

import pytest

from quantarea.core import DomainError
from quantarea.refdata import load_table
from quantarea.reproduce import PROFILES, Tolerance, _Grader, half_unit, reproduce, t4_mode


@pytest.mark.parametrize("printed,unit", [("3.53", 0.005), ("3390", 0.5), ("1.44e6", 5e3), ("0.190", 5e-4)])
def test_half_unit(printed, unit):
    assert half_unit(printed) == pytest.approx(unit)


def test_tolerance_kinds():
    assert Tolerance("abs", 1e-3).limit(100.0, "100") == 1e-3
    assert Tolerance("rel", 1e-2).limit(-50.0, "-50") == 0.5
    assert Tolerance("printed").limit(3.53, "3.53") == pytest.approx(0.005)
    assert Tolerance("rel+printed", 5e-3).limit(1.97, "1.97") == pytest.approx(5e-3 * 1.97 + 0.005)
    assert Tolerance("printed").describe() == "printed precision"


def test_every_table_has_a_profile():
    assert sorted(PROFILES) == [f"T{i}" for i in range(1, 10)]


def test_t4_mode_mapping():
    assert t4_mode(1).label == "ground"
    assert t4_mode(2).label == "g1"


@pytest.mark.parametrize("tid", ["T1", "T2", "T3", "T5", "T7", "T9"])
def test_tables_reproduce_cleanly(tid):
    rep = reproduce(tid)
    assert rep.ok, [c for c in rep.cells if c.status == "fail"]
    assert rep.counts["pass"] == len(rep.cells)


def test_t4_flags_anomalous_rows():
    rep = reproduce("T4")
    flagged = {c.row for c in rep.cells if c.status == "flagged"}
    assert flagged == {"2s1/2", "2p3/2"}
    assert all(c.note for c in rep.cells if c.status == "flagged")


def test_t6_flags_misprinted_ratio():
    rep = reproduce(6)
    po = [c for c in rep.cells if c.row == "208-84" and c.column == "ratio_wkb"][0]
    assert po.status == "flagged"
    assert po.computed == pytest.approx(0.016, abs=5e-4)


def test_report_serializers_agree():
    rep = reproduce("T2")
    doc = json.loads(rep.to_json())
    assert doc["counts"] == rep.counts
    text = rep.to_csv()
    assert text.startswith("# table: T2")
    rows = list(csv.DictReader(io.StringIO("\n".join(l for l in text.splitlines() if not l.startswith("#")))))
    assert len(rows) == len(doc["cells"])
    assert [r["status"] for r in rows] == [c["status"] for c in doc["cells"]]


def test_guarded_marks_unsupported():
    g = _Grader(load_table("T1"))
    row = g.table.rows[0]

    def boom():
        raise DomainError("no capability")

    g.guarded(row, ["E_area"], boom)
    cell = g.report.cells[0]
    assert cell.status == "unsupported" and "no capability" in cell.note
    assert not g.report.ok or g.report.counts["unsupported"] == 1


def test_reports_are_deterministic():
    assert reproduce("T9").to_csv() == reproduce("T9").to_csv()
