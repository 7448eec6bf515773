import hashlib
import json
from importlib import resources

import pytest

from quantarea.core import DomainError
from quantarea.refdata import (
    DIGESTS,
    TABLE_IDS,
    BatchError,
    UnknownTableError,
    dump_tables,
    export_csv,
    load_batch,
    load_table,
    normalize_id,
    parse_table_csv,
    table_cases,
    write_batch,
)

ROW_COUNTS = {"T1": 6, "T2": 6, "T3": 5, "T4": 8, "T5": 24, "T6": 5, "T7": 5, "T8": 5, "T9": 15}


@pytest.mark.parametrize("tid", TABLE_IDS)
def test_embedded_digest_pinned(tid):
    raw = resources.files("quantarea").joinpath(f"data/tables/{tid}.json").read_bytes()
    assert hashlib.sha256(raw).hexdigest() == DIGESTS[tid]
    t = load_table(tid)
    assert t.source == "embedded"
    assert len(t.rows) == ROW_COUNTS[tid]


@pytest.mark.parametrize("tid", TABLE_IDS)
def test_csv_roundtrip_keeps_printed_strings(tid):
    t = load_table(tid)
    units, rows = parse_table_csv(export_csv(t))
    assert units["label"] == "-"
    assert [r["label"] for r in rows] == [r.label for r in t.rows]
    for src, back in zip(t.rows, rows):
        for name, printed in src.cells.items():
            assert back[name] == printed
        assert back["anomaly"] == (src.anomaly or "")


@pytest.mark.parametrize("tid", TABLE_IDS)
def test_json_mirror_roundtrip(tid):
    t = load_table(tid)
    doc = json.loads(t.to_json())
    assert doc["id"] == tid
    assert [r["label"] for r in doc["rows"]] == [r.label for r in t.rows]


def test_normalize_id_forms():
    assert normalize_id(6) == normalize_id("6") == normalize_id("t6") == "T6"
    with pytest.raises(UnknownTableError):
        normalize_id("T10")
    with pytest.raises(DomainError):
        load_table("nope")


def test_override_directory(tmp_path, monkeypatch):
    doc = json.loads(load_table("T2").to_json())
    doc["rows"] = doc["rows"][:2]
    (tmp_path / "T2.json").write_text(json.dumps(doc))
    monkeypatch.setenv("QUANTAREA_DATA_DIR", str(tmp_path))
    t = load_table("T2")
    assert len(t.rows) == 2
    assert t.source.endswith("T2.json")
    assert load_table("T3").source == "embedded"


def test_anomalies_present():
    assert any(r.anomaly for r in load_table("T4").rows)
    np_row = load_table("T6").rows[4]
    assert np_row.inputs["Z"] == 93 and np_row.extra["printed_Z"] == 83
    po = load_table("T6").rows[0]
    assert "ratio_wkb" in po.extra["cell_anomalies"]


def test_dump_tables(tmp_path):
    paths = dump_tables(tmp_path, ["T1", "T9"])
    assert sorted(p.name for p in paths) == ["T1.csv", "T1.json", "T9.csv", "T9.json"]
    assert (tmp_path / "T9.csv").read_text().splitlines()[1].startswith("# units:")


@pytest.mark.parametrize("tid,kind", [("T6", "alpha"), ("T7", "alpha"), ("T8", "scattering"), ("T9", "scattering")])
def test_batch_roundtrip(tmp_path, tid, kind):
    cases = table_cases(load_table(tid))
    path = tmp_path / "b.csv"
    path.write_text(write_batch(cases, kind))
    assert load_batch(path, kind) == cases


def test_table_cases_rejects_non_case_tables():
    with pytest.raises(DomainError):
        table_cases(load_table("T1"))


def _batch(tmp_path, text):
    p = tmp_path / "b.csv"
    p.write_text(text)
    return p


def test_batch_collects_all_errors(tmp_path):
    p = _batch(tmp_path, "# units: z=-,a=-,ealpha=keV\nz,a,ealpha,spin\n84,208,5.2\n")
    with pytest.raises(BatchError) as exc:
        load_batch(p, "alpha")
    msgs = exc.value.errors
    assert any("unknown column 'spin'" in m for m in msgs)
    assert any("'ealpha' declared in 'keV'" in m for m in msgs)


def test_batch_row_errors_name_rows(tmp_path):
    p = _batch(tmp_path, "# units: z=-,a=-,ealpha=MeV\nz,a,ealpha\n84,208,x\n84,2o8,5.2\n84,208,5.215\n")
    with pytest.raises(BatchError) as exc:
        load_batch(p, "alpha")
    text = str(exc.value)
    assert "row 1" in text and "row 2" in text and "row 3" not in text


def test_batch_needs_units_and_columns(tmp_path):
    with pytest.raises(BatchError, match="units"):
        load_batch(_batch(tmp_path, "z,a,ealpha\n84,208,5.2\n"), "alpha")
    with pytest.raises(BatchError, match="missing column 'ealpha'"):
        load_batch(_batch(tmp_path, "# units: z=-\nz,a\n84,208\n"), "alpha")
    with pytest.raises(DomainError):
        load_batch(_batch(tmp_path, "# units: z=-\nz\n1\n"), "fission")
