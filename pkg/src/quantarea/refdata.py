"""Embedded reference tables and batch-input loaders.

Cells are stored as the exact printed strings; ``ReferenceTable.value`` parses
them on demand. Every embedded file is pinned by its SHA-256 digest so that an
accidental edit fails loudly.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from .core import DomainError, QuantareaError
from .scattering import ScatteringCase
from .tunneling import AlphaDecayCase

TABLE_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9")

DIGESTS = {
    "T1": "bf0d36965d76a0a4f1704e0bafc094c37bbcbc17164943fe7eca0c83c89e40ae",
    "T2": "4a201d2fec27e04ba78a72c212011e81a254aa7d27ace53c3f229ea065cd5d4e",
    "T3": "f84721e888c7ecff8671d8f2519df477e93ab6f1b2046c9ce7a2e427800f183d",
    "T4": "1e9e9826f2f4e7ae1e93e73c81484c7f730801638ea35bca43ea647092bfaea8",
    "T5": "9f2cd834fe98a4c6bb9e8f40eebdf58cc58b510dd7c396064c912aca8da873d8",
    "T6": "eb92834683ae71236966cac947cc6d7de217d960a3d2d3714c81578a450ba7df",
    "T7": "694a1df91ee74482a72b6a089f6fda4d1ab74aaa17a362121318a8c8f936c6fc",
    "T8": "f637538c4f1138a90d65a11dbbd45415f889556417139e3552e03c292e1aad21",
    "T9": "1702ddca65bd48eb5acc44b671e016b35d81319ee2280b2d4cca725750683d94",
}

DATA_DIR_ENV = "QUANTAREA_DATA_DIR"


class UnknownTableError(DomainError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0])


class DataIntegrityError(QuantareaError):
    """An embedded table does not match its pinned digest."""


class BatchError(DomainError):
    """One or more batch rows failed validation; ``errors`` lists them by row."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class Column:
    name: str
    unit: str
    provenance: str


@dataclass(frozen=True)
class Row:
    label: str
    inputs: Mapping[str, Any]
    cells: Mapping[str, str]
    anomaly: str | None = None
    extra: Mapping[str, Any] = MappingProxyType({})


@dataclass(frozen=True)
class ReferenceTable:
    id: str
    title: str
    columns: tuple[Column, ...]
    rows: tuple[Row, ...]
    notes: str | None
    digest: str
    source: str

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(f"{self.id} has no column {name!r}")

    def row(self, label: str) -> Row:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(f"{self.id} has no row {label!r}")

    def value(self, label: str, column: str) -> float:
        return float(self.row(label).cells[column])

    def to_json(self) -> str:
        return json.dumps(_table_document(self), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        return export_csv(self)


def _freeze(obj: Any) -> Any:
    if isinstance(obj, dict):
        return MappingProxyType({k: _freeze(v) for k, v in obj.items()})
    if isinstance(obj, list):
        return tuple(_freeze(v) for v in obj)
    return obj


def _thaw(obj: Any) -> Any:
    if isinstance(obj, Mapping):
        return {k: _thaw(v) for k, v in obj.items()}
    if isinstance(obj, tuple):
        return [_thaw(v) for v in obj]
    return obj


_ROW_KEYS = {"label", "inputs", "cells", "anomaly"}


def _table_document(t: ReferenceTable) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": t.id,
        "title": t.title,
        "columns": [{"name": c.name, "unit": c.unit, "provenance": c.provenance} for c in t.columns],
        "rows": [],
    }
    for r in t.rows:
        row: dict[str, Any] = {"label": r.label, "inputs": _thaw(r.inputs), "cells": _thaw(r.cells)}
        if r.anomaly is not None:
            row["anomaly"] = r.anomaly
        row.update(_thaw(r.extra))
        doc["rows"].append(row)
    if t.notes is not None:
        doc["notes"] = t.notes
    return doc


def _read_bytes(table_id: str) -> tuple[bytes, str]:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        path = Path(override) / f"{table_id}.json"
        if path.exists():
            return path.read_bytes(), str(path)
    ref = resources.files("quantarea").joinpath(f"data/tables/{table_id}.json")
    return ref.read_bytes(), "embedded"


def normalize_id(table_id: str | int) -> str:
    text = str(table_id).strip().upper()
    if not text.startswith("T"):
        text = "T" + text
    if text not in TABLE_IDS:
        raise UnknownTableError(f"unknown table {table_id!r}; expected one of {', '.join(TABLE_IDS)}")
    return text


def load_table(table_id: str | int) -> ReferenceTable:
    """Load one reference table; embedded data must match its pinned digest.

    Setting ``QUANTAREA_DATA_DIR`` substitutes ``<dir>/<id>.json`` for the
    embedded copy; such files are not digest-checked.
    """
    tid = normalize_id(table_id)
    raw, source = _read_bytes(tid)
    digest = hashlib.sha256(raw).hexdigest()
    if source == "embedded" and digest != DIGESTS[tid]:
        raise DataIntegrityError(f"{tid}: digest {digest} does not match pinned {DIGESTS[tid]}")
    doc = json.loads(raw)
    rows = []
    for r in doc["rows"]:
        extra = {k: v for k, v in r.items() if k not in _ROW_KEYS}
        rows.append(Row(r["label"], _freeze(r["inputs"]), _freeze(r["cells"]), r.get("anomaly"), _freeze(extra)))
    return ReferenceTable(
        id=doc["id"],
        title=doc["title"],
        columns=tuple(Column(**c) for c in doc["columns"]),
        rows=tuple(rows),
        notes=doc.get("notes"),
        digest=digest,
        source=source,
    )


def export_csv(t: ReferenceTable) -> str:
    """CSV with a ``# units:`` header line, one row per table row."""
    names = [c.name for c in t.columns]
    buf = io.StringIO()
    buf.write(f"# table: {t.id}\n")
    buf.write("# units: " + ",".join(["label=-"] + [f"{c.name}={c.unit}" for c in t.columns]) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", *names, "anomaly"])
    for r in t.rows:
        w.writerow([r.label, *(r.cells.get(n, "") for n in names), r.anomaly or ""])
    return buf.getvalue()


def parse_table_csv(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Inverse of ``export_csv``: (units by column, rows as printed strings)."""
    units: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# units:"):
            for part in line[len("# units:"):].split(","):
                k, _, v = part.strip().partition("=")
                units[k] = v
        elif not line.startswith("#"):
            body.append(line)
    rows = list(csv.DictReader(body))
    return units, rows


def dump_tables(directory: str | Path, ids: Iterable[str] = TABLE_IDS) -> list[Path]:
    """Write ``<id>.json`` and ``<id>.csv`` for each table into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for tid in ids:
        t = load_table(tid)
        for ext, text in (("json", t.to_json()), ("csv", t.to_csv())):
            p = out / f"{t.id}.{ext}"
            p.write_text(text)
            written.append(p)
    return written


# -- batch cases ---------------------------------------------------------------

BATCH_SCHEMAS: dict[str, dict[str, tuple[str, str, type]]] = {
    # csv column -> (case field, unit, type)
    "alpha": {
        "z": ("Z", "-", int),
        "a": ("A", "-", int),
        "ealpha": ("E_alpha", "MeV", float),
        "ell": ("ell", "-", int),
        "r0": ("R0", "fm", float),
        "u0": ("U0", "MeV", float),
    },
    "scattering": {
        "zp": ("Zp", "-", int),
        "ap": ("Ap", "-", int),
        "zt": ("Zt", "-", int),
        "at": ("At", "-", int),
        "elab": ("E_lab", "MeV", float),
        "r0": ("R0", "fm", float),
        "v0": ("V0", "MeV", float),
        "ac": ("a_c", "fm", float),
        "l": ("L", "-", int),
        "s": ("S", "-", float),
        "j": ("J", "-", float),
    },
}
_REQUIRED = {"alpha": ("z", "a", "ealpha"), "scattering": ("zp", "ap", "zt", "at", "elab")}
_FACTORY = {"alpha": AlphaDecayCase, "scattering": ScatteringCase}


def _schema(kind: str) -> dict[str, tuple[str, str, type]]:
    try:
        return BATCH_SCHEMAS[kind]
    except KeyError:
        raise DomainError(f"unknown batch kind {kind!r}; expected alpha or scattering") from None


def table_cases(t: ReferenceTable) -> list[AlphaDecayCase | ScatteringCase]:
    """The computable cases behind T6-T9 rows, built from their inputs."""
    if t.id in ("T6", "T7"):
        return [
            AlphaDecayCase(int(r.inputs["Z"]), int(r.inputs["A"]), float(r.inputs["E_alpha"]),
                           int(r.inputs["ell"]), R0=float(r.inputs["R0"]), U0=float(r.inputs["U0"]))
            for r in t.rows
        ]
    if t.id in ("T8", "T9"):
        out = []
        for r in t.rows:
            i = r.inputs
            kw: dict[str, Any] = dict(
                Zp=int(i["Zp"]), Ap=int(i["Ap"]), Zt=int(i["Zt"]), At=int(i["At"]),
                E_lab=float(i["E_lab"]), R0=float(r.cells["R0"]), L=int(i.get("L", 0)),
                S=float(i.get("S", 0.5)),
            )
            if "J" in i:
                kw["J"] = float(i["J"])
            if "V0" in r.cells:
                kw.update(V0=float(r.cells["V0"]), a_c=float(r.cells["a_c"]))
            out.append(ScatteringCase(**kw))
        return out
    raise DomainError(f"{t.id} rows do not map onto alpha or scattering cases")


def write_batch(cases: Iterable[AlphaDecayCase | ScatteringCase], kind: str) -> str:
    schema = _schema(kind)
    buf = io.StringIO()
    buf.write("# units: " + ",".join(f"{k}={u}" for k, (_, u, _) in schema.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(schema))
    for c in cases:
        w.writerow([repr(getattr(c, f)) for f, _, _ in schema.values()])
    return buf.getvalue()


def load_batch(path: str | Path, kind: str) -> list[AlphaDecayCase | ScatteringCase]:
    """Validated cases from a CSV file; all row errors are reported together."""
    schema = _schema(kind)
    text = Path(path).read_text()
    units: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# units:"):
            for part in line[len("# units:"):].split(","):
                k, _, v = part.strip().partition("=")
                units[k.strip().lower()] = v.strip()
        elif line.strip() and not line.startswith("#"):
            body.append(line)
    if not units:
        raise BatchError([f"{path}: missing '# units:' header line"])
    reader = csv.DictReader(body)
    header = [h.strip().lower() for h in (reader.fieldnames or [])]
    errors = [f"missing column {c!r}" for c in _REQUIRED[kind] if c not in header]
    errors += [f"unknown column {c!r}" for c in header if c not in schema]
    for col, (_, unit, _) in schema.items():
        if col in header and units.get(col, unit) != unit:
            errors.append(f"column {col!r} declared in {units[col]!r}, expected {unit!r}")
    if errors:
        raise BatchError(errors)
    factory = _FACTORY[kind]
    names = {f.name for f in fields(factory)}
    cases = []
    for idx, raw in enumerate(reader, start=1):
        row = {k.strip().lower(): (v or "").strip() for k, v in raw.items() if k is not None}
        kw: dict[str, Any] = {}
        bad = False
        for col, (fname, _, typ) in schema.items():
            val = row.get(col, "")
            if val == "" or fname not in names:
                continue
            try:
                kw[fname] = typ(float(val)) if typ is int else typ(val)
            except ValueError:
                errors.append(f"row {idx}: cannot parse {col}={val!r}")
                bad = True
        if bad:
            continue
        try:
            cases.append(factory(**kw))
        except (DomainError, TypeError) as exc:
            errors.append(f"row {idx}: {exc}")
    if errors:
        raise BatchError(errors)
    return cases
