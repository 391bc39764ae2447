"""CSV ingestion/serialization and the JSON report document.

Catalog files carry `id,length,width,height,velocity` rows, shipment files
`product_id,count`; both are UTF-8 with a decimal point and a mandatory
header. Floats serialize via repr so a written file reloads to bit-identical
values, and reports contain nothing run-dependent: identical inputs produce
byte-identical output files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .evaluation import ShipmentRecord
from .model import Catalog, Dims, Product

CATALOG_HEADER = ["id", "length", "width", "height", "velocity"]
SHIPMENT_HEADER = ["product_id", "count"]
BOXES_HEADER = ["length", "width", "height"]
SCHEMA_VERSION = 1


class DataError(ValueError):
    """Malformed input file; the message names the file and row."""


def _check_header(path, row, expected) -> None:
    if row is None or [h.strip() for h in row] != expected:
        raise DataError(f"{path}: expected header '{','.join(expected)}'")


def load_catalog(path, canonicalize: bool = False) -> Catalog:
    products: list[Product] = []
    seen: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(path, next(reader, None), CATALOG_HEADER)
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 5:
                raise DataError(f"{path}: malformed row at row {row_no}")
            pid = row[0].strip()
            if not pid:
                raise DataError(f"{path}: empty id at row {row_no}")
            if pid in seen:
                raise DataError(
                    f"{path}: duplicate id '{pid}' at row {row_no} (first at row {seen[pid]})"
                )
            try:
                length, width, height = (float(row[i]) for i in (1, 2, 3))
                velocity = float(row[4])
            except ValueError:
                raise DataError(f"{path}: malformed row at row {row_no}") from None
            if not all(math.isfinite(v) and v > 0 for v in (length, width, height)):
                raise DataError(f"{path}: non-positive dimension at row {row_no}")
            if not (math.isfinite(velocity) and velocity >= 0):
                raise DataError(f"{path}: negative velocity at row {row_no}")
            seen[pid] = row_no
            products.append(Product(pid, Dims(length, width, height), velocity))
    return Catalog(products, canonicalize=canonicalize)


def load_shipments(path) -> list[ShipmentRecord]:
    records: list[ShipmentRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(path, next(reader, None), SHIPMENT_HEADER)
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise DataError(f"{path}: malformed row at row {row_no}")
            pid = row[0].strip()
            if not pid:
                raise DataError(f"{path}: empty product_id at row {row_no}")
            try:
                count = int(row[1])
            except ValueError:
                raise DataError(f"{path}: malformed count at row {row_no}") from None
            if count < 1:
                raise DataError(f"{path}: non-positive count at row {row_no}")
            records.append(ShipmentRecord(pid, count))
    return records


def load_boxes(path) -> list[Dims]:
    """Box suite from either a boxes CSV or a previously written report JSON."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        doc = read_report(path)
        rows = doc.get("boxes")
        if not rows:
            raise DataError(f"{path}: report carries no boxes")
        return [Dims(*row) for row in rows]
    boxes: list[Dims] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(path, next(reader, None), BOXES_HEADER)
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise DataError(f"{path}: malformed row at row {row_no}")
            try:
                dims = [float(v) for v in row]
            except ValueError:
                raise DataError(f"{path}: malformed row at row {row_no}") from None
            if not all(math.isfinite(v) and v > 0 for v in dims):
                raise DataError(f"{path}: non-positive dimension at row {row_no}")
            boxes.append(Dims(*dims))
    if not boxes:
        raise DataError(f"{path}: no boxes in file")
    return boxes


def write_catalog(path, catalog: Catalog) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CATALOG_HEADER)
        for p in catalog:
            writer.writerow(
                [p.id, repr(p.dims.length), repr(p.dims.width), repr(p.dims.height), repr(p.velocity)]
            )


def write_shipments(path, records: Iterable[ShipmentRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SHIPMENT_HEADER)
        for rec in records:
            writer.writerow([rec.product_id, rec.count])


def write_boxes(path, boxes: Sequence[Dims]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BOXES_HEADER)
        for b in boxes:
            writer.writerow([repr(b.length), repr(b.width), repr(b.height)])


def write_report(path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def read_report(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
