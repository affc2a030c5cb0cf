import csv
import math
import os
from typing import Iterable, Sequence, Tuple

CSV_COLUMNS = ("sweep_value", "curve_id", "value", "std_err")

Row = Tuple[float, str, float, float]


def format_value(value: float) -> str:
    """17 significant digits, so every double round-trips through the CSV."""
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"refusing to write non-finite value {value}")
    return format(value, ".17g")


def check_rows(rows: Iterable[Row]):
    for _, curve_id, value, std_err in rows:
        if not (math.isfinite(value) and math.isfinite(std_err)):
            raise ValueError(f"curve {curve_id} has non-finite value={value}, std_err={std_err}")


def save_rows(path: str, rows: Iterable[Row], columns: Sequence[str] = CSV_COLUMNS) -> str:
    """
    Write a UTF-8, LF-terminated CSV of ``(sweep_value, curve_id, value, std_err)``
    rows sorted by curve then sweep value.
    """
    ordered = sorted(rows, key=lambda row: (row[1], row[0]))
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for sweep_value, curve_id, value, std_err in ordered:
            writer.writerow([format_value(sweep_value), curve_id, format_value(value), format_value(std_err)])
    return path
