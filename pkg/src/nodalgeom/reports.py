"""Deterministic report emission and verdict auditing.

Reports are byte-stable under reruns with identical configs: columns are
fixed, rows are emitted in deterministic order, floats print with 17
significant digits in CSV, and JSON summaries are key-sorted with no
timestamps.  Every verdict is recomputable from the emitted case rows
alone through :func:`evaluate_rule`.
"""

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field as dataclass_field


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return "%.17g" % v
    return str(v)


def rows_to_csv_text(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c, "")) for c in columns])
    return buf.getvalue()


def parse_csv_rows(text):
    """Parse report CSV back into dict rows (floats/bools/ints restored)."""

    def coerce(s):
        if s == "true":
            return True
        if s == "false":
            return False
        try:
            return int(s)
        except ValueError:
            pass
        try:
            return float(s)
        except ValueError:
            return s

    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return [dict(zip(header, map(coerce, row))) for row in reader]


# ---------------------------------------------------------------------------
# verdict rules: small composable predicates over case rows


def evaluate_rule(rule, rows):
    """Recompute a verdict ('PASS'/'FAIL') from case rows alone."""
    kind = rule["kind"]
    if kind == "and":
        return (
            "PASS" if all(evaluate_rule(r, rows) == "PASS" for r in rule["rules"]) else "FAIL"
        )
    if kind == "all_true":
        sel = [r for r in rows if _match(rule, r)]
        return "PASS" if sel and all(bool(r[rule["column"]]) for r in sel) else (
            "PASS" if not sel and rule.get("allow_empty") else "FAIL"
        )
    values = [r[rule["column"]] for r in rows if _match(rule, r)]
    if not values:
        return "PASS" if rule.get("allow_empty") else "FAIL"
    if kind == "min_above":
        return "PASS" if min(values) >= rule["floor"] else "FAIL"
    if kind == "min_strictly_above":
        return "PASS" if min(values) > rule["floor"] else "FAIL"
    if kind == "max_below":
        return "PASS" if max(values) <= rule["ceiling"] else "FAIL"
    raise ValueError(f"unknown verdict rule kind {kind!r}")


def _match(rule, row):
    where = rule.get("where")
    if not where:
        return True
    return all(row.get(k) == v for k, v in where.items())


@dataclass
class SuiteReport:
    """A verification suite's case records plus verdict and provenance.

    The verdict is a pure function of ``cases`` through ``verdict_rule``
    (re-checkable by an external script); ``fitted_constants`` carries any
    calibrated quantities with their calibration metadata; ``provenance``
    records resolutions, seeds, refinement history and the tool version.
    """

    suite: str
    columns: list
    cases: list
    verdict_rule: dict
    fitted_constants: dict = dataclass_field(default_factory=dict)
    invariant_min: float = float("nan")
    invariant_max: float = float("nan")
    provenance: dict = dataclass_field(default_factory=dict)

    @property
    def verdict(self):
        return evaluate_rule(self.verdict_rule, self.cases)

    def to_json_dict(self, include_cases=False):
        d = {
            "suite": self.suite,
            "verdict": self.verdict,
            "verdict_rule": self.verdict_rule,
            "invariant_min": self.invariant_min,
            "invariant_max": self.invariant_max,
            "fitted_constants": self.fitted_constants,
            "provenance": self.provenance,
            "n_cases": len(self.cases),
            "columns": self.columns,
        }
        if include_cases:
            d["cases"] = self.cases
        return d


def emit_report(report, out_dir, format="csv"):
    """Write a suite report; returns the created paths.

    ``csv`` emits case rows as <suite>.csv plus the <suite>.json summary;
    ``json`` embeds the case rows in a single <suite>.json.  Output is
    byte-stable for identical configs.
    """
    if format not in ("csv", "json"):
        raise ValueError(f"unknown report format {format!r}")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if format == "csv":
        csv_path = os.path.join(out_dir, f"{report.suite}.csv")
        with open(csv_path, "w") as fh:
            fh.write(rows_to_csv_text(report.cases, report.columns))
        paths.append(csv_path)
    json_path = os.path.join(out_dir, f"{report.suite}.json")
    payload = report.to_json_dict(include_cases=(format == "json"))
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(json_path)
    return paths
