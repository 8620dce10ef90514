"""
Report Writer

Writes the machine-readable analysis document (JSON), the human-readable
report and the coefficient / frequency / evidence tables (CSV through pandas).
Document contents are deterministic; only default file names carry a timestamp.
"""

import json
import logging
import os
from datetime import datetime

import pandas as pd

from scripts.Substitution.exact_linalg import format_exact

logger = logging.getLogger("ReportWriter")

SCHEMA_VERSION = "1.0"


class ReportWriter:
    """Writer for everything the pipeline emits"""

    def __init__(self, output_dir='data/reports'):
        """
        Initialize the report writer

        Args:
            output_dir: Directory receiving reports and CSVs
        """
        self.output_dir = output_dir
        os.makedirs(output_dir, exist_ok=True)

        logger.info("Report Writer initialized")

    def default_path(self, prefix, extension):
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return os.path.join(self.output_dir, f"{prefix}_{timestamp}.{extension}")

    def _prepare(self, path):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        return path

    def save_document(self, document, path=None, prefix="analysis"):
        """JSON document with sorted keys and the schema version"""
        path = self._prepare(path or self.default_path(prefix, "json"))
        document = dict(document, schema_version=SCHEMA_VERSION)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        logger.info(f"Saved document to {path}")
        return path

    def save_text(self, text, path=None, prefix="report"):
        path = self._prepare(path or self.default_path(prefix, "txt"))
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Saved report to {path}")
        return path

    def save_csv(self, rows, path=None, prefix="coefficients"):
        """
        Save table rows as CSV

        Args:
            rows: list of dicts sharing the same keys
            path: explicit output path, or a timestamped name in output_dir
            prefix: file name prefix for the default path
        """
        if not rows:
            logger.warning(f"No rows to write for {prefix}")
            return None
        path = self._prepare(path or self.default_path(prefix, "csv"))
        df = pd.DataFrame(rows)
        df.to_csv(path, index=False)
        logger.info(f"Saved {len(df)} rows to {path}")
        return path


def mixing_rows(report):
    """Flatten the strong-mixing evidence into CSV rows"""
    rows = []
    for entry in report.mixing:
        for row in entry["rows"]:
            for p, deviation in zip(row["powers"], row["deviations"]):
                rows.append({
                    "component": entry["component"],
                    "a": ",".join(str(x) for x in row["a"]),
                    "b": ",".join(str(x) for x in row["b"]),
                    "p": p,
                    "deviation": deviation,
                    "nonincreasing": row["nonincreasing"],
                })
    return rows


def lambda_rows(report):
    """λ̂_i(k) for every component and window point"""
    rows = []
    for m in report.measures:
        for k, value in sorted(m.coefficients.items()):
            rows.append({
                "component": m.name,
                "k": ",".join(str(x) for x in k),
                "value": format_exact(value),
                "classification": m.classification.describe(),
            })
    return rows
