import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

logging.basicConfig(level=logging.INFO)


@dataclass
class Report:
    """Result of one command: echoed inputs, per-check payloads and the list of failed checks."""
    command: str
    inputs: Dict
    seed: int
    results: Dict = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    frames: Dict[str, pd.DataFrame] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, label: str, ok: bool) -> bool:
        """Record a named check; failures are kept in insertion order."""
        if not ok:
            self.failures.append(label)
        return ok

    def to_json(self) -> Dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": inputs_digest(self.inputs),
            "seed": self.seed,
            "results": self.results,
            "passed": self.passed,
            "failures": self.failures,
        }


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(',', ':'), ensure_ascii=True)


def inputs_digest(inputs: Dict) -> str:
    """sha256 of the canonical JSON encoding of the command inputs."""
    return hashlib.sha256(canonical_json(inputs).encode('utf-8')).hexdigest()


def render_json(report: Report) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=True)


def render_text(report: Report) -> str:
    """Human readable report: one table per frame followed by the pass/fail summary."""
    lines = [f"cusplab {report.command} (seed {report.seed})"]
    for name, frame in report.frames.items():
        lines.append("")
        lines.append(f"== {name} ==")
        lines.append(frame.to_string(index=False) if not frame.empty else "(empty)")
    lines.append("")
    if report.passed:
        lines.append("PASSED")
    else:
        lines.append(f"FAILED: {', '.join(report.failures)}")
    return "\n".join(lines)


def pd_to_json_dtype(pd_dtype) -> str:
    """
    Maps pandas data types to JSON data types.
    """
    if pd.api.types.is_bool_dtype(pd_dtype):
        return 'boolean'
    elif pd.api.types.is_numeric_dtype(pd_dtype):
        return 'number'
    return 'string'


def create_metadata(dataframe: pd.DataFrame, provided_metadata: Optional[Dict] = None) -> List[Dict]:
    """
    Creates metadata for the columns of a report table.

    Parameters:
    dataframe (pd.DataFrame): The table to describe.
    provided_metadata (dict, optional): Per-column overrides.

    Returns:
    list: One dictionary per column with its name and JSON data type.
    """
    metadata = []
    for col in dataframe.columns:
        col_metadata = {'name': col, 'dataType': pd_to_json_dtype(dataframe[col].dtype)}
        if provided_metadata and col in provided_metadata:
            col_metadata.update(provided_metadata[col])
        metadata.append(col_metadata)
    return metadata


def export_excel(report: Report, path: str) -> None:
    """
    Write every report table to its own sheet of an xlsx workbook, plus a 'metadata' sheet with the
    column types and a 'summary' sheet with the pass/fail outcome.
    """
    meta_rows = []
    with pd.ExcelWriter(path, engine='openpyxl') as writer:
        for name, frame in report.frames.items():
            sheet = name[:31]
            frame.to_excel(writer, sheet_name=sheet, index=False)
            meta_rows.extend(dict(m, sheet=sheet) for m in create_metadata(frame))
        pd.DataFrame(meta_rows, columns=['sheet', 'name', 'dataType']).to_excel(writer, sheet_name='metadata', index=False)
        summary = pd.DataFrame([{
            'command': report.command, 'seed': report.seed, 'inputs_digest': inputs_digest(report.inputs),
            'passed': report.passed, 'failures': ', '.join(report.failures),
        }])
        summary.to_excel(writer, sheet_name='summary', index=False)
    logging.info(f"Report tables written to {path}")
