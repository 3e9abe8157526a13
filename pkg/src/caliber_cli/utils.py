"""
Utility functions for caliber-cli.

This module provides the parsing and rendering helpers shared by the
commands: the --mod8 shorthand, verdict styling and the JSONL/CSV record
encoders.
"""

import csv
import io
import json
import os
import tempfile
from itertools import chain
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from caliber_cli.engine.classify import Family
from caliber_cli.engine.scan import ScanRecord
from caliber_cli.engine.theorems import Verdict

# Stable CSV column order
CSV_COLUMNS = [
    "d",
    "D",
    "kappa",
    "h",
    "cycle_sizes",
    "forms",
    "smallest_split_prime",
    "rd_n",
    "rd_r",
    "family",
    "verdicts",
    "anomaly",
]

VERDICT_STYLES = {
    Verdict.PASS: "green",
    Verdict.VACUOUS: "dim",
    Verdict.FAIL: "bold red",
    Verdict.ANOMALY: "yellow",
}


def parse_mod8(value: Optional[str]) -> Tuple[Optional[int], Optional[int]]:
    """
    Parse the --mod8 option.

    Args:
        value: A residue 0-7, "notK" for a residue K to exclude, or None.

    Returns:
        The pair (keep residue, excluded residue); at most one is set.

    Raises:
        ValueError: If the value is neither form.

    Example:
        >>> parse_mod8("not5")
        (None, 5)
        >>> parse_mod8("1")
        (1, None)
    """
    if value is None:
        return None, None
    text = value.strip().lower()
    negate = text.startswith("not")
    if negate:
        text = text[3:]
    if not text.isdigit() or not 0 <= int(text) <= 7:
        raise ValueError(f"--mod8 expects a residue 0-7 or notK, got '{value}'")
    return (None, int(text)) if negate else (int(text), None)


def parse_family(value: Optional[str]) -> Optional[Family]:
    """Parse a family name such as "N2P1" (case-insensitive)."""
    if value is None:
        return None
    try:
        return Family(value.strip().upper())
    except ValueError:
        names = ", ".join(f.value for f in Family)
        raise ValueError(f"--family expects one of {names}, got '{value}'") from None


def styled_verdict(verdict: Verdict) -> str:
    """Rich markup for a verdict."""
    style = VERDICT_STYLES[verdict]
    return f"[{style}]{verdict.value}[/{style}]"


def to_json_line(payload: Dict) -> str:
    """Compact JSON with insertion-ordered keys; parsing and re-encoding is the identity."""
    return json.dumps(payload, separators=(",", ":"))


def record_to_csv_row(record: ScanRecord) -> List[str]:
    """
    Flatten a record in CSV_COLUMNS order.

    Lists are joined with ";", forms are written as [A,B,C], verdicts as
    name=value pairs, and missing values as empty cells.
    """
    rd_n, rd_r = ("", "") if record.rd is None else (str(record.rd.n), str(record.rd.r))
    return [
        str(record.d),
        str(record.D),
        str(record.kappa),
        str(record.h),
        ";".join(str(size) for size in record.cycle_sizes),
        ";".join(str(f) for f in record.forms),
        "" if record.smallest_split_prime is None else str(record.smallest_split_prime),
        rd_n,
        rd_r,
        record.family,
        ";".join(f"{name}={verdict.value}" for name, verdict in record.verdicts.items()),
        "true" if record.anomaly else "false",
    ]


def encode_records(records: Iterable[ScanRecord], fmt: str) -> Iterable[str]:
    """
    Yield output lines (with newline) for a stream of records.

    Raises:
        ValueError: If fmt is not "jsonl" or "csv".
    """
    if fmt == "jsonl":
        for record in records:
            yield to_json_line(record.as_dict()) + "\n"
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        rows = (record_to_csv_row(record) for record in records)
        for row in chain([CSV_COLUMNS], rows):
            writer.writerow(row)
            yield buffer.getvalue()
            buffer.seek(0)
            buffer.truncate()
    else:
        raise ValueError(f"unknown output format '{fmt}'")


def _current_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def write_atomic(path: Path, lines: Iterable[str]) -> int:
    """
    Write lines to path through a temporary file in the same directory.

    The file appears only when every line is written; a failure leaves
    any previous file untouched.

    Returns:
        Number of lines written.
    """
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    count = 0
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            for line in lines:
                f.write(line)
                count += 1
        # mkstemp creates 0600; give the result the mode a plain open() would
        os.chmod(tmp_name, 0o666 & ~_current_umask())
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return count
