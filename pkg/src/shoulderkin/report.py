"""Rendering and serialization of comparison results.

Two outputs share one grid: per-task text tables, with p-values to three
decimals, a "<0.001" floor, a star suffix on significant cells and the
star-rule footnote; and a machine-readable CSV dump carrying the full
statistics, which round-trips losslessly back into a ComparisonTable.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ParseError, ValidationError
from .model import Placement, SegmentKind, TaskKind
from .stats import (
    FEATURE_GRID,
    ComparisonCell,
    ComparisonTable,
    SignificanceRule,
    cell_keys,
)

TASK_TITLES = {
    TaskKind.WH: "Washing hair",
    TaskKind.WUB: "Washing upper back",
    TaskKind.WLB: "Washing lower back",
    TaskKind.POH: "Placing an object on a high shelf",
    TaskKind.ROP: "Removing an object from back pocket",
}

PARAMETER_LABELS = {
    "nmcp_a": "NMCP-A",
    "np_a": "NP-A",
    "ldlj_a": "LDLJ-A",
    "sparc": "SPARC",
    "rav": "RAV",
    "pi": "PI",
    "duration_s": "Duration",
}

_SEGMENT_HEADERS = (
    (SegmentKind.COMPLETE, "Complete Task"),
    (SegmentKind.SUB1, "Subtask 1"),
    (SegmentKind.SUB2, "Subtask 2"),
    (SegmentKind.SUB3, "Subtask 3"),
)

_PARAM_W = 11
_PLACEMENT_W = 11
_CELL_W = 16

UNTESTABLE_MARK = "n/a"

DUMP_HEADER = "task,feature,placement,segment,status,t,dof,p,d,d_ci_low,d_ci_high,significant"


def format_p(p: float) -> str:
    """Three-decimal p-value with the small-value floor."""
    if p < 0.0005:
        return "<0.001"
    return f"{p:.3f}"


def footnote(rule: SignificanceRule) -> str:
    if rule is SignificanceRule.STRICT:
        return "*: p < 0.05 and Cohen's d > 0.8"
    return "*: p < 0.05 and Cohen's d >= 0.8"


def _cell_text(cell: ComparisonCell | None) -> str:
    if cell is None:
        return UNTESTABLE_MARK
    text = format_p(cell.p_value)
    if cell.significant:
        text += "*"
    return text


def render_task_table(table: ComparisonTable, task: TaskKind) -> str:
    """One task's table in the two-rows-per-parameter layout."""
    lines = [f"{task.value}: {TASK_TITLES[task]}"]
    header = "Parameter".ljust(_PARAM_W) + "Placement".ljust(_PLACEMENT_W)
    header += "".join(title.ljust(_CELL_W) for _, title in _SEGMENT_HEADERS)
    lines.append(header.rstrip())
    for feature, per_placement in FEATURE_GRID:
        placements = (Placement.WRIST, Placement.ARM) if per_placement else (None,)
        for row_idx, placement in enumerate(placements):
            name = PARAMETER_LABELS[feature] if row_idx == 0 else ""
            placement_label = "N/A" if placement is None else placement.value.capitalize()
            row = name.ljust(_PARAM_W) + placement_label.ljust(_PLACEMENT_W)
            for kind, _ in _SEGMENT_HEADERS:
                row += _cell_text(table.cell(task, feature, placement, kind)).ljust(_CELL_W)
            lines.append(row.rstrip())
    lines.append("")
    lines.append(footnote(table.rule))
    return "\n".join(lines) + "\n"


def render_report(table: ComparisonTable) -> str:
    """All five task tables, separated by blank lines."""
    return "\n".join(render_task_table(table, task) for task in TaskKind)


def write_dump(table: ComparisonTable) -> bytes:
    """Full-statistics CSV: three preamble lines, then one row per cell."""
    lines = [
        f"rule,{table.rule.value}",
        f"n1,{table.n1}",
        f"n2,{table.n2}",
        DUMP_HEADER,
    ]
    for task, feature, placement, kind in cell_keys():
        cell = table.cells[(task, feature, placement, kind)]
        place = "NA" if placement is None else placement.value
        if cell is None:
            stats = ["untestable", "", "", "", "", "", "", ""]
        else:
            stats = [
                "ok",
                repr(cell.t_stat),
                repr(cell.dof),
                repr(cell.p_value),
                repr(cell.d),
                repr(cell.d_ci_low),
                repr(cell.d_ci_high),
                "true" if cell.significant else "false",
            ]
        lines.append(",".join([task.value, feature, place, kind.value] + stats))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_preamble(lines: list[str], path) -> tuple[SignificanceRule, int, int]:
    if len(lines) < 4:
        raise ParseError("truncated dump: missing preamble or header", path=path)
    values = {}
    for line_no, expected_key in enumerate(("rule", "n1", "n2"), start=1):
        cells = lines[line_no - 1].split(",")
        if len(cells) != 2 or cells[0] != expected_key:
            raise ParseError(
                f"expected '{expected_key},<value>', got {lines[line_no - 1]!r}",
                path=path,
                line=line_no,
            )
        values[expected_key] = cells[1]
    try:
        rule = SignificanceRule(values["rule"])
    except ValueError:
        raise ParseError(f"unknown rule {values['rule']!r}", path=path, line=1) from None
    try:
        n1 = int(values["n1"])
        n2 = int(values["n2"])
    except ValueError:
        raise ParseError("group sizes must be integers", path=path) from None
    if lines[3] != DUMP_HEADER:
        raise ParseError(
            f"bad header: expected {DUMP_HEADER!r}, got {lines[3]!r}", path=path, line=4
        )
    return rule, n1, n2


_VALID_FEATURES = {feature for feature, _ in FEATURE_GRID}


def read_dump(path) -> ComparisonTable:
    """Parse a dump written by `write_dump` back into a ComparisonTable."""
    try:
        text = open(path, "r", encoding="utf-8", newline="").read()
    except FileNotFoundError:
        raise ParseError("file not found", path=path) from None
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rule, n1, n2 = _parse_preamble(lines, path)
    cells = {}
    for line_no, line in enumerate(lines[4:], start=5):
        parts = line.split(",")
        if len(parts) != 12:
            raise ParseError(f"expected 12 columns, got {len(parts)}", path=path, line=line_no)
        task_s, feature, place_s, kind_s, status = parts[:5]
        try:
            task = TaskKind(task_s)
            kind = SegmentKind(kind_s)
        except ValueError:
            raise ParseError(f"unknown task or segment in {line!r}", path=path, line=line_no) from None
        if feature not in _VALID_FEATURES:
            raise ParseError(f"unknown feature {feature!r}", path=path, line=line_no)
        if place_s == "NA":
            placement = None
        else:
            try:
                placement = Placement(place_s)
            except ValueError:
                raise ParseError(f"unknown placement {place_s!r}", path=path, line=line_no) from None
        key = (task, feature, placement, kind)
        if key in cells:
            raise ParseError(f"duplicate cell {task_s}/{feature}/{place_s}/{kind_s}", path=path, line=line_no)
        if status == "untestable":
            if any(parts[5:]):
                raise ParseError("untestable cell carries statistics", path=path, line=line_no)
            cells[key] = None
            continue
        if status != "ok":
            raise ParseError(f"unknown status {status!r}", path=path, line=line_no)
        if parts[11] not in ("true", "false"):
            raise ParseError(f"significant must be true/false, got {parts[11]!r}", path=path, line=line_no)
        try:
            numbers = [float(np.float64(c)) for c in parts[5:11]]
        except ValueError:
            raise ParseError(f"non-numeric statistic in {line!r}", path=path, line=line_no) from None
        if not all(math.isfinite(v) for v in numbers):
            raise ValidationError(f"{path}:{line_no}: non-finite statistic")
        try:
            cells[key] = ComparisonCell(*numbers, significant=parts[11] == "true")
        except ValidationError as err:
            raise ValidationError(f"{path}:{line_no}: {err}") from None
    try:
        return ComparisonTable(n1=n1, n2=n2, rule=rule, cells=cells)
    except ValidationError as err:
        raise ParseError(str(err), path=path) from None
