"""On-disk formats: recordings, labels, session and cohort manifests.

Parsing is strict: anything off-grammar is rejected with a path and line
number rather than coerced. Writers emit LF line endings; parsers accept
CRLF as well. The recording time column is informative only; sample
positions are defined by row index and the manifest's sample rate.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BoundaryError, CohortError, ParseError, ValidationError
from .model import (
    DEFAULT_SAMPLE_RATE_HZ,
    Group,
    Placement,
    SegmentLabel,
    SensorStream,
    Session,
    TaskKind,
    assemble_session,
)

RECORDING_HEADER = "time_s,ax,ay,az,gx,gy,gz"
RECORDING_COLUMNS = RECORDING_HEADER.split(",")
LABELS_HEADER = "TASK,s1,e1,s2,e2,s3,e3"
COHORT_MANIFEST_NAME = "cohort.txt"

# 9 significant digits: enough for 1e-9 relative round-trip, small files
_FLOAT_FORMAT = "%.9g"


def _read_lines(path) -> list[str]:
    try:
        text = open(path, "r", encoding="utf-8", newline="").read()
    except FileNotFoundError:
        raise ValidationError(f"referenced file does not exist: {path}") from None
    except UnicodeDecodeError as err:
        raise ParseError(f"not valid UTF-8: {err}", path=path) from None
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def parse_recording(path, sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ) -> SensorStream:
    """Parse one placement's CSV recording into a SensorStream.

    Every row must carry exactly 7 numeric cells (time, 3 accel, 3 gyro).
    Non-numeric cells are parse errors with a line number; numeric but
    non-finite cells (NaN, inf) are validation errors naming the channel.
    """
    lines = _read_lines(path)
    if not lines:
        raise ParseError("empty file", path=path)
    if lines[0] != RECORDING_HEADER:
        raise ParseError(
            f"bad header: expected {RECORDING_HEADER!r}, got {lines[0]!r}", path=path, line=1
        )
    if len(lines) == 1:
        raise ParseError("no sample rows after the header", path=path)
    cells: list[list[str]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        row = line.split(",")
        if len(row) != 7:
            raise ParseError(f"expected 7 columns, got {len(row)}", path=path, line=line_no)
        cells.append(row)
    try:
        values = np.array(cells, dtype=np.float64)
    except ValueError:
        # locate the first offending cell for the diagnostic
        for i, row in enumerate(cells):
            for j, cell in enumerate(row):
                try:
                    np.float64(cell)
                except ValueError:
                    raise ParseError(
                        f"column {RECORDING_COLUMNS[j]!r}: not a number: {cell!r}",
                        path=path,
                        line=i + 2,
                    ) from None
        raise ParseError("non-numeric cell", path=path) from None
    finite = np.isfinite(values)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise ValidationError(
            f"{path}:{i + 2}: column {RECORDING_COLUMNS[j]!r} is not finite: {cells[i][j]!r}"
        )
    return SensorStream(
        accel=values[:, 1:4], gyro=values[:, 4:7], sample_rate_hz=sample_rate_hz
    )


def write_recording(stream: SensorStream) -> bytes:
    """Render a stream as the documented CSV, 9 significant digits."""
    times = stream.times_s()
    lines = [RECORDING_HEADER]
    accel = stream.accel
    gyro = stream.gyro
    for i in range(stream.n_samples):
        row = (
            times[i],
            accel[i, 0],
            accel[i, 1],
            accel[i, 2],
            gyro[i, 0],
            gyro[i, 1],
            gyro[i, 2],
        )
        lines.append(",".join(_FLOAT_FORMAT % v for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_labels(path) -> dict[TaskKind, SegmentLabel]:
    """Parse the per-task boundary file into a task-keyed label map."""
    lines = _read_lines(path)
    if not lines:
        raise ParseError("empty file", path=path)
    if lines[0] != LABELS_HEADER:
        raise ParseError(
            f"bad header: expected {LABELS_HEADER!r}, got {lines[0]!r}", path=path, line=1
        )
    labels: dict[TaskKind, SegmentLabel] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 7:
            raise ParseError(f"expected 7 columns, got {len(cells)}", path=path, line=line_no)
        try:
            task = TaskKind(cells[0])
        except ValueError:
            raise ParseError(f"unknown task {cells[0]!r}", path=path, line=line_no) from None
        try:
            bounds = [int(c) for c in cells[1:]]
        except ValueError:
            raise ParseError(f"non-integer boundary in {line!r}", path=path, line=line_no) from None
        if task in labels:
            raise ValidationError(f"{path}:{line_no}: duplicate label for task {task.value}")
        try:
            labels[task] = SegmentLabel(task, *bounds)
        except BoundaryError as err:
            raise BoundaryError(f"{path}:{line_no}: {err}") from None
    return labels


def write_labels(labels: dict[TaskKind, SegmentLabel]) -> bytes:
    """Render labels in task order; an empty map yields just the header."""
    lines = [LABELS_HEADER]
    for task in TaskKind:
        if task not in labels:
            continue
        lb = labels[task]
        lines.append(
            f"{task.value},{lb.s1},{lb.e1},{lb.s2},{lb.e2},{lb.s3},{lb.e3}"
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


@dataclass(frozen=True)
class SessionManifest:
    """Pointers and metadata for one session's files.

    Recording and label paths are stored as written in the manifest,
    relative to the manifest's own directory.
    """

    subject_id: str
    group: Group
    side: str
    recordings: dict[Placement, str]
    labels_path: str
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        object.__setattr__(self, "recordings", dict(self.recordings))
        if not self.subject_id:
            raise ValidationError("subject_id must be non-empty")
        if not self.side:
            raise ValidationError("side must be non-empty")
        if set(self.recordings) != set(Placement):
            raise ValidationError("manifest must reference one recording per placement")
        if not self.sample_rate_hz > 0:
            raise ValidationError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")


_MANIFEST_KEYS = ("subject_id", "group", "side", "sample_rate_hz", "wrist", "arm", "labels")


def parse_session_manifest(path) -> SessionManifest:
    """Parse the key = value session manifest."""
    lines = _read_lines(path)
    pairs: dict[str, str] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", path=path, line=line_no)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _MANIFEST_KEYS:
            raise ParseError(f"unknown key {key!r}", path=path, line=line_no)
        if key in pairs:
            raise ParseError(f"duplicate key {key!r}", path=path, line=line_no)
        pairs[key] = value
    missing = [k for k in _MANIFEST_KEYS if k not in pairs]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}", path=path)
    try:
        group = Group(pairs["group"])
    except ValueError:
        raise ParseError(f"unknown group {pairs['group']!r}", path=path) from None
    try:
        rate = float(np.float64(pairs["sample_rate_hz"]))
    except ValueError:
        raise ParseError(
            f"sample_rate_hz is not a number: {pairs['sample_rate_hz']!r}", path=path
        ) from None
    return SessionManifest(
        subject_id=pairs["subject_id"],
        group=group,
        side=pairs["side"],
        recordings={Placement.WRIST: pairs["wrist"], Placement.ARM: pairs["arm"]},
        labels_path=pairs["labels"],
        sample_rate_hz=rate,
    )


def write_session_manifest(manifest: SessionManifest) -> bytes:
    lines = [
        f"subject_id = {manifest.subject_id}",
        f"group = {manifest.group.value}",
        f"side = {manifest.side}",
        f"sample_rate_hz = {_FLOAT_FORMAT % manifest.sample_rate_hz}",
        f"wrist = {manifest.recordings[Placement.WRIST]}",
        f"arm = {manifest.recordings[Placement.ARM]}",
        f"labels = {manifest.labels_path}",
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_session(manifest_path) -> Session:
    """Load and cross-validate one session from its manifest."""
    manifest_path = Path(manifest_path)
    manifest = parse_session_manifest(manifest_path)
    base = manifest_path.parent
    streams = {
        placement: parse_recording(base / rel, manifest.sample_rate_hz)
        for placement, rel in manifest.recordings.items()
    }
    labels = parse_labels(base / manifest.labels_path)
    return assemble_session(
        manifest.subject_id, manifest.group, manifest.side, streams, labels.values()
    )


def load_cohort(cohort_dir) -> list[Session]:
    """Load every session listed in the directory's cohort manifest.

    Order follows the manifest. The first failing session aborts the load
    with its subject id (or manifest path when the failure precedes the
    id) and the underlying cause chained.
    """
    cohort_dir = Path(cohort_dir)
    manifest = cohort_dir / COHORT_MANIFEST_NAME
    if not manifest.is_file():
        raise ParseError("cohort manifest not found", path=manifest)
    entries = [line.strip() for line in _read_lines(manifest) if line.strip()]
    if not entries:
        raise CohortError(f"{manifest}: cohort manifest lists no sessions")
    sessions: list[Session] = []
    for entry in entries:
        session_path = cohort_dir / entry
        try:
            sessions.append(load_session(session_path))
        except (ParseError, ValidationError) as err:
            raise CohortError(f"session {entry}: {err}") from err
    return sessions
