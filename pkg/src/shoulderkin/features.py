"""The seven per-segment kinematic features and the cohort feature matrix.

Four smoothness measures (mean-crossing count, prominent-peak count,
spectral arc length, log dimensionless jerk), two intensity measures
(angular-velocity range and its product with the acceleration range), and
the segment duration. Each is a deterministic map from one labelled window
to a scalar; `extract_all` evaluates the whole set for one grid cell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .dsp import ScalarSeries, euclidean_norm, magnitude_spectrum
from .dsp import derivative as _derivative
from .errors import (
    DegenerateSignalError,
    FeatureError,
    ParseError,
    TooShortError,
    ValidationError,
)
from .model import (
    FeatureVector,
    Group,
    Placement,
    SegmentKind,
    Session,
    TaskKind,
    slice_segment,
)


@dataclass(frozen=True)
class FeatureParams:
    """Tunables for the two features that need thresholds.

    peak_prominence_frac
        Minimum peak prominence as a fraction of the segment's value range.
    sparc_amp_threshold, sparc_max_cutoff_hz, sparc_pad_level
        Adaptive-cutoff amplitude threshold, frequency ceiling, and
        zero-padding level of the spectral-arc-length computation.
    min_segment_s
        Shortest segment the spectral measure accepts.
    """

    peak_prominence_frac: float = 0.05
    sparc_amp_threshold: float = 0.05
    sparc_max_cutoff_hz: float = 10.0
    sparc_pad_level: int = 4
    min_segment_s: float = 0.25

    def __post_init__(self):
        if not 0.0 < self.peak_prominence_frac < 1.0:
            raise ValidationError(
                f"peak_prominence_frac must be in (0,1), got {self.peak_prominence_frac}"
            )
        if not 0.0 < self.sparc_amp_threshold < 1.0:
            raise ValidationError(
                f"sparc_amp_threshold must be in (0,1), got {self.sparc_amp_threshold}"
            )
        if not self.sparc_max_cutoff_hz > 0:
            raise ValidationError(
                f"sparc_max_cutoff_hz must be positive, got {self.sparc_max_cutoff_hz}"
            )
        if self.sparc_pad_level < 0 or self.sparc_pad_level != int(self.sparc_pad_level):
            raise ValidationError(
                f"sparc_pad_level must be a non-negative integer, got {self.sparc_pad_level}"
            )
        if not self.min_segment_s > 0:
            raise ValidationError(f"min_segment_s must be positive, got {self.min_segment_s}")


def mean_crossing_count(a_norm: ScalarSeries) -> int:
    """Number of times the signal crosses its own mean.

    A crossing is a consecutive pair whose deviations from the mean have
    strictly opposite signs. Samples sitting exactly on the mean inherit
    the sign of the last strictly-signed sample, so touching the mean and
    returning to the same side counts nothing.
    """
    n = len(a_norm)
    if n < 2:
        raise TooShortError(f"mean crossings need >= 2 samples, got {n}")
    dev = a_norm.values - np.mean(a_norm.values)
    signs = np.sign(dev).astype(np.int64)
    # forward-fill zeros with the last nonzero sign; leading zeros stay 0
    nz = np.where(signs != 0, np.arange(n), -1)
    last = np.maximum.accumulate(nz)
    filled = np.where(last >= 0, signs[np.maximum(last, 0)], 0)
    return int(np.count_nonzero(filled[:-1] * filled[1:] < 0))


def peak_count(a_norm: ScalarSeries, params: FeatureParams | None = None) -> int:
    """Number of prominent strict local maxima.

    A run of equal values flanked by smaller ones counts as a single peak.
    Peaks must have prominence >= peak_prominence_frac times the segment's
    value range, which keeps sensor-noise ripples out of the count. A
    constant segment has no peaks.
    """
    params = params or FeatureParams()
    n = len(a_norm)
    if n < 3:
        raise TooShortError(f"peak count needs >= 3 samples, got {n}")
    v = a_norm.values
    spread = float(np.max(v) - np.min(v))
    if spread == 0.0:
        return 0
    peaks, _ = find_peaks(v, prominence=params.peak_prominence_frac * spread)
    return int(len(peaks))


def spectral_arc_length(w_norm: ScalarSeries, params: FeatureParams | None = None) -> float:
    """Negative arc length of the normalized magnitude spectrum (SPARC).

    The spectrum is normalized by its DC value, restricted to frequencies
    up to sparc_max_cutoff_hz, then trimmed to the span between the first
    and last bins whose normalized magnitude reaches sparc_amp_threshold
    (the adaptive cutoff of the published metric). The arc length of that
    curve, with the frequency axis rescaled to unit length, is returned
    negated: smoother movement gives a value closer to 0.

    Raises a degenerate-signal error when the DC component is zero, since
    the normalization is then undefined.
    """
    params = params or FeatureParams()
    n = len(w_norm)
    if n < 2:
        raise TooShortError(f"sparc needs >= 2 samples, got {n}")
    if w_norm.duration_s < params.min_segment_s:
        raise TooShortError(
            f"sparc needs >= {params.min_segment_s} s of signal, got {w_norm.duration_s:.4f} s"
        )
    spectrum = magnitude_spectrum(w_norm, params.sparc_pad_level)
    dc = spectrum.magnitudes[0]
    if dc == 0.0:
        raise DegenerateSignalError("sparc is undefined: zero DC component (all-zero signal)")
    vhat = spectrum.magnitudes / dc
    freqs = spectrum.freqs_hz
    below_cutoff = freqs <= params.sparc_max_cutoff_hz
    vhat = vhat[below_cutoff]
    freqs = freqs[below_cutoff]
    above = np.nonzero(vhat >= params.sparc_amp_threshold)[0]
    # vhat[0] is 1.0 by construction, so the selection is never empty
    sel = slice(above[0], above[-1] + 1)
    f_sel = freqs[sel]
    v_sel = vhat[sel]
    if len(f_sel) < 2:
        return 0.0
    span = f_sel[-1] - f_sel[0]
    arc = np.sum(np.sqrt((np.diff(f_sel) / span) ** 2 + np.diff(v_sel) ** 2))
    return -float(arc)


def log_dimensionless_jerk(a_norm: ScalarSeries) -> float:
    """Negated natural log of the dimensionless squared-jerk integral.

    With T the segment duration, j the numerical derivative of the signal
    and dt the sample period:

        -ln( T / max(signal)^2 * sum(j^2) * dt )

    Larger (less negative) means smoother. Constant signals (zero jerk)
    and signals with zero peak are degenerate: the log has no value.
    """
    n = len(a_norm)
    if n < 3:
        raise TooShortError(f"dimensionless jerk needs >= 3 samples, got {n}")
    peak = float(np.max(a_norm.values))
    if peak == 0.0:
        raise DegenerateSignalError("dimensionless jerk is undefined: zero peak value")
    jerk = _derivative(a_norm).values
    dt = 1.0 / a_norm.sample_rate_hz
    jerk_integral = float(np.sum(jerk * jerk)) * dt
    if jerk_integral == 0.0:
        raise DegenerateSignalError("dimensionless jerk is undefined: constant signal")
    duration = n * dt
    return -math.log(duration / (peak * peak) * jerk_integral)


def angular_velocity_range(gyro: np.ndarray) -> float:
    """Mean over the three axes of each axis's max-minus-min, in deg/s."""
    arr = np.asarray(gyro, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
        raise ValidationError(f"expected a non-empty N x 3 array, got shape {arr.shape}")
    return float(np.mean(np.max(arr, axis=0) - np.min(arr, axis=0)))


def power_index(accel: np.ndarray, gyro: np.ndarray) -> float:
    """Mean per-axis acceleration range times the angular-velocity range."""
    arr = np.asarray(accel, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
        raise ValidationError(f"expected a non-empty N x 3 array, got shape {arr.shape}")
    accel_range = float(np.mean(np.max(arr, axis=0) - np.min(arr, axis=0)))
    return accel_range * angular_velocity_range(gyro)


def segment_duration(start: int, end: int, sample_rate_hz: float) -> float:
    """Window length in seconds: (end - start) / rate, exactly."""
    if end <= start:
        raise ValidationError(f"window [{start},{end}) is empty")
    if not sample_rate_hz > 0:
        raise ValidationError(f"sample_rate_hz must be positive, got {sample_rate_hz}")
    return (end - start) / sample_rate_hz


def extract_all(
    session: Session,
    task: TaskKind,
    kind: SegmentKind,
    placement: Placement,
    params: FeatureParams | None = None,
) -> FeatureVector:
    """Evaluate all seven features for one (task, segment, placement) cell.

    The segment is sliced once and both norms computed once; feature
    failures (too short, degenerate) come back wrapped with the cell
    coordinates so batch callers can report precisely. Duration depends
    only on the label window, never on the placement.
    """
    params = params or FeatureParams()
    label = session.labels.get(task)
    if label is None:
        raise ValidationError(f"{session.subject_id} has no label for task {task.value}")
    stream = session.streams.get(placement)
    if stream is None:
        raise ValidationError(f"{session.subject_id} has no {placement.value} stream")
    segment = slice_segment(stream, label, kind)
    rate = segment.sample_rate_hz
    try:
        a_norm = euclidean_norm(segment.accel, rate)
        w_norm = euclidean_norm(segment.gyro, rate)
        start, end = label.window(kind)
        return FeatureVector(
            nmcp_a=mean_crossing_count(a_norm),
            np_a=peak_count(a_norm, params),
            sparc=spectral_arc_length(w_norm, params),
            ldlj_a=log_dimensionless_jerk(a_norm),
            rav=angular_velocity_range(segment.gyro),
            pi=power_index(segment.accel, segment.gyro),
            duration_s=segment_duration(start, end, rate),
        )
    except (TooShortError, DegenerateSignalError) as err:
        raise FeatureError(session.subject_id, task, kind, placement, err) from err


@dataclass(frozen=True)
class FeatureRow:
    """One feature-matrix row: a cell's coordinates plus its values."""

    subject_id: str
    group: Group
    task: TaskKind
    segment: SegmentKind
    placement: Placement
    features: FeatureVector


MATRIX_COLUMNS = (
    "subject_id",
    "group",
    "task",
    "segment",
    "placement",
) + FeatureVector.FIELD_NAMES
MATRIX_HEADER = ",".join(MATRIX_COLUMNS)

_TASK_ORDER = {task: i for i, task in enumerate(TaskKind)}
_SEGMENT_ORDER = {kind: i for i, kind in enumerate(SegmentKind)}
_PLACEMENT_ORDER = {placement: i for i, placement in enumerate(Placement)}


def _row_sort_key(row: FeatureRow):
    return (
        row.subject_id,
        _TASK_ORDER[row.task],
        _SEGMENT_ORDER[row.segment],
        _PLACEMENT_ORDER[row.placement],
    )


def extract_cohort(
    sessions, params: FeatureParams | None = None
) -> tuple[list[FeatureRow], list[FeatureError]]:
    """Evaluate the full (session x task x segment x placement) grid.

    Failing cells are collected, not fatal: the returned failures list
    carries one FeatureError per cell that could not be computed. Row
    order is fixed by sorting on (subject_id, task, segment, placement)
    regardless of evaluation order.
    """
    params = params or FeatureParams()
    rows: list[FeatureRow] = []
    failures: list[FeatureError] = []
    for session in sessions:
        for task in TaskKind:
            if task not in session.labels:
                continue
            for kind in SegmentKind:
                for placement in Placement:
                    if placement not in session.streams:
                        continue
                    try:
                        vector = extract_all(session, task, kind, placement, params)
                    except FeatureError as err:
                        failures.append(err)
                        continue
                    rows.append(
                        FeatureRow(
                            subject_id=session.subject_id,
                            group=session.group,
                            task=task,
                            segment=kind,
                            placement=placement,
                            features=vector,
                        )
                    )
    rows.sort(key=_row_sort_key)
    return rows, failures


def write_matrix(rows) -> bytes:
    """Serialize feature rows as the documented CSV, floats via repr."""
    lines = [MATRIX_HEADER]
    for row in rows:
        fv = row.features
        lines.append(
            ",".join(
                (
                    row.subject_id,
                    row.group.value,
                    row.task.value,
                    row.segment.value,
                    row.placement.value,
                    str(fv.nmcp_a),
                    str(fv.np_a),
                    repr(fv.sparc),
                    repr(fv.ldlj_a),
                    repr(fv.rav),
                    repr(fv.pi),
                    repr(fv.duration_s),
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_enum(enum_cls, cell: str, what: str, path, line_no: int):
    try:
        return enum_cls(cell)
    except ValueError:
        raise ParseError(f"unknown {what} {cell!r}", path=path, line=line_no) from None


def read_matrix(path) -> list[FeatureRow]:
    """Parse a feature-matrix CSV written by `write_matrix`."""
    try:
        text = open(path, "r", encoding="utf-8", newline="").read()
    except FileNotFoundError:
        raise ParseError("file not found", path=path) from None
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty matrix file", path=path)
    if lines[0] != MATRIX_HEADER:
        raise ParseError(
            f"bad header: expected {MATRIX_HEADER!r}, got {lines[0]!r}", path=path, line=1
        )
    rows: list[FeatureRow] = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(MATRIX_COLUMNS):
            raise ParseError(
                f"expected {len(MATRIX_COLUMNS)} columns, got {len(cells)}",
                path=path,
                line=line_no,
            )
        sid, group_s, task_s, segment_s, placement_s = cells[:5]
        group = _parse_enum(Group, group_s, "group", path, line_no)
        task = _parse_enum(TaskKind, task_s, "task", path, line_no)
        segment = _parse_enum(SegmentKind, segment_s, "segment", path, line_no)
        placement = _parse_enum(Placement, placement_s, "placement", path, line_no)
        try:
            counts = [int(c) for c in cells[5:7]]
            reals = [float(np.float64(c)) for c in cells[7:]]
        except ValueError:
            raise ParseError(f"non-numeric feature value in {line!r}", path=path, line=line_no) from None
        try:
            vector = FeatureVector(counts[0], counts[1], *reals)
        except ValidationError as err:
            raise ValidationError(f"{path}:{line_no}: {err}") from None
        rows.append(FeatureRow(sid, group, task, segment, placement, vector))
    return rows
