"""Two-group statistics: Welch's t-test, Cohen's d, and the comparison grid.

The p-value path is self-contained: a Lentz-style continued fraction for
the regularized incomplete beta function, good to better than 1e-12 over
the parameter range a t-test can produce. Nothing here depends on the
signal modules; inputs are plain samples or feature rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CohortError, DegenerateStatisticsError, ValidationError
from .model import Group, Placement, SegmentKind, TaskKind

_BETA_EPS = 3.0e-16
_BETA_FPMIN = 1.0e-300
_BETA_MAX_ITER = 300


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Lentz evaluation of the continued fraction for I_x(a, b).

    Only called for x below the symmetry split point, where convergence
    is rapid (a few dozen terms even for large a).
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETA_FPMIN:
        d = _BETA_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValidationError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"x must be in [0,1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_prefactor = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    prefactor = math.exp(ln_prefactor)
    # use the side of the symmetry relation where the fraction converges fast
    if x < (a + 1.0) / (a + b + 2.0):
        return prefactor * _beta_continued_fraction(a, b, x) / a
    return 1.0 - prefactor * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_survival_two_sided(t: float, dof: float) -> float:
    """P(|T| >= |t|) for Student's T with `dof` degrees of freedom."""
    if not dof > 0:
        raise ValidationError(f"degrees of freedom must be positive, got {dof}")
    x = dof / (dof + t * t)
    return regularized_incomplete_beta(dof / 2.0, 0.5, x)


def _as_sample(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < 2:
        raise DegenerateStatisticsError(f"{name} needs >= 2 observations, got {arr.size}")
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def welch_t(x, y) -> tuple[float, float, float]:
    """Welch's unequal-variance t-test.

    Returns (t, dof, p) with Welch-Satterthwaite degrees of freedom and a
    two-sided p-value. Requires at least 2 observations per sample and a
    nonzero variance in at least one of them.
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n1, n2 = xa.size, ya.size
    v1 = float(np.var(xa, ddof=1))
    v2 = float(np.var(ya, ddof=1))
    se1, se2 = v1 / n1, v2 / n2
    if se1 + se2 == 0.0:
        raise DegenerateStatisticsError("both samples have zero variance; t is undefined")
    t = (float(np.mean(xa)) - float(np.mean(ya))) / math.sqrt(se1 + se2)
    dof = (se1 + se2) ** 2 / (se1 * se1 / (n1 - 1) + se2 * se2 / (n2 - 1))
    return t, dof, t_survival_two_sided(t, dof)


def pooled_t(x, y) -> tuple[float, float, float]:
    """Classic equal-variance (Student's) two-sample t-test.

    Kept alongside `welch_t` for replication against tools whose default
    pools the variances; the pipeline itself always uses Welch.
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n1, n2 = xa.size, ya.size
    v1 = float(np.var(xa, ddof=1))
    v2 = float(np.var(ya, ddof=1))
    dof = n1 + n2 - 2
    pooled_var = ((n1 - 1) * v1 + (n2 - 1) * v2) / dof
    if pooled_var == 0.0:
        raise DegenerateStatisticsError("both samples have zero variance; t is undefined")
    t = (float(np.mean(xa)) - float(np.mean(ya))) / math.sqrt(pooled_var * (1.0 / n1 + 1.0 / n2))
    return t, float(dof), t_survival_two_sided(t, float(dof))


def cohens_d(x, y) -> tuple[float, float, float]:
    """Cohen's d with a normal-approximation 95% confidence interval.

    d divides the mean difference by the pooled standard deviation; the
    interval is d +/- 1.96 * SE with the standard large-sample SE.
    """
    xa = _as_sample(x, "x")
    ya = _as_sample(y, "y")
    n1, n2 = xa.size, ya.size
    v1 = float(np.var(xa, ddof=1))
    v2 = float(np.var(ya, ddof=1))
    pooled_var = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)
    if pooled_var == 0.0:
        raise DegenerateStatisticsError("pooled standard deviation is zero; d is undefined")
    d = (float(np.mean(xa)) - float(np.mean(ya))) / math.sqrt(pooled_var)
    se = math.sqrt((n1 + n2) / (n1 * n2) + d * d / (2.0 * (n1 + n2 - 2)))
    return d, d - 1.96 * se, d + 1.96 * se


class SignificanceRule(Enum):
    """Boundary handling for the effect-size half of the star rule."""

    STRICT = "strict"
    INCLUSIVE = "inclusive"


def significance_flag(p: float, d: float, rule: SignificanceRule = SignificanceRule.STRICT) -> bool:
    """Combined flag: p < 0.05 and a large effect size.

    The strict rule requires |d| > 0.8; the inclusive rule admits |d| = 0.8.
    """
    if not (math.isfinite(p) and math.isfinite(d)):
        raise ValidationError("p and d must be finite")
    if rule is SignificanceRule.STRICT:
        return p < 0.05 and abs(d) > 0.8
    return p < 0.05 and abs(d) >= 0.8


@dataclass(frozen=True)
class ComparisonCell:
    """Full statistics for one grid cell: patient sample vs healthy sample."""

    t_stat: float
    dof: float
    p_value: float
    d: float
    d_ci_low: float
    d_ci_high: float
    significant: bool

    def __post_init__(self):
        for name in ("t_stat", "dof", "p_value", "d", "d_ci_low", "d_ci_high"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} is not finite")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p_value must be in [0,1], got {self.p_value}")
        if not self.d_ci_low <= self.d <= self.d_ci_high:
            raise ValidationError("confidence interval must bracket d")


# grid row order used everywhere a table is walked: the six per-placement
# features, then the placement-free duration
FEATURE_GRID: tuple[tuple[str, bool], ...] = (
    ("nmcp_a", True),
    ("np_a", True),
    ("ldlj_a", True),
    ("sparc", True),
    ("rav", True),
    ("pi", True),
    ("duration_s", False),
)

CellKey = tuple[TaskKind, str, "Placement | None", SegmentKind]


def cell_keys():
    """Canonical cell order: task, feature, placement, segment kind."""
    for task in TaskKind:
        for feature, per_placement in FEATURE_GRID:
            placements = tuple(Placement) if per_placement else (None,)
            for placement in placements:
                for kind in SegmentKind:
                    yield (task, feature, placement, kind)


@dataclass(frozen=True)
class ComparisonTable:
    """The complete per-task comparison grid.

    `cells` maps every canonical cell key to a ComparisonCell, or to None
    where the statistics were degenerate (untestable cell). n1 counts
    patient subjects, n2 healthy subjects.
    """

    n1: int
    n2: int
    rule: SignificanceRule
    cells: dict

    def __post_init__(self):
        object.__setattr__(self, "cells", dict(self.cells))
        expected = set(cell_keys())
        got = set(self.cells)
        if got != expected:
            missing = len(expected - got)
            extra = len(got - expected)
            raise ValidationError(
                f"comparison grid incomplete: {missing} cells missing, {extra} unexpected"
            )

    def cell(self, task: TaskKind, feature: str, placement, kind: SegmentKind):
        return self.cells[(task, feature, placement, kind)]

    def untestable_count(self) -> int:
        return sum(1 for v in self.cells.values() if v is None)


def compare_cohort(rows, rule: SignificanceRule = SignificanceRule.STRICT) -> ComparisonTable:
    """Run the full grid of two-group tests over a feature matrix.

    Observations are grouped per (task, feature, placement, segment);
    duration observations are taken once per subject from the wrist rows
    since the value is placement-independent. Cells whose statistics are
    degenerate (or that lack 2 observations in a group) come back as None
    rather than failing the table; an entirely missing or single-subject
    group is a cohort-level error.
    """
    subjects: dict[Group, set] = {Group.PATIENT: set(), Group.HEALTHY: set()}
    for row in rows:
        subjects[row.group].add(row.subject_id)
    for group, ids in subjects.items():
        if not ids:
            raise CohortError(f"matrix has no rows for the {group.value} group")
        if len(ids) < 2:
            raise CohortError(
                f"group {group.value} has {len(ids)} subject; need at least 2 for a comparison"
            )

    observations: dict[CellKey, dict[Group, list[float]]] = {
        key: {Group.PATIENT: [], Group.HEALTHY: []} for key in cell_keys()
    }
    for row in rows:
        for feature, per_placement in FEATURE_GRID:
            if per_placement:
                key = (row.task, feature, row.placement, row.segment)
            elif row.placement is Placement.WRIST:
                key = (row.task, feature, None, row.segment)
            else:
                continue
            observations[key][row.group].append(getattr(row.features, feature))

    cells: dict[CellKey, ComparisonCell | None] = {}
    for key in cell_keys():
        xs = observations[key][Group.PATIENT]
        ys = observations[key][Group.HEALTHY]
        if len(xs) < 2 or len(ys) < 2:
            cells[key] = None
            continue
        try:
            t, dof, p = welch_t(xs, ys)
            d, ci_low, ci_high = cohens_d(xs, ys)
        except DegenerateStatisticsError:
            cells[key] = None
            continue
        cells[key] = ComparisonCell(
            t_stat=t,
            dof=dof,
            p_value=p,
            d=d,
            d_ci_low=ci_low,
            d_ci_high=ci_high,
            significant=significance_flag(p, d, rule),
        )
    return ComparisonTable(
        n1=len(subjects[Group.PATIENT]), n2=len(subjects[Group.HEALTHY]), rule=rule, cells=cells
    )
