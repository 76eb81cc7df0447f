"""Filter transforms of sampled paths and scale schedules.

The transform of a path X at scale a and shift b is the Riemann sum

    d_x(a, b) ~ (dt / sqrt(a)) * sum_i psi((t_i - b) / a) * X(t_i)

over the samples inside the filter's effective support.  Midpoint-style
summation is deliberate: paths are only known at grid points and are
rough, so higher-order rules would not buy accuracy.

A scale schedule fixes the ladder {a_j} together with per-scale shift
spacings gamma_j, coefficient counts m_j and block radii r_j.  Shifts
follow the arithmetic rule b_jk = k * gamma_j, k = 1..m_j, which meets
the required separation |b_jk1 - b_jk2| >= |k1 - k2| * gamma_j with
equality.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .simulate import CoefficientPanel, PanelLevel

# Width, in filter time units, of the linear taper that closes the
# summation window.  A hard cutoff makes the sum's edge contribution
# jump erratically as the grid shifts under refinement; the taper turns
# it into a smooth second-order term, so halving dt shrinks the error
# predictably.  The mass it adds sits beyond the effective support and
# is below the support threshold by construction.  Half a unit keeps
# the outer taper edge off the integer lattice, where the slowly
# decaying filters have their sign changes.
_TAPER_WIDTH = 0.5

__all__ = [
    "ScheduleLevel",
    "ScaleSchedule",
    "TransformRequest",
    "linear_schedule",
    "geometric_schedule",
    "filter_transform",
    "panel_from_path",
    "required_extent",
    "lattice_window",
    "schedule_from_json",
    "schedule_to_json",
]


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScheduleLevel:
    """One rung of the scale ladder."""

    j: int
    a_j: float
    gamma_j: float
    m_j: int
    r_j: float

    def shifts(self):
        return self.gamma_j * np.arange(1, self.m_j + 1)


@dataclass(frozen=True, eq=False)
class ScaleSchedule:
    """Strictly increasing scales with per-scale shift grids."""

    levels: tuple
    shift_rule: str = "arithmetic"
    rule_doc: dict = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if not self.levels:
            raise ValueError("ScaleSchedule: need at least one level")
        if self.shift_rule != "arithmetic":
            raise ValueError("ScaleSchedule: only the arithmetic shift rule exists")
        a = np.array([lv.a_j for lv in self.levels], dtype=float)
        r = np.array([lv.r_j for lv in self.levels], dtype=float)
        if not np.all(a > 0) or not np.all(np.diff(a) > 0):
            raise ValueError("ScaleSchedule: scales must be positive and strictly increasing")
        if not np.all(r > 0) or (r.size > 1 and not np.all(np.diff(r) < 0)):
            raise ValueError("ScaleSchedule: block radii must be positive and strictly decreasing")
        for lv in self.levels:
            if lv.m_j < 1:
                raise ValueError("ScaleSchedule: m_j must be >= 1 at level %d" % lv.j)
            if not (lv.gamma_j > 0):
                raise ValueError("ScaleSchedule: gamma_j must be positive at level %d" % lv.j)


def linear_schedule(j_max, kappa=3.0):
    """Ladder a_j = j with unit shift spacing and m_j = ceil(j^kappa).

    kappa = 9 reproduces the heavy reference configuration whose largest
    level holds about 1e7 coefficients; the default kappa = 3 keeps the
    same shape at desk scale.
    """
    j_max = int(j_max)
    if j_max < 2:
        raise ValueError("linear_schedule: j_max must be >= 2")
    kappa = float(kappa)
    levels = tuple(
        ScheduleLevel(
            j=j,
            a_j=float(j),
            gamma_j=1.0,
            m_j=int(math.ceil(j**kappa)),
            r_j=float(j) ** -2.5,
        )
        for j in range(1, j_max + 1)
    )
    doc = {"rule": "linear", "j_max": j_max, "kappa": kappa, "gamma_mode": "unit"}
    return ScaleSchedule(levels=levels, rule_doc=doc)


def geometric_schedule(j_max, a0, rho, kappa, m_cap=None):
    """Ladder a_j = a0 * rho^j with gamma_j = a_j and m_j = ceil(a_j^kappa).

    Tying the shift spacing to the scale keeps the variance factor
    (a_j / gamma_j)^2 bounded.  ``m_cap``, if given, clips every m_j, so
    large ladders stay feasible for exact-covariance factorization.
    Summability of the consistency argument needs kappa > 5; smaller
    kappa is allowed for empirical work but flagged.
    """
    j_max = int(j_max)
    if j_max < 1:
        raise ValueError("geometric_schedule: j_max must be >= 1")
    a0 = float(a0)
    rho = float(rho)
    kappa = float(kappa)
    if not (a0 > 0):
        raise ValueError("geometric_schedule: a0 must be positive")
    if not (rho > 1.0):
        raise ValueError("geometric_schedule: rho must exceed 1")
    if kappa <= 5.0:
        warnings.warn(
            "geometric_schedule: kappa = %g <= 5 leaves sum 1/(r_j^2 m_j) "
            "divergent; fine empirically, outside the consistency theory"
            % kappa
        )
    levels = []
    for j in range(1, j_max + 1):
        a_j = a0 * rho**j
        m_j = int(math.ceil(a_j**kappa))
        if m_cap is not None:
            m_j = min(m_j, int(m_cap))
        levels.append(
            ScheduleLevel(j=j, a_j=a_j, gamma_j=a_j, m_j=m_j, r_j=a_j**-2.5)
        )
    doc = {
        "rule": "geometric",
        "j_max": j_max,
        "a0": a0,
        "rho": rho,
        "kappa": kappa,
        "gamma_mode": "scale",
    }
    if m_cap is not None:
        doc["m_cap"] = int(m_cap)
    return ScaleSchedule(levels=tuple(levels), rule_doc=doc)


def schedule_to_json(schedule):
    """Serialize a rule-built schedule to its constructor document."""
    if schedule.rule_doc is None:
        raise ValueError(
            "schedule_to_json: only schedules built by linear_schedule or "
            "geometric_schedule carry a serializable rule"
        )
    return dict(schedule.rule_doc)


def schedule_from_json(doc):
    if isinstance(doc, str):
        import json

        doc = json.loads(doc)
    rule = doc.get("rule")
    if rule == "linear":
        return linear_schedule(doc["j_max"], kappa=doc.get("kappa", 3.0))
    if rule == "geometric":
        return geometric_schedule(
            doc["j_max"],
            doc["a0"],
            doc["rho"],
            doc["kappa"],
            m_cap=doc.get("m_cap"),
        )
    raise ValueError(
        "schedule_from_json: unknown rule %r (expected 'linear' or 'geometric')"
        % rule
    )


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TransformRequest:
    """A path, a filter and a schedule, validated for coverage."""

    path: object
    filter: object
    schedule: ScaleSchedule


def required_extent(filt, a, b_lo, b_hi):
    """Path extent needed to transform shifts in [b_lo, b_hi] at scale a."""
    if filt.psi is None or filt.time_support is None:
        raise ValueError(
            "filter_transform: filter %r has no time-domain form; use the "
            "exact-gaussian back-end instead" % filt.name
        )
    radius = a * (filt.time_support + _TAPER_WIDTH)
    return b_lo - radius, b_hi + radius


def lattice_window(filt, schedule):
    """Integer path bounds covering every level of a schedule."""
    lo = math.inf
    hi = -math.inf
    for lv in schedule.levels:
        shifts = lv.shifts()
        lo_j, hi_j = required_extent(filt, lv.a_j, shifts[0], shifts[-1])
        lo = min(lo, lo_j)
        hi = max(hi, hi_j)
    return math.floor(lo) - 1, math.ceil(hi) + 1


def filter_transform(path, filt, a, b):
    """Riemann approximation of the transform at one (scale, shift).

    The sum runs over samples where the scaled filter is above its
    effective-support threshold; the path must cover that window.
    """
    a = float(a)
    b = float(b)
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError("filter_transform: scale must be a positive real")
    lo_req, hi_req = required_extent(filt, a, b, b)
    slack = 1e-9 * path.dt
    if path.t0 > lo_req + slack or path.t_end < hi_req - slack:
        raise ValueError(
            "filter_transform: path covers [%g, %g] but (a=%g, b=%g) "
            "requires [%g, %g]" % (path.t0, path.t_end, a, b, lo_req, hi_req)
        )
    i0 = max(0, int(math.ceil((lo_req - path.t0) / path.dt - 1e-12)))
    i1 = min(path.values.size - 1, int(math.floor((hi_req - path.t0) / path.dt + 1e-12)))
    u = (path.t0 + path.dt * np.arange(i0, i1 + 1) - b) / a
    taper = np.clip(filt.time_support + _TAPER_WIDTH - np.abs(u), 0.0, _TAPER_WIDTH)
    weights = filt.psi(u) * (taper / _TAPER_WIDTH)
    return float(path.dt / math.sqrt(a) * np.dot(weights, path.values[i0 : i1 + 1]))


def panel_from_path(request):
    """Transform a path into a coefficient panel along a schedule.

    Coverage is checked for every level before any work happens, so a
    failure names the offending level instead of wasting a partial pass.
    """
    path, filt, schedule = request.path, request.filter, request.schedule
    for lv in schedule.levels:
        shifts = lv.shifts()
        lo_req, hi_req = required_extent(filt, lv.a_j, shifts[0], shifts[-1])
        slack = 1e-9 * path.dt
        if path.t0 > lo_req + slack or path.t_end < hi_req - slack:
            raise ValueError(
                "panel_from_path: level %d needs path extent [%g, %g] but "
                "the path covers [%g, %g]"
                % (lv.j, lo_req, hi_req, path.t0, path.t_end)
            )
    levels = []
    for lv in schedule.levels:
        shifts = lv.shifts()
        coeffs = np.array(
            [filter_transform(path, filt, lv.a_j, b) for b in shifts]
        )
        levels.append(
            PanelLevel(j=lv.j, a_j=lv.a_j, shifts=shifts, coeffs=coeffs)
        )
    return CoefficientPanel(
        levels=tuple(levels), provenance="path-transform", seed=path.seed
    )
