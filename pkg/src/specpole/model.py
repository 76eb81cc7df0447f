"""Spectral-density models and filter specifications.

A model is the density ``f(lam) = h(lam) / |lam^2 - s0^2|**(2*alpha)``
with a pole pair at ``+-s0``, where ``h`` is an even non-negative
bounded factor with ``h(0) = 1``.  A filter is a band-limited (exactly
or effectively) function ``psi`` with frequency form ``psi_hat`` and the
moment constants

    c2 = integral |psi_hat(lam)|^2 dlam
    c3 = 2 integral lam^2 |psi_hat(lam)|^2 dlam

which normalize the transform statistics.  Constants are recomputed by
quadrature at construction rather than copied from tables, so the
estimator stays self-consistent with whatever ``psi_hat`` is actually in
use.  The Fourier convention is fixed package-wide to

    psi_hat(lam) = integral exp(-i*lam*t) psi(t) dt.

Sampled assumptions on ``h`` (evenness, positivity, unit value at zero)
are reported as warnings, not errors, since a black-box function cannot
be verified symbolically.
"""

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .specfun import QuadratureSpec, integrate

__all__ = [
    "SpectralModel",
    "FilterSpec",
    "GegenbauerSpec",
    "indicator_model",
    "density_eval",
    "covariance_eval",
    "builtin_filter",
    "BUILTIN_FILTER_NAMES",
    "model_from_json",
    "model_to_json",
    "filter_from_json",
    "filter_to_json",
]

_CONSTANT_SPEC = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10)


# ---------------------------------------------------------------------------
# Spectral models
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """Density f(lam) = h(lam) / |lam^2 - s0^2|**(2*alpha).

    ``envelope`` declares the integrability envelope of ``h``: a finite
    value means h vanishes outside [-envelope, envelope], ``None`` means
    unbounded support with integrable decay.
    """

    s0: float
    alpha: float
    h: object
    envelope: float = None
    family: str = "custom"

    def __post_init__(self):
        if not (self.s0 > 1.0 and math.isfinite(self.s0)):
            raise ValueError("SpectralModel: s0 must be a finite real > 1")
        if not (0.0 < self.alpha < 0.5):
            raise ValueError("SpectralModel: alpha must lie in (0, 1/2)")
        if self.envelope is not None and not (
            self.envelope > 0.0 and math.isfinite(self.envelope)
        ):
            raise ValueError("SpectralModel: envelope must be positive or None")
        self._sampled_checks()

    def _sampled_checks(self):
        top = self.envelope if self.envelope is not None else 5.0 * self.s0
        grid = np.linspace(0.0, max(2.0 * self.s0, top), 201)
        with np.errstate(all="ignore"):
            h_pos = np.asarray(self.h(grid), dtype=float)
            h_neg = np.asarray(self.h(-grid), dtype=float)
        if abs(h_pos[0] - 1.0) > 1e-9:
            warnings.warn(
                "SpectralModel: h(0) = %r differs from 1; the statistics "
                "converge to h(0)-scaled limits" % float(h_pos[0])
            )
        if not np.allclose(h_pos, h_neg, rtol=1e-9, atol=1e-12, equal_nan=True):
            warnings.warn("SpectralModel: h is not even on the sampled grid")
        if np.any(h_pos < -1e-12):
            warnings.warn("SpectralModel: h takes negative sampled values")
        safe = np.abs(grid - self.s0) > 1e-9 * self.s0
        dens = h_pos[safe] / np.abs(grid[safe] ** 2 - self.s0**2) ** (2 * self.alpha)
        if not np.all(np.isfinite(dens)):
            warnings.warn(
                "SpectralModel: density is non-finite away from the poles"
            )

    def cache_key(self):
        """Hashable identity for caching, or None for black-box models."""
        if self.family == "indicator":
            return ("indicator", self.s0, self.alpha, self.envelope)
        return None


def indicator_model(s0, alpha, M):
    """Model with h = 1 on [-M, M] and 0 beyond (the simplest example)."""
    M = float(M)
    if not (M > 0.0 and math.isfinite(M)):
        raise ValueError("indicator_model: M must be a positive real")
    h = lambda lam: np.where(np.abs(lam) <= M, 1.0, 0.0)
    return SpectralModel(float(s0), float(alpha), h, envelope=M, family="indicator")


def density_eval(model, lam):
    """Evaluate the spectral density, rejecting the poles at +-s0."""
    arr = np.asarray(lam, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(np.abs(arr) == model.s0):
        raise ValueError(
            "density_eval: lambda hits the singularity at +-%r" % model.s0
        )
    with np.errstate(all="ignore"):
        hv = np.asarray(model.h(arr), dtype=float)
        out = hv / np.abs(arr * arr - model.s0**2) ** (2.0 * model.alpha)
    return float(out[0]) if scalar else out


def covariance_eval(model, r, spec=None):
    """Covariance B(r) = integral cos(r*lam) f(lam) dlam over the line.

    Exploits the even symmetry of the density and integrates the half
    line, splitting at the pole and pre-splitting at the cosine's sign
    changes when r is large.
    """
    if spec is None:
        spec = QuadratureSpec()
    r = float(r)
    upper = model.envelope if model.envelope is not None else np.inf
    sing = tuple(
        s for s in set(spec.singularities) | {model.s0} if 0.0 < s <= upper
    )
    head = upper if math.isfinite(upper) else 10.0 * model.s0
    n_osc = min(int(abs(r) * head / math.pi), 20000)
    breaks = tuple((k + 1) * math.pi / abs(r) for k in range(n_osc)) if n_osc else ()
    merged = QuadratureSpec(
        abs_tol=spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
        singularities=sing,
    )

    def integrand(lam):
        hv = np.asarray(model.h(lam), dtype=float)
        return (
            np.cos(r * lam)
            * hv
            / np.abs(lam * lam - model.s0**2) ** (2.0 * model.alpha)
        )

    return 2.0 * integrate(integrand, 0.0, upper, merged, breakpoints=breaks)


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """A filter with frequency form psi_hat and moments c2, c3.

    ``psi`` may be None when only frequency-domain work is needed (the
    Meyer pair ships without a time form).  ``band_limit_A`` is exact
    when ``band_is_effective`` is False, otherwise it is the smallest A
    with |psi_hat|^2 below 1e-12 of its peak outside [-A, A].
    ``time_support`` bounds the effective support of psi, rounded up to
    a whole time unit so transform windows align with unit grids; None
    for frequency-only filters.
    """

    name: str
    psi: object
    psi_hat: object
    band_limit_A: float
    c2: float
    c3: float
    band_is_effective: bool = False
    time_support: float = None
    sigma: float = None
    breakpoints: tuple = ()

    def __post_init__(self):
        if not (self.band_limit_A > 0.0 and math.isfinite(self.band_limit_A)):
            raise ValueError("FilterSpec: band limit must be a positive real")
        if not (self.c2 > 0.0 and self.c3 > 0.0):
            raise ValueError("FilterSpec: moments c2 and c3 must be positive")
        probe = np.linspace(1.02 * self.band_limit_A, 3.0 * self.band_limit_A, 64)
        inside = np.linspace(0.0, self.band_limit_A, 128)
        with np.errstate(all="ignore"):
            out_sq = np.abs(np.asarray(self.psi_hat(probe))) ** 2
            peak = float(np.max(np.abs(np.asarray(self.psi_hat(inside))) ** 2))
        if peak > 0.0 and np.any(out_sq > 1e-12 * peak):
            warnings.warn(
                "FilterSpec %r: |psi_hat|^2 exceeds 1e-12 of its peak outside "
                "the declared band" % self.name
            )

    def cache_key(self):
        return (self.name, self.sigma)


BUILTIN_FILTER_NAMES = (
    "shannon-father",
    "shannon-mother",
    "meyer-father",
    "meyer-mother",
    "mexican-hat",
)

# Effective-support thresholds.  The slowly decaying Shannon filters use
# a looser cutoff than the Gaussian-windowed Mexican hat; the resulting
# truncation error of the transform (about 3e-8 of the coefficient for
# the father filter) is documented in the README.
_SHANNON_TIME_THRESHOLD = 1e-4
_MEXICAN_TIME_THRESHOLD = 1e-10


def _moments(psi_hat, A, breakpoints):
    sq = lambda lam: np.abs(np.asarray(psi_hat(lam))) ** 2
    c2 = integrate(sq, -A, A, _CONSTANT_SPEC, breakpoints=breakpoints)
    c3 = 2.0 * integrate(
        lambda lam: lam * lam * sq(lam), -A, A, _CONSTANT_SPEC, breakpoints=breakpoints
    )
    return c2, c3


def _shannon_father():
    psi = lambda t: np.sinc(np.asarray(t, dtype=float))
    psi_hat = lambda lam: np.where(np.abs(lam) <= math.pi, 1.0, 0.0) + 0.0j
    T = float(math.ceil(1.0 / (math.pi * _SHANNON_TIME_THRESHOLD)))
    return psi, psi_hat, math.pi, False, T, ()


def _shannon_mother_psi(t):
    t = np.asarray(t, dtype=float)
    s = t - 0.5
    with np.errstate(all="ignore"):
        direct = (np.sin(2.0 * math.pi * t) - np.cos(math.pi * t)) / (math.pi * s)
    series = -1.0 + (7.0 * math.pi**2 / 6.0) * s * s
    return np.where(np.abs(s) < 1e-4, series, direct)


def _shannon_mother():
    def psi_hat(lam):
        lam = np.asarray(lam, dtype=float)
        band = (np.abs(lam) > math.pi) & (np.abs(lam) <= 2.0 * math.pi)
        return np.where(band, -np.exp(-0.5j * lam), 0.0 + 0.0j)

    T = float(math.ceil(0.5 + 2.0 / (math.pi * _SHANNON_TIME_THRESHOLD)))
    breaks = (-math.pi, math.pi)
    return _shannon_mother_psi, psi_hat, 2.0 * math.pi, False, T, breaks


def _meyer_window(x):
    # Simplest admissible Meyer window nu(x) = x on [0, 1].
    return np.clip(x, 0.0, 1.0)


def _meyer_father():
    two_thirds = 2.0 * math.pi / 3.0

    def psi_hat(lam):
        lam = np.abs(np.asarray(lam, dtype=float))
        ramp = _meyer_window(lam / two_thirds - 1.0)
        return np.where(lam <= 2.0 * two_thirds, np.cos(0.5 * math.pi * ramp), 0.0) + 0.0j

    breaks = (-two_thirds, two_thirds)
    return None, psi_hat, 2.0 * two_thirds, False, None, breaks


def _meyer_mother():
    two_thirds = 2.0 * math.pi / 3.0

    def psi_hat(lam):
        lam = np.asarray(lam, dtype=float)
        mag = np.abs(lam)
        rise = np.sin(0.5 * math.pi * _meyer_window(mag / two_thirds - 1.0))
        fall = np.cos(0.5 * math.pi * _meyer_window(mag / (2.0 * two_thirds) - 1.0))
        window = np.where(mag <= 4.0 * two_thirds, rise * fall, 0.0)
        return np.exp(-0.5j * lam) * window

    breaks = (
        -2.0 * two_thirds,
        -two_thirds,
        two_thirds,
        2.0 * two_thirds,
    )
    return None, psi_hat, 4.0 * two_thirds, False, None, breaks


def _mexican_hat(sigma):
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValueError("mexican-hat: sigma must be a positive real")
    amp_hat = math.sqrt(8.0 / 3.0) * math.pi**0.25 * sigma**2.5
    amp_t = 2.0 / (math.sqrt(3.0 * sigma) * math.pi**0.25)

    def psi(t):
        x = np.asarray(t, dtype=float) / sigma
        return amp_t * (1.0 - x * x) * np.exp(-0.5 * x * x)

    def psi_hat(lam):
        lam = np.asarray(lam, dtype=float)
        return amp_hat * lam * lam * np.exp(-0.5 * (sigma * lam) ** 2) + 0.0j

    # Smallest A with |psi_hat|^2 / peak < 1e-12 beyond it, by bisection
    # on the normalized tail (peak at lam = sqrt(2)/sigma).
    def tail(lam):
        x = sigma * lam
        return (x * x / 2.0) ** 2 * math.exp(2.0 - x * x) - 1e-12

    lo, hi = math.sqrt(2.0) / sigma, 20.0 / sigma
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tail(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    A_eff = hi

    def time_tail(x):
        return (x * x - 1.0) * math.exp(-0.5 * x * x) - _MEXICAN_TIME_THRESHOLD

    lo, hi = 2.0, 15.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if time_tail(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    T = float(math.ceil(hi * sigma))
    return psi, psi_hat, A_eff, True, T, ()


def builtin_filter(name, sigma=1.0):
    """Construct one of the built-in filters by name.

    ``sigma`` is the width parameter of the mexican-hat filter and is
    ignored by the others.  The moment constants c2 and c3 are computed
    by quadrature here, never hard-coded.
    """
    if name == "shannon-father":
        psi, psi_hat, A, eff, T, breaks = _shannon_father()
        used_sigma = None
    elif name == "shannon-mother":
        psi, psi_hat, A, eff, T, breaks = _shannon_mother()
        used_sigma = None
    elif name == "meyer-father":
        psi, psi_hat, A, eff, T, breaks = _meyer_father()
        used_sigma = None
    elif name == "meyer-mother":
        psi, psi_hat, A, eff, T, breaks = _meyer_mother()
        used_sigma = None
    elif name == "mexican-hat":
        psi, psi_hat, A, eff, T, breaks = _mexican_hat(float(sigma))
        used_sigma = float(sigma)
    else:
        raise ValueError(
            "unknown filter %r; choose one of %s" % (name, ", ".join(BUILTIN_FILTER_NAMES))
        )
    c2, c3 = _moments(psi_hat, A, breaks)
    return FilterSpec(
        name=name,
        psi=psi,
        psi_hat=psi_hat,
        band_limit_A=A,
        c2=c2,
        c3=c3,
        band_is_effective=eff,
        time_support=T,
        sigma=used_sigma,
        breakpoints=breaks,
    )


# ---------------------------------------------------------------------------
# Gegenbauer moving-average specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GegenbauerSpec:
    """Parameters of the Gegenbauer process (1 - 2uB + B^2)^d X = eps.

    The implied spectral pole sits at ``arccos(u)`` with long-memory
    exponent ``d``.  ``sigma_eps = 0`` is allowed and produces the
    degenerate all-zero path.
    """

    d: float
    u: float
    sigma_eps: float = 1.0
    truncation: int = 40

    def __post_init__(self):
        if not (0.0 < self.d < 0.5):
            raise ValueError("GegenbauerSpec: d must lie in (0, 1/2)")
        if not (abs(self.u) < 1.0):
            raise ValueError("GegenbauerSpec: u must satisfy |u| < 1")
        if not (self.sigma_eps >= 0.0 and math.isfinite(self.sigma_eps)):
            raise ValueError("GegenbauerSpec: sigma_eps must be non-negative")
        if int(self.truncation) < 1:
            raise ValueError("GegenbauerSpec: truncation must be >= 1")
        object.__setattr__(self, "truncation", int(self.truncation))

    @property
    def singularity(self):
        """Location arccos(u) of the implied spectral pole, in (0, pi)."""
        return math.acos(self.u)


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------


def model_from_json(doc):
    """Build a model from a configuration mapping (or JSON text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    family = doc.get("family")
    if family == "indicator":
        return indicator_model(doc["s0"], doc["alpha"], doc["M"])
    if family == "gegenbauer":
        return GegenbauerSpec(
            d=float(doc["d"]),
            u=float(doc["u"]),
            sigma_eps=float(doc.get("sigma_eps", 1.0)),
            truncation=int(doc.get("truncation", 40)),
        )
    raise ValueError(
        "model_from_json: unknown family %r (expected 'indicator' or 'gegenbauer')"
        % family
    )


def model_to_json(model):
    """Serialize an indicator model or Gegenbauer spec to a plain dict."""
    if isinstance(model, GegenbauerSpec):
        return {
            "family": "gegenbauer",
            "d": model.d,
            "u": model.u,
            "sigma_eps": model.sigma_eps,
            "truncation": model.truncation,
        }
    if isinstance(model, SpectralModel):
        if model.family != "indicator":
            raise ValueError(
                "model_to_json: only indicator models serialize; got %r"
                % model.family
            )
        return {
            "family": "indicator",
            "s0": model.s0,
            "alpha": model.alpha,
            "M": model.envelope,
        }
    raise TypeError("model_to_json: unsupported model type %r" % type(model).__name__)


def filter_from_json(doc):
    """Build a built-in filter from {'name': ..., 'sigma': ...}."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    return builtin_filter(doc["name"], sigma=float(doc.get("sigma", 1.0)))


def filter_to_json(filt):
    doc = {"name": filt.name}
    if filt.sigma is not None:
        doc["sigma"] = filt.sigma
    return doc
