"""Concrete carriers for probability measures on the nonnegative half-line.

A `Distribution` is a finite mixture of primitive components: point masses,
uniform densities, lognormal / gamma / exponential densities, and quantile
tables (step or piecewise-linear). Every component knows its exact mean, CDF,
atom masses and partial expectation ``pe(x) = integral of u over [0, x]``, so
the quantities downstream modules need (Lorenz values, tail moments, Robin
Hood shares) reduce to closed forms plus one generic quantile inversion.

Quantiles follow the left-continuous convention ``Q(p) = min{q >= 0 : F(q) >= p}``
on the domain [0, 1). In particular Q(0) = 0 for every distribution, because
F(0) >= 0 holds trivially. When no closed form applies, the quantile is found
by monotone bisection over the floats, returning the smallest double whose
computed CDF clears p; this keeps the Galois inequalities exact in floating
point, not merely approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import special as sp

from .quadrature import integrate

__all__ = [
    "MeanDomainError",
    "ZeroMeanError",
    "InfiniteMeanError",
    "Atom",
    "UniformDensity",
    "Exponential",
    "Gamma",
    "Lognormal",
    "QuantileTable",
    "Distribution",
    "atom",
    "uniform",
    "exponential",
    "gamma_dist",
    "lognormal",
    "discrete",
    "mixture",
    "rescale",
    "cdf",
    "quantile",
    "mean",
    "integral_quantile",
    "fsd_dominates",
    "sample",
    "require_member",
]

#: validation slack for weights and probabilities
WEIGHT_TOL = 1e-12


class MeanDomainError(ValueError):
    """The distribution's mean puts it outside the domain of index computations."""


class ZeroMeanError(MeanDomainError):
    """All mass sits at zero; Lorenz and index functionals are undefined."""


class InfiniteMeanError(MeanDomainError):
    """The mean diverges."""


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """Point mass at a nonnegative location."""

    location: float

    def __post_init__(self):
        loc = _check_finite("atom location", self.location)
        if loc < 0:
            raise ValueError(f"atom location must be >= 0, got {loc}")
        object.__setattr__(self, "location", loc)

    def mean(self) -> float:
        return self.location

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return (x >= self.location).astype(float)

    def mass_at(self, x: np.ndarray) -> np.ndarray:
        return (x == self.location).astype(float)

    def pe(self, x: np.ndarray) -> np.ndarray:
        return self.location * (x >= self.location)

    def quantile(self, p: np.ndarray) -> np.ndarray:
        return np.full_like(p, self.location)

    def x_breaks(self) -> tuple[float, ...]:
        return (self.location,)

    def sup_support(self) -> float:
        return self.location

    def support_hi(self, eps: float) -> float:
        return self.location

    def rescaled(self, alpha: float) -> "Atom":
        return Atom(alpha * self.location)

    def atoms(self):
        return ((self.location, 1.0),)


@dataclass(frozen=True)
class UniformDensity:
    """Uniform density on [a, b], 0 <= a < b."""

    a: float
    b: float

    def __post_init__(self):
        a = _check_finite("uniform lower end", self.a)
        b = _check_finite("uniform upper end", self.b)
        if a < 0 or b <= a:
            raise ValueError(f"uniform support needs 0 <= a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def mass_at(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def pe(self, x: np.ndarray) -> np.ndarray:
        xc = np.clip(x, self.a, self.b)
        return (xc * xc - self.a * self.a) / (2.0 * (self.b - self.a))

    def quantile(self, p: np.ndarray) -> np.ndarray:
        return self.a + p * (self.b - self.a)

    def x_breaks(self) -> tuple[float, ...]:
        return (self.a, self.b)

    def sup_support(self) -> float:
        return self.b

    def support_hi(self, eps: float) -> float:
        return self.b

    def rescaled(self, alpha: float) -> "UniformDensity":
        return UniformDensity(alpha * self.a, alpha * self.b)

    def atoms(self):
        return None


@dataclass(frozen=True)
class Exponential:
    """Exponential density with the given rate (mean 1/rate)."""

    rate: float

    def __post_init__(self):
        r = _check_finite("exponential rate", self.rate)
        if r <= 0:
            raise ValueError(f"exponential rate must be positive, got {r}")
        object.__setattr__(self, "rate", r)

    def mean(self) -> float:
        return 1.0 / self.rate

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return -np.expm1(-self.rate * np.maximum(x, 0.0))

    def mass_at(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def pe(self, x: np.ndarray) -> np.ndarray:
        xc = np.maximum(x, 0.0)
        return -np.expm1(-self.rate * xc) / self.rate - xc * np.exp(-self.rate * xc)

    def quantile(self, p: np.ndarray) -> np.ndarray:
        return -np.log1p(-p) / self.rate

    def x_breaks(self) -> tuple[float, ...]:
        return (0.0,)

    def sup_support(self) -> float:
        return math.inf

    def support_hi(self, eps: float) -> float:
        return -math.log(eps) / self.rate

    def rescaled(self, alpha: float) -> "Exponential":
        return Exponential(self.rate / alpha)

    def atoms(self):
        return None


@dataclass(frozen=True)
class Gamma:
    """Gamma density with shape k and scale theta (mean k * theta)."""

    shape: float
    scale: float

    def __post_init__(self):
        k = _check_finite("gamma shape", self.shape)
        t = _check_finite("gamma scale", self.scale)
        if k <= 0 or t <= 0:
            raise ValueError(f"gamma needs positive shape and scale, got ({k}, {t})")
        object.__setattr__(self, "shape", k)
        object.__setattr__(self, "scale", t)

    def mean(self) -> float:
        return self.shape * self.scale

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return sp.gammainc(self.shape, np.maximum(x, 0.0) / self.scale)

    def mass_at(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def pe(self, x: np.ndarray) -> np.ndarray:
        # integral of u * gamma(k, theta) density over [0, x], via the shape-(k+1) CDF
        return self.mean() * sp.gammainc(self.shape + 1.0, np.maximum(x, 0.0) / self.scale)

    def quantile(self, p: np.ndarray) -> np.ndarray:
        return self.scale * sp.gammaincinv(self.shape, p)

    def x_breaks(self) -> tuple[float, ...]:
        return (0.0,)

    def sup_support(self) -> float:
        return math.inf

    def support_hi(self, eps: float) -> float:
        return float(self.scale * sp.gammainccinv(self.shape, eps))

    def rescaled(self, alpha: float) -> "Gamma":
        return Gamma(self.shape, alpha * self.scale)

    def atoms(self):
        return None


@dataclass(frozen=True)
class Lognormal:
    """Lognormal: exp of a normal with the given log-mean and log-sd."""

    log_mean: float
    log_sd: float

    def __post_init__(self):
        m = _check_finite("lognormal log-mean", self.log_mean)
        s = _check_finite("lognormal log-sd", self.log_sd)
        if s <= 0:
            raise ValueError(f"lognormal log-sd must be positive, got {s}")
        object.__setattr__(self, "log_mean", m)
        object.__setattr__(self, "log_sd", s)

    def mean(self) -> float:
        return math.exp(self.log_mean + 0.5 * self.log_sd**2)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            z = (np.log(np.maximum(x, 0.0)) - self.log_mean) / self.log_sd
        return np.where(x > 0.0, sp.ndtr(z), 0.0)

    def mass_at(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def pe(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            z = (np.log(np.maximum(x, 0.0)) - self.log_mean - self.log_sd**2) / self.log_sd
        return np.where(x > 0.0, self.mean() * sp.ndtr(z), 0.0)

    def quantile(self, p: np.ndarray) -> np.ndarray:
        return np.exp(self.log_mean + self.log_sd * sp.ndtri(p))

    def x_breaks(self) -> tuple[float, ...]:
        return (0.0,)

    def sup_support(self) -> float:
        return math.inf

    def support_hi(self, eps: float) -> float:
        return math.exp(self.log_mean - self.log_sd * float(sp.ndtri(eps)))

    def rescaled(self, alpha: float) -> "Lognormal":
        return Lognormal(self.log_mean + math.log(alpha), self.log_sd)

    def atoms(self):
        return None


@dataclass(frozen=True)
class QuantileTable:
    """Quantile function given on a probability grid.

    Parameters
    ----------
    grid:
        Strictly increasing probabilities starting at 0, all < 1.
    values:
        Nondecreasing nonnegative quantile values, one per grid point.
    mode:
        "step" reads the table as a left-continuous step function, i.e. the
        finite-discrete measure placing mass ``grid[i+1] - grid[i]`` at
        ``values[i]`` (the last atom absorbs the remaining mass up to 1).
        "linear" interpolates between grid points, which realizes uniform
        slabs between consecutive distinct values and is the natural carrier
        for reconstructed Lorenz derivatives; past the last grid point it
        stays constant, an atom at the last value.
    """

    grid: tuple[float, ...]
    values: tuple[float, ...]
    mode: str = "step"

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        values = tuple(float(v) for v in self.values)
        if len(grid) != len(values) or not grid:
            raise ValueError("grid and values must be equal-length and nonempty")
        if grid[0] != 0.0:
            raise ValueError("quantile grid must start at 0")
        g = np.asarray(grid)
        v = np.asarray(values)
        if not np.all(np.isfinite(g)) or not np.all(np.isfinite(v)):
            raise ValueError("quantile table entries must be finite")
        if np.any(np.diff(g) <= 0) or grid[-1] >= 1.0:
            raise ValueError("quantile grid must be strictly increasing within [0, 1)")
        if np.any(v < 0) or np.any(np.diff(v) < 0):
            raise ValueError("quantile values must be nonnegative and nondecreasing")
        if self.mode not in ("step", "linear"):
            raise ValueError(f"unknown quantile table mode {self.mode!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @cached_property
    def _pieces(self):
        """Decompose into (slab_lo, slab_hi, slab_w) and (atom_loc, atom_w)."""
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        w = np.append(np.diff(g), 1.0 - g[-1])
        if self.mode == "step":
            return (np.empty(0), np.empty(0), np.empty(0), v, w)
        slab_lo, slab_hi, slab_w = [], [], []
        atom_loc, atom_w = [v[-1]], [1.0 - g[-1]]
        for i in range(len(g) - 1):
            if v[i + 1] > v[i]:
                slab_lo.append(v[i])
                slab_hi.append(v[i + 1])
                slab_w.append(w[i])
            else:
                atom_loc.append(v[i])
                atom_w.append(w[i])
        return (
            np.asarray(slab_lo),
            np.asarray(slab_hi),
            np.asarray(slab_w),
            np.asarray(atom_loc),
            np.asarray(atom_w),
        )

    def mean(self) -> float:
        slab_lo, slab_hi, slab_w, atom_loc, atom_w = self._pieces
        return float(np.dot(slab_w, 0.5 * (slab_lo + slab_hi)) + np.dot(atom_w, atom_loc))

    def cdf(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        slab_lo, slab_hi, slab_w, atom_loc, atom_w = self._pieces
        out = (x[..., None] >= atom_loc) @ atom_w
        if slab_lo.size:
            frac = np.clip(
                (x[..., None] - slab_lo) / (slab_hi - slab_lo), 0.0, 1.0
            )
            out = out + frac @ slab_w
        return np.minimum(out, 1.0)

    def mass_at(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        _, _, _, atom_loc, atom_w = self._pieces
        return (x[..., None] == atom_loc) @ atom_w

    def pe(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        slab_lo, slab_hi, slab_w, atom_loc, atom_w = self._pieces
        out = (x[..., None] >= atom_loc) @ (atom_w * atom_loc)
        if slab_lo.size:
            xc = np.clip(x[..., None], slab_lo, slab_hi)
            out = out + ((xc * xc - slab_lo * slab_lo) / (2.0 * (slab_hi - slab_lo))) @ slab_w
        return out

    def quantile(self, p: np.ndarray) -> np.ndarray:
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        if self.mode == "linear":
            return np.interp(p, g, v)
        idx = np.maximum(np.searchsorted(g, p, side="left") - 1, 0)
        return v[idx]

    def x_breaks(self) -> tuple[float, ...]:
        return tuple(np.unique(np.asarray(self.values)))

    def sup_support(self) -> float:
        return self.values[-1]

    def support_hi(self, eps: float) -> float:
        return self.values[-1]

    def rescaled(self, alpha: float) -> "QuantileTable":
        return QuantileTable(self.grid, tuple(alpha * v for v in self.values), self.mode)

    def atoms(self):
        if self.mode != "step":
            return None
        g = np.asarray(self.grid)
        w = np.append(np.diff(g), 1.0 - g[-1])
        return tuple(zip(self.values, w))


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Distribution:
    """Finite mixture of components, normalized to total mass 1.

    `parts` is a tuple of (weight, component) pairs. Components are duck
    typed; anything exposing the small protocol used above (mean, cdf, pe,
    mass_at, quantile, x_breaks, sup_support, support_hi, rescaled, atoms)
    participates, which is how the KDE estimator plugs in its cut kernel
    mixture without this module knowing about it.
    """

    parts: tuple[tuple[float, object], ...]

    def __post_init__(self):
        parts = tuple((float(w), c) for (w, c) in self.parts)
        if not parts:
            raise ValueError("a distribution needs at least one component")
        total = 0.0
        for w, _ in parts:
            if not math.isfinite(w) or w <= 0:
                raise ValueError(f"component weights must be positive, got {w}")
            total += w
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"component weights must sum to 1, got {total!r}")
        object.__setattr__(self, "parts", parts)

    # -- structure ---------------------------------------------------------

    @cached_property
    def _discrete(self):
        """(support, weights, cumweights) when purely atomic, else None."""
        locs, masses = [], []
        for w, comp in self.parts:
            at = comp.atoms()
            if at is None:
                return None
            for loc, m in at:
                locs.append(loc)
                masses.append(w * m)
        locs = np.asarray(locs)
        masses = np.asarray(masses)
        order = np.argsort(locs, kind="stable")
        locs, masses = locs[order], masses[order]
        support, start = np.unique(locs, return_index=True)
        weights = np.add.reduceat(masses, start)
        cum = np.cumsum(weights)
        cum[-1] = 1.0
        return support, weights, cum

    @property
    def is_finite_discrete(self) -> bool:
        return self._discrete is not None

    def support_atoms(self):
        """Sorted (support, weights) arrays for purely atomic distributions."""
        if self._discrete is None:
            raise ValueError("not a finite-discrete distribution")
        support, weights, _ = self._discrete
        return support.copy(), weights.copy()

    @cached_property
    def mean(self) -> float:
        m = 0.0
        for w, comp in self.parts:
            m += w * comp.mean()
        if not math.isfinite(m):
            raise InfiniteMeanError("mean diverges")
        return m

    def x_breakpoints(self) -> np.ndarray:
        """Sorted abscissae where the CDF may jump or change analytic form."""
        if self._discrete is not None:
            return self._discrete[0].copy()
        pts = np.concatenate([np.asarray(comp.x_breaks()) for _, comp in self.parts])
        return np.unique(pts[np.isfinite(pts)])

    def p_breakpoints(self) -> np.ndarray:
        """Probabilities where the quantile may jump or change analytic form."""
        if self._discrete is not None:
            _, _, cum = self._discrete
            ps = np.concatenate([[0.0], cum])
        else:
            xb = self.x_breakpoints()
            ps = np.concatenate([[0.0, 1.0], self._cdf_arr(xb), self.cdf_left(xb)])
        return np.unique(np.clip(ps, 0.0, 1.0))

    def sup_support(self) -> float:
        return max(comp.sup_support() for _, comp in self.parts)

    def support_hi(self, eps: float = 1e-12) -> float:
        """A finite abscissa beyond which survival mass is at most eps."""
        return max(comp.support_hi(eps) for _, comp in self.parts)

    # -- pointwise evaluations ---------------------------------------------

    def _cdf_arr(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._discrete is not None:
            support, _, cum = self._discrete
            idx = np.searchsorted(support, x, side="right")
            padded = np.concatenate([[0.0], cum])
            return padded[idx]
        out = np.zeros_like(x)
        for w, comp in self.parts:
            out = out + w * comp.cdf(x)
        return np.minimum(out, 1.0)

    def cdf(self, x) -> float | np.ndarray:
        """P[X <= x]; right-continuous. Rejects negative abscissae."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("cdf is defined for finite x >= 0")
        out = self._cdf_arr(arr)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def _mass_arr(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._discrete is not None:
            support, weights, _ = self._discrete
            idx = np.minimum(np.searchsorted(support, x), support.size - 1)
            return np.where(support[idx] == x, weights[idx], 0.0)
        out = np.zeros_like(x)
        for w, comp in self.parts:
            out = out + w * comp.mass_at(x)
        return out

    def mass_at(self, x) -> float | np.ndarray:
        arr = np.asarray(x, dtype=float)
        out = self._mass_arr(arr)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def cdf_left(self, x) -> float | np.ndarray:
        """P[X < x], the left limit of the CDF."""
        arr = np.asarray(x, dtype=float)
        out = np.maximum(self._cdf_arr(arr) - self._mass_arr(arr), 0.0)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def survival(self, x) -> float | np.ndarray:
        arr = np.asarray(x, dtype=float)
        out = np.maximum(1.0 - self._cdf_arr(arr), 0.0)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def partial_expectation(self, x) -> float | np.ndarray:
        """Integral of u over [0, x] against the measure (atom at x included)."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0):
            raise ValueError("partial expectation is defined for x >= 0")
        if self._discrete is not None:
            support, weights, _ = self._discrete
            cwv = np.concatenate([[0.0], np.cumsum(weights * support)])
            out = cwv[np.searchsorted(support, arr, side="right")]
        else:
            out = np.zeros_like(arr)
            for w, comp in self.parts:
                out = out + w * comp.pe(arr)
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def partial_expectation_left(self, x) -> float | np.ndarray:
        """Integral of u over [0, x), excluding any atom at x."""
        arr = np.asarray(x, dtype=float)
        out = np.maximum(
            np.asarray(self.partial_expectation(arr)) - arr * self._mass_arr(arr), 0.0
        )
        return float(out) if np.isscalar(x) or arr.ndim == 0 else out

    def tail_moment(self, alpha: float) -> float:
        """Integral of x over (alpha, infinity): the first moment above alpha."""
        if alpha < 0:
            raise ValueError("tail threshold must be >= 0")
        return max(self.mean - self.partial_expectation(float(alpha)), 0.0)

    # -- quantiles ----------------------------------------------------------

    def _quantile_arr(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        out = np.zeros_like(p)
        pos = p > 0.0
        if not np.any(pos):
            return out
        pp = p[pos]
        if self._discrete is not None:
            support, _, cum = self._discrete
            out[pos] = support[np.searchsorted(cum, pp, side="left")]
            return out
        if len(self.parts) == 1:
            q = self.parts[0][1].quantile(pp)
            if q is not None:
                out[pos] = q
                return out
        out[pos] = self._bisect_quantile(pp)
        return out

    def _bisect_quantile(self, p: np.ndarray) -> np.ndarray:
        """Smallest floats q with computed cdf(q) >= p, elementwise; p in (0, 1)."""
        pmax = float(p.max())
        eps = min(1e-16, max((1.0 - pmax) / 4.0, 1e-300))
        hi_val = max(self.support_hi(eps), 0.0)
        while hi_val > 0.0 and float(self._cdf_arr(np.asarray([hi_val]))[0]) < pmax:
            hi_val *= 2.0
        lo = np.zeros_like(p)
        hi = np.full_like(p, hi_val)
        at_zero = self._cdf_arr(lo) >= p
        hi[at_zero] = 0.0
        active = ~at_zero
        while True:
            nxt = np.nextafter(lo, hi)
            can = active & (nxt < hi)
            if not can.any():
                break
            mid = 0.5 * (lo[can] + hi[can])
            mid = np.minimum(np.maximum(mid, nxt[can]), np.nextafter(hi[can], lo[can]))
            ge = self._cdf_arr(mid) >= p[can]
            hi_c = hi[can]
            lo_c = lo[can]
            hi_c[ge] = mid[ge]
            lo_c[~ge] = mid[~ge]
            hi[can] = hi_c
            lo[can] = lo_c
        return hi

    def quantile(self, p) -> float | np.ndarray:
        """Left-continuous quantile Q(p) on [0, 1)."""
        arr = np.asarray(p, dtype=float)
        if np.any(arr < 0.0) or np.any(arr >= 1.0) or not np.all(np.isfinite(arr)):
            raise ValueError("quantile is defined on [0, 1)")
        out = self._quantile_arr(arr)
        return float(out) if np.isscalar(p) or arr.ndim == 0 else out

    def integral_quantile(self, p: float) -> float:
        """Integral of Q over [0, p], 0 <= p <= 1; equals the mean at p = 1."""
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError("integral_quantile is defined on [0, 1]")
        if p == 0.0:
            return 0.0
        if p == 1.0:
            return self.mean
        if self._discrete is not None:
            support, weights, cum = self._discrete
            j = int(np.searchsorted(cum, p, side="left"))
            head = np.concatenate([[0.0], np.cumsum(weights * support)])[j]
            prev = 0.0 if j == 0 else float(cum[j - 1])
            return float(head + (p - prev) * support[j])
        qp = float(self._quantile_arr(np.asarray(p)))
        if qp == 0.0:
            return 0.0
        breaks = self.x_breakpoints()
        return integrate(
            lambda x: p - self._cdf_arr(x), 0.0, qp, points=breaks, tol=1e-10
        )

    def mean_routes(self) -> tuple[float, float]:
        """The two integral representations of the mean.

        Returns (survival-function route, quantile route). Both are quadrature
        based and independent of the cached closed-form mean; they exist to be
        cross-checked against it.
        """
        hi = self.support_hi(1e-14)
        via_survival = integrate(
            lambda x: 1.0 - self._cdf_arr(x), 0.0, hi, points=self.x_breakpoints(), tol=1e-10
        )
        p_hi = 1.0 - 2.0**-40
        via_quantile = integrate(
            self._quantile_arr, 0.0, p_hi, points=self.p_breakpoints(), tol=1e-10
        )
        return via_survival, via_quantile

    # -- transforms ----------------------------------------------------------

    def rescaled(self, alpha: float) -> "Distribution":
        alpha = float(alpha)
        if not math.isfinite(alpha) or alpha <= 0:
            raise ValueError(f"rescale factor must be positive, got {alpha}")
        return Distribution(tuple((w, comp.rescaled(alpha)) for w, comp in self.parts))

    def sample(self, seed: int, n: int) -> np.ndarray:
        """Inverse-transform sample: Q applied to n uniform draws from `seed`."""
        if n < 1:
            raise ValueError("sample size must be >= 1")
        rng = np.random.default_rng(seed)
        return self.sample_rng(rng, n)

    def sample_rng(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self._quantile_arr(rng.random(n))


# ---------------------------------------------------------------------------
# constructors and module-level operations
# ---------------------------------------------------------------------------


def atom(location: float) -> Distribution:
    return Distribution(((1.0, Atom(location)),))


def uniform(a: float, b: float) -> Distribution:
    return Distribution(((1.0, UniformDensity(a, b)),))


def exponential(rate: float) -> Distribution:
    return Distribution(((1.0, Exponential(rate)),))


def gamma_dist(shape: float, scale: float) -> Distribution:
    return Distribution(((1.0, Gamma(shape, scale)),))


def lognormal(log_mean: float, log_sd: float) -> Distribution:
    return Distribution(((1.0, Lognormal(log_mean, log_sd)),))


def discrete(values, weights=None) -> Distribution:
    """Finite-discrete distribution from atom locations and weights.

    With `weights` omitted the values are read as an equally weighted sample.
    Duplicate locations are merged.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValueError("a discrete distribution needs at least one atom")
    if weights is None:
        weights = [1.0 / len(values)] * len(values)
    weights = [float(w) for w in weights]
    if len(values) != len(weights):
        raise ValueError("values and weights must have equal length")
    return Distribution(tuple((w, Atom(v)) for v, w in zip(values, weights)))


def quantile_table(grid, values, mode: str = "step") -> Distribution:
    return Distribution(((1.0, QuantileTable(tuple(grid), tuple(values), mode)),))


def mixture(parts) -> Distribution:
    """Weighted mixture of distributions, flattened to one component list."""
    flat: list[tuple[float, object]] = []
    total = 0.0
    for w, d in parts:
        w = float(w)
        if w <= 0:
            raise ValueError(f"mixture weights must be positive, got {w}")
        total += w
        if isinstance(d, Distribution):
            flat.extend((w * wi, comp) for wi, comp in d.parts)
        else:
            flat.append((w, d))
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ValueError(f"mixture weights must sum to 1, got {total!r}")
    return Distribution(tuple(flat))


def rescale(d: Distribution, alpha: float) -> Distribution:
    return d.rescaled(alpha)


def cdf(d: Distribution, x):
    return d.cdf(x)


def quantile(d: Distribution, p):
    return d.quantile(p)


def mean(d: Distribution) -> float:
    return d.mean


def integral_quantile(d: Distribution, p: float) -> float:
    return d.integral_quantile(p)


def sample(d: Distribution, seed: int, n: int) -> np.ndarray:
    return d.sample(seed, n)


def require_member(d: Distribution) -> Distribution:
    """Check membership in the index domain: finite nonzero mean."""
    if d.mean == 0.0:
        raise ZeroMeanError(
            "all mass at zero: Lorenz and inequality indices are undefined"
        )
    return d


def _dyadic_ladder(levels: int = 10) -> np.ndarray:
    pts = [k / 2.0**lvl for lvl in range(1, levels + 1) for k in range(1, 2**lvl, 2)]
    return np.unique(np.asarray([0.0] + pts))


def fsd_dominates(d1: Distribution, d2: Distribution, grid: int = 256) -> bool:
    """First-order stochastic dominance of d1 over d2.

    Checked on two routes that must agree: F_{d1} <= F_{d2} on an abscissa
    ladder, and Q_{d1} >= Q_{d2} on a probability ladder. The ladders join
    both operands' breakpoints with uniform and dyadic probes.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    hi = max(d1.support_hi(1e-9), d2.support_hi(1e-9))
    xs = np.unique(
        np.concatenate(
            [d1.x_breakpoints(), d2.x_breakpoints(), np.linspace(0.0, hi, grid)]
        )
    )
    cdf_route = bool(np.all(d1._cdf_arr(xs) <= d2._cdf_arr(xs)))
    ps = np.unique(
        np.concatenate([d1.p_breakpoints(), d2.p_breakpoints(), _dyadic_ladder()])
    )
    ps = ps[ps < 1.0]
    quantile_route = bool(np.all(d1._quantile_arr(ps) >= d2._quantile_arr(ps)))
    if cdf_route != quantile_route:
        raise RuntimeError(
            "stochastic dominance routes disagree: "
            f"cdf route {cdf_route}, quantile route {quantile_route}"
        )
    return cdf_route
