"""Shared numerical substrate.

Uniform grids with a periodic (endpoint-excluded) convention, the unitary
discrete Fourier transform, fixed-step RK4 integration of y'' + q(x) y = 0,
finite-difference Schwarzian derivatives, monotone inversion and cumulative
quadrature.  Everything here is a pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline


class GridError(ValueError):
    """Invalid grid construction or use."""


class SingularPointError(ValueError):
    """Derivative-based evaluation at a critical point."""


class MonotoneError(ValueError):
    """Monotone inversion preconditions violated."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform periodic-convention grid: samples t_k = t_min + k dt, k < n.

    The endpoint t_max is excluded so the DFT sees one full period.
    """

    t_min: float
    t_max: float
    n: int

    def __post_init__(self) -> None:
        if not (self.t_max > self.t_min):
            raise GridError(f"degenerate interval [{self.t_min}, {self.t_max}]")
        if self.n < 8 or not _is_power_of_two(self.n):
            raise GridError(f"n must be a power of two >= 8, got {self.n}")

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / self.n

    @property
    def times(self) -> np.ndarray:
        return self.t_min + self.dt * np.arange(self.n)

    @property
    def omegas(self) -> np.ndarray:
        """Angular frequencies in standard wrap-around (fftfreq) order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, self.dt)


def make_uniform_grid(t_min: float, t_max: float, n: int) -> TimeGrid:
    return TimeGrid(float(t_min), float(t_max), int(n))


@dataclass(frozen=True)
class ComplexSignal:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("signal contains non-finite samples")

    def norm(self) -> float:
        """Discrete L2 norm with the grid measure dt."""
        return float(np.sqrt(self.grid.dt * np.sum(np.abs(self.values) ** 2)))


def unitary_dft(signal: ComplexSignal) -> np.ndarray:
    """Unitary DFT (1/sqrt(n) per direction); wrap-around frequency order."""
    return np.fft.fft(signal.values, norm="ortho")


def unitary_idft(freq: np.ndarray, grid: TimeGrid) -> ComplexSignal:
    return ComplexSignal(grid, np.fft.ifft(np.asarray(freq, dtype=complex), norm="ortho"))


@dataclass(frozen=True)
class FundamentalPair:
    """Fundamental system of y'' + q(x) y = 0 with Wronskian one.

    y1 has initial data (1, 0) and y2 has (0, 1) at the left endpoint; with
    no first-derivative term the Wronskian y1 y2' - y1' y2 is constant.
    """

    x: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    y1_prime: np.ndarray
    y2_prime: np.ndarray
    q: np.ndarray = field(repr=False, default=None)

    @property
    def wronskian(self) -> np.ndarray:
        return self.y1 * self.y2_prime - self.y1_prime * self.y2


def integrate_fundamental_pair(
    q: Callable[[np.ndarray], np.ndarray],
    x_lo: float,
    x_hi: float,
    n: int,
) -> FundamentalPair:
    """Integrate y'' + q(x) y = 0 with fixed-step classical RK4.

    Returns n + 1 samples on [x_lo, x_hi] inclusive.
    """
    if not x_hi > x_lo:
        raise ValueError("x_hi must exceed x_lo")
    h = (x_hi - x_lo) / n
    xs = x_lo + h * np.arange(n + 1)

    def qv(x: float) -> float:
        val = q(np.asarray(x))
        val = complex(val) if np.iscomplexobj(np.asarray(val)) else float(val)
        if not np.isfinite(val):
            raise ValueError(f"q evaluates non-finite at x = {x}")
        return val

    # state: (y1, y1', y2, y2')
    y = np.zeros((n + 1, 4))
    y[0] = (1.0, 0.0, 0.0, 1.0)

    def rhs(x: float, s: np.ndarray) -> np.ndarray:
        qx = qv(x)
        return np.array([s[1], -qx * s[0], s[3], -qx * s[2]])

    s = y[0].copy()
    for k in range(n):
        x = xs[k]
        k1 = rhs(x, s)
        k2 = rhs(x + 0.5 * h, s + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h, s + 0.5 * h * k2)
        k4 = rhs(x + h, s + h * k3)
        s = s + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        y[k + 1] = s

    return FundamentalPair(
        x=xs,
        y1=y[:, 0],
        y1_prime=y[:, 1],
        y2=y[:, 2],
        y2_prime=y[:, 3],
        q=np.array([q(np.asarray(x)) for x in xs], dtype=float),
    )


def _schwarzian_step(x: float) -> float:
    return max(1e-4 * abs(x), 1e-4)


def schwarzian(f: Callable[[float], complex], x: float, h: float | None = None) -> complex:
    """Schwarzian derivative f'''/f' - 1.5 (f''/f')^2 by 4th-order stencils."""
    if h is None:
        h = _schwarzian_step(x)
    offs = np.arange(-3, 4)
    fv = np.array([f(x + k * h) for k in offs], dtype=complex)
    # 4th-order central stencils on 7 points
    f1 = (fv[1] - 8 * fv[2] + 8 * fv[4] - fv[5]) / (12 * h)
    f2 = (-fv[1] + 16 * fv[2] - 30 * fv[3] + 16 * fv[4] - fv[5]) / (12 * h * h)
    f3 = (fv[0] - 8 * fv[1] + 13 * fv[2] - 13 * fv[4] + 8 * fv[5] - fv[6]) / (8 * h**3)
    if abs(f1) < 1e-10:
        raise SingularPointError(f"f'({x}) below threshold; Schwarzian undefined")
    return f3 / f1 - 1.5 * (f2 / f1) ** 2


def deriv_uniform(values: np.ndarray, dx: float, order: int = 1) -> np.ndarray:
    """Derivative of uniformly sampled values.

    4th-order central differences in the interior, one-sided 2nd-order at the
    edges.  Supports order 1, 2, 3.
    """
    v = np.asarray(values)
    n = v.shape[0]
    out = np.empty_like(v, dtype=complex if np.iscomplexobj(v) else float)
    if order == 1:
        if n < 7:
            raise ValueError("need at least 7 samples")
        out[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * dx)
        for i in (0, 1):
            out[i] = (-3 * v[i] + 4 * v[i + 1] - v[i + 2]) / (2 * dx)
        for i in (n - 2, n - 1):
            out[i] = (3 * v[i] - 4 * v[i - 1] + v[i - 2]) / (2 * dx)
    elif order == 2:
        if n < 7:
            raise ValueError("need at least 7 samples")
        out[2:-2] = (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2] + 16 * v[3:-1] - v[4:]) / (12 * dx * dx)
        for i in (0, 1):
            out[i] = (2 * v[i] - 5 * v[i + 1] + 4 * v[i + 2] - v[i + 3]) / dx**2
        for i in (n - 2, n - 1):
            out[i] = (2 * v[i] - 5 * v[i - 1] + 4 * v[i - 2] - v[i - 3]) / dx**2
    elif order == 3:
        if n < 9:
            raise ValueError("need at least 9 samples")
        out[3:-3] = (
            v[:-6] - 8 * v[1:-5] + 13 * v[2:-4] - 13 * v[4:-2] + 8 * v[5:-1] - v[6:]
        ) / (8 * dx**3)
        # 2nd-order one-sided third derivative
        for i in range(3):
            out[i] = (
                -2.5 * v[i] + 9 * v[i + 1] - 12 * v[i + 2] + 7 * v[i + 3] - 1.5 * v[i + 4]
            ) / dx**3
        for i in range(n - 3, n):
            out[i] = (
                2.5 * v[i] - 9 * v[i - 1] + 12 * v[i - 2] - 7 * v[i - 3] + 1.5 * v[i - 4]
            ) / dx**3
    else:
        raise ValueError("order must be 1, 2 or 3")
    return out


def schwarzian_samples(values: np.ndarray, dx: float) -> np.ndarray:
    """Schwarzian of a sampled function; trustworthy on interior points only."""
    f1 = deriv_uniform(values, dx, 1)
    f2 = deriv_uniform(values, dx, 2)
    f3 = deriv_uniform(values, dx, 3)
    return f3 / f1 - 1.5 * (f2 / f1) ** 2


def invert_monotone(
    f,
    target: float,
    lo: float | None = None,
    hi: float | None = None,
    xs: np.ndarray | None = None,
    tol: float = 1e-10,
) -> float:
    """Solve f(x) = target for strictly monotone f.

    Either a callable with bracket [lo, hi], or samples (xs, f) where `f` is
    the sampled array; the sampled path goes through a cubic interpolant.
    Bracketed bisection refined by linear interpolation; deterministic
    midpoint tie-break on plateaus.
    """
    if xs is not None:
        ys = np.asarray(f, dtype=float)
        xs = np.asarray(xs, dtype=float)
        d = np.diff(ys)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise MonotoneError("samples are not strictly monotone")
        spline = CubicSpline(xs, ys)
        return invert_monotone(lambda x: float(spline(x)), target, xs[0], xs[-1], tol=tol)

    if lo is None or hi is None:
        raise ValueError("callable inversion needs a bracket [lo, hi]")
    f_lo, f_hi = f(lo), f(hi)
    scale = max(abs(f_lo), abs(f_hi), 1.0)
    a, b, fa, fb = lo, hi, f_lo - target, f_hi - target
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if fa * fb > 0:
        raise MonotoneError(f"target {target} outside range [{f_lo}, {f_hi}]")
    if abs(fa) < 1e-14 * scale and abs(fb) < 1e-14 * scale:
        return 0.5 * (a + b)  # plateau: deterministic midpoint
    for _ in range(200):
        # bisection step with a secant refinement once the bracket is tight
        m = 0.5 * (a + b)
        fm = f(m) - target
        if abs(fm) <= tol * scale:
            return float(m)
        if (b - a) < 1e-15 * max(1.0, abs(m)):
            break
        if fa * fm <= 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    # final secant refinement inside the bracket
    if fb != fa:
        x = a - fa * (b - a) / (fb - fa)
        if a <= x <= b:
            return float(x)
    return float(0.5 * (a + b))


def cumulative_integral(
    values: np.ndarray, grid: TimeGrid | np.ndarray, anchor: float
) -> np.ndarray:
    """Composite-trapezoid antiderivative vanishing at the anchor grid point."""
    ts = grid.times if isinstance(grid, TimeGrid) else np.asarray(grid, dtype=float)
    v = np.asarray(values)
    if not (ts[0] - 1e-12 <= anchor <= ts[-1] + 1e-12):
        raise GridError(f"anchor {anchor} outside grid [{ts[0]}, {ts[-1]}]")
    F = cumulative_trapezoid(v, ts, initial=0.0)
    idx = int(np.argmin(np.abs(ts - anchor)))
    if abs(ts[idx] - anchor) > 1e-9 * max(1.0, abs(anchor)):
        raise GridError(f"anchor {anchor} is not a grid point")
    return F - F[idx]
