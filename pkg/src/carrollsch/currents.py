"""Bridging the two continuity equations.

The Carroll continuity law turns into the Schrodinger one after two moves:
a unitary gauge factor strips the explicit potential from the density, and
the coordinate inversion (x, ct) -> (ct, x) swaps the roles of the axes.
Both moves are exact at the level of samples (unit-modulus phase, index
transpose), so the only numerics left is the derivative residual itself.
"""
from __future__ import annotations

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .constants import PhysicalConstants, NATURAL
from .numerics import GridError, TimeGrid
from .operators import MARGIN, Field2D, _d1
from .potentials import PotentialSpec


def schrodinger_density_current(
    psi: Field2D, constants: PhysicalConstants = NATURAL
) -> tuple[np.ndarray, np.ndarray]:
    """rho = |psi|^2 and J = (i hbar/2m)(psi dx psi* - psi* dx psi).

    J reduces to (hbar/m) Im(psi* dx psi); the x derivative is the 4th-order
    stencil shared with the operator module, so the continuity residual of an
    exact solution converges at the scheme order.
    """
    hbar, m = constants.hbar, constants.m
    rho = np.abs(psi.values) ** 2
    dpsi = _d1(psi.values, psi.x_grid.dt, 0)
    j = hbar / m * np.imag(np.conj(psi.values) * dpsi)
    return rho, j


def _phase_integral(
    v: PotentialSpec, x: np.ndarray, t_grid: TimeGrid, t0: float
) -> np.ndarray:
    """int_{t0}^{t} V(x, tau) dtau on the tensor grid, shaped (n_x, n_t)."""
    t = t_grid.times
    V = v.v_xt(x, t)
    F = cumulative_trapezoid(V, t, axis=1, initial=0.0)
    idx = int(np.argmin(np.abs(t - t0)))
    if abs(t[idx] - t0) > 1e-9 * max(1.0, abs(t0)):
        raise GridError(f"anchor {t0} is not a grid point")
    return F - F[:, idx][:, None]


def gauge_remove(
    psi: Field2D,
    v_car: PotentialSpec,
    t0: float,
    constants: PhysicalConstants = NATURAL,
) -> Field2D:
    """Phi = exp[-(i/hbar) int_{t0}^t V_car(x,tau) dtau] psi.

    Unit-modulus factor: |Phi| = |psi| exactly.  The density built from Phi
    carries no explicit potential term.
    """
    phase = _phase_integral(v_car, psi.x_grid.times, psi.t_grid, t0)
    vals = np.exp(-1j / constants.hbar * phase) * psi.values
    return Field2D(psi.x_grid, psi.t_grid, vals)


def coordinate_inversion(
    field: Field2D, constants: PhysicalConstants = NATURAL
) -> Field2D:
    """(x, ct) -> (ct, x): exact index transpose onto the rescaled grids.

    Requires a square grid with dx = c dt so the transposed grid is again
    uniform and no interpolation happens.  Involutive up to the c-rescaling.
    """
    c = constants.c
    xg, tg = field.x_grid, field.t_grid
    if xg.n != tg.n:
        raise GridError("coordinate inversion needs n_x = n_t")
    if abs(xg.dt - c * tg.dt) > 1e-12 * max(xg.dt, c * tg.dt):
        raise GridError("coordinate inversion needs dx = c dt")
    new_x = TimeGrid(c * tg.t_min, c * tg.t_max, tg.n)
    new_t = TimeGrid(xg.t_min / c, xg.t_max / c, xg.n)
    return Field2D(new_x, new_t, field.values.T.copy())


def continuity_equivalence(
    psi_car: Field2D,
    constants: PhysicalConstants = NATURAL,
    v_car: PotentialSpec | None = None,
    t0: float | None = None,
    margin: int = MARGIN,
) -> float:
    """Schrodinger-form continuity residual of a transformed Carroll field.

    Gauge-removes the potential (if any), applies the coordinate inversion,
    then evaluates max |d_t' rho + d_x' J| on interior samples with rho, J
    from schrodinger_density_current.  Converges to zero under refinement
    when psi_car solves the Carroll equation.
    """
    f = psi_car
    if v_car is not None and v_car.kind != "zero":
        f = gauge_remove(f, v_car, psi_car.t_grid.t_min if t0 is None else t0, constants)
    f = coordinate_inversion(f, constants)
    rho, j = schrodinger_density_current(f, constants)
    res = _d1(rho, f.t_grid.dt, 1) + _d1(j, f.x_grid.dt, 0)
    core = res[margin:-margin, margin:-margin]
    return float(np.max(np.abs(core)))
