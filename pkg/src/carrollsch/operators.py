"""Discrete constraint operators and their compatibility test.

The Schrodinger constraint H = p^2/2m + V_sch - E (p = -i hbar d/dx,
E = +i hbar d/dt) and the Carroll constraint F = c p~ - (E~ - V_car)^2 / 2mc^2
(p~ = +i hbar d/dx, E~ = -i hbar d/dt) are realized with 4th-order central
differences.  The squared operator is applied literally twice, so the cross
term i hbar (dV_car/dt) appears automatically.

Boundary rings polluted by the stencils are excluded from all norms; the
`margin` constant below is wide enough for the doubly-applied operators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants, NATURAL
from .numerics import TimeGrid
from .potentials import PotentialSpec

#: boundary ring (per side, per axis) excluded from operator norms
MARGIN = 8


@dataclass(frozen=True)
class Field2D:
    x_grid: TimeGrid
    t_grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", v)
        if v.shape != (self.x_grid.n, self.t_grid.n):
            raise ValueError(
                f"values shape {v.shape} != ({self.x_grid.n}, {self.t_grid.n})"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite entries")

    def interior(self, margin: int = MARGIN) -> np.ndarray:
        return self.values[margin:-margin, margin:-margin]


def _d1_axis0(v: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    out[:2] = (-3 * v[:2] + 4 * v[1:3] - v[2:4]) / (2 * h)
    out[-2:] = (3 * v[-2:] - 4 * v[-3:-1] + v[-4:-2]) / (2 * h)
    return out


def _d2_axis0(v: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(v)
    out[2:-2] = (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2] + 16 * v[3:-1] - v[4:]) / (12 * h * h)
    out[:2] = (2 * v[:2] - 5 * v[1:3] + 4 * v[2:4] - v[3:5]) / (h * h)
    out[-2:] = (2 * v[-2:] - 5 * v[-3:-1] + 4 * v[-4:-2] - v[-5:-3]) / (h * h)
    return out


def _d1(v: np.ndarray, h: float, axis: int) -> np.ndarray:
    """4th-order first derivative; 2nd-order one-sided at the edges."""
    if axis == 0:
        return _d1_axis0(v, h)
    return _d1_axis0(v.T, h).T


def _d2(v: np.ndarray, h: float, axis: int) -> np.ndarray:
    if axis == 0:
        return _d2_axis0(v, h)
    return _d2_axis0(v.T, h).T


def apply_H(
    psi: Field2D, v_sch: PotentialSpec, constants: PhysicalConstants = NATURAL
) -> Field2D:
    """H psi = -(hbar^2/2m) psi_xx + V_sch psi - i hbar psi_t."""
    if psi.x_grid.n < 16 or psi.t_grid.n < 16:
        raise ValueError("grid too coarse for 4th-order stencils (need n >= 16)")
    hbar, m = constants.hbar, constants.m
    V = v_sch.v_xt(psi.x_grid.times, psi.t_grid.times)
    out = (
        -(hbar**2) / (2 * m) * _d2(psi.values, psi.x_grid.dt, 0)
        + V * psi.values
        - 1j * hbar * _d1(psi.values, psi.t_grid.dt, 1)
    )
    return Field2D(psi.x_grid, psi.t_grid, out)


def apply_F(
    psi: Field2D, v_car: PotentialSpec, constants: PhysicalConstants = NATURAL
) -> Field2D:
    """F psi = c (i hbar psi_x) - (E~ - V_car)^2 psi / (2 m c^2).

    (E~ - V_car) psi = -i hbar psi_t - V_car psi, applied literally twice.
    """
    if psi.x_grid.n < 16 or psi.t_grid.n < 16:
        raise ValueError("grid too coarse for 4th-order stencils (need n >= 16)")
    hbar, m, c = constants.hbar, constants.m, constants.c
    V = v_car.v_xt(psi.x_grid.times, psi.t_grid.times)

    def a(v: np.ndarray) -> np.ndarray:
        return -1j * hbar * _d1(v, psi.t_grid.dt, 1) - V * v

    out = c * 1j * hbar * _d1(psi.values, psi.x_grid.dt, 0) - a(a(psi.values)) / (
        2 * m * c**2
    )
    return Field2D(psi.x_grid, psi.t_grid, out)


def gaussian_probes(x_grid: TimeGrid, t_grid: TimeGrid) -> list[Field2D]:
    """Three deterministic Gaussian bumps, compactly supported inside the grid."""
    X, T = np.meshgrid(x_grid.times, t_grid.times, indexing="ij")
    lx = x_grid.t_max - x_grid.t_min
    lt = t_grid.t_max - t_grid.t_min
    cx, ct = x_grid.t_min + 0.5 * lx, t_grid.t_min + 0.5 * lt
    specs = [
        (cx, ct, 0.10 * lx, 0.10 * lt, 0.3, -0.2),
        (cx - 0.08 * lx, ct + 0.05 * lt, 0.07 * lx, 0.12 * lt, -0.5, 0.4),
        (cx + 0.06 * lx, ct - 0.09 * lt, 0.12 * lx, 0.08 * lt, 0.2, 0.7),
    ]
    probes = []
    for x0, t0, sx, st, kx, kt in specs:
        vals = np.exp(-((X - x0) ** 2) / (2 * sx**2) - ((T - t0) ** 2) / (2 * st**2))
        vals = vals * np.exp(1j * (kx * X + kt * T))
        probes.append(Field2D(x_grid, t_grid, vals))
    return probes


def _interior_norm(values: np.ndarray, dx: float, dt: float, margin: int = MARGIN) -> float:
    core = values[margin:-margin, margin:-margin]
    return float(np.sqrt(dx * dt * np.sum(np.abs(core) ** 2)))


def commutator_residual(
    v_sch: PotentialSpec,
    v_car: PotentialSpec,
    probes: list[Field2D],
    constants: PhysicalConstants = NATURAL,
) -> float:
    """max over probes of ||(HF - FH) psi|| / ||psi|| on interior points."""
    if not probes:
        raise ValueError("empty probe set")
    worst = 0.0
    for psi in probes:
        hf = apply_H(apply_F(psi, v_car, constants), v_sch, constants)
        fh = apply_F(apply_H(psi, v_sch, constants), v_car, constants)
        dx, dt = psi.x_grid.dt, psi.t_grid.dt
        r = _interior_norm(hf.values - fh.values, dx, dt) / _interior_norm(
            psi.values, dx, dt
        )
        worst = max(worst, r)
    return worst


def strong_shared_check(
    E_k: float, C: float, k: float, constants: PhysicalConstants = NATURAL
) -> tuple[bool, float]:
    """Whether the separated plane-wave solution is shared by both dynamics.

    With V_car = -V_sch + C a separated Schrodinger solution phi_k = e^{ikx}
    also solves the Carroll equation iff  -hbar c k = (E_k + C)^2 / (2 m c^2).
    """
    hbar, m, c = constants.hbar, constants.m, constants.c
    lhs = -hbar * c * k
    rhs = (E_k + C) ** 2 / (2 * m * c**2)
    residual = abs(lhs - rhs)
    scale = max(1.0, abs(lhs), abs(rhs))
    return residual <= 1e-10 * scale, residual
