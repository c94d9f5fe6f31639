"""Ultra-boost kinematics and the classical (Hamilton-Jacobi) limit.

The ultra-boost is the analytic continuation of a Lorentz boost past |beta|=1
on the branch gamma = i/sqrt(beta^2 - 1); it exchanges energy and momentum up
to factors of -i c and maps the Schrodinger dispersion onto the Carroll one.

Rays follow the characteristic system in the x-gauge (lambda = -x/c, so
dot x = -c identically):

    dt/dx = -q / (m c^3),      dq/dx = d_x V_car(x, t(x)),

with q = p_t + V_car and p_x = q^2/(2 m c^3) by construction.  Sign
convention: p_x = -d_x S throughout, opposite to the usual Schrodinger
habit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants, NATURAL
from .potentials import PotentialSpec


@dataclass(frozen=True)
class TwoMomentum:
    """Energy-momentum two-vector; complex-capable for the boosted branch."""

    E: complex
    P: complex

    def invariant(self, constants: PhysicalConstants = NATURAL) -> complex:
        return (self.E / constants.c) ** 2 - self.P**2


@dataclass(frozen=True)
class RayState:
    x: float
    t: float
    q: float
    p_x: float


@dataclass(frozen=True)
class RaySolution:
    x: np.ndarray
    t: np.ndarray
    q: np.ndarray
    p_x: np.ndarray
    initial: tuple[float, float, float]

    def __len__(self) -> int:
        return len(self.x)

    def state(self, i: int) -> RayState:
        return RayState(float(self.x[i]), float(self.t[i]), float(self.q[i]), float(self.p_x[i]))

    def constraint_residual(self, constants: PhysicalConstants = NATURAL) -> float:
        """max |-c p_x + q^2/(2 m c^2)| along the ray (zero by construction)."""
        m, c = constants.m, constants.c
        return float(np.max(np.abs(-c * self.p_x + self.q**2 / (2 * m * c**2))))


def ultra_boost(p: TwoMomentum, constants: PhysicalConstants = NATURAL) -> TwoMomentum:
    """E' = -i c P, P' = -i E / c; preserves (E/c)^2 - P^2 exactly."""
    c = constants.c
    return TwoMomentum(E=-1j * c * p.P, P=-1j * p.E / c)


def ultra_boost_inverse(p: TwoMomentum, constants: PhysicalConstants = NATURAL) -> TwoMomentum:
    """Inverse of the ultra-boost: E = i c P', P = i E' / c."""
    c = constants.c
    return TwoMomentum(E=1j * c * p.P, P=1j * p.E / c)


def schrodinger_relation_residual(p: TwoMomentum, constants: PhysicalConstants = NATURAL) -> complex:
    """E - P^2/(2m); zero on the nonrelativistic mass shell."""
    return p.E - p.P**2 / (2 * constants.m)


def carroll_relation_residual(p: TwoMomentum, constants: PhysicalConstants = NATURAL) -> complex:
    """E^2/(2 m c^3) - i P; zero exactly when the ultra-boosted pair sits on
    the nonrelativistic mass shell (the mass redefinition m -> i m picture)."""
    return p.E**2 / (2 * constants.mc3) - 1j * p.P


def carroll_dispersion(p0: float, sign: int = +1, constants: PhysicalConstants = NATURAL) -> float:
    """E0 = +-sqrt(2 m c^3 p0), the energy label with c p0 = E0^2/(2 m c^2)."""
    if p0 < 0:
        raise ValueError("p0 must be nonnegative")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    m, c = constants.m, constants.c
    return sign * float(np.sqrt(2 * m * c**3 * p0))


@dataclass(frozen=True)
class SeparableAction:
    """S(x, t) = -p0 x +- sqrt(2 m c^3 p0) t + C0.

    Satisfies (d_t S)^2/(2 m c^3) + d_x S = 0 identically.  dS/dp0 marks the
    initial position beta of the classical trajectory.
    """

    p0: float
    sign: int
    C0: float
    constants: PhysicalConstants = NATURAL

    def __call__(self, x, t):
        E0 = carroll_dispersion(self.p0, self.sign, self.constants)
        return -self.p0 * np.asarray(x) + E0 * np.asarray(t) + self.C0

    def hj_residual(self, x, t) -> float:
        """(d_t S)^2/(2 m c^3) + d_x S, evaluated analytically."""
        E0 = carroll_dispersion(self.p0, self.sign, self.constants)
        return float(abs(E0**2 / (2 * self.constants.mc3) - self.p0))


def separable_action(
    p0: float, sign: int = +1, C0: float = 0.0, constants: PhysicalConstants = NATURAL
) -> SeparableAction:
    if p0 < 0:
        raise ValueError("p0 must be nonnegative")
    return SeparableAction(float(p0), int(sign), float(C0), constants)


def group_velocity(p0: float, sign: int = +1, constants: PhysicalConstants = NATURAL) -> float:
    """v = +-sqrt(m c^3 / (2 p0)); diverges as p0 -> 0."""
    if p0 <= 0:
        raise ValueError("p0 must be positive")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign * float(np.sqrt(constants.mc3 / (2 * p0)))


def momentum_from_velocity(v: float, constants: PhysicalConstants = NATURAL) -> float:
    """|p| = m c^3 / (2 v^2): the inverse momentum-velocity law."""
    if v == 0:
        raise ValueError("velocity must be nonzero")
    return float(constants.mc3 / (2 * v**2))


def energy_from_velocity(v: float, constants: PhysicalConstants = NATURAL) -> float:
    """E = m c^3 / v (sign carried by the velocity)."""
    if v == 0:
        raise ValueError("velocity must be nonzero")
    return float(constants.mc3 / v)


def trace_ray(
    v_car: PotentialSpec,
    x0: float,
    t0: float,
    q0: float,
    x_end: float,
    n_steps: int,
    constants: PhysicalConstants = NATURAL,
) -> RaySolution:
    """RK4 integration of the characteristic system from x0 to x_end.

    q0 is the combined momentum p_t(x0) + V_car(x0, t0); p_x = q^2/(2 m c^3)
    is recorded at every sample.
    """
    if n_steps < 16:
        raise ValueError("n_steps must be at least 16")
    mc3 = constants.mc3
    h = (x_end - x0) / n_steps
    xs = x0 + h * np.arange(n_steps + 1)
    ts = np.empty(n_steps + 1)
    qs = np.empty(n_steps + 1)
    ts[0], qs[0] = t0, q0

    def rhs(x: float, s: np.ndarray) -> np.ndarray:
        dv = v_car.dvdx_at(x, s[0])
        if not np.isfinite(dv):
            raise ValueError(f"potential gradient non-finite at x = {x}")
        return np.array([-s[1] / mc3, dv])

    s = np.array([t0, q0], dtype=float)
    for k in range(n_steps):
        x = xs[k]
        k1 = rhs(x, s)
        k2 = rhs(x + 0.5 * h, s + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h, s + 0.5 * h * k2)
        k4 = rhs(x + h, s + h * k3)
        s = s + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ts[k + 1], qs[k + 1] = s
    return RaySolution(x=xs, t=ts, q=qs, p_x=qs**2 / (2 * mc3), initial=(x0, t0, q0))


def picard_iterate(
    v_car: PotentialSpec,
    x0: float,
    t0: float,
    q0: float,
    x_end: float,
    n_iter: int,
    n_samples: int = 512,
    constants: PhysicalConstants = NATURAL,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Fixed-point quadrature iteration for t(x).

    t0-iterate is the free straight line; each sweep recomputes
    q(x) = q0 + int d_x V(xi, t(xi)) dxi and t(x) = t0 - (1/mc^3) int q by
    composite trapezoid.  For space-only potentials the first sweep is
    already exact up to quadrature error.  Returns (x_samples, iterates)
    with iterates[0] the free line.
    """
    from scipy.integrate import cumulative_trapezoid

    mc3 = constants.mc3
    xs = np.linspace(x0, x_end, n_samples + 1)
    iterates = [t0 - q0 * (xs - x0) / mc3]
    for _ in range(n_iter):
        t_cur = iterates[-1]
        dv = np.array([v_car.dvdx_at(x, t) for x, t in zip(xs, t_cur)])
        q = q0 + cumulative_trapezoid(dv, xs, initial=0.0)
        t_new = t0 - cumulative_trapezoid(q, xs, initial=0.0) / mc3
        iterates.append(t_new)
    return xs, iterates
