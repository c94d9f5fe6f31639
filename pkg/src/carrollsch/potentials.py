"""Potential profiles over t, x, or (x, t).

A PotentialSpec wraps either a closed form (callables, with optional analytic
derivatives) or tabulated samples.  Real-valued unless explicitly flagged
complex; the complex branch is needed by the velocity-profile construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .numerics import deriv_uniform

_FD_REL = 1e-5  # step for callable finite differences


def _fd4(fn: Callable, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    h = np.maximum(_FD_REL * np.abs(u), _FD_REL)
    return (fn(u - 2 * h) - 8 * fn(u - h) + 8 * fn(u + h) - fn(u + 2 * h)) / (12 * h)


@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    v0: float = 0.0
    f_t: Optional[Callable] = None
    df_t: Optional[Callable] = None
    f_x: Optional[Callable] = None
    df_x: Optional[Callable] = None
    f_xt: Optional[Callable] = None
    table: Optional[np.ndarray] = field(default=None, repr=False)
    table_x: Optional[np.ndarray] = field(default=None, repr=False)
    table_t: Optional[np.ndarray] = field(default=None, repr=False)
    allow_complex: bool = False

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls(kind="zero")

    @classmethod
    def constant(cls, v0: float) -> "PotentialSpec":
        return cls(kind="constant", v0=float(v0))

    @classmethod
    def time_profile(cls, f, df=None, allow_complex: bool = False) -> "PotentialSpec":
        return cls(kind="time_profile", f_t=f, df_t=df, allow_complex=allow_complex)

    @classmethod
    def space_profile(cls, f, df=None) -> "PotentialSpec":
        return cls(kind="space_profile", f_x=f, df_x=df)

    @classmethod
    def separable(cls, a, b, da=None) -> "PotentialSpec":
        # V(x, t) = a(x) b(t)
        return cls(kind="separable", f_x=a, df_x=da, f_t=b)

    @classmethod
    def space_time(cls, f) -> "PotentialSpec":
        return cls(kind="space_time", f_xt=f)

    @classmethod
    def tabulated(cls, values: np.ndarray, x: np.ndarray, t: np.ndarray) -> "PotentialSpec":
        values = np.asarray(values)
        if values.shape != (len(x), len(t)):
            raise ValueError("table shape must be (n_x, n_t)")
        if not np.all(np.isfinite(values)):
            raise ValueError("tabulated potential has non-finite entries")
        return cls(kind="tabulated", table=values, table_x=np.asarray(x), table_t=np.asarray(t))

    # -- evaluation ---------------------------------------------------------
    @property
    def time_only(self) -> bool:
        return self.kind in ("zero", "constant", "time_profile")

    @property
    def space_only(self) -> bool:
        return self.kind in ("zero", "constant", "space_profile")

    def v_t(self, t: np.ndarray) -> np.ndarray:
        """Values of a purely time-dependent potential."""
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return np.full_like(t, self.v0)
        if self.kind == "time_profile":
            return np.asarray(self.f_t(t))
        raise ValueError(f"potential of kind {self.kind!r} is not time-only")

    def dv_t(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind in ("zero", "constant"):
            return np.zeros_like(t)
        if self.kind == "time_profile":
            if self.df_t is not None:
                return np.asarray(self.df_t(t))
            return _fd4(self.f_t, t)
        raise ValueError(f"potential of kind {self.kind!r} is not time-only")

    def v_x(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.v0)
        if self.kind == "space_profile":
            return np.asarray(self.f_x(x))
        raise ValueError(f"potential of kind {self.kind!r} is not space-only")

    def v_xt(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Values on the tensor grid, shaped (n_x, n_t)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.kind == "zero":
            return np.zeros((x.size, t.size))
        if self.kind == "constant":
            return np.full((x.size, t.size), self.v0)
        if self.kind == "time_profile":
            return np.broadcast_to(np.asarray(self.f_t(t)), (x.size, t.size)).copy()
        if self.kind == "space_profile":
            return np.broadcast_to(np.asarray(self.f_x(x))[:, None], (x.size, t.size)).copy()
        if self.kind == "separable":
            return np.asarray(self.f_x(x))[:, None] * np.asarray(self.f_t(t))[None, :]
        if self.kind == "space_time":
            return np.asarray(self.f_xt(x[:, None], t[None, :]))
        if self.kind == "tabulated":
            if x.size != len(self.table_x) or t.size != len(self.table_t):
                raise ValueError("tabulated potential evaluated off its own grid")
            return self.table
        raise ValueError(f"unknown kind {self.kind!r}")

    def dv_dx(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Spatial derivative on the tensor grid, shaped (n_x, n_t)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.kind in ("zero", "constant", "time_profile"):
            return np.zeros((x.size, t.size))
        if self.kind == "space_profile":
            dv = np.asarray(self.df_x(x)) if self.df_x is not None else _fd4(self.f_x, x)
            return np.broadcast_to(dv[:, None], (x.size, t.size)).copy()
        if self.kind == "separable":
            da = np.asarray(self.df_x(x)) if self.df_x is not None else _fd4(self.f_x, x)
            return da[:, None] * np.asarray(self.f_t(t))[None, :]
        if self.kind == "space_time":
            h = _FD_REL
            xi = x[:, None]
            return (
                self.f_xt(xi - 2 * h, t[None, :])
                - 8 * self.f_xt(xi - h, t[None, :])
                + 8 * self.f_xt(xi + h, t[None, :])
                - self.f_xt(xi + 2 * h, t[None, :])
            ) / (12 * h)
        if self.kind == "tabulated":
            dx = self.table_x[1] - self.table_x[0]
            return np.apply_along_axis(deriv_uniform, 0, self.table, dx)
        raise ValueError(f"unknown kind {self.kind!r}")

    def dvdx_at(self, x: float, t: float) -> float:
        return float(np.real_if_close(self.dv_dx(np.array([x]), np.array([t]))[0, 0]))

    def at(self, x: float, t: float) -> float:
        return float(np.real_if_close(self.v_xt(np.array([x]), np.array([t]))[0, 0]))
