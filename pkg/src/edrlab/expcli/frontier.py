"""Boundary curves of the Ozawa, Branciard and sum relations in the (eps, eta) plane."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

_ROBERTSON_TOL = 1e-9
_EDGE = 1e-12


@dataclass(frozen=True)
class FrontierCurve:
    name: str
    points: tuple  # ((epsilon, eta), ...)


def boundary_residual(name, eps, eta, c_ab, delta_a, delta_b, new_rhs_value) -> float:
    """LHS - RHS of the named boundary equation at (eps, eta)."""
    if name == "ozawa":
        return eps * eta + eps * delta_b + delta_a * eta - c_ab
    if name == "branciard":
        k = math.sqrt(max(delta_a**2 * delta_b**2 - c_ab**2, 0.0))
        return eps**2 * delta_b**2 + eta**2 * delta_a**2 + 2 * eps * eta * k - c_ab**2
    if name == "new":
        return eps**2 + eta**2 - new_rhs_value
    raise ValueError(f"unknown curve {name!r}")


def _keep(eta):
    if eta < 0 and eta > -_EDGE:
        return 0.0
    return eta if eta >= 0 else None


def frontier(c_ab: float, delta_a: float, delta_b: float, new_rhs_value: float,
             grid_count: int = 201) -> list[FrontierCurve]:
    """Trace the three boundaries on a shared eps grid, solving each for eta >= 0.

    Grid rows where a curve has no nonnegative solution are omitted from
    that curve.
    """
    if c_ab <= 0:
        raise ValueError("c_ab must be positive")
    if grid_count < 2:
        raise ValueError("grid_count must be >= 2")
    if delta_a < 0 or delta_b < 0:
        raise ValueError("standard deviations must be nonnegative")
    gap = delta_a**2 * delta_b**2 - c_ab**2
    if gap < -_ROBERTSON_TOL:
        raise DomainError(f"dA^2 dB^2 - C^2 = {gap:.3e} violates the Robertson relation")
    k = math.sqrt(max(gap, 0.0))

    eps_max = max(c_ab / delta_b, math.sqrt(max(new_rhs_value, 0.0)))
    grid = np.linspace(0.0, eps_max, grid_count)

    ozawa, branciard, new = [], [], []
    for eps in grid:
        eps = float(eps)
        eta = _keep((c_ab - eps * delta_b) / (eps + delta_a))
        if eta is not None:
            ozawa.append((eps, eta))
        if eps <= delta_a:
            # positive root of dA^2 eta^2 + 2 eps K eta + (eps^2 dB^2 - C^2) = 0
            eta = _keep((-eps * k + c_ab * math.sqrt(max(delta_a**2 - eps**2, 0.0))) / delta_a**2)
            if eta is not None:
                branciard.append((eps, eta))
        if new_rhs_value >= 0 and eps**2 <= new_rhs_value + _EDGE:
            new.append((eps, math.sqrt(max(new_rhs_value - eps**2, 0.0))))
    return [
        FrontierCurve("ozawa", tuple(ozawa)),
        FrontierCurve("branciard", tuple(branciard)),
        FrontierCurve("new", tuple(new)),
    ]
