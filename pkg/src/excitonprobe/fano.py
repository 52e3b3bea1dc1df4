"""Fano lineshape fitting for transmission windows.

Model: T(E) = t_bg * (q + x)^2 / (1 + x^2) with reduced detuning
x = 2 (E - e_res) / gamma_w. q sets the asymmetry (q = 0 is a symmetric
dip, |q| -> inf a symmetric peak), gamma_w the full width, t_bg the
background transmission level.

The fit is a damped Gauss-Newton iteration with analytic Jacobian:
Levenberg-style multiplicative damping on diag(J^T J), factor 10 up on a
rejected step, factor 10 down on an accepted one, starting at 1e-3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_WINDOW_POINTS = 8
MAX_ITERATIONS = 500
GRADIENT_TOL = 1e-10
STEP_TOL = 1e-12
INITIAL_DAMPING = 1e-3

# t_bg may exceed 1 slightly for windows riding a broad peak shoulder.
T_BG_BOUNDS = (0.0, 1.5)


@dataclass(frozen=True)
class FanoFit:
    q: float
    e_res: float
    gamma_w: float
    t_bg: float
    residual: float
    converged: bool
    iterations: int

    @property
    def params(self) -> np.ndarray:
        return np.array([self.q, self.e_res, self.gamma_w, self.t_bg])

    def as_dict(self) -> dict:
        return {"q": self.q, "e_res": self.e_res, "gamma_w": self.gamma_w,
                "t_bg": self.t_bg, "residual": self.residual,
                "converged": self.converged, "iterations": self.iterations}


def fano_profile(energies, q, e_res, gamma_w, t_bg):
    """Evaluate the lineshape on an energy array."""
    x = 2.0 * (np.asarray(energies, dtype=float) - e_res) / gamma_w
    return t_bg * (q + x) ** 2 / (1.0 + x ** 2)


def _residual_jacobian(params, energies, values):
    """Residuals model - data and their Jacobian w.r.t. (q, e_res, gamma_w, t_bg)."""
    q, e_res, gamma_w, t_bg = params
    x = 2.0 * (energies - e_res) / gamma_w
    u = q + x
    denom = 1.0 + x ** 2
    model = t_bg * u ** 2 / denom

    dm_dq = t_bg * 2.0 * u / denom
    dm_dx = t_bg * (2.0 * u / denom - 2.0 * x * u ** 2 / denom ** 2)
    dx_de = -2.0 / gamma_w
    dx_dg = -x / gamma_w

    J = np.empty((energies.size, 4))
    J[:, 0] = dm_dq
    J[:, 1] = dm_dx * dx_de
    J[:, 2] = dm_dx * dx_dg
    J[:, 3] = u ** 2 / denom
    return model - values, J


def fano_gradient(params, energies, values) -> np.ndarray:
    """Gradient of the squared-residual sum w.r.t. (q, e_res, gamma_w, t_bg)."""
    energies = np.asarray(energies, dtype=float)
    values = np.asarray(values, dtype=float)
    r, J = _residual_jacobian(np.asarray(params, dtype=float), energies, values)
    return 2.0 * (J.T @ r)


def _seed(energies, values):
    i_dip = int(np.argmin(values))
    i_peak = int(np.argmax(values))
    e_dip = energies[i_dip]
    e_peak = energies[i_peak]
    span = energies[-1] - energies[0]
    gamma_w = abs(e_peak - e_dip)
    if gamma_w == 0.0:
        gamma_w = span / 4.0
    q = 1.0 if e_peak > e_dip else -1.0
    t_bg = 0.5 * (values[0] + values[-1])
    t_bg = float(np.clip(t_bg, 1e-6, T_BG_BOUNDS[1]))
    return np.array([q, 0.5 * (e_dip + e_peak), gamma_w, t_bg])


def _in_bounds(params):
    return params[2] > 0.0 and T_BG_BOUNDS[0] <= params[3] <= T_BG_BOUNDS[1]


def fit_fano_window(energies, values, init=None,
                    max_iterations: int = MAX_ITERATIONS) -> FanoFit:
    """Least-squares Fano fit on raw (energy, transmission) arrays.

    `init`, when given, is the seed (q, e_res, gamma_w, t_bg) and overrides
    the built-in heuristic. Constant data cannot seed the heuristic and
    comes back converged=False rather than raising.
    """
    energies = np.asarray(energies, dtype=float)
    values = np.asarray(values, dtype=float)
    if energies.size < MIN_WINDOW_POINTS:
        raise ValueError(
            f"window has {energies.size} grid points, need >= {MIN_WINDOW_POINTS}"
        )

    def result(params, converged, iterations):
        r = fano_profile(energies, *params) - values
        rms = float(np.sqrt(np.mean(r ** 2)))
        return FanoFit(q=float(params[0]), e_res=float(params[1]),
                       gamma_w=float(params[2]), t_bg=float(params[3]),
                       residual=rms, converged=converged, iterations=iterations)

    if init is not None:
        params = np.asarray(init, dtype=float).copy()
        if params.shape != (4,):
            raise ValueError("init must supply (q, e_res, gamma_w, t_bg)")
    else:
        if np.ptp(values) < 1e-14:
            # flat window: nothing to locate a resonance with
            return result(_seed(energies, values), False, 0)
        params = _seed(energies, values)

    damping = INITIAL_DAMPING
    r, J = _residual_jacobian(params, energies, values)
    cost = float(r @ r)
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        grad = 2.0 * (J.T @ r)
        if np.linalg.norm(grad) < GRADIENT_TOL:
            converged = True
            break
        A = J.T @ J
        diag = np.maximum(np.diag(A), 1e-12)
        try:
            step = np.linalg.solve(A + damping * np.diag(diag), -J.T @ r)
        except np.linalg.LinAlgError:
            damping *= 10.0
            continue
        trial = params + step
        if not _in_bounds(trial):
            damping *= 10.0
            if damping > 1e12:
                break
            continue
        r_trial, J_trial = _residual_jacobian(trial, energies, values)
        cost_trial = float(r_trial @ r_trial)
        if cost_trial <= cost:
            params, r, J, cost = trial, r_trial, J_trial, cost_trial
            damping = max(damping / 10.0, 1e-12)
            if np.linalg.norm(step) < STEP_TOL:
                converged = True
                break
        else:
            damping *= 10.0
            if damping > 1e12:
                break

    return result(params, converged, iterations)


def fit_fano(spec, window, init=None) -> FanoFit:
    """Fit one energy window (e_lo, e_hi) of a spectrum's transmission."""
    e_lo, e_hi = window
    if not e_lo < e_hi:
        raise ValueError(f"empty fit window ({e_lo}, {e_hi})")
    energies = spec.energies
    mask = (energies >= e_lo) & (energies <= e_hi)
    if int(mask.sum()) < MIN_WINDOW_POINTS:
        raise ValueError(
            f"window ({e_lo}, {e_hi}) holds {int(mask.sum())} grid points, "
            f"need >= {MIN_WINDOW_POINTS}"
        )
    return fit_fano_window(energies[mask], spec.T[mask], init=init)
