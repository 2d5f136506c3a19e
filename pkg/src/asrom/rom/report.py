"""Reduced-versus-high-fidelity error sweeps."""

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from .reduced import project_operators, rom_solve

log = logging.getLogger(__name__)


@dataclass
class ErrorRow:
    N: int
    err_u: float
    err_p: float
    err_qoi: float
    n_points: int


def _xnorm(v, X):
    return float(np.sqrt(max(v @ (X @ v), 0.0)))


def error_report(basis, test_params, hf_solver, sweep, qoi_fn=None):
    """Mean relative errors over the test set for each mode count.

    Each sweep entry N keeps N velocity, N supremizer and N pressure modes.
    hf_solver maps a parameter to (solution, operators, mesh); failed test
    points are excluded and counted.
    """
    sweep = sorted(set(int(n) for n in sweep))
    acc = {n: [] for n in sweep}
    failures = []
    for i, mu in enumerate(test_params):
        try:
            sol, ops, mesh = hf_solver(mu)
        except NumericalError as exc:
            log.warning("test point %d failed in the full solver: %s", i, exc)
            failures.append((i, str(exc)))
            continue
        nrm_u = _xnorm(sol.u, basis.Xu)
        nrm_p = _xnorm(sol.p, basis.Xp)
        for n in sweep:
            sub = basis.truncated(
                min(n, basis.n_velocity),
                min(n, basis.n_supremizer),
                min(n, basis.n_pressure),
            )
            try:
                reduced = project_operators(ops, sub, mu=mu)
                # warm start at the projected reference state: pins the
                # reduced Newton to the branch being compared against
                rom = rom_solve(reduced, initial_guess=sub.project_state(sol.u, sol.p))
                if qoi_fn is not None:
                    rom.qoi = qoi_fn(rom, mesh)
            except NumericalError as exc:
                log.warning("test point %d failed at N=%d: %s", i, n, exc)
                failures.append((i, f"N={n}: {exc}"))
                continue
            eu = _xnorm(sol.u - rom.u, basis.Xu) / nrm_u
            ep = _xnorm(sol.p - rom.p, basis.Xp) / nrm_p
            eq = (
                abs(sol.qoi - rom.qoi) / abs(sol.qoi)
                if (qoi_fn is not None and sol.qoi is not None)
                else float("nan")
            )
            acc[n].append((eu, ep, eq))
    rows = []
    for n in sweep:
        data = np.array(acc[n]) if acc[n] else np.zeros((0, 3))
        if data.shape[0] == 0:
            raise NumericalError(f"no test point survived the sweep at N={n}")
        rows.append(
            ErrorRow(
                N=n,
                err_u=float(np.mean(data[:, 0])),
                err_p=float(np.mean(data[:, 1])),
                err_qoi=float(np.nanmean(data[:, 2])),
                n_points=data.shape[0],
            )
        )
    return rows, failures
