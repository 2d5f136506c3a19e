"""Snapshot collection and the reduced basis container."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, NumericalError
from .pod import pod, reorthonormalize

log = logging.getLogger(__name__)


@dataclass
class SnapshotSet:
    """Velocity / pressure / supremizer columns per solved training point."""

    S_u: np.ndarray
    S_p: np.ndarray
    S_s: np.ndarray
    parameters: np.ndarray
    failures: list = field(default_factory=list)

    @property
    def n_snapshots(self):
        return self.S_u.shape[1]


def snapshots_from_results(params, results):
    """Assemble a SnapshotSet from (ok, (u, p, s), message) task results."""
    cols_u, cols_p, cols_s, kept, failures = [], [], [], [], []
    for i, (ok, triple, msg) in enumerate(results):
        if not ok:
            log.warning("snapshot %d failed: %s", i, msg)
            failures.append((i, msg))
            continue
        u, p, s = triple
        cols_u.append(u)
        cols_p.append(p)
        cols_s.append(s)
        kept.append(params[i])
    if len(cols_u) < 2:
        raise NumericalError(
            f"only {len(cols_u)} snapshots succeeded; need at least 2"
        )
    return SnapshotSet(
        S_u=np.stack(cols_u, axis=1),
        S_p=np.stack(cols_p, axis=1),
        S_s=np.stack(cols_s, axis=1),
        parameters=np.array(kept),
        failures=failures,
    )


def collect_snapshots(params, hf_solver):
    """Solve at every parameter; failed points are logged and skipped.

    hf_solver maps a parameter vector to (solution, operators, supremizer
    coefficients).  Fewer than two successes aborts.
    """
    results = []
    for mu in params:
        try:
            sol, _, s = hf_solver(mu)
            results.append((True, (sol.u, sol.p, s), ""))
        except NumericalError as exc:
            results.append((False, None, str(exc)))
    return snapshots_from_results(params, results)


@dataclass
class PODBasis:
    """Reduced spaces: velocity modes enriched with supremizer modes, and
    pressure modes, each orthonormal in its problem inner product.

    Velocity modes compress the boundary-homogenized snapshots, so every
    column vanishes on constrained dofs and reconstruction adds the lifting
    back.
    """

    velocity_modes: np.ndarray
    supremizer_modes: np.ndarray
    pressure_modes: np.ndarray
    sigma_velocity: np.ndarray
    sigma_supremizer: np.ndarray
    sigma_pressure: np.ndarray
    lifting: np.ndarray
    Xu: object
    Xp: object
    _zus: np.ndarray = None

    @property
    def n_velocity(self):
        return self.velocity_modes.shape[1]

    @property
    def n_supremizer(self):
        return self.supremizer_modes.shape[1]

    @property
    def n_pressure(self):
        return self.pressure_modes.shape[1]

    @property
    def Z_us(self):
        """Velocity-plus-supremizer basis, orthonormalized as one block."""
        if self._zus is None:
            stacked = np.hstack([self.velocity_modes, self.supremizer_modes])
            self._zus = reorthonormalize(stacked, self.Xu)
        return self._zus

    @property
    def Z_p(self):
        return self.pressure_modes

    def project_state(self, u, p):
        """Reduced coordinates of a full-order state (lifting removed)."""
        w = self.Z_us.T @ (self.Xu @ (u - self.lifting))
        p_N = self.Z_p.T @ (self.Xp @ p)
        return w, p_N

    def truncated(self, n_u, n_s, n_p):
        """Leading-mode sub-basis (re-orthonormalized on access)."""
        if n_u > self.n_velocity or n_s > self.n_supremizer or n_p > self.n_pressure:
            raise ConfigError("truncation exceeds available modes")
        return PODBasis(
            velocity_modes=self.velocity_modes[:, :n_u],
            supremizer_modes=self.supremizer_modes[:, :n_s],
            pressure_modes=self.pressure_modes[:, :n_p],
            sigma_velocity=self.sigma_velocity,
            sigma_supremizer=self.sigma_supremizer,
            sigma_pressure=self.sigma_pressure,
            lifting=self.lifting,
            Xu=self.Xu,
            Xp=self.Xp,
        )


def build_reduced_spaces(snapshots, ops, n_u, n_s=None, n_p=None):
    """Three independent compressions; supremizer count defaults to the
    pressure count (one enrichment direction per pressure mode)."""
    if n_p is None:
        n_p = n_u
    if n_s is None:
        n_s = n_p
    homogenized = snapshots.S_u - ops.lifting[:, None]
    Zv, sv = pod(homogenized, ops.Xu, n_modes=n_u)
    Zs, ss = pod(snapshots.S_s, ops.Xu, n_modes=n_s)
    Zp, sp_ = pod(snapshots.S_p, ops.Xp, n_modes=n_p)
    return PODBasis(
        velocity_modes=Zv,
        supremizer_modes=Zs,
        pressure_modes=Zp,
        sigma_velocity=sv,
        sigma_supremizer=ss,
        sigma_pressure=sp_,
        lifting=ops.lifting.copy(),
        Xu=ops.Xu,
        Xp=ops.Xp,
    )
