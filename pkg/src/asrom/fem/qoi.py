"""Section-averaged pressures and the two-branch relative pressure drop."""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DegenerateQoIError


@dataclass
class SectionPressures:
    values: np.ndarray  # P_0 .. P_5

    def __getitem__(self, i):
        return float(self.values[i])


def section_pressure_average(p, mesh, section):
    """Length-weighted average of the vertex pressure field over one cut.

    Exact for the linear pressure space: trapezoid rule per edge.
    """
    section = np.asarray(section)
    if section.size == 0:
        raise ConfigError("empty section")
    a = section[:, 0]
    b = section[:, 1]
    lengths = np.linalg.norm(mesh.nodes[b] - mesh.nodes[a], axis=1)
    integral = float(np.sum(lengths * 0.5 * (p[a] + p[b])))
    total = float(np.sum(lengths))
    if total <= 0.0:
        raise ConfigError("section has zero length")
    return integral / total


def section_pressures(sol, mesh):
    if len(mesh.sections) != 6:
        raise ConfigError("mesh must carry six sections")
    vals = np.array(
        [section_pressure_average(sol.p, mesh, s) for s in mesh.sections]
    )
    return SectionPressures(vals)


def qoi(sol, mesh):
    """Sum over the two branches of (narrowing drop) / (inlet-to-outlet drop).

    Uses sections S3->S4 over S0->S1 for the upper branch and S3->S5 over
    S0->S2 for the lower one.
    """
    P = section_pressures(sol, mesh).values
    d1 = P[0] - P[1]
    d2 = P[0] - P[2]
    floor = 1e-12 * abs(P[0])
    if abs(d1) <= floor or abs(d2) <= floor or d1 == 0.0 or d2 == 0.0:
        raise DegenerateQoIError(
            f"inlet-to-outlet pressure drops too small (|{d1:.3e}|, |{d2:.3e}|)"
        )
    return (P[3] - P[4]) / d1 + (P[3] - P[5]) / d2
