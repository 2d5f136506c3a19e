"""Text serialization of solutions and sparse matrices."""

import numpy as np
import scipy.sparse as sp

from ..errors import ConfigError
from .solver import HFSolution


def _fmt(x):
    return format(float(x), ".17g")


def write_hf_solution(sol, path):
    lines = ["HFSOL v1"]
    mu = np.atleast_1d(sol.mu) if sol.mu is not None else np.zeros(0)
    lines.append("MU " + " ".join([str(mu.size)] + [_fmt(v) for v in mu]))
    lines.append("QOI " + (_fmt(sol.qoi) if sol.qoi is not None else "nan"))
    lines.append(f"U {sol.u.size}")
    lines.extend(_fmt(v) for v in sol.u)
    lines.append(f"P {sol.p.size}")
    lines.extend(_fmt(v) for v in sol.p)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_hf_solution(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if lines[0] != "HFSOL v1":
        raise ConfigError(f"not an HFSOL v1 file: {path}")
    parts = lines[1].split()
    if parts[0] != "MU":
        raise ConfigError("missing parameter line")
    m = int(parts[1])
    mu = np.array([float(v) for v in parts[2 : 2 + m]])
    qparts = lines[2].split()
    qoi_val = float(qparts[1])
    pos = 3
    nu = int(lines[pos].split()[1])
    u = np.array([float(lines[pos + 1 + i]) for i in range(nu)])
    pos += 1 + nu
    np_ = int(lines[pos].split()[1])
    p = np.array([float(lines[pos + 1 + i]) for i in range(np_)])
    return HFSolution(
        u=u,
        p=p,
        mu=mu if m else None,
        iterations=0,
        residual_norm=float("nan"),
        qoi=None if np.isnan(qoi_val) else qoi_val,
    )


def write_matrix(mat, path):
    """Coordinate text dump, entries sorted by row then column."""
    coo = sp.coo_matrix(mat)
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"MATRIX v1 {coo.shape[0]} {coo.shape[1]} {coo.nnz}\n")
        for k in order:
            fh.write(f"{coo.row[k]} {coo.col[k]} {_fmt(coo.data[k])}\n")


def read_matrix(path):
    with open(path) as fh:
        head = fh.readline().split()
        if head[:2] != ["MATRIX", "v1"]:
            raise ConfigError(f"not a MATRIX v1 file: {path}")
        rows, cols, nnz = int(head[2]), int(head[3]), int(head[4])
        i = np.empty(nnz, dtype=np.int64)
        j = np.empty(nnz, dtype=np.int64)
        v = np.empty(nnz)
        for k in range(nnz):
            a, b, c = fh.readline().split()
            i[k], j[k], v[k] = int(a), int(b), float(c)
    return sp.coo_matrix((v, (i, j)), shape=(rows, cols)).tocsr()
