"""CSV persistence for sample, gradient and subspace artifacts."""

import numpy as np

from ..errors import ConfigError
from .gradients import GradientSet
from .sampling import SampleSet


def _fmt(x):
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_samples(samples, path):
    m = samples.n_params
    header = [f"mu_{i + 1}" for i in range(m)] + ["f"]
    rows = np.hstack([samples.parameters, samples.values[:, None]])
    _write_csv(path, header, rows)


def read_samples(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.array(
            [[float(v) for v in ln.split(",")] for ln in fh if ln.strip()]
        )
    if header[-1] != "f":
        raise ConfigError("sample CSV must end with an f column")
    return SampleSet(parameters=data[:, :-1], values=data[:, -1])


def write_gradients(grads, path):
    m = grads.gradients.shape[1]
    _write_csv(path, [f"g_{i + 1}" for i in range(m)], grads.gradients)


def read_gradients(path, k=0):
    with open(path) as fh:
        fh.readline()
        data = np.array(
            [[float(v) for v in ln.split(",")] for ln in fh if ln.strip()]
        )
    return GradientSet(gradients=data, k=k)


def write_eigen_table(subspace, path):
    header = ["index", "lambda", "lo", "hi"]
    rows = [
        (
            i + 1,
            subspace.eigenvalues[i],
            subspace.bootstrap_lo[i],
            subspace.bootstrap_hi[i],
        )
        for i in range(subspace.eigenvalues.size)
    ]
    _write_csv(path, header, rows)


def write_eigenvector_table(subspace, path):
    m = subspace.W.shape[1]
    _write_csv(path, [f"w_{j + 1}" for j in range(m)], subspace.W)


def read_eigenvector_table(path):
    with open(path) as fh:
        fh.readline()
        return np.array(
            [[float(v) for v in ln.split(",")] for ln in fh if ln.strip()]
        )


def write_summary_table(table, path):
    m = table.shape[1] - 1
    _write_csv(path, [f"t_{i + 1}" for i in range(m)] + ["f"], table)


def write_error_grid(grid, path):
    header = ["M", "order", "rel_error"]
    rows = [
        (i + 1, j + 1, grid[i, j])
        for i in range(grid.shape[0])
        for j in range(grid.shape[1])
    ]
    _write_csv(path, header, rows)
