"""Reduced-basis persistence and error-report CSV."""

import numpy as np

from ..errors import ConfigError


def _fmt(x):
    return format(float(x), ".17g")


def write_pod_basis(basis, path):
    families = (
        ("velocity", basis.velocity_modes, basis.sigma_velocity),
        ("supremizer", basis.supremizer_modes, basis.sigma_supremizer),
        ("pressure", basis.pressure_modes, basis.sigma_pressure),
    )
    with open(path, "w") as fh:
        fh.write("PODBASIS v1\n")
        fh.write(f"LIFTING {basis.lifting.size}\n")
        for v in basis.lifting:
            fh.write(_fmt(v) + "\n")
        for name, modes, sigma in families:
            fh.write(f"FAMILY {name} {modes.shape[1]} {modes.shape[0]}\n")
            fh.write("SIGMA " + " ".join(_fmt(s) for s in sigma) + "\n")
            for j in range(modes.shape[1]):
                fh.write(f"MODE {j}\n")
                for v in modes[:, j]:
                    fh.write(_fmt(v) + "\n")


def read_pod_basis(path, Xu, Xp):
    """Rebuild a PODBasis from file; inner products are supplied by the caller."""
    from .snapshots import PODBasis

    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if lines[0] != "PODBASIS v1":
        raise ConfigError(f"not a PODBASIS v1 file: {path}")
    pos = 1
    head = lines[pos].split()
    if head[0] != "LIFTING":
        raise ConfigError("missing LIFTING block")
    nl = int(head[1])
    lifting = np.array([float(lines[pos + 1 + i]) for i in range(nl)])
    pos += 1 + nl

    fam = {}
    while pos < len(lines) and lines[pos]:
        head = lines[pos].split()
        if head[0] != "FAMILY":
            raise ConfigError(f"unexpected line {lines[pos]!r}")
        name, n_modes, length = head[1], int(head[2]), int(head[3])
        pos += 1
        sig = np.array([float(v) for v in lines[pos].split()[1:]])
        pos += 1
        modes = np.zeros((length, n_modes))
        for j in range(n_modes):
            if lines[pos].split() != ["MODE", str(j)]:
                raise ConfigError(f"unexpected line {lines[pos]!r}")
            pos += 1
            modes[:, j] = [float(lines[pos + i]) for i in range(length)]
            pos += length
        fam[name] = (modes, sig)
    for required in ("velocity", "supremizer", "pressure"):
        if required not in fam:
            raise ConfigError(f"family {required!r} missing from {path}")
    return PODBasis(
        velocity_modes=fam["velocity"][0],
        supremizer_modes=fam["supremizer"][0],
        pressure_modes=fam["pressure"][0],
        sigma_velocity=fam["velocity"][1],
        sigma_supremizer=fam["supremizer"][1],
        sigma_pressure=fam["pressure"][1],
        lifting=lifting,
        Xu=Xu,
        Xp=Xp,
    )


def write_error_report(rows, variant, path):
    if variant not in ("rom", "rom_as"):
        raise ConfigError("variant must be rom or rom_as")
    with open(path, "w") as fh:
        fh.write("N,err_u,err_p,err_qoi,variant\n")
        for r in rows:
            fh.write(
                f"{r.N},{_fmt(r.err_u)},{_fmt(r.err_p)},{_fmt(r.err_qoi)},{variant}\n"
            )


def write_singular_values(basis, variant, path):
    with open(path, "w") as fh:
        fh.write("family,index,sigma,variant\n")
        for name, sig in (
            ("velocity", basis.sigma_velocity),
            ("supremizer", basis.sigma_supremizer),
            ("pressure", basis.sigma_pressure),
        ):
            for i, s in enumerate(sig):
                fh.write(f"{name},{i + 1},{_fmt(s)},{variant}\n")
