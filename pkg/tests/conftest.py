import numpy as np
import pytest

from asrom.fem import PhysicsConfig, assemble_operators, build_space
from asrom.geometry import (
    MorphConfig,
    bifurcation_control_points,
    generate_bifurcation_mesh,
)

GEO = dict(
    inlet_length=4.0,
    branch_length=6.0,
    channel_width=2.0,
    branch_angle=30.0,
    resolution=8,
)


@pytest.fixture(scope="session")
def bif_mesh():
    return generate_bifurcation_mesh(**GEO)


@pytest.fixture(scope="session")
def bif_layout():
    return bifurcation_control_points(
        GEO["inlet_length"],
        GEO["branch_length"],
        GEO["channel_width"],
        GEO["branch_angle"],
        GEO["resolution"],
        10,
    )


@pytest.fixture(scope="session")
def morph_config():
    return MorphConfig.default(10, GEO["channel_width"])


@pytest.fixture(scope="session")
def physics():
    return PhysicsConfig(viscosity=0.02, inlet_peak=1.0, reference_width=2.0)


@pytest.fixture(scope="session")
def bif_space(bif_mesh):
    return build_space(bif_mesh)


@pytest.fixture(scope="session")
def bif_ops(bif_mesh, bif_space, physics):
    return assemble_operators(bif_mesh, bif_space, physics)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
