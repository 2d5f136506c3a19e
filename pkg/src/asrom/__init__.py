"""Combined parameter-space and model-order reduction toolkit.

Offline: morph a bifurcation channel with thin-plate-spline control points,
solve steady incompressible flow at training parameters, identify the active
subspace of the pressure-drop quantity of interest, and build POD-Galerkin
reduced spaces either on the full parameter box or restricted to the active
subspace.  Online: cheap reduced solves and error reports against the
high-fidelity solver.
"""

__version__ = "0.1.0"
