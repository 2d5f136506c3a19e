import numpy as np
import pytest

from asrom.geometry import Mesh, aspect_ratio_report, aspect_ratios


def _one_triangle(p0, p1, p2):
    return Mesh(
        nodes=np.array([p0, p1, p2], dtype=float),
        triangles=np.array([[0, 1, 2]]),
        boundary_edges=np.array([[0, 1], [1, 2], [2, 0]]),
        boundary_tags=np.array(["wall", "wall", "wall"]),
        sections=[],
    )


def test_equilateral_is_one():
    mesh = _one_triangle([0, 0], [1, 0], [0.5, np.sqrt(3) / 2])
    assert aspect_ratios(mesh)[0] == pytest.approx(1.0, abs=1e-12)


def test_right_isoceles_closed_form():
    # circumradius sqrt(2)/2, inradius (2 - sqrt(2))/2: ratio (1 + sqrt(2))/2
    mesh = _one_triangle([0, 0], [1, 0], [0, 1])
    expected = (1.0 + np.sqrt(2.0)) / 2.0
    assert aspect_ratios(mesh)[0] == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(1.2071067811865475, abs=1e-12)


def test_reference_against_itself(bif_mesh):
    ref = aspect_ratio_report(bif_mesh)
    rep = aspect_ratio_report(bif_mesh, reference_max=ref.max)
    assert rep.fraction_above_reference == 0.0
    assert rep.min >= 1.0


def test_degenerate_is_infinite():
    mesh = _one_triangle([0, 0], [1, 0], [2, 0])
    # bypass validation: construct ratios directly
    assert np.isinf(aspect_ratios(mesh)[0])


def test_report_statistics(bif_mesh):
    rep = aspect_ratio_report(bif_mesh)
    assert rep.min <= rep.mean <= rep.max
    assert rep.ratios.shape == (bif_mesh.num_triangles,)
