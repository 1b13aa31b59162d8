"""Grid, fields, no-flux Laplacian, and quadrature."""

import numpy as np
import pytest

from abcsir import (
    DomainError,
    Field,
    Grid2D,
    integrate_field,
    integrate_field_squared,
    laplacian_neumann,
)


def test_grid_validation():
    Grid2D(1, 1, 0.5)
    with pytest.raises(DomainError):
        Grid2D(0, 3, 1.0)
    with pytest.raises(DomainError):
        Grid2D(3, 3, 0.0)


def test_field_validation():
    g = Grid2D(3, 2, 1.0)
    Field(g, np.zeros((2, 3)))
    with pytest.raises(DomainError):
        Field(g, np.zeros((3, 2)))
    with pytest.raises(DomainError):
        Field(g, np.full((2, 3), np.nan))


def test_laplacian_of_constant_is_zero():
    g = Grid2D(7, 5, 0.5)
    out = laplacian_neumann(Field.full(g, 3.2))
    assert np.all(out.values == 0.0)


def test_laplacian_conserves_mass():
    rng = np.random.default_rng(3)
    g = Grid2D(9, 6, 0.7)
    f = Field(g, rng.uniform(0.0, 10.0, g.shape))
    out = laplacian_neumann(f)
    total = out.values.sum() * g.cell_area
    assert abs(total) <= 1e-12 * np.abs(f.values).sum()


def test_laplacian_center_spike():
    g = Grid2D(3, 3, 1.0)
    v = np.zeros((3, 3))
    v[1, 1] = 1.0
    out = laplacian_neumann(Field(g, v)).values
    assert out[1, 1] == -4.0
    for j, i in ((0, 1), (2, 1), (1, 0), (1, 2)):
        assert out[j, i] == 1.0
    for j, i in ((0, 0), (0, 2), (2, 0), (2, 2)):
        assert out[j, i] == 0.0


def test_laplacian_self_adjoint_and_negative():
    rng = np.random.default_rng(11)
    g = Grid2D(8, 8, 1.3)
    for _ in range(5):
        f = Field(g, rng.normal(size=g.shape))
        w = Field(g, rng.normal(size=g.shape))
        lf = laplacian_neumann(f).values
        lw = laplacian_neumann(w).values
        a = (w.values * lf).sum() * g.cell_area
        b = (f.values * lw).sum() * g.cell_area
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))
        quad = (f.values * lf).sum() * g.cell_area
        assert quad <= 1e-12


def test_integrate_field():
    g = Grid2D(10, 10, 1.0)
    assert integrate_field(Field.full(g, 1.0)) == 100.0
    assert integrate_field(Field.zeros(g)) == 0.0
    rng = np.random.default_rng(5)
    a = rng.normal(size=g.shape)
    b = rng.normal(size=g.shape)
    lhs = integrate_field(Field(g, 2.0 * a + 3.0 * b))
    rhs = 2.0 * integrate_field(Field(g, a)) + 3.0 * integrate_field(Field(g, b))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_integrate_field_squared():
    g = Grid2D(4, 4, 0.5)
    assert integrate_field_squared(Field.full(g, 2.0)) == pytest.approx(
        4.0 * 16 * 0.25
    )
