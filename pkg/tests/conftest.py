import numpy as np
import pytest

from rbfadvect.interpolation import build_nodal_basis, equidistant_centers
from rbfadvect.kernels import cubic, quintic
from rbfadvect.quadrature import QuadratureRule


@pytest.fixture(scope="session")
def rule():
    return QuadratureRule()


@pytest.fixture(scope="session")
def cubic_basis_10():
    return build_nodal_basis(equidistant_centers(10), cubic(), 2)


@pytest.fixture(scope="session")
def cubic_basis_40():
    return build_nodal_basis(equidistant_centers(40), cubic(), 2)


@pytest.fixture(scope="session")
def quintic_basis_20():
    return build_nodal_basis(equidistant_centers(20), quintic(), 3)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
