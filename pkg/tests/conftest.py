import os

import numpy as np
import pytest

from vtflow.condition_c_witness import build_witness
from vtflow.domain_chart import build_domain
from vtflow.target_model import build_target

SCENARIO_DIRECTORY = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'scenarios')


@pytest.fixture
def scenario_path():
    """Path of a bundled scenario file."""

    def path(name):
        return os.path.join(SCENARIO_DIRECTORY, name)
    return path


@pytest.fixture
def flat_chart():
    return build_domain({'family': 'flat_torus', 'dimension': 2, 'counts': [16, 16]})


@pytest.fixture
def euclidean_plane():
    return build_target({'family': 'euclidean', 'dimension': 2})


@pytest.fixture
def unit_sphere():
    return build_target({'family': 'sphere', 'dimension': 2})


@pytest.fixture
def cap_witness(euclidean_plane):
    """Quadratic cap f = 1 - |y|^2 / 2 on the Euclidean ball of radius 1/2."""

    return build_witness({'f': 'quadratic_cap', 'cap_height': 1.0, 'radius': 0.5, 'q': 0.5,
                          'f_star': 'euclidean_squared'}, euclidean_plane, 2)


@pytest.fixture
def write_scenario(tmp_path):
    """Writes scenario text to a temporary file and returns its path."""

    def write(text, name='scenario.cfg'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


@pytest.fixture
def rng():
    return np.random.default_rng(7)
