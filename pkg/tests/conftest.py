import pytest

from nrcsynth.fixtures import (
    fo_collection_proof, identity_definition, nesting_definition,
    reflexivity_proof)
from nrcsynth.oracle import Bounds


@pytest.fixture(scope='session')
def nesting():
    return nesting_definition()


@pytest.fixture(scope='session')
def identity_set():
    return identity_definition('set(ur)')


@pytest.fixture(scope='session')
def identity_ur():
    return identity_definition('ur')


@pytest.fixture
def reflexivity():
    return reflexivity_proof()


@pytest.fixture
def fo_collection():
    return fo_collection_proof()


@pytest.fixture
def small_bounds():
    return Bounds(max_atoms=2, max_set_card=2, ceiling=10**6)
