import numpy as np
import pytest

from backend.repro import CRITERIA, AcceptanceSuite, random_tie_free_shape


@pytest.fixture(scope='module')
def suite():
    return AcceptanceSuite()


@pytest.mark.parametrize('name', CRITERIA)
def test_criterion_passes(suite, name):
    report = suite.run([name])
    assert report['passed'], report['criteria'][0]['detail']
    assert report['criteria'][0]['id'] == CRITERIA.index(name) + 1


def test_unknown_criterion(suite):
    with pytest.raises(KeyError):
        suite.run(['no_such_check'])


def test_random_shapes_are_reproducible():
    first = [random_tie_free_shape(np.random.default_rng(7), 3) for _ in range(3)]
    second = [random_tie_free_shape(np.random.default_rng(7), 3) for _ in range(3)]
    assert first == second
