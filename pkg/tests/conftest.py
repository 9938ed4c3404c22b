import pytest

from bkm_weights.cartan import negative_type_a, rank2, validate_matrix


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the graded engine at larger cutoffs")


@pytest.fixture
def free_rank2():
    """A(1,1,1,1): n⁻ is free on two generators."""
    return rank2(1, 1)


@pytest.fixture
def a2():
    """A(2,1,1,2) = A(2)."""
    return rank2(2, 1)


@pytest.fixture
def a3():
    return negative_type_a(3)


@pytest.fixture
def sl2():
    return validate_matrix([[2]])


@pytest.fixture
def sl3():
    return validate_matrix([[2, -1], [-1, 2]])


@pytest.fixture
def mixed():
    """One real and one negative node."""
    return validate_matrix([[2, -1], [-1, -2]])
