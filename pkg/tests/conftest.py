import pytest

from persinet import corpus_load


@pytest.fixture(scope="session")
def fig(request):
    return corpus_load


@pytest.fixture(scope="session")
def fig1():
    return corpus_load("fig1_basic").net


@pytest.fixture(scope="session")
def fig5():
    return corpus_load("fig5_acbc").net


@pytest.fixture(scope="session")
def fig6():
    return corpus_load("fig6_unfair").net


@pytest.fixture(scope="session")
def fig14():
    return corpus_load("fig14_counterexample").net
