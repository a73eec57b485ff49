import pytest

from dgq import samples


@pytest.fixture(scope="session")
def s3_mp():
    return samples.s3_matched_pair()


@pytest.fixture(scope="session")
def s3_T():
    return samples.s3_double()


@pytest.fixture(scope="session")
def corpus():
    return samples.full_corpus()


@pytest.fixture(scope="session")
def vacant_corpus():
    return samples.vacant_corpus()
