import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def f3():
    from covolume import quadfield

    return quadfield.from_squarefree_d(3)


@pytest.fixture(scope="session")
def f1():
    from covolume import quadfield

    return quadfield.from_squarefree_d(1)


@pytest.fixture(scope="session")
def f5():
    from covolume import quadfield

    return quadfield.from_squarefree_d(5)


@pytest.fixture(scope="session")
def f23():
    from covolume import quadfield

    return quadfield.from_squarefree_d(23)


@pytest.fixture(scope="session")
def fields_100():
    from covolume import quadfield

    return quadfield.fields_with_disc_at_most(100)


@pytest.fixture(scope="session")
def fields_200():
    from covolume import quadfield

    return quadfield.fields_with_disc_at_most(200)


@pytest.fixture(scope="session")
def fields_500():
    from covolume import quadfield

    return quadfield.fields_with_disc_at_most(500)
