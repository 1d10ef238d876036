import pytest

from lorenzkit import standard_battery


@pytest.fixture(scope="session")
def battery():
    """The canonical 20-member distribution panel, as (name, distribution)."""
    return standard_battery()


@pytest.fixture(scope="session")
def discrete_members(battery):
    return [(n, d) for n, d in battery if d.is_finite_discrete]


@pytest.fixture(scope="session")
def general_members(battery):
    return [(n, d) for n, d in battery if not d.is_finite_discrete]
