import pytest

import props


@pytest.fixture(scope="session")
def pools():
    """Shared random doctrine pools; sized for the unit-level law runs."""
    return props.build_pools(seed=416)
