import pytest

from polyset.config import get_settings


@pytest.fixture(autouse=True)
def checked_certificates(monkeypatch):
    """Every LP solved by the suite has its certificate verified."""
    monkeypatch.setenv("POLYSET_CHECK_CERTIFICATES", "1")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
