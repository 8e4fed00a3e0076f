import pytest

from tightwp.tightpoly import PolyCache


@pytest.fixture()
def poly_cache(tmp_path):
    return PolyCache(tmp_path / "twpcache")
