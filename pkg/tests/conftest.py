import pytest
from hypothesis import HealthCheck, settings

from locoh import _kernels

settings.register_profile("locoh", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("locoh")

KERNEL_PATHS = ["numba", "numpy"] if _kernels.HAVE_NUMBA else ["numpy"]


@pytest.fixture(params=KERNEL_PATHS)
def kernel_path(request, monkeypatch):
    """Run the test once per kernel implementation."""
    monkeypatch.setattr(_kernels, "USE_NUMBA", request.param == "numba")
    return request.param
