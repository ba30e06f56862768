import pytest

from secantcert.terracini import Config
from secantcert.variety import BundleDegree, MultiProjectiveFormat


@pytest.fixture
def config():
    return Config()


def fmt(*dims):
    return MultiProjectiveFormat(tuple(dims))


def bun(*degs):
    return BundleDegree(tuple(degs))
