import pytest

from lrckit.gf import GF
from lrckit.lrc import build_lrc
from lrckit.rs import CodeSpec, build_rs


@pytest.fixture(scope="session")
def f256():
    return GF()


@pytest.fixture(scope="session")
def f16():
    return GF(4)


@pytest.fixture(scope="session")
def f65536():
    return GF(16)


@pytest.fixture(scope="session")
def rs10(f256):
    """The 14-block RS(10, 4) code used as the layered baseline."""
    return build_rs(CodeSpec(k=10, n=14, field=f256))


@pytest.fixture(scope="session")
def lrc10(f256):
    """The 16-block code: 10 data, 4 RS parities, two stored locals."""
    return build_lrc(10, 4, 5, field=f256)


@pytest.fixture(scope="session")
def lrc4(f16):
    """Small 8-block instance (k=4, p=2, r=2), cheap enough to brute-force."""
    return build_lrc(4, 2, 2, field=f16)
