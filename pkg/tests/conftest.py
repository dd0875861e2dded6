import zlib

import pytest

from xlramsey.colorings import ExactColoring, FiniteColoring, RegressiveColoring
from xlramsey.machines import clear_caches


def crc_bit(seed, parts, mod=2):
    data = (str(seed) + ":" + ",".join(str(p) for p in parts)).encode()
    return zlib.crc32(data) % mod


def random_finite_coloring(seed, dimension, palette=2):
    return FiniteColoring(
        dimension,
        lambda t: crc_bit(seed, t, palette),
        palette=palette,
        name=f"rand{dimension}:{seed}",
    )


def random_exact_coloring(seed):
    return ExactColoring(lambda s: crc_bit(seed, s.elems), name=f"rand:{seed}")


def random_regressive_coloring(seed):
    def fn(s):
        m = s.min()
        if m == 0:
            return 0
        return crc_bit(seed, s.elems, m)

    return RegressiveColoring(fn, name=f"rand-reg:{seed}")


@pytest.fixture(autouse=True, scope="module")
def _fresh_caches():
    clear_caches()
    yield
