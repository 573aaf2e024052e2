import zlib

import pytest

from laws import BACKENDS, LAWS, run_law


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.name)
@pytest.mark.parametrize("law", sorted(LAWS))
def test_law(backend, law):
    assert run_law(backend, LAWS[law], cases=25, seed=zlib.crc32(law.encode())) == 0
