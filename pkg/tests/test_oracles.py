import time

import pytest

from oracles import ORACLES


@pytest.mark.parametrize("name", sorted(ORACLES))
def test_oracle(name):
    start = time.perf_counter()
    err, tol = ORACLES[name]()
    elapsed = time.perf_counter() - start
    assert err <= tol, f"{name}: error {err:.2e} above {tol:.0e}"
    assert elapsed <= 30.0
