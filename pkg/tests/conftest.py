import os
import sys

# re-expand every reduction certificate while the suite runs
os.environ.setdefault("RITTKIT_CHECK_CERTIFICATES", "1")
sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

from rittkit.core import RingConfig  # noqa: E402
from rittkit.parser import parse_expression  # noqa: E402


@pytest.fixture
def P():
    """P(src, ring="N=1,vars=y") parses a polynomial in a ring spec."""
    from rittkit.parser import parse_ring

    def make(src, ring="N=1,vars=y"):
        if not isinstance(ring, RingConfig):
            ring = parse_ring(ring)
        return parse_expression(src, ring)

    return make
