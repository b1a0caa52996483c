from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from fuzzloc.fuzzy_core import Trapezoidal, Triangular  # noqa: E402
from fuzzloc.workbench.config import shipped  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

finite = st.floats(min_value=-1e4, max_value=1e4, allow_nan=False, allow_infinity=False)
degrees = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def triangulars(draw, lo=-1e3, hi=1e3):
    pts = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=3, max_size=3)))
    if pts[0] == pts[2]:
        pts[2] = pts[0] + 1.0
    return Triangular(*pts)


@st.composite
def trapezoidals(draw, lo=-1e3, hi=1e3):
    pts = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=4, max_size=4)))
    if pts[0] == pts[3]:
        pts[3] = pts[0] + 1.0
    return Trapezoidal(*pts)


def shapes(lo=-1e3, hi=1e3):
    return st.one_of(triangulars(lo, hi), trapezoidals(lo, hi))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return shipped("")
