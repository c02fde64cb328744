from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from trinomial_ratios.experiments import run_fuzz, run_table1
from trinomial_ratios.polyalg import ComplexPoly, RecurrenceSpec

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

FUZZ_COUNT, FUZZ_SEED = 200, 7


def coef_values(box: float = 5.0):
    # keep away from subnormal products; exact zeros still occur
    part = st.floats(-box, box, allow_nan=False, allow_infinity=False).filter(lambda v: v == 0 or abs(v) >= 1e-6)
    return st.builds(complex, part, part)


def polys(max_degree: int = 4, box: float = 5.0, nonzero: bool = True):
    coeffs = st.lists(coef_values(box), min_size=1, max_size=max_degree + 1)
    p = coeffs.map(ComplexPoly)
    return p.filter(lambda q: not q.is_zero) if nonzero else p


COPRIME_KL = [(k, l) for k in range(2, 8) for l in range(1, k) if math.gcd(k, l) == 1]


@st.composite
def specs(draw, max_degree: int = 3, kl=COPRIME_KL):
    k, l = draw(st.sampled_from(kl))
    A = draw(polys(max_degree))
    B = draw(polys(max_degree))
    if A.degree + B.degree < 1:
        B = B * ComplexPoly([1.0, 1.0])
    return RecurrenceSpec(A, B, k, l)


def pairs_to_complex(pair) -> complex:
    return complex(pair[0], pair[1])


@pytest.fixture(scope="session")
def golden() -> dict:
    return json.loads((DATA / "table1_golden.json").read_text())


@pytest.fixture(scope="session")
def table1_report():
    return run_table1()


@pytest.fixture(scope="session")
def fuzz_report():
    return run_fuzz(FUZZ_COUNT, FUZZ_SEED)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)
