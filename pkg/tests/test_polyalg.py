from __future__ import annotations

import math

import numpy as np
import pytest
from conftest import coef_values, polys, specs
from hypothesis import given
from hypothesis import strategies as st

from trinomial_ratios.polyalg import (
    ComplexPoly,
    RecurrenceSpec,
    expand_non_coprime,
    generate_sequence,
    generating_function_check,
    poly_add,
    poly_eval,
    poly_mul,
    recurrence_residual,
    safe_t_radius,
)

A_T = ComplexPoly([3j, 1, 0, 1j])
B_T = ComplexPoly([7, -2j, 1])
SPEC_53 = RecurrenceSpec(A_T, B_T, 5, 3)


def test_zero_polynomial_is_canonical():
    assert ComplexPoly().degree == -1
    assert ComplexPoly([0, 0, 0]) == ComplexPoly()
    assert ComplexPoly([]).is_zero


def test_trailing_zeros_trimmed_but_tiny_values_kept():
    assert ComplexPoly([1, 2, 0, 0]).degree == 1
    assert ComplexPoly([1, 1e-300]).degree == 1


def test_add_examples():
    assert poly_add(ComplexPoly([1, 1]), ComplexPoly([-1, -1])).is_zero
    p = ComplexPoly([2, 3j])
    assert poly_add(p, ComplexPoly()) == p
    assert ComplexPoly([0, 0, 1]) + ComplexPoly([0, 1]) == ComplexPoly([0, 1, 1])


def test_mul_examples():
    assert poly_mul(ComplexPoly([-1, 1]), ComplexPoly([1, 1])) == ComplexPoly([-1, 0, 1])
    p = ComplexPoly([2, 3j, 1])
    assert p * ComplexPoly([1]) == p
    assert (p * ComplexPoly()).is_zero


def test_eval_examples():
    assert poly_eval(ComplexPoly([1, 0, 1]), 1j) == 0
    z0 = (1 - 2 * math.sqrt(2)) * 1j
    assert abs(B_T(z0)) < 1e-14
    assert ComplexPoly([1]).__call__(123.4 + 5j) == 1


def test_eval_vectorised():
    p = ComplexPoly([1, 2, 3])
    x = np.array([0, 1, 1j])
    assert np.allclose(p(x), [1, 6, -2 + 2j])


@given(polys(), polys())
def test_add_commutes_and_is_canonical(p, q):
    s = p + q
    assert s == q + p
    assert s.is_zero or s.coeffs[-1] != 0


@given(polys(), polys())
def test_mul_degree_additive(p, q):
    r = p * q
    assert r.degree == p.degree + q.degree


@given(polys(), polys(), coef_values(2.0))
def test_eval_is_ring_homomorphism(p, q, z):
    lhs = (p * q)(z)
    rhs = p(z) * q(z)
    scale = (1 + abs(z)) ** (p.degree + q.degree) * p.max_abs_coeff() * q.max_abs_coeff()
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_json_literal_round_trip():
    text = "[[0,3],[1,0],[0,0],[0,1]]"
    p = ComplexPoly.from_json(text)
    assert p == A_T
    assert ComplexPoly.from_json(p.to_json()) == p


@pytest.mark.parametrize("text", ["[[1,2]", "[]", "[[1,2,3]]", "[1, 2]", '[["a", 0]]', "{}"])
def test_json_literal_rejects_bad_input(text):
    with pytest.raises(ValueError):
        ComplexPoly.from_json(text)


@pytest.mark.parametrize(
    "A,B,k,l,msg",
    [
        (A_T, B_T, 6, 3, "coprime"),
        (A_T, B_T, 3, 3, "k > l"),
        (A_T, B_T, 3, 0, "k > l"),
        (ComplexPoly(), B_T, 5, 3, "non-zero"),
        (ComplexPoly([1]), ComplexPoly([2]), 5, 3, "deg"),
    ],
)
def test_spec_validation(A, B, k, l, msg):
    with pytest.raises(ValueError, match=msg):
        RecurrenceSpec(A, B, k, l)


def test_spec_dict_round_trip():
    assert RecurrenceSpec.from_dict(SPEC_53.to_dict()) == SPEC_53


def test_sequence_initial_terms():
    seq = generate_sequence(SPEC_53, 6)
    assert seq[0] == ComplexPoly([1])
    assert seq[1].is_zero and seq[2].is_zero
    assert seq[3] == -B_T
    assert seq[6] == B_T * B_T


def test_sequence_first_terms_k2():
    spec = RecurrenceSpec(ComplexPoly([0, 0, 1]), ComplexPoly([-5, -2, 1]), 2, 1)
    seq = generate_sequence(spec, 2)
    assert seq[1] == -spec.B
    assert seq[2] == spec.B * spec.B - spec.A


@given(specs(), st.integers(1, 25))
def test_recurrence_residual_vanishes(spec, n_max):
    seq = generate_sequence(spec, n_max)
    scale = max(p.max_abs_coeff() for p in seq)
    for n in range(1, n_max + 1):
        assert recurrence_residual(spec, seq, n) <= 1e-12 * scale


def test_generating_function_examples():
    z = 0.3 - 0.7j
    assert generating_function_check(SPEC_53, z, 0, 10) == 0
    t = 0.05
    direct = abs(B_T(z) * t**3 + A_T(z) * t**5)
    assert generating_function_check(SPEC_53, z, t, 0) == pytest.approx(direct, rel=1e-14)


def test_generating_function_identity_at_random_points(rng):
    for _ in range(20):
        z = complex(*rng.uniform(-2, 2, 2))
        r = safe_t_radius(SPEC_53, z) * rng.uniform(0.1, 1.0)
        t = r * np.exp(2j * np.pi * rng.uniform())
        assert generating_function_check(SPEC_53, z, t, 60) < 1e-9


@pytest.mark.parametrize("d", [1, 2, 3])
def test_non_coprime_collapse(d):
    seq = generate_sequence(SPEC_53, 10)
    R = expand_non_coprime(SPEC_53, d, 10 * d)
    for m, r in enumerate(R):
        if m % d:
            assert r.is_zero
        else:
            assert np.array_equal(r.coeffs, seq[m // d].coeffs)
