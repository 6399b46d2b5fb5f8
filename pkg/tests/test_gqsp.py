"""Angle synthesis and reconstruction round-trips."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenreflect.completion import factorize, gram_polynomial
from eigenreflect.gqsp import (
    ROTATION_CONVENTION,
    GQSPAngleSequence,
    branch_pair,
    reconstruct_polynomials,
    synthesize_angles,
)
from eigenreflect.poly import ComplexPolynomial, build_upsilon

from _pairs import padded, random_complementary_pair


def roundtrip_error(p, q):
    seq = synthesize_angles(p, q)
    p2, q2 = reconstruct_polynomials(seq)
    width = max(p.degree, q.degree, p2.degree, q2.degree) + 1
    return max(
        float(np.max(np.abs(padded(p, width) - padded(p2, width)))),
        float(np.max(np.abs(padded(q, width) - padded(q2, width)))),
    )


class TestSequenceContainer:
    def test_degree_counts_rotations(self):
        seq = GQSPAngleSequence(thetas=(0.1, 0.2), phis=(0.3, 0.4), lambda_final=0.5)
        assert seq.degree == 1
        assert seq.convention == ROTATION_CONVENTION

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            GQSPAngleSequence(thetas=(0.1,), phis=(), lambda_final=0.0)

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            GQSPAngleSequence(thetas=(), phis=(), lambda_final=0.0)


class TestSynthesizeAngles:
    def test_identity_encoding(self):
        seq = synthesize_angles(ComplexPolynomial((1.0,)), ComplexPolynomial((0.0,)))
        assert seq.degree == 0
        assert seq.thetas == (0.0,)
        assert seq.phis == (0.0,)
        assert seq.lambda_final == 0.0

    def test_swapped_identity_encoding(self):
        seq = synthesize_angles(ComplexPolynomial((0.0,)), ComplexPolynomial((1.0,)))
        assert abs(seq.thetas[0] - math.pi / 2) <= 1e-15

    def test_hand_pair_round_trips_tightly(self):
        p = ComplexPolynomial((0.5, 0.5))
        q = ComplexPolynomial((0.5, -0.5))
        seq = synthesize_angles(p, q)
        assert len(seq.thetas) == 2
        assert roundtrip_error(p, q) <= 1e-12

    def test_plan_kernel_round_trips(self):
        ups = build_upsilon(3, 2)
        phi = factorize(gram_polynomial(ups)).phi
        assert roundtrip_error(ups, phi) <= 1e-9

    def test_non_complementary_pair_rejected(self):
        with pytest.raises(ValueError):
            synthesize_angles(ComplexPolynomial((1.0,)), ComplexPolynomial((1.0,)))

    def test_padded_pair_is_flagged_and_still_round_trips(self):
        base = ComplexPolynomial((0.6, 0.3))
        partner = factorize(gram_polynomial(base)).phi
        # pad the top with a coefficient below the tie-break threshold but
        # above the trim threshold, so the leading step has no data; the
        # constant-stripping fallback then keeps the remaining content at
        # the bottom, so every later step is flagged as well
        p = ComplexPolynomial((0.6, 0.3, 5e-14))
        with pytest.warns(RuntimeWarning):
            seq = synthesize_angles(p, partner)
        assert seq.degenerate_steps == (1, 2)
        p2, q2 = reconstruct_polynomials(seq)
        assert np.max(np.abs(padded(p2, 3) - padded(p, 3))) <= 1e-9
        assert np.max(np.abs(padded(q2, 3) - padded(partner, 3))) <= 1e-9

    def test_doubly_padded_pair_survives(self):
        p = ComplexPolynomial((0.6, 0.0, 5e-14))
        q = ComplexPolynomial((0.8j,))
        with pytest.warns(RuntimeWarning):
            seq = synthesize_angles(p, q)
        assert 2 in seq.degenerate_steps
        p2, q2 = reconstruct_polynomials(seq)
        assert np.max(np.abs(padded(p2, 3) - padded(p, 3))) <= 1e-9
        assert np.max(np.abs(padded(q2, 3) - padded(q, 3))) <= 1e-9

    @given(degree=st.integers(1, 30), seed=st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_random_pairs_round_trip(self, degree, seed):
        p, q = random_complementary_pair(degree, seed=seed)
        assert roundtrip_error(p, q) <= 1e-9

    def test_moderately_large_degree_round_trips(self):
        p, q = random_complementary_pair(60, seed=123)
        assert roundtrip_error(p, q) <= 1e-9


class TestReconstruct:
    def test_identity_angles(self):
        seq = GQSPAngleSequence(thetas=(0.0,), phis=(0.0,), lambda_final=0.0)
        p, q = reconstruct_polynomials(seq)
        assert p.as_array().tolist() == [1.0 + 0j]
        assert q.as_array().tolist() == [0j]

    @given(
        angles=st.lists(
            st.floats(-math.pi, math.pi), min_size=11, max_size=11
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_any_angle_sequence_yields_complementary_pair(self, angles):
        # unitarity of the underlying product makes the pair complementary
        # no matter where the angles came from
        seq = GQSPAngleSequence(
            thetas=tuple(angles[:5]), phis=tuple(angles[5:10]),
            lambda_final=angles[10],
        )
        p, q = reconstruct_polynomials(seq)
        width = max(p.degree, q.degree) + 1
        m = max(2 * width + 1, 16)
        pa = np.abs(np.array([
            np.polyval(padded(p, width)[::-1], np.exp(2j * np.pi * j / m))
            for j in range(m)
        ]))
        qa = np.abs(np.array([
            np.polyval(padded(q, width)[::-1], np.exp(2j * np.pi * j / m))
            for j in range(m)
        ]))
        assert np.max(np.abs(pa**2 + qa**2 - 1.0)) <= 1e-12


class TestBranchPair:
    def test_trivial_kernel_gives_identical_branches(self):
        plus, minus = branch_pair(ComplexPolynomial((1.0,)), ComplexPolynomial((0.0,)))
        assert plus == minus

    def test_branches_reconstruct_with_opposite_partner_signs(self):
        ups = ComplexPolynomial((0.5, 0.5))
        phi = ComplexPolynomial((0.5, -0.5))
        plus, minus = branch_pair(ups, phi)
        p_plus, q_plus = reconstruct_polynomials(plus)
        p_minus, q_minus = reconstruct_polynomials(minus)
        assert np.max(np.abs(padded(p_plus, 2) - padded(p_minus, 2))) <= 1e-12
        assert np.max(np.abs(padded(q_plus, 2) + padded(q_minus, 2))) <= 1e-12

    def test_plan_kernel_branches_round_trip(self):
        ups = build_upsilon(4, 3)
        phi = factorize(gram_polynomial(ups)).phi
        plus, minus = branch_pair(ups, phi)
        for seq, sign in ((plus, 1.0), (minus, -1.0)):
            p2, q2 = reconstruct_polynomials(seq)
            width = ups.degree + 1
            assert np.max(np.abs(padded(p2, width) - padded(ups, width))) <= 1e-9
            assert np.max(
                np.abs(padded(q2, width) - sign * padded(phi, width))
            ) <= 1e-9
