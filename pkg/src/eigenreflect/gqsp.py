"""Rotation-angle synthesis for complementary polynomial pairs.

A pair (p, q) with |p|^2 + |q|^2 = 1 on the unit circle embeds into a
product of ancilla rotations interleaved with a shift that multiplies
the lower branch by x:

    M(x) = R(theta_d, phi_d, 0) . diag(1, x) ... diag(1, x) . R(theta_0, phi_0, lam)

whose first column is (p(x), q(x)).  The rotation convention is

    R(theta, phi, lam) = [[exp(i(lam+phi))cos(theta), exp(i phi)sin(theta)],
                          [exp(i lam)sin(theta),      -cos(theta)]].

Synthesis runs the product backwards, one degree per step.  The two
leading coefficients fix the outermost rotation; undoing it and
shifting the lower branch down drops the degree by one exactly.  When
both leading coefficients sit below the tie-break tolerance (a pair
padded above its true degree), the step is recovered from the trailing
coefficients instead, chosen so the shifted-out constant vanishes; such
steps are listed on the result and announced with a RuntimeWarning.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .completion import completion_residual
from .poly import ComplexPolynomial

__all__ = [
    "TOP_TOL",
    "RESIDUAL_PRE_TOL",
    "ROTATION_CONVENTION",
    "GQSPAngleSequence",
    "synthesize_angles",
    "reconstruct_polynomials",
    "branch_pair",
]

TOP_TOL = 1e-13  # tie-break: leading coefficients below this count as absent
RESIDUAL_PRE_TOL = 1e-8

ROTATION_CONVENTION = (
    "R(theta,phi,lam) = [[e^{i(lam+phi)}cos(theta), e^{i phi}sin(theta)],"
    " [e^{i lam}sin(theta), -cos(theta)]]; shift diag(1,x) on the lower branch"
)


@dataclass(frozen=True)
class GQSPAngleSequence:
    """Angles for one branch walk of degree len(thetas) - 1.

    degenerate_steps records the step indices resolved by the trailing
    -coefficient tie-break; empty for well-conditioned pairs.
    """

    thetas: tuple[float, ...]
    phis: tuple[float, ...]
    lambda_final: float
    degenerate_steps: tuple[int, ...] = ()
    convention: str = field(default=ROTATION_CONVENTION)

    def __post_init__(self) -> None:
        if len(self.thetas) != len(self.phis):
            raise ValueError("thetas and phis must have equal length")
        if not self.thetas:
            raise ValueError("a sequence needs at least the base rotation")
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
        object.__setattr__(self, "degenerate_steps", tuple(self.degenerate_steps))

    @property
    def degree(self) -> int:
        return len(self.thetas) - 1


def synthesize_angles(p: ComplexPolynomial, q: ComplexPolynomial) -> GQSPAngleSequence:
    """Invert the rotation product for a complementary pair.

    The pair must actually be complementary: its unit-circle residual is
    measured on a dense grid and anything above 1e-8 is rejected, since
    the peel-off loses its meaning for non-unitary data.
    """
    d = max(p.degree, q.degree)
    m = max(16 * (2 * d + 1), 16)
    res = completion_residual(p, q, m)
    if res > RESIDUAL_PRE_TOL:
        raise ValueError(
            f"pair is not complementary on the circle (residual {res:.3e})"
        )
    pw = np.zeros(d + 1, dtype=complex)
    qw = np.zeros(d + 1, dtype=complex)
    pw[: p.degree + 1] = p.as_array()
    qw[: q.degree + 1] = q.as_array()
    thetas = np.zeros(d + 1)
    phis = np.zeros(d + 1)
    degenerate: list[int] = []
    for j in range(d, 0, -1):
        top_p, top_q = pw[j], qw[j]
        if abs(top_p) <= TOP_TOL and abs(top_q) <= TOP_TOL:
            # padded step: no leading data, steer by the constants so the
            # shifted-out constant below is zero and nothing is lost
            degenerate.append(j)
            bot_p, bot_q = pw[0], qw[0]
            theta = math.atan2(abs(bot_q), abs(bot_p))
            if abs(bot_p) > TOP_TOL and abs(bot_q) > TOP_TOL:
                phi = cmath.phase(bot_p * bot_q.conjugate())
            else:
                phi = 0.0
        else:
            theta = math.atan2(abs(top_p), abs(top_q))
            if abs(top_p) <= TOP_TOL or abs(top_q) <= TOP_TOL:
                phi = 0.0  # phase is unconstrained here; absorbed downstream
            else:
                phi = cmath.phase(-top_p * top_q.conjugate())
        thetas[j] = theta
        phis[j] = phi
        c, s = math.cos(theta), math.sin(theta)
        back = cmath.exp(-1j * phi)
        new_p = (back * c) * pw + s * qw
        new_q = (back * s) * pw - c * qw
        pw = new_p[:j]
        qw = new_q[1 : j + 1]
    thetas[0] = math.atan2(abs(qw[0]), abs(pw[0]))
    lam = cmath.phase(qw[0]) if abs(qw[0]) > TOP_TOL else 0.0
    phis[0] = cmath.phase(pw[0]) - lam if abs(pw[0]) > TOP_TOL else 0.0
    if degenerate:
        warnings.warn(
            f"{len(degenerate)} synthesis step(s) had no leading data and were "
            "resolved from trailing coefficients",
            RuntimeWarning,
            stacklevel=2,
        )
    return GQSPAngleSequence(
        thetas=tuple(thetas),
        phis=tuple(phis),
        lambda_final=lam,
        degenerate_steps=tuple(reversed(degenerate)),
    )


def reconstruct_polynomials(seq: GQSPAngleSequence) -> tuple[ComplexPolynomial, ComplexPolynomial]:
    """Run the rotation product forwards; returns the first-column pair."""
    p = np.array([cmath.exp(1j * (seq.lambda_final + seq.phis[0])) * math.cos(seq.thetas[0])])
    q = np.array([cmath.exp(1j * seq.lambda_final) * math.sin(seq.thetas[0])])
    for j in range(1, len(seq.thetas)):
        c, s = math.cos(seq.thetas[j]), math.sin(seq.thetas[j])
        fwd = cmath.exp(1j * seq.phis[j])
        p_pad = np.concatenate([p, [0.0]])
        xq = np.concatenate([[0.0], q])
        p, q = fwd * (c * p_pad + s * xq), s * p_pad - c * xq
    return ComplexPolynomial(tuple(p)), ComplexPolynomial(tuple(q))


def branch_pair(
    upsilon: ComplexPolynomial, phi: ComplexPolynomial
) -> tuple[GQSPAngleSequence, GQSPAngleSequence]:
    """Angle sequences for the two walk branches of the reflection.

    Both branches place the averaging kernel in the upper-left block;
    they differ only in the sign of the partner polynomial, which is
    what turns the composite's lower block into a subtraction and the
    upper block into 2|kernel|^2 - 1 on the circle.
    """
    return synthesize_angles(upsilon, phi), synthesize_angles(upsilon, -phi)
