"""Ground-truth checks by exact eigendecomposition.

Everything the circuit path promises can be restated on the spectrum
of the input unitary: the target projector, the averaging kernel
applied to the unitary, and the distance of the composite block from
the ideal reflection.  This module computes those quantities directly
from a dense eigendecomposition, deliberately bypassing the rotation
synthesis, so the two paths check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import linalg as sla

from .circuit import CircuitIR, GateCounts, build_w, gate_counts
from .completion import completion_residual, factorize, gram_polynomial
from .gqsp import branch_pair
from .poly import ComplexPolynomial, GapSpec, ReflectionPlan, build_upsilon
from .sim import pue_block, realize, spectral_norm

__all__ = [
    "PHASE_MATCH_TOL",
    "GapViolation",
    "TargetAbsent",
    "SpectralData",
    "VerificationReport",
    "decompose",
    "validate_gap",
    "exact_projector",
    "apply_poly",
    "verify_reflection",
]

PHASE_MATCH_TOL = 1e-9  # angular distance under which a phase counts as the target
_UNITARY_TOL = 1e-10
_BOUND_SLACK = 1e-8


class GapViolation(Exception):
    """An eigenphase sits inside the exclusion arc but is not the target."""

    def __init__(self, offending_phase: float) -> None:
        super().__init__(
            f"eigenphase {offending_phase:.12g} lies inside the gap arc"
        )
        self.offending_phase = float(offending_phase)


class TargetAbsent(Exception):
    """No eigenphase matches the requested target phase."""


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigendecomposition of a unitary: U = V diag(exp(i phases)) V^dagger.

    target_multiplicity is 0 until a gap validation has counted the
    matching eigenphases; it is informational only.
    """

    eigenphases: np.ndarray
    eigenvectors: np.ndarray
    target_multiplicity: int = 0

    @property
    def dim(self) -> int:
        return int(self.eigenvectors.shape[0])

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.exp(1j * self.eigenphases)) @ v.conj().T


@dataclass(frozen=True)
class VerificationReport:
    measured_error: float
    bound: float
    bound_satisfied: bool
    counts: GateCounts
    predicted_counts: GateCounts
    completion_residual: float
    unitarity_residual: float
    oracle_block_residual: float
    params: ReflectionPlan
    branch_unitarity_residual: float
    target_multiplicity: int


def decompose(u: np.ndarray) -> SpectralData:
    """Eigenphases (ascending, in (-pi, pi]) and an orthonormal eigenbasis.

    Uses a complex Schur factorization: for a unitary input the
    triangular factor is diagonal up to rounding, so its diagonal holds
    the eigenvalues and the orthogonal factor the eigenvectors.  The
    reconstruction is re-checked so a silently bad decomposition cannot
    leak into downstream verdicts.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("expected a square matrix")
    defect = spectral_norm(u.conj().T @ u - np.eye(u.shape[0]))
    if defect > _UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    t, z = sla.schur(u, output="complex")
    phases = np.angle(np.diagonal(t))
    order = np.argsort(phases, kind="stable")
    data = SpectralData(
        eigenphases=phases[order].copy(), eigenvectors=z[:, order].copy()
    )
    residual = spectral_norm(data.reconstruct() - u)
    if residual > _UNITARY_TOL:
        raise ValueError(f"eigendecomposition failed (residual {residual:.3e})")
    return data


def _circular_distance(phases: np.ndarray, theta: float) -> np.ndarray:
    return np.abs(np.angle(np.exp(1j * (phases - theta))))


def validate_gap(s: SpectralData, gap: GapSpec) -> int:
    """Count target eigenphases; reject spectra that break the gap promise.

    Phases within 1e-9 of theta count as the target.  Any other phase
    strictly inside the delta-arc is a violation and is reported before
    target absence, since it invalidates the whole premise.
    """
    dist = _circular_distance(s.eigenphases, gap.theta)
    inside = (dist > PHASE_MATCH_TOL) & (dist < gap.delta)
    if np.any(inside):
        worst = int(np.argmin(np.where(inside, dist, np.inf)))
        raise GapViolation(float(s.eigenphases[worst]))
    multiplicity = int(np.count_nonzero(dist <= PHASE_MATCH_TOL))
    if multiplicity == 0:
        raise TargetAbsent(f"no eigenphase within {PHASE_MATCH_TOL} of {gap.theta}")
    return multiplicity


def exact_projector(s: SpectralData, theta: float) -> np.ndarray:
    """Orthogonal projector onto the eigenspace at phase theta."""
    mask = _circular_distance(s.eigenphases, theta) <= PHASE_MATCH_TOL
    if not np.any(mask):
        raise TargetAbsent(f"no eigenphase within {PHASE_MATCH_TOL} of {theta}")
    v = s.eigenvectors[:, mask]
    return v @ v.conj().T


def apply_poly(s: SpectralData, p: ComplexPolynomial) -> np.ndarray:
    """p(U) evaluated spectrally: V diag(p(exp(i phases))) V^dagger."""
    vals = npoly.polyval(np.exp(1j * s.eigenphases), p.as_array())
    v = s.eigenvectors
    return (v * vals) @ v.conj().T


def _apply_poly_shifted(s: SpectralData, p: ComplexPolynomial, theta: float) -> np.ndarray:
    """p(e^{-i theta} U): the evaluation the shifted oracle gates realize."""
    vals = npoly.polyval(np.exp(1j * (s.eigenphases - theta)), p.as_array())
    v = s.eigenvectors
    return (v * vals) @ v.conj().T


def verify_reflection(
    u: np.ndarray, gap: GapSpec, composite: CircuitIR, plan: ReflectionPlan
) -> VerificationReport:
    """Full verdict on a composite circuit against the ideal reflection.

    The kernel, its completion, and the plus branch are rebuilt here
    from the plan alone, so every reported residual is computed fresh
    rather than trusted from the synthesis that produced the circuit.
    """
    s = decompose(u)
    multiplicity = validate_gap(s, gap)
    projector = exact_projector(s, gap.theta)
    ideal = 2.0 * projector - np.eye(s.dim)

    w = realize(composite, u)
    measured = spectral_norm(pue_block(w, "top_left") - ideal)
    bound = 4.0 * gap.epsilon
    unitarity = spectral_norm(w.conj().T @ w - np.eye(2 * s.dim))

    upsilon = build_upsilon(plan.t, plan.n)
    completion = factorize(gram_polynomial(upsilon))
    grid = max(16 * (2 * plan.degree + 1), 16)
    residual = completion_residual(upsilon, completion.phi, grid)

    plus, _ = branch_pair(upsilon, completion.phi)
    w_plus = realize(build_w(plus, gap.theta), u)
    branch_unitarity = spectral_norm(w_plus.conj().T @ w_plus - np.eye(2 * s.dim))
    block_vs_oracle = spectral_norm(
        pue_block(w_plus, "top_left") - _apply_poly_shifted(s, upsilon, gap.theta)
    )

    return VerificationReport(
        measured_error=measured,
        bound=bound,
        bound_satisfied=bool(measured <= bound + _BOUND_SLACK),
        counts=gate_counts(composite),
        predicted_counts=GateCounts(
            controlled_u=plan.predicted_controlled_u_per_branch,
            controlled_u_dagger=plan.predicted_controlled_u_per_branch,
            single_qubit_rotations=plan.predicted_rotations,
        ),
        completion_residual=residual,
        unitarity_residual=unitarity,
        oracle_block_residual=block_vs_oracle,
        params=plan,
        branch_unitarity_residual=branch_unitarity,
        target_multiplicity=multiplicity,
    )
