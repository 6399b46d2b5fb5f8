"""Gate-level intermediate representation over an opaque controlled oracle.

Circuits here are flat gate tuples over exactly two registers: one
ancilla qubit and one opaque system block.  Only two gate species
exist, ancilla rotations and oracle applications conditioned on the
ancilla, which is all the reflection construction ever needs.  Target
phases enter as a per-oracle phase_shift rather than by editing the
oracle itself, so the oracle stays a black box.

Builders produce the two branch walks and their composite; counting is
an exact structural tally, so predicted resource numbers can be
asserted with zero tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from .gqsp import GQSPAngleSequence
from .poly import ReflectionPlan

__all__ = [
    "AncillaRotation",
    "ControlledOracle",
    "Gate",
    "CircuitIR",
    "GateCounts",
    "build_w",
    "adjoint",
    "compose",
    "build_reflection",
    "gate_counts",
]


@dataclass(frozen=True)
class AncillaRotation:
    """Single-qubit gate on the ancilla, in the synthesis convention.

    Matrix: [[exp(i(lam+phi))cos(theta), exp(i phi)sin(theta)],
             [exp(i lam)sin(theta),      -cos(theta)]].
    """

    theta: float
    phi: float
    lam: float


@dataclass(frozen=True)
class ControlledOracle:
    """Applies exp(-i phase_shift) * U**exponent when the ancilla is |1>."""

    exponent: int
    phase_shift: float = 0.0

    def __post_init__(self) -> None:
        if self.exponent not in (1, -1):
            raise ValueError("exponent must be +1 or -1")


Gate = Union[AncillaRotation, ControlledOracle]


@dataclass(frozen=True)
class CircuitIR:
    gates: tuple[Gate, ...]
    declared_degree: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.declared_degree < 0:
            raise ValueError("declared_degree must be nonnegative")


@dataclass(frozen=True)
class GateCounts:
    controlled_u: int
    controlled_u_dagger: int
    single_qubit_rotations: int

    @property
    def total(self) -> int:
        return self.controlled_u + self.controlled_u_dagger + self.single_qubit_rotations


def build_w(angles: GQSPAngleSequence, phase_shift: float = 0.0) -> CircuitIR:
    """One branch walk: opening rotation, then (oracle, rotation) pairs.

    A degree-d sequence yields exactly d oracle calls and d+1 rotations.
    """
    gates: list[Gate] = [
        AncillaRotation(angles.thetas[0], angles.phis[0], angles.lambda_final)
    ]
    for k in range(1, len(angles.thetas)):
        gates.append(ControlledOracle(1, phase_shift))
        gates.append(AncillaRotation(angles.thetas[k], angles.phis[k], 0.0))
    return CircuitIR(tuple(gates), declared_degree=angles.degree)


def adjoint(c: CircuitIR) -> CircuitIR:
    """Structural inverse: reversed order, each gate inverted in place.

    The rotation family is closed under inversion: the inverse of
    (theta, phi, lam) is (theta, -lam, -phi).  Oracle gates flip their
    exponent and negate their phase.
    """
    inv: list[Gate] = []
    for g in reversed(c.gates):
        if isinstance(g, AncillaRotation):
            inv.append(AncillaRotation(g.theta, -g.lam, -g.phi))
        else:
            inv.append(replace(g, exponent=-g.exponent, phase_shift=-g.phase_shift))
    return CircuitIR(tuple(inv), declared_degree=c.declared_degree)


def compose(first: CircuitIR, second: CircuitIR) -> CircuitIR:
    """Concatenation; `first` is applied before `second`."""
    return CircuitIR(
        first.gates + second.gates,
        declared_degree=max(first.declared_degree, second.declared_degree),
    )


def build_reflection(
    plan: ReflectionPlan, branches: tuple[GQSPAngleSequence, GQSPAngleSequence]
) -> CircuitIR:
    """Composite circuit: plus branch followed by the adjoint minus branch.

    Both branches must carry exactly the plan's degree, so that the
    structural counts match the plan's predictions.  The plan's target
    phase rides on every oracle gate.
    """
    plus, minus = branches
    if plus.degree != plan.degree or minus.degree != plan.degree:
        raise ValueError(
            f"branch degrees ({plus.degree}, {minus.degree}) do not match "
            f"plan degree {plan.degree}"
        )
    shift = plan.gap.theta
    return compose(build_w(plus, shift), adjoint(build_w(minus, shift)))


def gate_counts(c: CircuitIR) -> GateCounts:
    cu = sum(1 for g in c.gates if isinstance(g, ControlledOracle) and g.exponent == 1)
    cud = sum(1 for g in c.gates if isinstance(g, ControlledOracle) and g.exponent == -1)
    rot = sum(1 for g in c.gates if isinstance(g, AncillaRotation))
    return GateCounts(cu, cud, rot)
