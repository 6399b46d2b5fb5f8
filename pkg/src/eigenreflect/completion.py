"""Complementary-polynomial completion.

For a polynomial p bounded by 1 in modulus on the unit circle, find a
partner q of no larger degree with |p|^2 + |q|^2 = 1 on the circle.
The defect 1 - |p|^2 is a nonnegative trigonometric polynomial, so it
factors as a squared modulus; this module locates the factor
numerically and certifies the residual on a dense grid.

Primary route: roots.  The defect, premultiplied by z^d, is an ordinary
polynomial whose roots come in reciprocal-conjugate pairs.  One
representative per pair (inside the circle preferred; on-circle pairs
collapsed to their cluster centroid, which restores the accuracy lost
to double-root splitting) reassembles the factor up to a positive
scale, fixed at the best-conditioned grid point.  A few Newton
corrections in coefficient space then push the residual to machine
noise.

Fallback route: log-domain factorization on a dense grid, regularized
against circle zeros, followed by the same Newton corrections.  Engaged
automatically when root selection misbehaves or misses the tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .poly import ComplexPolynomial, eval_on_circle_grid

__all__ = [
    "TrigPolynomial",
    "CompletionResult",
    "CompletionError",
    "ConditioningWarning",
    "gram_polynomial",
    "factorize",
    "completion_residual",
]

_HERMITIAN_TOL = 1e-13
_NONNEG_TOL = 1e-9
_CIRCLE_BAND = 1e-7  # |.|-distance from the unit circle treated as "on"
_CLUSTER_TOL = 1e-5  # chord distance that groups split multiple roots
_NEWTON_ITERS = 2
# the circle zero makes the autocorrelation Jacobian singular there, so
# convergence from the log-domain start is linear, not quadratic
_CEPSTRUM_NEWTON_ITERS = 40


class CompletionError(RuntimeError):
    """No permitted factorization route met the requested residual."""

    def __init__(self, message: str, achieved_residual: float) -> None:
        super().__init__(message)
        self.achieved_residual = achieved_residual


class ConditioningWarning(UserWarning):
    """Numerically ambiguous root structure (odd-sized on-circle cluster)."""


@dataclass(frozen=True)
class TrigPolynomial:
    """Laurent coefficients of a real-on-circle trigonometric polynomial.

    Index k of laurent_coeffs holds the coefficient of z^(k - d), where
    2d + 1 is the stored length.  Hermitian symmetry (entry at -k equal
    to the conjugate of entry at +k, within 1e-13) is checked at
    construction; it is what makes the circle values real.
    """

    laurent_coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        g = tuple(complex(x) for x in self.laurent_coeffs)
        if len(g) % 2 != 1:
            raise ValueError("laurent_coeffs must have odd length 2d+1")
        arr = np.array(g, dtype=complex)
        if arr.size and float(np.max(np.abs(arr - np.conj(arr[::-1])))) > _HERMITIAN_TOL:
            raise ValueError("laurent coefficients are not Hermitian-symmetric")
        object.__setattr__(self, "laurent_coeffs", g)

    @property
    def order(self) -> int:
        return (len(self.laurent_coeffs) - 1) // 2

    def as_array(self) -> np.ndarray:
        return np.array(self.laurent_coeffs, dtype=complex)

    def values_on_grid(self, m: int) -> np.ndarray:
        """Real values at the m-th roots of unity.

        The imaginary parts are rounding noise by Hermitian symmetry and
        are dropped.
        """
        if m < len(self.laurent_coeffs):
            raise ValueError("grid too coarse for the stored order")
        vals = m * np.fft.ifft(self.as_array(), m)
        vals *= np.exp(-2j * np.pi * np.arange(m) * self.order / m)
        return vals.real


@dataclass(frozen=True)
class CompletionResult:
    phi: ComplexPolynomial
    residual: float
    method: str  # "root_factorization" or "cepstrum"


def gram_polynomial(upsilon: ComplexPolynomial) -> TrigPolynomial:
    """Laurent coefficients of 1 - |upsilon|^2 on the unit circle.

    Rejects inputs whose modulus exceeds 1 on the circle (grid values of
    the defect below -1e-9), since no completion exists for them.
    """
    c = upsilon.as_array()
    d = upsilon.degree
    auto = np.convolve(c, np.conj(c[::-1]))  # exponents -d..d of |upsilon|^2
    g = -auto
    g[d] += 1.0
    trig = TrigPolynomial(tuple(g))
    m = max(64, 16 * (2 * d + 1))
    worst = float(trig.values_on_grid(m).min())
    if worst < -_NONNEG_TOL:
        raise ValueError(f"modulus exceeds 1 on the circle (defect {worst:.3e})")
    return trig


def factorize(gram: TrigPolynomial, tol: float = 1e-10, method: str = "auto") -> CompletionResult:
    """Polynomial whose squared circle modulus matches a nonnegative defect.

    method "auto" tries the root route first and falls back to the
    log-domain route when the certified residual misses tol; "root" and
    "cepstrum" force a single route (used by cross-checking tests).

    The leading coefficient is rotated to be real and nonnegative, which
    pins down the otherwise free global phase.  Raises CompletionError,
    carrying the best residual achieved, when no permitted route
    reaches tol.
    """
    if method not in ("auto", "root", "cepstrum"):
        raise ValueError(f"unknown method {method!r}")
    candidates: list[tuple[str, np.ndarray, float]] = []
    if method in ("auto", "root"):
        try:
            phi, res = _factor_by_roots(gram)
            candidates.append(("root_factorization", phi, res))
        except _RootSelectionFailure as exc:
            if method == "root":
                raise CompletionError(str(exc), math.inf) from exc
    root_good = bool(candidates) and candidates[0][2] <= tol
    if method == "cepstrum" or (method == "auto" and not root_good):
        phi, res = _factor_by_cepstrum(gram)
        candidates.append(("cepstrum", phi, res))
    name, phi, residual = min(candidates, key=lambda entry: entry[2])
    if residual > tol:
        raise CompletionError(
            f"residual {residual:.3e} exceeds tolerance {tol:.3e}", residual
        )
    return CompletionResult(phi=ComplexPolynomial(tuple(phi)), residual=residual, method=name)


def completion_residual(upsilon: ComplexPolynomial, phi: ComplexPolynomial, m: int) -> float:
    """Max over m circle points of | |upsilon|^2 + |phi|^2 - 1 |."""
    needed = 2 * max(upsilon.degree, phi.degree) + 1
    if m < needed:
        raise ValueError(f"need m >= {needed} grid points, got {m}")
    u = np.abs(eval_on_circle_grid(upsilon, m)) ** 2
    p = np.abs(eval_on_circle_grid(phi, m)) ** 2
    return float(np.max(np.abs(u + p - 1.0)))


class _RootSelectionFailure(RuntimeError):
    pass


def _grid_size(d: int) -> int:
    m = 64
    while m < 16 * (2 * d + 1):
        m *= 2
    return m


def _gram_residual(phi: np.ndarray, gram: TrigPolynomial) -> float:
    d = gram.order
    m = max(16 * (2 * d + 1), 2 * len(phi) + 1, 16)
    gv = gram.values_on_grid(m)
    pv = m * np.fft.ifft(phi, m)
    return float(np.max(np.abs(np.abs(pv) ** 2 - gv)))


def _cluster_circle_roots(roots: np.ndarray) -> list[np.ndarray]:
    if len(roots) == 0:
        return []
    ordered = roots[np.argsort(np.angle(roots))]
    clusters: list[list[complex]] = [[ordered[0]]]
    for r in ordered[1:]:
        if abs(r - clusters[-1][-1]) <= _CLUSTER_TOL:
            clusters[-1].append(r)
        else:
            clusters.append([r])
    # the angular sort cuts the circle at -pi; rejoin a cluster split there
    if len(clusters) > 1 and abs(ordered[0] - clusters[-1][-1]) <= _CLUSTER_TOL:
        clusters[0] = clusters.pop() + clusters[0]
    return [np.array(c) for c in clusters]


def _select_factor_roots(roots: np.ndarray, want: int) -> np.ndarray:
    mods = np.abs(roots)
    chosen = list(roots[mods < 1.0 - _CIRCLE_BAND])
    on_circle = roots[(mods >= 1.0 - _CIRCLE_BAND) & (mods <= 1.0 + _CIRCLE_BAND)]
    for cluster in _cluster_circle_roots(on_circle):
        pairs, odd = divmod(len(cluster), 2)
        if odd:
            warnings.warn(
                f"on-circle root cluster of odd size {len(cluster)}; "
                "factor conditioning is suspect",
                ConditioningWarning,
                stacklevel=3,
            )
        if pairs:
            centroid = complex(np.mean(cluster))
            centroid = centroid / abs(centroid) if abs(centroid) > 0.0 else 1.0 + 0j
            chosen.extend([centroid] * pairs)
    if len(chosen) != want:
        raise _RootSelectionFailure(
            f"selected {len(chosen)} factor roots where {want} were expected"
        )
    return np.array(chosen, dtype=complex)


def _factor_by_roots(gram: TrigPolynomial) -> tuple[np.ndarray, float]:
    g = gram.as_array()
    scale = float(np.max(np.abs(g))) if g.size else 0.0
    if scale == 0.0:
        phi = np.zeros(1, dtype=complex)
        return phi, _gram_residual(phi, gram)
    # strip negligible outer coefficients; they only lower the factor degree
    d = gram.order
    while d > 0 and abs(g[0]) <= 1e-15 * scale and abs(g[-1]) <= 1e-15 * scale:
        g = g[1:-1]
        d -= 1
    if d == 0:
        phi = np.array([math.sqrt(max(g[0].real, 0.0))], dtype=complex)
        return phi, _gram_residual(phi, gram)
    roots = npoly.polyroots(g)  # roots of z^d * defect(z), degree 2d
    selected = _select_factor_roots(roots, d)
    m = _grid_size(d)
    gv = np.maximum(gram.values_on_grid(m), 0.0)
    w = np.exp(2j * np.pi * np.arange(m) / m)
    vals = np.ones(m, dtype=complex)
    for r in selected:
        vals *= w - r
    anchor = int(np.argmax(gv))  # best-conditioned point: the defect maximum
    if gv[anchor] == 0.0 or abs(vals[anchor]) == 0.0:
        raise _RootSelectionFailure("degenerate anchor point for scale matching")
    vals *= math.sqrt(gv[anchor]) / abs(vals[anchor])
    coeffs = (np.fft.fft(vals) / m)[: d + 1]
    coeffs = _newton_polish(coeffs, gram.as_array() if d == gram.order else g)
    coeffs = _fix_leading_phase(coeffs)
    return coeffs, _gram_residual(coeffs, gram)


def _factor_by_cepstrum(gram: TrigPolynomial) -> tuple[np.ndarray, float]:
    d = gram.order
    g = gram.as_array()
    if d == 0:
        phi = np.array([math.sqrt(max(g[0].real, 0.0))], dtype=complex)
        return phi, _gram_residual(phi, gram)
    peak_coeff = float(np.max(np.abs(g)))
    if peak_coeff == 0.0:
        phi = np.zeros(1, dtype=complex)
        return phi, _gram_residual(phi, gram)
    m = max(32 * _grid_size(d), 1024)  # the log is not band-limited: oversample hard
    gv = np.maximum(gram.values_on_grid(m), 0.0)
    peak = float(gv.max())
    if peak == 0.0:
        phi = np.zeros(1, dtype=complex)
        return phi, _gram_residual(phi, gram)
    # the floor both keeps the log finite at circle zeros and smooths the
    # dip there, which shortens the coefficient tail lost to truncation;
    # Newton repairs the bias it introduces
    floor = peak * 1e-10
    ell = np.fft.fft(np.log(gv + floor)) / m
    half = np.zeros(m, dtype=complex)
    half[0] = 0.5 * ell[0]
    half[1 : m // 2] = ell[1 : m // 2]
    half[m // 2] = 0.5 * ell[m // 2]
    vals = np.exp(m * np.fft.ifft(half))
    coeffs = (np.fft.fft(vals) / m)[: d + 1]
    coeffs = _newton_polish(coeffs, g, iters=_CEPSTRUM_NEWTON_ITERS)
    coeffs = _fix_leading_phase(coeffs)
    return coeffs, _gram_residual(coeffs, gram)


def _newton_polish(phi: np.ndarray, g: np.ndarray, iters: int = _NEWTON_ITERS) -> np.ndarray:
    """Least-squares Newton steps on the autocorrelation map.

    The starting point is already accurate, so a couple of damped steps
    settle at machine noise.  Real and imaginary parts are stacked into
    one real system; the Jacobian stays small (it scales with degree).
    """
    e = phi.astype(complex)
    k = len(e)

    def residual_vec(vec: np.ndarray) -> np.ndarray:
        return np.convolve(vec, np.conj(vec[::-1])) - g

    for _ in range(iters):
        r = residual_vec(e)
        size = float(np.max(np.abs(r)))
        if size < 1e-15:
            break
        flip = np.conj(e[::-1])
        cols = []
        for i in range(k):
            basis = np.zeros(k, dtype=complex)
            basis[i] = 1.0
            cols.append(np.convolve(basis, flip) + np.convolve(e, np.conj(basis[::-1])))
            basis_im = 1j * basis
            cols.append(
                np.convolve(basis_im, flip) + np.convolve(e, np.conj(basis_im[::-1]))
            )
        jac = np.array(cols).T
        system = np.vstack([jac.real, jac.imag])
        rhs = np.concatenate([r.real, r.imag])
        step, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        delta = step[0::2] + 1j * step[1::2]
        for damp in (1.0, 0.5, 0.25):
            trial = e - damp * delta
            if float(np.max(np.abs(residual_vec(trial)))) < size:
                e = trial
                break
        else:
            break  # no direction of improvement left
    return e


def _fix_leading_phase(phi: np.ndarray) -> np.ndarray:
    lead = phi[-1]
    if abs(lead) == 0.0:
        return phi
    return phi * (np.conj(lead) / abs(lead))
