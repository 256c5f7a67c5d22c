"""Interaction matrices and their hermitian (quantum) representation."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .coopgame import TUGame

__all__ = [
    "SpectralForm",
    "Measurement",
    "inner",
    "norm",
    "is_selfadjoint",
    "symmetry_decomposition",
    "hermitian_map",
    "hermitian_inverse",
    "spectral_decomposition",
    "measurement",
    "normalize_state",
    "interaction_probabilities",
    "expected_potential",
    "coop_expectation",
    "principal_component",
    "markov_evolution",
    "fuzzy_to_state",
]

SELFADJOINT_TOL = 1e-9
JACOBI_REL_TOL = 1e-12
UNIT_TOL = 1e-12


def _square(a, dtype):
    a = np.asarray(a, dtype=dtype)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError("expected a nonempty square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def inner(a, b) -> complex:
    """``<A|B> = sum conj(A) * B`` over all entries."""
    return complex(np.vdot(np.asarray(a), np.asarray(b)))


def norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def is_selfadjoint(c, tol: float = SELFADJOINT_TOL) -> bool:
    c = np.asarray(c)
    return bool(np.max(np.abs(c - c.conj().T), initial=0.0) <= tol * max(1.0, norm(c)))


def symmetry_decomposition(a):
    """``(A+, A-)`` with ``A+ = (A + A^T)/2`` symmetric and ``A- = (A - A^T)/2`` skew."""
    a = _square(a, np.float64)
    return (a + a.T) / 2, (a - a.T) / 2


def hermitian_map(a) -> np.ndarray:
    """``A+ + i A-``, a selfadjoint matrix with the same norm as ``A``."""
    plus, minus = symmetry_decomposition(a)
    return plus + 1j * minus


def hermitian_inverse(c) -> np.ndarray:
    c = _square(c, np.complex128)
    if not is_selfadjoint(c):
        raise ValueError("matrix is not selfadjoint")
    return c.real + c.imag


@dataclass(frozen=True)
class SpectralForm:
    """``C = sum_x values[x] U_x U_x^*`` with ``U_x = vectors[:, x]``."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def spectral_decomposition(c, max_sweeps: int = 100, jit=None) -> SpectralForm:
    """Cyclic complex Jacobi; eigenvalues descending.

    Eigenvalues within ``1e-12 ||C||`` count as tied and are ordered by the
    index of their eigenvector's largest component; each eigenvector is
    rotated so that this component is real and positive.
    """
    c = _square(c, np.complex128)
    if not is_selfadjoint(c):
        raise ValueError("matrix is not selfadjoint")
    c = (c + c.conj().T) / 2
    scale = norm(c)
    vals, vecs, sweeps = kernels.jacobi_hermitian(c, JACOBI_REL_TOL * scale, max_sweeps, jit=jit)
    vals = vals.real.copy()
    lead = np.argmax(np.abs(vecs) > np.abs(vecs).max(axis=0) * (1 - 1e-9), axis=0)
    phase = vecs[lead, np.arange(len(vals))]
    vecs = vecs * (np.abs(phase) / phase)[None, :]
    order = np.lexsort((lead, -vals))
    # merge near-equal values into ties, then break them by the lead index
    vals_sorted = vals[order]
    cluster = np.concatenate(([0], np.cumsum(np.diff(-vals_sorted) > JACOBI_REL_TOL * max(scale, 1.0))))
    order = order[np.lexsort((lead[order], cluster))]
    return SpectralForm(vals[order], vecs[:, order], sweeps)


def normalize_state(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("state must be a nonempty vector")
    if abs(np.linalg.norm(v) - 1) > UNIT_TOL * 1e3:
        raise ValueError("state vector must have unit norm")
    return v


@dataclass(frozen=True)
class Measurement:
    probabilities: np.ndarray
    values: np.ndarray
    expectation: float


def measurement(c, v, jit=None) -> Measurement:
    """Distribution ``|<v|U_x>|^2`` over the eigenbasis and the expected eigenvalue."""
    v = normalize_state(v)
    form = spectral_decomposition(c, jit=jit)
    if v.size != form.values.size:
        raise ValueError("state and matrix dimensions differ")
    p = np.abs(form.vectors.conj().T @ v) ** 2
    return Measurement(p, form.values, float(p @ form.values))


def _interaction_state(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("interaction state must be a nonempty matrix")
    if abs(norm(a) - 1) > UNIT_TOL * 1e3:
        raise ValueError("interaction state must have norm 1")
    return a


def interaction_probabilities(a) -> np.ndarray:
    """``p_xy = |A_xy|^2`` for a unit-norm interaction matrix."""
    return np.abs(_interaction_state(a)) ** 2


def expected_potential(f, a) -> float:
    """``<A | F o A> = sum F_xy |A_xy|^2``."""
    p = interaction_probabilities(a)
    f = np.asarray(f, dtype=np.float64)
    if f.shape != p.shape:
        raise ValueError("potential and state differ in shape")
    return float((f * p).sum())


def coop_expectation(game: TUGame, a) -> float:
    """``sum_S v(S) |A_SS|^2`` for a state indexed by coalitions."""
    a = _interaction_state(a)
    if a.shape != (1 << game.n, 1 << game.n):
        raise ValueError("state must be indexed by the coalitions of the game")
    return float(np.asarray(game.values, dtype=np.float64) @ (np.abs(np.diag(a)) ** 2))


def principal_component(v):
    """``(V+, V-, V)`` for ``v = a + ib``: ``V+ = aa^T + bb^T``, ``V- = ba^T - ab^T``."""
    v = normalize_state(v)
    a, b = v.real, v.imag
    plus = np.outer(a, a) + np.outer(b, b)
    minus = np.outer(b, a) - np.outer(a, b)
    return plus, minus, plus + minus


def markov_evolution(transition, p0, v, steps: int) -> np.ndarray:
    """Observed values ``pi_t = v^* P_t v`` for ``t = 0..steps``.

    ``transition[x, y]`` is the probability of moving from ``x`` to ``y``
    (rows sum to one) and ``P_t = diag(p0 M^t)``.
    """
    m = _square(transition, np.float64)
    if np.any(m < 0) or not np.allclose(m.sum(axis=1), 1.0, atol=1e-12):
        raise ValueError("transition must be row-stochastic")
    p = np.asarray(p0, dtype=np.float64)
    if p.shape != (m.shape[0],) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError("p0 must be a distribution over the states")
    weight = np.abs(normalize_state(v)) ** 2
    if weight.size != p.size:
        raise ValueError("state vector has the wrong dimension")
    out = np.empty(steps + 1)
    for t in range(steps + 1):
        out[t] = weight @ p
        p = p @ m
    return out


def fuzzy_to_state(w):
    """Unit vector ``sqrt(w) / ||sqrt(w)||`` and the scale with ``w = scale * |v|^2``."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or np.any(w < 0) or np.any(w > 1):
        raise ValueError("fuzzy weights must lie in [0, 1]")
    scale = float(w.sum())
    if scale == 0:
        raise ValueError("fuzzy coalition must be nonzero")
    return np.sqrt(w / scale).astype(np.complex128), scale
