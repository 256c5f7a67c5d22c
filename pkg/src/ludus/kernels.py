"""Numeric inner loops.

Every kernel comes in two flavours: a ``_jit_*`` loop compiled by numba and a
``_np_*`` version written against plain numpy.  The public wrappers pick the
compiled loop when numba is enabled (see :mod:`ludus._jit`) and the input is
``float64``; exact-rational inputs (object arrays of ``Fraction``) always take
the numpy path, which is dtype-agnostic.
"""

import math

import numpy as np

from ._jit import USE_NUMBA, njit

__all__ = [
    "popcounts",
    "zeta",
    "mobius",
    "weighted_marginals",
    "expected_marginals",
    "is_supermodular_local",
    "is_supermodular_pairs",
    "metropolis_walk",
    "jacobi_hermitian",
]


def _use_jit(values):
    return USE_NUMBA and isinstance(values, np.ndarray) and values.dtype == np.float64


def popcounts(n):
    """Number of set bits of every mask ``0 .. 2**n - 1``."""
    idx = np.arange(1 << n, dtype=np.int64)
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc += (idx >> i) & 1
    return pc


# --- subset-lattice transforms ---------------------------------------------


@njit(cache=True)
def _jit_zeta(a, n):
    size = a.shape[0]
    for i in range(n):
        bit = 1 << i
        for s in range(size):
            if s & bit:
                a[s] += a[s ^ bit]
    return a


@njit(cache=True)
def _jit_mobius(a, n):
    size = a.shape[0]
    for i in range(n):
        bit = 1 << i
        for s in range(size):
            if s & bit:
                a[s] -= a[s ^ bit]
    return a


def _np_zeta(values, n):
    # Bit i of the mask is axis n-1-i of the C-ordered cube.
    cube = np.array(values, copy=True).reshape((2,) * n) if n else np.array(values, copy=True)
    for axis in range(n):
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[axis], hi[axis] = 0, 1
        cube[tuple(hi)] = cube[tuple(hi)] + cube[tuple(lo)]
    return cube.reshape(-1)


def _np_mobius(values, n):
    cube = np.array(values, copy=True).reshape((2,) * n) if n else np.array(values, copy=True)
    for axis in range(n):
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[axis], hi[axis] = 0, 1
        cube[tuple(hi)] = cube[tuple(hi)] - cube[tuple(lo)]
    return cube.reshape(-1)


def zeta(values, n):
    """Subset sums ``out[S] = sum(values[T] for T subset of S)``; returns a new array."""
    if _use_jit(values):
        return _jit_zeta(values.copy(), n)
    return _np_zeta(values, n)


def mobius(values, n):
    """Inverse of :func:`zeta`; returns a new array."""
    if _use_jit(values):
        return _jit_mobius(values.copy(), n)
    return _np_mobius(values, n)


# --- marginal sweeps ---------------------------------------------------------


@njit(cache=True)
def _jit_weighted_marginals(v, n, weight_by_size, pc):
    out = np.zeros(n)
    size = v.shape[0]
    for i in range(n):
        bit = 1 << i
        acc = 0.0
        for s in range(size):
            if not s & bit:
                acc += weight_by_size[pc[s]] * (v[s | bit] - v[s])
        out[i] = acc
    return out


def _np_weighted_marginals(v, n, weight_by_size, pc):
    idx = np.arange(1 << n)
    out = []
    for i in range(n):
        bit = 1 << i
        s = idx[(idx & bit) == 0]
        out.append((weight_by_size[pc[s]] * (v[s | bit] - v[s])).sum())
    return np.array(out, dtype=v.dtype)


def weighted_marginals(v, n, weight_by_size):
    """``out[i] = sum over S not containing i of w(|S|) * (v(S+i) - v(S))``."""
    pc = popcounts(n)
    if _use_jit(v):
        return _jit_weighted_marginals(v, n, np.asarray(weight_by_size, dtype=np.float64), pc)
    return _np_weighted_marginals(v, n, np.asarray(weight_by_size), pc)


@njit(cache=True)
def _jit_expected_marginals(v, probs, n, symmetric):
    out = np.zeros(n)
    size = v.shape[0]
    for i in range(n):
        bit = 1 << i
        acc = 0.0
        for s in range(size):
            d = v[s | bit] - v[s & ~bit]
            if symmetric and (s & bit):
                d = -d
            acc += d * probs[s]
        out[i] = acc
    return out


def _np_expected_marginals(v, probs, n, symmetric):
    idx = np.arange(1 << n)
    out = []
    for i in range(n):
        bit = 1 << i
        d = v[idx | bit] - v[idx & ~bit]
        if symmetric:
            d = np.where(idx & bit, -d, d)
        out.append((d * probs).sum())
    return np.array(out, dtype=np.result_type(v, probs))


def expected_marginals(v, probs, n, symmetric=False):
    """Expected marginal contribution of each player under a distribution on all coalitions.

    With ``symmetric=False`` the marginal of ``i`` at ``S`` is ``v(S+i) - v(S-i)``
    regardless of membership; ``symmetric=True`` uses ``v(S xor i) - v(S)``.
    """
    if _use_jit(v) and np.asarray(probs).dtype == np.float64:
        return _jit_expected_marginals(v, np.asarray(probs), n, symmetric)
    return _np_expected_marginals(v, np.asarray(probs), n, symmetric)


# --- supermodularity ---------------------------------------------------------


@njit(cache=True)
def _jit_supermodular_local(v, n, tol):
    size = v.shape[0]
    for s in range(size):
        for i in range(n):
            bi = 1 << i
            if s & bi:
                continue
            for j in range(i + 1, n):
                bj = 1 << j
                if s & bj:
                    continue
                if v[s | bi | bj] + v[s] < v[s | bi] + v[s | bj] - tol:
                    return False
    return True


@njit(cache=True)
def _jit_supermodular_pairs(v, tol):
    size = v.shape[0]
    for s in range(size):
        for t in range(s + 1, size):
            if v[s & t] + v[s | t] < v[s] + v[t] - tol:
                return False
    return True


def _np_supermodular_local(v, n, tol):
    idx = np.arange(1 << n)
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            s = idx[(idx & (bi | bj)) == 0]
            if np.any(v[s | bi | bj] + v[s] < v[s | bi] + v[s | bj] - tol):
                return False
    return True


def _np_supermodular_pairs(v, tol):
    idx = np.arange(v.shape[0])
    for s in range(v.shape[0]):
        t = idx[s + 1:]
        if np.any(v[s & t] + v[s | t] < v[s] + v[t] - tol):
            return False
    return True


def is_supermodular_local(v, n, tol=0.0):
    """Check ``v(S+i+j) + v(S) >= v(S+i) + v(S+j)`` for all S and i, j outside S."""
    if _use_jit(v):
        return bool(_jit_supermodular_local(v, n, tol))
    return bool(_np_supermodular_local(v, n, tol))


def is_supermodular_pairs(v, tol=0.0):
    """Check ``v(S & T) + v(S | T) >= v(S) + v(T)`` over all pairs of coalitions."""
    if _use_jit(v):
        return bool(_jit_supermodular_pairs(v, tol))
    return bool(_np_supermodular_pairs(v, tol))


# --- Metropolis dynamics -----------------------------------------------------


@njit(cache=True)
def _jit_metropolis(v, radices, strides, temps, agents, actions, uniforms, x0):
    steps = agents.shape[0]
    traj = np.empty(steps + 1, dtype=np.int64)
    x = x0
    traj[0] = x
    for t in range(steps):
        i = agents[t]
        cur = (x // strides[i]) % radices[i]
        y = x + (actions[t] - cur) * strides[i]
        dv = v[y] - v[x]
        if dv >= 0.0:
            x = y
        elif temps[t] == 0.0:
            x = y
        elif uniforms[t] < math.exp(dv * temps[t]):
            x = y
        traj[t + 1] = x
    return traj


def _np_metropolis(v, radices, strides, temps, agents, actions, uniforms, x0):
    steps = agents.shape[0]
    traj = np.empty(steps + 1, dtype=np.int64)
    x = int(x0)
    traj[0] = x
    for t in range(steps):
        i = agents[t]
        cur = (x // strides[i]) % radices[i]
        y = x + (int(actions[t]) - int(cur)) * int(strides[i])
        dv = v[y] - v[x]
        if dv >= 0.0 or temps[t] == 0.0 or uniforms[t] < math.exp(dv * temps[t]):
            x = y
        traj[t + 1] = x
    return traj


def metropolis_walk(v, radices, temps, agents, actions, uniforms, x0, *, jit=None):
    """Run the accept/reject loop on pre-drawn randomness; returns the visited state indices.

    ``v`` is indexed by the mixed-radix encoding of a profile (first agent is
    the least significant digit).  ``temps[t]`` is the inverse-temperature
    parameter at step ``t``.
    """
    v = np.ascontiguousarray(v, dtype=np.float64)
    radices = np.asarray(radices, dtype=np.int64)
    strides = np.concatenate(([1], np.cumprod(radices)[:-1])).astype(np.int64)
    args = (
        v,
        radices,
        strides,
        np.ascontiguousarray(temps, dtype=np.float64),
        np.ascontiguousarray(agents, dtype=np.int64),
        np.ascontiguousarray(actions, dtype=np.int64),
        np.ascontiguousarray(uniforms, dtype=np.float64),
        np.int64(x0),
    )
    if USE_NUMBA if jit is None else jit:
        return _jit_metropolis(*args)
    return _np_metropolis(*args)


# --- Hermitian Jacobi --------------------------------------------------------


def _rotation_py(app, aqq, apq):
    """Unitary 2x2 block that annihilates the (p, q) entry."""
    mag = abs(apq)
    phase = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # D @ R with D = diag(1, conj(phase)) and R = [[c, s], [-s, c]]
    ph = phase.conjugate()
    return c + 0j, s + 0j, -s * ph, c * ph


_rotation = njit(cache=True)(_rotation_py)


@njit(cache=True)
def _jit_jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(off) <= tol:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq.real == 0.0 and apq.imag == 0.0:
                    continue
                gpp, gpq, gqp, gqq = _rotation(a[p, p].real, a[q, q].real, apq)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * gpp + akq * gqp
                    a[k, q] = akp * gpq + akq * gqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = gpp.conjugate() * apk + gqp.conjugate() * aqk
                    a[q, k] = gpq.conjugate() * apk + gqq.conjugate() * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * gpp + vkq * gqp
                    v[k, q] = vkp * gpq + vkq * gqq
    return np.diag(a).real.copy(), v, sweeps


def _np_jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    offdiag = ~np.eye(n, dtype=bool)
    sweeps = 0
    while sweeps < max_sweeps:
        if math.sqrt(float(np.sum(np.abs(a[offdiag]) ** 2))) <= tol:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0:
                    continue
                gpp, gpq, gqp, gqq = _rotation_py(a[p, p].real, a[q, q].real, complex(apq))
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = colp * gpp + colq * gqp
                a[:, q] = colp * gpq + colq * gqq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(gpp) * rowp + np.conj(gqp) * rowq
                a[q, :] = np.conj(gpq) * rowp + np.conj(gqq) * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * gpp + vq * gqp
                v[:, q] = vp * gpq + vq * gqq
    return np.diag(a).real.copy(), v, sweeps


def jacobi_hermitian(c, tol, max_sweeps=100, *, jit=None):
    """Cyclic Jacobi on a hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvectors in the
    columns, unsorted.  Iteration stops once the off-diagonal Frobenius mass is
    at most ``tol``.
    """
    a = np.array(c, dtype=np.complex128, copy=True)
    if USE_NUMBA if jit is None else jit:
        return _jit_jacobi(a, float(tol), int(max_sweeps))
    return _np_jacobi(a, float(tol), int(max_sweeps))
