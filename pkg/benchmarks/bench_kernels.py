"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 16]

Each pair is first checked for agreement, then timed after one warm-up call
(so JIT compilation is excluded).
"""

import argparse
import timeit

import numpy as np

from ludus import kernels as k
from ludus._jit import USE_NUMBA


def cases(n, rng):
    v = rng.normal(size=1 << n)
    pc = k.popcounts(n)
    w = rng.random(n)
    probs = rng.random(1 << n)
    probs /= probs.sum()
    sm = np.array([float(bin(s).count("1") ** 2) for s in range(1 << min(n, 12))])

    steps = 200_000
    radices = np.array([3, 4, 2, 5], dtype=np.int64)
    pot = rng.normal(size=int(radices.prod()))
    strides = np.concatenate(([1], np.cumprod(radices)[:-1])).astype(np.int64)
    agents = rng.integers(0, len(radices), size=steps)
    actions = rng.integers(0, 2, size=steps)
    temps = np.full(steps, 1.5)
    uniforms = rng.random(steps)

    a = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
    herm = a + a.conj().T
    tol = 1e-12 * np.linalg.norm(herm)

    return [
        ("zeta", lambda: k._jit_zeta(v.copy(), n), lambda: k._np_zeta(v, n)),
        ("mobius", lambda: k._jit_mobius(v.copy(), n), lambda: k._np_mobius(v, n)),
        ("weighted_marginals", lambda: k._jit_weighted_marginals(v, n, w, pc),
         lambda: k._np_weighted_marginals(v, n, w, pc)),
        ("expected_marginals", lambda: k._jit_expected_marginals(v, probs, n, False),
         lambda: k._np_expected_marginals(v, probs, n, False)),
        ("supermodular_local", lambda: k._jit_supermodular_local(sm, min(n, 12), 0.0),
         lambda: k._np_supermodular_local(sm, min(n, 12), 0.0)),
        ("metropolis_walk", lambda: k._jit_metropolis(pot, radices, strides, temps, agents, actions, uniforms, 0),
         lambda: k._np_metropolis(pot, radices, strides, temps, agents, actions, uniforms, 0)),
        ("jacobi_hermitian 32x32", lambda: k._jit_jacobi(herm.copy(), tol, 100)[0],
         lambda: k._np_jacobi(herm.copy(), tol, 100)[0]),
    ]


def agree(x, y):
    if isinstance(x, (bool, np.bool_)):
        return bool(x) == bool(y)
    x, y = np.asarray(x), np.asarray(y)
    if x.dtype.kind in "fc" and x.shape == y.shape and x.ndim == 1 and x.size < 100:
        x, y = np.sort_complex(x), np.sort_complex(y)  # jacobi spectra
    return x.shape == y.shape and np.allclose(x, y, rtol=1e-9, atol=1e-9)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=16, help="player count for lattice kernels")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not USE_NUMBA:
        print("numba disabled (LUDUS_DISABLE_NUMBA); both columns run the fallback loops")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<24}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}  agree")
    for name, fast, slow in cases(args.n, rng):
        ok = agree(fast(), slow())  # doubles as JIT warm-up
        t_fast = min(timeit.repeat(fast, number=1, repeat=args.repeat)) * 1e3
        t_slow = min(timeit.repeat(slow, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24}{t_fast:>12.3f}{t_slow:>12.3f}{t_slow / t_fast:>9.1f}x  {ok}")


if __name__ == "__main__":
    main()
