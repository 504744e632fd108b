"""Compare the compiled and pure-Python Jacobi kernels.

    python benchmarks/bench_eig.py [--n 4] [--reps 2000] [--states 50]
"""
import argparse
import time

import numpy as np

from sepcanon import decomp, matcore, qstate


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (g + g.conj().T)


def time_eig(mats):
    t0 = time.perf_counter()
    for m in mats:
        matcore.herm_eig(m)
    return (time.perf_counter() - t0) / len(mats)


def time_decompose(states):
    t0 = time.perf_counter()
    for rho in states:
        decomp.decompose(rho)
    return (time.perf_counter() - t0) / len(states)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4, help="matrix dimension (<= 6)")
    parser.add_argument("--reps", type=int, default=2000)
    parser.add_argument("--states", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    mats = [random_hermitian(rng, args.n) for _ in range(args.reps)]
    states = [qstate.random_density(args.seed + k, 4) for k in range(args.states)]

    backends = matcore.available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the pure-Python fallback is available")
    start = matcore.BACKEND
    rows = []
    for name in backends:
        matcore.use_backend(name)
        time_eig(mats[:50])
        rows.append((name, time_eig(mats), time_decompose(states)))
    matcore.use_backend(start)

    t0 = time.perf_counter()
    for m in mats:
        np.linalg.eigh(m)
    ref = (time.perf_counter() - t0) / len(mats)

    print(f"{'backend':<10}{'herm_eig ' + str(args.n) + 'x' + str(args.n):>18}{'decompose':>14}")
    for name, te, td in rows:
        print(f"{name:<10}{te * 1e6:>15.1f} us{td * 1e3:>11.2f} ms")
    print(f"{'numpy':<10}{ref * 1e6:>15.1f} us{'(eigh only)':>14}")
    if len(rows) == 2:
        print(f"speedup: herm_eig {rows[1][1] / rows[0][1]:.1f}x, decompose {rows[1][2] / rows[0][2]:.1f}x")


if __name__ == "__main__":
    main()
