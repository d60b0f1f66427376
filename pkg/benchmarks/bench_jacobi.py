"""Time the compiled and numpy Jacobi kernels on random Hermitian matrices.

    python benchmarks/bench_jacobi.py [--repeat N]
"""
import argparse
import time

import numpy as np

from gbt import linalg


def random_hermitian(n, rng):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def bench(backend, mats, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for h in mats:
            linalg.jacobi_eig(h, backend)
        best = min(best, time.perf_counter() - t0)
    return best / len(mats)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--count", type=int, default=20)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    backends = linalg.available_backends()
    print(f"{'n':>4} " + " ".join(f"{b:>14}" for b in backends) + "   speedup")
    for n in (4, 9, 16, 27, 64):
        mats = [random_hermitian(n, rng) for _ in range(args.count)]
        times = {b: bench(b, mats, args.repeat) for b in backends}
        row = " ".join(f"{times[b] * 1e3:11.3f} ms" for b in backends)
        speed = f"{times['python'] / times['compiled']:8.1f}x" if "compiled" in times else "       -"
        print(f"{n:>4} {row} {speed}")


if __name__ == "__main__":
    main()
