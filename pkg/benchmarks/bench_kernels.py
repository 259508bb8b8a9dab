"""Compare the numba-jitted kernels against the pure-numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--tables 20000] [--rows 6] [--seed 0]

Both implementations are timed on identical batches of random input
tables; the jitted path is warmed up first so compile time is excluded.
Run with BELL_TRADEOFF_BACKEND=numpy to confirm the fallback is what the
package would actually use without numba.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bell_tradeoff import _kernels
from bell_tradeoff.oracle import sample_input


def _batch(tables: int, rows: int, seed: int) -> list[np.ndarray]:
    return [sample_input(rows, seed + i).table for i in range(tables)]


def _time(fn, batch) -> float:
    start = time.perf_counter()
    for table in batch:
        fn(table)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tables", type=int, default=20_000)
    parser.add_argument("--rows", type=int, default=6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"selected backend: {_kernels.active_backend()}")
    batch = _batch(args.tables, args.rows, args.seed)

    candidates = [
        ("measure_triple", _kernels.measure_triple_numpy, _kernels.measure_triple_jit),
        ("brute_sopt", _kernels.brute_sopt_numpy, _kernels.brute_sopt_jit),
    ]
    for name, numpy_fn, jit_fn in candidates:
        numpy_s = _time(numpy_fn, batch)
        line = f"{name:>16}  numpy {numpy_s * 1e6 / args.tables:8.2f} us/table"
        if jit_fn is not None:
            jit_fn(batch[0])  # warm up / compile
            jit_s = _time(jit_fn, batch)
            line += (
                f"  numba {jit_s * 1e6 / args.tables:8.2f} us/table"
                f"  speedup x{numpy_s / jit_s:5.1f}"
            )
        else:
            line += "  numba unavailable in this backend"
        print(line)


if __name__ == "__main__":
    main()
