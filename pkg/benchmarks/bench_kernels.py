"""Benchmark the accelerated kernels against the pure-numpy fallbacks.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

With numba installed (the default) the loop kernels are compiled; the numpy
columns show what the ``KARYOBAND_NO_NUMBA=1`` fallback costs instead.
"""

import time

import numpy as np

from karyoband import kernels, synth


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm-up (triggers JIT compilation on the numba path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_thin():
    rng = np.random.default_rng(0)
    ch = synth.random_chromosome(rng)
    mask = ch.image < 200
    img = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=np.uint8)
    img[1:-1, 1:-1] = mask

    def loop_pass():
        kill = np.zeros(img.shape, dtype=np.bool_)
        kernels._thin_pass_loop(img, 0, kill)

    t_loop = timeit(loop_pass)
    t_numpy = timeit(lambda: kernels._thin_mark_numpy(img, 0))
    return "thinning pass", img.shape, t_loop, t_numpy


def bench_bilinear():
    rng = np.random.default_rng(1)
    src = rng.random((512, 512))
    t_loop = timeit(lambda: kernels._bilinear_loop(src, 128, 128))
    t_numpy = timeit(lambda: kernels._bilinear_numpy(src, 128, 128))
    return "bilinear 512->128", src.shape, t_loop, t_numpy


def bench_fill():
    rng = np.random.default_rng(2)
    codes = np.full((256, 256), 255, dtype=np.uint8)
    painted = np.argwhere(rng.random((256, 256)) < 0.05)
    painted = painted[np.lexsort((painted[:, 1], painted[:, 0]))]
    codes[painted[:, 0], painted[:, 1]] = 0
    unpainted = np.argwhere(codes == 255)[:4000]
    unpainted = np.ascontiguousarray(unpainted, dtype=np.int64)
    painted = np.ascontiguousarray(painted, dtype=np.int64)
    t_loop = timeit(lambda: kernels._fill_loop(codes, unpainted, painted))
    t_numpy = timeit(lambda: kernels._fill_numpy(codes, unpainted, painted))
    return "nearest fill 4000x3276", codes.shape, t_loop, t_numpy


def main():
    mode = "numba" if kernels.USE_NUMBA else "python loops (numba disabled)"
    print(f"loop kernels: {mode}")
    print(f"{'kernel':<24} {'shape':<12} {'loop (ms)':>10} {'numpy (ms)':>11} {'ratio':>7}")
    for fn in (bench_thin, bench_bilinear, bench_fill):
        name, shape, t_loop, t_numpy = fn()
        ratio = t_numpy / t_loop if t_loop > 0 else float("inf")
        print(f"{name:<24} {str(shape):<12} {t_loop * 1e3:>10.3f} "
              f"{t_numpy * 1e3:>11.3f} {ratio:>6.1f}x")


if __name__ == "__main__":
    main()
