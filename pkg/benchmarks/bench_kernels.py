"""Benchmark the numba kernels against the pure-NumPy fallback.

Runs each hot kernel on a synthetic wavy-grid workload under both backends
and prints timings plus speedups. Sizes default to the largest published
test case (5000 vertices, 86 sources).

    python benchmarks/bench_kernels.py [--nx 50] [--ny 100] [--sources 86] [--repeat 5]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from texdeform.kernels import _numpy as numpy_backend  # noqa: E402

try:
    from texdeform.kernels import _numba as numba_backend
except ImportError:
    numba_backend = None


def build_workload(nx, ny, n_sources, seed=7):
    xs, ys = np.meshgrid(np.linspace(0, 2, nx), np.linspace(0, 4, ny), indexing="ij")
    zs = 0.3 * np.sin(2.5 * xs) * np.cos(1.5 * ys)
    v = np.column_stack([xs.ravel(), ys.ravel(), zs.ravel()])
    n = v.shape[0]
    rings = [set() for _ in range(n)]
    for i in range(nx - 1):
        for j in range(ny - 1):
            a, b, c, d = i * ny + j, (i + 1) * ny + j, (i + 1) * ny + j + 1, i * ny + j + 1
            for t in ((a, b, c), (a, c, d)):
                for p, q in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
                    rings[p].add(q)
                    rings[q].add(p)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(r) for r in rings])
    indices = np.concatenate([np.array(sorted(r), dtype=np.int64) for r in rings])
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    lengths = np.linalg.norm(v[indices] - v[src], axis=1)

    rng = np.random.default_rng(seed)
    sources = np.sort(rng.choice(n, size=n_sources, replace=False)).astype(np.int64)
    feat = v[sources]
    m_true = np.array([[120.0, 8.0, 3.0], [5.0, -110.0, 6.0]])
    pix = feat @ m_true.T + np.array([320.0, 560.0])
    weights = rng.uniform(0.05, 5.0, size=(n_sources, n))
    cam_m = np.tile(m_true, (n, 1, 1))
    cam_c = np.tile(np.array([320.0, 560.0]), (n, 1))
    return {
        "graph": (indptr, indices, lengths, sources),
        "cameras": (feat, pix, weights),
        "energy": (cam_m, cam_c, feat, pix, weights),
    }


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nx", type=int, default=50)
    parser.add_argument("--ny", type=int, default=100)
    parser.add_argument("--sources", type=int, default=86)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    work = build_workload(args.nx, args.ny, args.sources)
    indptr, indices, lengths, sources = work["graph"]
    feat, pix, weights = work["cameras"]
    cam_m, cam_c, efeat, epix, eweights = work["energy"]
    n = indptr.shape[0] - 1
    print(f"workload: {n} vertices, {indices.shape[0]} directed edges, {sources.shape[0]} sources")

    cases = {
        "multi_source_dijkstra": lambda b: b.multi_source_dijkstra(indptr, indices, lengths, sources),
        "fit_cameras": lambda b: b.fit_cameras(feat, pix, weights, 1e12),
        "projection_energy": lambda b: b.projection_energy(cam_m, cam_c, efeat, epix, eweights),
    }

    backends = [("numpy", numpy_backend)]
    if numba_backend is not None:
        for fn in cases.values():
            fn(numba_backend)  # jit warm-up
        backends.append(("numba", numba_backend))
    else:
        print("numba unavailable; benchmarking the fallback only")

    print(f"{'kernel':24s}" + "".join(f"{name:>12s}" for name, _ in backends) + f"{'speedup':>10s}")
    for name, fn in cases.items():
        times = []
        ref = None
        for _, backend in backends:
            t, out = best_of(lambda b=backend: fn(b), args.repeat)
            times.append(t)
            if ref is None:
                ref = out
            else:  # backends must agree
                ref_arr = ref[0] if isinstance(ref, tuple) else np.asarray(ref)
                out_arr = out[0] if isinstance(out, tuple) else np.asarray(out)
                assert np.allclose(ref_arr, out_arr, rtol=1e-9, atol=1e-12, equal_nan=True)
        speedup = times[0] / times[-1] if len(times) > 1 else 1.0
        print(f"{name:24s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f"{speedup:9.1f}x")


if __name__ == "__main__":
    main()
