"""Compare the numba kernels with their fallbacks.

Run ``python benchmarks/bench_kernels.py [--n 50] [--repeat 3]``. Each backend
runs in its own interpreter because the backend is fixed at import time by
``CONTRACTA_DISABLE_NUMBA``.
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from contracta import _kernels as kn
from contracta.generators import generate_terrain
from contracta.pairing2m import compute_pairing
from contracta.persistence import PersistenceDiagram, bottleneck, reduce

n, repeat = int(sys.argv[1]), int(sys.argv[2])
K = generate_terrain(n, seed=1)
rng = np.random.default_rng(0)
pts = lambda: PersistenceDiagram([(b, b + l, 0) for b, l in
                                  zip(rng.normal(size=150), rng.exponential(size=150))])
D1, D2 = pts(), pts()
# closed surface for the spanning-tree pairing
from contracta.generators import random_lower_star, torus_triangles
T = random_lower_star(torus_triangles(n, n, rng), rng)

def best(f):
    f()  # warm-up: compiles numba kernels and fills caches
    ts = []
    for _ in range(repeat):
        t = time.perf_counter(); f(); ts.append(time.perf_counter() - t)
    return min(ts)

out = {
    "backend": kn.BACKEND,
    "reduce": best(lambda: reduce(K)),
    "reduce_twist": best(lambda: reduce(K, twist=True)),
    "kruskal_pairing": best(lambda: compute_pairing(T)),
    "bottleneck_150pts": best(lambda: bottleneck(D1, D2)),
}
print(json.dumps(out))
"""


def run(disable: bool, n: int, repeat: int) -> dict:
    env = dict(os.environ)
    env["CONTRACTA_DISABLE_NUMBA"] = "1" if disable else "0"
    res = subprocess.run([sys.executable, "-c", WORKER, str(n), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=50, help="terrain / torus grid size")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(False, args.n, args.repeat)
    slow = run(True, args.n, args.repeat)
    print(f"{'kernel':<20}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for key in ("reduce", "reduce_twist", "kruskal_pairing", "bottleneck_150pts"):
        print(f"{key:<20}{fast[key]:>11.4f}s{slow[key]:>11.4f}s{slow[key] / fast[key]:>9.1f}x")


if __name__ == "__main__":
    main()
