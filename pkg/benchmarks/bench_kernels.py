"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --group "PSL(2,13)" --repeat 5
"""

import argparse
import json
import timeit

import numpy as np

from quasirandom.kernels import IMPLEMENTATIONS
from quasirandom import kernels
from quasirandom.specs import parse_group_spec


def cases(G, rng):
    T = G.table
    n = G.n
    a = rng.choice(n, size=n // 3, replace=False)
    b = rng.choice(n, size=n // 3, replace=False)
    sparse = rng.choice(n, size=max(2, n // 50), replace=False)
    c = np.zeros(n, dtype=bool)
    c[rng.choice(n, size=n // 20, replace=False)] = True
    v = rng.standard_normal(n)
    return {
        "build_table": lambda impl: kernels.build_table(G.rmul, G.parent, G.pgen, impl=impl),
        "product_mask": lambda impl: kernels.product_mask(T, sparse, sparse, impl=impl),
        "product_mask_dense": lambda impl: kernels.product_mask(T, a, b, impl=impl),
        "closure": lambda impl: kernels.closure(T, np.array(G.gens[:1]), impl=impl),
        "first_product": lambda impl: kernels.first_product(T, sparse, sparse, c, impl=impl),
        "conv_apply": lambda impl: kernels.conv_apply(T, a, v, impl=impl),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--group", default="PSL(2,13)")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print machine-readable timings")
    args = p.parse_args(argv)
    G = parse_group_spec(args.group).build()
    G.table  # build once outside the timed region
    rows = []
    for name, fn in cases(G, np.random.default_rng(args.seed)).items():
        row = {"kernel": name}
        for impl_name, impl in sorted(IMPLEMENTATIONS.items()):
            t = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
            row[impl_name] = t
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    if args.json:
        print(json.dumps({"group": args.group, "order": G.n, "rows": rows}, indent=2))
        return
    print(f"{args.group}, order {G.n}; best of {args.repeat}, seconds")
    print(f"{'kernel':20s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for r in rows:
        cy = r.get("cython")
        print(f"{r['kernel']:20s} {r['python']:10.5f} "
              + (f"{cy:10.5f} {r['speedup']:8.1f}" if cy is not None else f"{'n/a':>10s}"))


if __name__ == "__main__":
    main()
