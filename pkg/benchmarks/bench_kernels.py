"""Time the hot kernels with numba enabled and with the plain numpy path.

    python benchmarks/bench_kernels.py [--repeat N]

Each backend runs in its own interpreter because the switch
(``K4E_NO_NUMBA``) is read at import time.  Numba timings exclude the
first call so compilation is not counted.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def worker(repeat: int) -> dict:
    import numpy as np

    from k4e import _jit
    from k4e.canon import automorphisms, canonical_form
    from k4e.known import known_designs
    from k4e.search import count_labeled, iter_chunks, root_units
    from k4e.spectrum import _run_unit

    d10 = known_designs(10)
    reps10 = [d10[k] for k in sorted(d10)]
    src = reps10[0]
    aut = np.array([g.image for g in automorphisms(src)][1:], dtype=np.int64).reshape(-1, 10)
    b11 = known_designs(11)["B1"]
    unit = root_units(6)[0]
    unit10 = root_units(10)[0]

    cases = {
        "enumerate order 6": lambda: count_labeled(6),
        "enumerate order 6, one unit": lambda: sum(len(c) for c in iter_chunks(6, (unit,))),
        "enumerate order 10, first 5000": lambda: next(iter_chunks(10, (unit10,), chunk=5000)),
        "canonical form order 11": lambda: canonical_form(b11),
        # One source class, pi(0) = 0: a tenth of the order-10 sweep for that class.
        "spectrum order 10, one unit": lambda: _run_unit((src, aut, reps10, 0, _jit.backend_name())),
    }
    out = {}
    for name, fn in cases.items():
        if _jit.USE_NUMBA:
            fn()
        out[name] = _time(fn, repeat)
    return {"backend": _jit.backend_name(), "seconds": out}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return

    results = {}
    for flag in ("0", "1"):
        env = {**os.environ, "K4E_NO_NUMBA": flag}
        proc = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
                              env=env, capture_output=True, text=True, check=True)
        res = json.loads(proc.stdout.strip().splitlines()[-1])
        results[res["backend"]] = res["seconds"]

    names = list(results["numba"])
    width = max(map(len, names))
    print(f"{'kernel':<{width}}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}")
    for n in names:
        a, b = results["numba"][n], results["numpy"][n]
        print(f"{n:<{width}}  {a:>10.4f}  {b:>10.4f}  {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
