"""Small convergence study across benchmark problems and backends.

Runs each problem over a short ladder of grid sizes, prints the error
table with the fitted convergence order, and writes a CSV per study.
Uses modest sizes so the whole script finishes in well under a minute;
pass larger sizes for sharper order estimates, e.g.

    python3 demos/convergence_study.py 16,32,64,128
"""

import sys

from quadma import BENCHMARKS, convergence_study

CSV_HEADER = "n,h,max_error,runtime_seconds,newton_iters"


def main():
    ns = [int(v) for v in sys.argv[1].split(",")] if len(sys.argv) > 1 else [12, 16, 24, 32]
    for name in ("ex1", "ex4"):
        problem = BENCHMARKS[name]()
        for backend in ("hex", "cartesian"):
            result = convergence_study(problem, backend, ns)
            print(f"=== {name} / {backend} ===")
            print(f"{'n':>5} {'h':>9} {'max_error':>12} {'iters':>6} {'time':>8}")
            for row in result.rows:
                print(f"{row.n:>5} {row.h:>9.4f} {row.max_error:>12.4e} "
                      f"{row.newton_iters:>6} {row.runtime_seconds:>7.2f}s")
            print(f"fitted order: {result.order:.3f}"
                  + (" (coarsest row excluded)" if result.excluded_coarsest else "") + "\n")
            path = f"study_{name}_{backend}.csv"
            with open(path, "w") as fh:
                fh.write(CSV_HEADER + "\n")
                for row in result.rows:
                    fh.write(f"{row.n},{row.h:.17e},{row.max_error:.17e},"
                             f"{row.runtime_seconds:.17e},{row.newton_iters}\n")
            print(f"wrote {path}\n")


if __name__ == "__main__":
    main()
