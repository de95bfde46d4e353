#!/usr/bin/env python3
"""Offline driver: refine the parameter windows realizing a leading all-(2,1)
prefix, level by level, printing each generation. Slow (mpmath); run detached."""

import sys
sys.path.insert(0, 'tests/oracles')
from nest_oracle import fib_prefix_len


def find_runs(lo, hi, p, N, prec):
    pts = [lo + (hi - lo) * i / N for i in range(N + 1)]
    mark = []
    for a in pts:
        k, rt, status = fib_prefix_len(a, p + 1, prec=prec)
        mark.append(k >= p)
    runs, start = [], None
    for i, m in enumerate(mark + [False]):
        if m and start is None:
            start = i
        elif not m and start is not None:
            runs.append((pts[max(0, start - 1)], pts[min(N, i)]))
            start = None
    return runs


def main():
    win = [(15.7276208333333, 15.7276333333333), (15.7276708333333, 15.7276833333333)]
    for p in range(4, 10):
        children = []
        for (lo, hi) in win:
            children += find_runs(lo, hi, p, 64, 260 + 30 * p)
        print("prefix %d windows: %s" % (p, [("%.15f" % a, "%.15f" % b) for a, b in children]), flush=True)
        if not children:
            print("dead end", flush=True)
            return
        win = children[:3]


if __name__ == "__main__":
    main()
