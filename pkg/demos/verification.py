#!/usr/bin/env python3
"""Run the built-in verification suites from the library API.

Equivalent to ``linecover verify`` but shows how the suites compose: each
one stresses a different guarantee (ordering, gradient dominance, curvature,
unbiasedness, coverage equivalence) and reports the first counterexample on
failure.
"""

import sys

from linecover.verify import run_all_suites

results = run_all_suites(sizes=(2, 5, 10))
for result in results:
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.name}: {result.detail}")
    if result.counterexample:
        print(f"     counterexample: {result.counterexample}")

sys.exit(0 if all(r.passed for r in results) else 2)
