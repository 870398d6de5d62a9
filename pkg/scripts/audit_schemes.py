#!/usr/bin/env python3
"""Print the correctness/blindness separation matrix for the built-in schemes.

Each scheme is audited against the honest server on the toy family over all
length-3 instances.  The point of the exercise: no row shows pass/pass —
whatever is correct leaks, whatever hides is wrong.

    python3 scripts/audit_schemes.py
"""

import sys
from itertools import combinations

sys.path.insert(0, "src")

from blindlab.families import FAMILIES
from blindlab.protocol import SCHEMES, check_blindness, check_correctness, honest_server


def main() -> int:
    family = FAMILIES["toy"]
    server = honest_server(family)
    xs = [format(v, "03b") for v in range(8)]
    print(f"{'scheme':>10} {'correct (eps=0)':>16} {'blind':>6}")
    both = []
    for name in sorted(SCHEMES):
        scheme = SCHEMES[name]
        correct = check_correctness(scheme, server, family, xs, 0).passed
        blind = all(
            check_blindness(scheme, x1, x2).passed for x1, x2 in combinations(xs, 2)
        )
        print(f"{name:>10} {str(correct):>16} {str(blind):>6}")
        if correct and blind:
            both.append(name)
    if both:
        print(f"\nUnexpected: {both} passed both audits on a non-degenerate family.")
        return 1
    print("\nNo scheme is simultaneously correct and blind here, as it must be.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
