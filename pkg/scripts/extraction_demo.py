#!/usr/bin/env python3
"""Walk the whole argument once, with numbers.

1. A scheme that *does* pass both audits (one-time pad over a family that
   ignores its input) yields an advice pair from which the decider's exact
   acceptance probability is pinched between eta*(1-eps)*p1 and
   eta*(1+eps)*p1 — so accepting exactly when p_acc > 0 decides p1 > 0.
2. Drop blindness (leaky scheme) and the same decider goes blind itself:
   p_acc = 0 on every instance that isn't all-ones.
3. Let the advice carry an arbitrary distribution and the machinery decides
   any truth table at all — advice this strong proves nothing about the
   delegated problem.

    python3 scripts/extraction_demo.py [seed]
"""

import random
import sys

sys.path.insert(0, "src")

from blindlab.extract import all_demo, extract_decide, make_advice, random_truth_table
from blindlab.families import FAMILIES
from blindlab.protocol import SCHEMES, honest_server
from blindlab.simulate import dqc1_distribution


def main() -> int:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    rng = random.Random(seed)
    s = 3
    xs = [format(v, f"0{s}b") for v in range(1 << s)]

    print("=== blind + correct: one-time pad over the input-blind fair-coin family")
    family = FAMILIES["deg-half"]
    advice = make_advice(SCHEMES["otp"], honest_server(family), s, rng)
    print(f"advice: a_s={advice.a_s} (key {advice.key}), "
          f"q(0)={advice.q0.triple_string()}")
    for x in xs:
        out = extract_decide(SCHEMES["otp"], advice, x)
        p1 = dqc1_distribution(family(x)).p1
        print(f"  x={x}: eta={out.eta.triple_string():>10} "
              f"p_acc={out.p_acc.triple_string():>10} -> {out.decision:6} "
              f"(p1={p1.triple_string()}, p_acc==eta*p1: {out.p_acc == out.eta * p1})")

    print("\n=== blindness dropped: leaky scheme, advice keyed to the all-ones instance")
    advice = make_advice(SCHEMES["leaky"], honest_server(FAMILIES["toy"]), s, rng)
    for x in xs:
        out = extract_decide(SCHEMES["leaky"], advice, x)
        print(f"  x={x}: eta={out.eta.triple_string():>10} -> {out.decision}")

    print("\n=== advice unconstrained: decide a random truth table outright")
    table = random_truth_table(s, rng)
    wrong = 0
    for x in xs:
        out = all_demo(table, x)
        ok = out.accept == (table[x] == 1)
        wrong += not ok
        fx = "bot" if table[x] is None else table[x]
        print(f"  f({x})={fx}: {out.decision:6} p_acc={out.p_acc.triple_string()}"
              f"{'' if ok else '  MISMATCH'}")
    print(f"\ntable decided {'exactly' if not wrong else 'WRONG'} "
          f"({8 - wrong}/8 inputs)")
    return 1 if wrong else 0


if __name__ == "__main__":
    sys.exit(main())
