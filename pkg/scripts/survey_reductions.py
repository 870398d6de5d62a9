#!/usr/bin/env python3
"""Survey both compilation identities over a random corpus.

Prints one line per circuit (size, gadget count, compiled widths, wall time)
and a summary. Exits non-zero if any identity fails, so this doubles as a
quick soak test when exploring engine changes.

    python3 scripts/survey_reductions.py [count] [seed]
"""

import sys
import time

sys.path.insert(0, "src")

from blindlab.corpus import reduction_corpus
from blindlab.reductions import build_dqc1_reduction, verify_reductions


def main() -> int:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 40
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 2026
    circuits = reduction_corpus(count, seed)
    failures = 0
    total = 0.0
    print(f"{'idx':>4} {'n':>2} {'gates':>5} {'s':>3} {'dqc1_n':>6} {'iqp_n':>5} "
          f"{'ms':>7}  status")
    for i, v in enumerate(circuits):
        t0 = time.perf_counter()
        rep = verify_reductions(v)
        dt = (time.perf_counter() - t0) * 1000
        total += dt
        dqc1_n = build_dqc1_reduction(v).dqc1_circuit.n_qubits
        status = "ok" if rep.passed else "FAIL"
        failures += not rep.passed
        print(f"{i:>4} {v.n_qubits:>2} {len(v.gates):>5} {rep.s:>3} "
              f"{dqc1_n:>6} {v.n_qubits + rep.s:>5} {dt:>7.1f}  {status}")
    print(f"\n{count} circuits, {failures} failures, "
          f"avg {total / count:.1f} ms, total {total / 1000:.2f} s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
