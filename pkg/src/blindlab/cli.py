"""Command-line entry point: reproducible experiments, serialized reports.

Every command is a pure function of (flags, seed, input files).  Reports are
JSON with sorted keys — exact probabilities as normative triple strings plus
float approximations — or a flat CSV summary with one row per (x, check).
Exit status: 0 all checks passed, 1 a check failed, 2 usage/budget errors.

Default budgets come from BLINDLAB_BUDGET_N, BLINDLAB_BUDGET_COINS and
BLINDLAB_SAMPLES when set; flags always win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .circuit import Circuit, CircuitFormatError, is_iqp_form, parse_circuit, serialize_circuit
from .corpus import reduction_corpus
from .exact import ExactProbability
from .extract import (
    all_demo,
    extract_decide,
    extract_run_once,
    make_advice,
    random_truth_table,
    extraction_bounds_hold,
)
from .families import FAMILIES
from .protocol import (
    SCHEMES,
    SchemeContractError,
    ServerModel,
    check_blindness,
    check_correctness,
    fixed_server,
    honest_server,
    padded_honest_server,
)
from .reductions import build_dqc1_reduction, build_iqp_reduction, build_w, verify_reductions
from .simulate import (
    EnumerationBudgetError,
    acceptance_probability,
    dqc1_distribution,
    iqp_marginal_distribution,
)

SERVER_BUILDERS = {
    "honest": lambda family: honest_server(family),
    "honest-pad2": lambda family: padded_honest_server(family, 2),
    "fixed-zero": lambda family: fixed_server(
        "fixed-zero", {"0": Fraction(1), "1": Fraction(0)}
    ),
    "fixed-one": lambda family: fixed_server(
        "fixed-one", {"0": Fraction(0), "1": Fraction(1)}
    ),
    "fixed-coin": lambda family: fixed_server(
        "fixed-coin", {"0": Fraction(1, 2), "1": Fraction(1, 2)}
    ),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a command run depends on; embedded in every report."""

    command: str
    circuit: str | None = None
    scheme: str | None = None
    server: str | None = None
    family: str | None = None
    epsilon: str | None = None
    seed: int | None = None
    budget_n: int = 12
    budget_coins: int = 20
    samples: int = 100_000
    out: str | None = None
    format: str = "json"
    xs: tuple[str, ...] | None = None
    xlen: int | None = None
    iqp_m: int | None = None
    mode: str = "single"
    count: int | None = None
    table: str | None = None
    x: str | None = None
    table_bits: int | None = None

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["xs"] = list(self.xs) if self.xs is not None else None
        # The report must be a pure function of the experiment; where it is
        # written and how it is rendered are not part of that identity.
        del d["out"], d["format"]
        return d


class UsageError(Exception):
    """Bad flag combination — maps to exit status 2."""


def _prob_json(p: ExactProbability) -> dict:
    return {"exact": p.triple_string(), "approx": float(p)}


def _parse_epsilon(text: str | None) -> Fraction:
    if text is None:
        return Fraction(0)
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse epsilon {text!r}: {exc}") from None
    if not 0 <= eps < 1:
        raise UsageError(f"epsilon must lie in [0, 1), got {eps}")
    return eps


def _need_seed(cfg: ExperimentConfig) -> random.Random:
    if cfg.seed is None:
        raise UsageError(f"{cfg.command} draws randomness; pass --seed")
    return random.Random(cfg.seed)


def _read_circuit(cfg: ExperimentConfig) -> Circuit:
    if cfg.circuit is None:
        raise UsageError(f"{cfg.command} needs --circuit PATH")
    try:
        with open(cfg.circuit, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read circuit file: {exc}") from None
    circuit = parse_circuit(text)
    if circuit.n_qubits > cfg.budget_n:
        raise EnumerationBudgetError(
            f"circuit has {circuit.n_qubits} qubits, over budget n={cfg.budget_n}; "
            "raise --budget-n if you really want this"
        )
    return circuit


def _pick(registry: dict, name: str | None, what: str, flag: str):
    if name is None:
        raise UsageError(f"{what} required: pass {flag} (one of {', '.join(sorted(registry))})")
    if name not in registry:
        raise UsageError(f"unknown {what} {name!r}; choose from {', '.join(sorted(registry))}")
    return registry[name]


def _instances(cfg: ExperimentConfig, default_xlen: int = 3) -> list[str]:
    if cfg.xs:
        for x in cfg.xs:
            if not x or any(ch not in "01" for ch in x):
                raise UsageError(f"instance {x!r} is not a non-empty bitstring")
        return sorted(set(cfg.xs))
    xlen = cfg.xlen if cfg.xlen is not None else default_xlen
    if not 1 <= xlen <= 10:
        raise UsageError(f"--xlen must be in 1..10, got {xlen}")
    return [format(v, f"0{xlen}b") for v in range(1 << xlen)]


def _scheme_server_family(cfg: ExperimentConfig):
    scheme = _pick(SCHEMES, cfg.scheme, "scheme", "--scheme")
    family = _pick(FAMILIES, cfg.family or "toy", "family", "--family")
    builder = _pick(SERVER_BUILDERS, cfg.server or "honest", "server", "--server")
    server: ServerModel = builder(family)
    return scheme, server, family


# ---------------------------------------------------------------------------
# Commands: each returns (all_passed, payload, csv_rows)


def cmd_simulate(cfg: ExperimentConfig):
    circuit = _read_circuit(cfg)
    d = dqc1_distribution(circuit, max_enumeration_qubits=cfg.budget_n + 2)
    payload: dict = {
        "n_qubits": circuit.n_qubits,
        "n_gates": len(circuit.gates),
        "acceptance": _prob_json(acceptance_probability(circuit)),
        "dqc1": {"p0": _prob_json(d.p0), "p1": _prob_json(d.p1)},
    }
    rows = [
        {"x": cfg.circuit, "check": "dqc1_p1", "pass": True, "detail": d.p1.triple_string()}
    ]
    if cfg.iqp_m is not None:
        form = is_iqp_form(circuit)
        if form is None:
            raise UsageError("--iqp-m given but the circuit is not in sandwich form")
        marg = iqp_marginal_distribution(form, cfg.iqp_m)
        payload["iqp"] = {
            "m": cfg.iqp_m,
            "p0": _prob_json(marg.p0),
            "p1": _prob_json(marg.p1),
        }
        rows.append(
            {
                "x": cfg.circuit,
                "check": f"iqp_m{cfg.iqp_m}_p1",
                "pass": True,
                "detail": marg.p1.triple_string(),
            }
        )
    return True, payload, rows


def cmd_reduce(cfg: ExperimentConfig):
    circuit = _read_circuit(cfg)
    red = build_iqp_reduction(circuit)
    payload = {
        "source": serialize_circuit(circuit),
        "w_circuit": serialize_circuit(build_w(circuit)),
        "dqc1_circuit": serialize_circuit(build_dqc1_reduction(circuit).dqc1_circuit),
        "iqp_circuit": serialize_circuit(red.iqp.to_circuit()),
        "postselect_count": red.postselect_count,
        "s": red.s,
    }
    rows = [
        {"x": cfg.circuit, "check": "reduce", "pass": True, "detail": f"s={red.s}"}
    ]
    return True, payload, rows


def cmd_verify_reductions(cfg: ExperimentConfig):
    if cfg.circuit is not None:
        circuits = [_read_circuit(cfg)]
        names = [cfg.circuit]
    else:
        if cfg.seed is None:
            raise UsageError("corpus mode draws circuits; pass --seed")
        count = cfg.count if cfg.count is not None else 20
        if not 1 <= count <= 1000:
            raise UsageError(f"--count must be in 1..1000, got {count}")
        circuits = reduction_corpus(count, cfg.seed)
        names = [f"corpus[{i}]" for i in range(count)]
    reports = []
    rows = []
    for name, circuit in zip(names, circuits):
        rep = verify_reductions(circuit)
        reports.append({"name": name, **rep.to_json_dict()})
        rows.append(
            {
                "x": name,
                "check": "verify-reductions",
                "pass": rep.passed,
                "detail": f"n={circuit.n_qubits} s={rep.s}",
            }
        )
    passed = all(r["pass"] for r in rows)
    return passed, {"circuits": reports, "pass": passed}, rows


def cmd_scheme_audit(cfg: ExperimentConfig):
    scheme, server, family = _scheme_server_family(cfg)
    eps = _parse_epsilon(cfg.epsilon)
    xs = _instances(cfg)
    correctness = check_correctness(
        scheme,
        server,
        family,
        xs,
        eps,
        coin_bit_budget=cfg.budget_coins,
        max_enumeration_qubits=cfg.budget_n + 2,
    )
    blindness = []
    by_len: dict[int, list[str]] = {}
    for x in xs:
        by_len.setdefault(len(x), []).append(x)
    for group in by_len.values():
        for i, x1 in enumerate(group):
            for x2 in group[i + 1 :]:
                blindness.append(
                    check_blindness(scheme, x1, x2, coin_bit_budget=cfg.budget_coins)
                )
    passed = correctness.passed and all(b.passed for b in blindness)
    payload = {
        "correctness": correctness.to_json_dict(),
        "blindness": [b.to_json_dict() for b in blindness],
        "pass": passed,
    }
    rows = [
        {
            "x": row.x,
            "check": f"correctness:key={row.key}",
            "pass": row.report.passed,
            "detail": ";".join(str(r) for r in row.report.residuals),
        }
        for row in correctness.rows
    ] + [
        {
            "x": f"{b.x1}|{b.x2}",
            "check": "blindness",
            "pass": b.passed,
            "detail": ";".join(b.only_in_x1 + b.only_in_x2),
        }
        for b in blindness
    ]
    return passed, payload, rows


def cmd_extract(cfg: ExperimentConfig):
    scheme, server, family = _scheme_server_family(cfg)
    eps = _parse_epsilon(cfg.epsilon)
    xs = _instances(cfg)
    lengths = {len(x) for x in xs}
    if len(lengths) != 1:
        raise UsageError("extract needs all instances of one length (one advice string)")
    rng = _need_seed(cfg)
    advice = make_advice(
        scheme,
        server,
        lengths.pop(),
        rng,
        mode=cfg.mode,
        coin_bit_budget=cfg.budget_coins,
    )
    outcomes = []
    rows = []
    passed = True
    for x in xs:
        outcome = extract_decide(scheme, advice, x, coin_bit_budget=cfg.budget_coins)
        ideal = dqc1_distribution(family(x), max_enumeration_qubits=cfg.budget_n + 2)
        bounds_ok = extraction_bounds_hold(outcome, ideal.p1, eps)
        entry = {
            **outcome.to_json_dict(),
            "ideal_p1": ideal.p1.triple_string(),
            "bounds_ok": bounds_ok,
        }
        if cfg.samples > 0:
            hits = sum(
                extract_run_once(scheme, advice, x, rng) for _ in range(cfg.samples)
            )
            entry["sampled"] = {"runs": cfg.samples, "accepts": hits}
        outcomes.append(entry)
        passed = passed and bounds_ok
        rows.append(
            {
                "x": x,
                "check": "extract",
                "pass": bounds_ok,
                "detail": f"{outcome.decision};p_acc={outcome.p_acc.triple_string()}",
            }
        )
    payload = {
        "advice": {
            "s": advice.s,
            "a_s": advice.a_s,
            "coins": advice.coins,
            "key": advice.key,
            "mode": advice.mode,
            "response_model": {b: _prob_json(q) for b, q in advice.response_model},
        },
        "outcomes": outcomes,
        "pass": passed,
    }
    return passed, payload, rows


def _load_table(cfg: ExperimentConfig) -> dict[str, int | None]:
    if cfg.table is not None:
        try:
            with open(cfg.table, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read truth table: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("truth table file must be a JSON object")
        return {str(k): v for k, v in raw.items()}
    if cfg.table_bits is None:
        raise UsageError("all-demo needs --table PATH or --table-bits N with --seed")
    if not 1 <= cfg.table_bits <= 16:
        raise UsageError(f"--table-bits must be in 1..16, got {cfg.table_bits}")
    return random_truth_table(cfg.table_bits, _need_seed(cfg))


def cmd_all_demo(cfg: ExperimentConfig):
    table = _load_table(cfg)
    xs = [cfg.x] if cfg.x is not None else sorted(table)
    results = []
    rows = []
    passed = True
    for x in xs:
        outcome = all_demo(table, x)
        agrees = outcome.accept == (table.get(x) == 1)
        passed = passed and agrees
        results.append({**outcome.to_json_dict(), "f_x": table.get(x), "agrees": agrees})
        rows.append(
            {
                "x": x,
                "check": "all-demo",
                "pass": agrees,
                "detail": f"{outcome.decision};p_acc={outcome.p_acc.triple_string()}",
            }
        )
    payload = {"table_size": len(table), "results": results, "pass": passed}
    return passed, payload, rows


COMMANDS = {
    "simulate": cmd_simulate,
    "reduce": cmd_reduce,
    "verify-reductions": cmd_verify_reductions,
    "scheme-audit": cmd_scheme_audit,
    "extract": cmd_extract,
    "all-demo": cmd_all_demo,
}


# ---------------------------------------------------------------------------
# Plumbing


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"environment variable {name} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blindlab",
        description="Exact experiments on one-clean-qubit sampling, "
        "sampling-hardness reductions, and blind-delegation audits.",
    )
    parser.add_argument("--version", action="version", version=f"blindlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, help="PRNG seed (u64); required when sampling")
        p.add_argument("--budget-n", type=int, default=None,
                       help="max qubits for exact simulation (default 12)")
        p.add_argument("--budget-coins", type=int, default=None,
                       help="max scheme coin bits to enumerate (default 20)")
        p.add_argument("--samples", type=int, default=None,
                       help="sampled-run count where applicable (default 100000)")
        return p

    p = add("simulate", "exact output law of a circuit file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--iqp-m", type=int, default=None,
                   help="also report the m-bit marginal of a sandwich-form circuit")

    p = add("reduce", "emit the compiled helper, mixed-state, and sandwich circuits")
    p.add_argument("--circuit", required=True)

    p = add("verify-reductions", "check both compilation identities exactly")
    p.add_argument("--circuit", help="verify one circuit file")
    p.add_argument("--count", type=int, help="corpus size when no --circuit (default 20)")

    p = add("scheme-audit", "exhaustive correctness and blindness audits")
    p.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p.add_argument("--server", default="honest", choices=sorted(SERVER_BUILDERS))
    p.add_argument("--family", default="toy", choices=sorted(FAMILIES))
    p.add_argument("--epsilon", default="0", help="multiplicative budget, e.g. 1/5")
    p.add_argument("--xs", nargs="+", help="explicit instance strings")
    p.add_argument("--xlen", type=int, help="else audit all bitstrings of this length")

    p = add("extract", "advice-based decider: exact analysis plus optional sampling")
    p.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p.add_argument("--server", default="honest", choices=sorted(SERVER_BUILDERS))
    p.add_argument("--family", default="toy", choices=sorted(FAMILIES))
    p.add_argument("--epsilon", default="0")
    p.add_argument("--xs", nargs="+")
    p.add_argument("--xlen", type=int)
    p.add_argument("--mode", choices=("single", "poly"), default="single")

    p = add("all-demo", "decide a truth table from uniform advice alone")
    p.add_argument("--table", help="JSON file {bitstring: 0|1|null}")
    p.add_argument("--table-bits", type=int, help="random table on this many bits")
    p.add_argument("--x", help="single instance; default: all inputs")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        command=args.command,
        circuit=getattr(args, "circuit", None),
        scheme=getattr(args, "scheme", None),
        server=getattr(args, "server", None),
        family=getattr(args, "family", None),
        epsilon=getattr(args, "epsilon", None),
        seed=args.seed,
        budget_n=args.budget_n if args.budget_n is not None
        else _env_int("BLINDLAB_BUDGET_N", 12),
        budget_coins=args.budget_coins if args.budget_coins is not None
        else _env_int("BLINDLAB_BUDGET_COINS", 20),
        samples=args.samples if args.samples is not None
        else _env_int("BLINDLAB_SAMPLES", 100_000),
        out=args.out,
        format=args.format,
        xs=tuple(args.xs) if getattr(args, "xs", None) else None,
        xlen=getattr(args, "xlen", None),
        iqp_m=getattr(args, "iqp_m", None),
        mode=getattr(args, "mode", "single"),
        count=getattr(args, "count", None),
        table=getattr(args, "table", None),
        x=getattr(args, "x", None),
        table_bits=getattr(args, "table_bits", None),
    )


def _render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["x", "check", "pass", "detail"], lineterminator="\n"
    )
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "pass": str(row["pass"]).lower()})
    return buf.getvalue()


def write_report(report: dict, rows: list[dict], cfg: ExperimentConfig) -> None:
    if cfg.format == "csv":
        text = _render_csv(rows)
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def dispatch(cfg: ExperimentConfig) -> int:
    if cfg.budget_n <= 0 or cfg.budget_coins <= 0 or cfg.samples < 0:
        raise UsageError("budgets must be positive (samples may be 0)")
    passed, payload, rows = COMMANDS[cfg.command](cfg)
    report = {
        "tool": {"name": "blindlab", "version": __version__},
        "config": cfg.to_json_dict(),
        "report": payload,
    }
    write_report(report, rows, cfg)
    return 0 if passed else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return dispatch(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EnumerationBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except CircuitFormatError as exc:
        print(f"circuit format error: {exc}", file=sys.stderr)
        return 2
    except SchemeContractError as exc:
        print(f"scheme contract violated: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
