"""Batch command-line frontend.

Every subcommand reads files or flags, writes deterministic bytes (floats
at 17 significant digits), and uses a three-way exit contract:

  0  success
  1  domain failure (a check failed, an engine rejected its input, I/O error)
  2  usage or parse failure (bad flags, malformed input files)
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import bqca, ca, compiler, gates, jsonio, pqca, qca, qtm
from .errors import EnumerationLimitError, SpecFormatError
from .superposition import NormalizationError, Superposition, Tolerance


def _rule_number(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 255:
        raise argparse.ArgumentTypeError(f"rule {value} outside [0, 255]")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: {exc}") from exc


def _tolerance(args) -> Tolerance:
    return Tolerance(eps_norm=args.tolerance_norm, eps_unitary=args.tolerance_unitary)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, jsonio.dumps(obj, indent=1))


def _trace_json(trace: list[Superposition]) -> list:
    return [step.to_json_terms() for step in trace]


def _symbols(text: str) -> list[str]:
    if not text:
        return []
    return text.split(",") if "," in text else list(text)


# -- subcommands -----------------------------------------------------------------


def cmd_eca(args) -> None:
    rule = ca.EcaRule(args.rule)
    if args.seed == "single":
        seed_bits = "1"
    elif args.seed == "random":
        if args.width is None:
            raise SpecFormatError("--seed random requires --width")
        rng = random.Random(args.rng_seed)
        seed_bits = "".join(rng.choice("01") for _ in range(args.width))
    else:
        if set(args.seed) - {"0", "1"}:
            raise SpecFormatError(f"seed {args.seed!r} is not a bitstring")
        seed_bits = args.seed
    if args.ring:
        row = np.array([int(b) for b in seed_bits], dtype=np.uint8)
        from . import _kernels

        grid = _kernels.eca_history(row, rule.table(), args.steps, True)
    else:
        config = ca.FiniteConfig({i: int(b) for i, b in enumerate(seed_bits)})
        grid = ca.spacetime(config, rule, args.steps)
    fmt = args.format or "text"
    if fmt == "text":
        _emit(args, "\n".join(ca.render_rows(grid)))
    elif fmt == "pbm":
        _emit(args, ca.to_pbm(grid))
    else:
        _emit_json(args, {"rule": args.rule, "rows": ["".join(map(str, r)) for r in grid.tolist()]})


def cmd_ca2d(args) -> None:
    if args.spec_file:
        spec = ca.spec_from_json(_load_json(args.spec_file))
        if spec.d != 2:
            raise ValueError("ca2d requires a two-dimensional spec")
    else:
        spec = ca.life_spec()
    if args.seed_file:
        cells = _load_json(args.seed_file)
        support = {(int(i), int(j)): int(s) for i, j, s in cells}
    else:
        support = {cell: 1 for cell in ca.LIFE_PATTERNS[args.pattern]}
    config = ca.FiniteConfig(support, spec.quiescent if spec.quiescent is not None else 0)
    trace = ca.run_trace(config, spec, args.steps)
    all_cells = [z for cfg in trace for z in cfg.support] or [(0, 0)]
    bounds = (
        min(z[0] for z in all_cells), max(z[0] for z in all_cells),
        min(z[1] for z in all_cells), max(z[1] for z in all_cells),
    )
    grids = [ca.render_finite_2d(cfg, bounds) for cfg in trace]
    fmt = args.format or "text"
    if fmt == "text":
        blocks = ["\n".join(ca.render_rows(g)) for g in grids]
        _emit(args, "\n\n".join(blocks))
    elif fmt == "pbm":
        _emit(args, ca.to_pbm(grids[-1]))
    else:
        _emit_json(args, [
            [[list(z), s] for z, s in sorted(cfg.support.items())] for cfg in trace
        ])


def _require_valid_qca(spec: qca.QcaSpec, tol: Tolerance) -> None:
    lp = qca.check_local_probability(spec, tol)
    if not lp.ok:
        raise ValueError(
            f"local probability condition fails on {lp.witness} (defect {lp.defect:.3e})"
        )
    qs = qca.check_quiescent_stability(spec)
    if not qs.ok:
        raise ValueError(f"quiescent stability fails at {qs.witness}")


def cmd_qca_run(args) -> None:
    tol = _tolerance(args)
    spec = qca.spec_from_json(_load_json(args.spec))
    init_obj = _load_json(args.init)
    try:
        support = {int(c): qca_state(s) for c, s in init_obj["cells"]}
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed initial config: {exc}") from exc
    _require_valid_qca(spec, tol)
    config = qca.make_config(support, spec)
    trace = qca.run_steps(config, spec, args.steps, tol)
    _emit_json(args, _trace_json(trace))


def qca_state(s):
    return tuple(s) if isinstance(s, list) else s


def cmd_qca_check(args) -> None:
    tol = _tolerance(args)
    spec = qca.spec_from_json(_load_json(args.spec), unchecked=True)
    lp = qca.check_local_probability(spec, tol)
    qs = qca.check_quiescent_stability(spec)
    witnesses = {}
    if not lp.ok:
        witnesses["local_probability"] = {"tuple": _jsonable(lp.witness), "defect": lp.defect}
    if not qs.ok:
        witnesses["quiescent_stability"] = {"entry": _jsonable(qs.witness), "defect": qs.defect}
    wf_n = 0
    un_n = 0
    if lp.ok and qs.ok:
        for w in range(1, args.window + 1):
            rep = qca.check_well_formed_window(spec, w, tol)
            if not rep.ok:
                witnesses["well_formed"] = {"window": w, "defect": rep.defect,
                                            "witness": _jsonable(rep.witness)}
                break
            wf_n = w
        for w in range(1, args.window + 1):
            rep = qca.check_unitary_window(spec, w, tol)
            if not rep.ok:
                witnesses["unitary"] = {"window": w, "defect": rep.defect,
                                        "note": rep.note, "witness": _jsonable(rep.witness)}
                break
            un_n = w
    report = {
        "local_probability": lp.ok,
        "quiescent_stability": qs.ok,
        "well_formed_window_n": wf_n,
        "unitary_window_n": un_n,
        "witnesses": witnesses,
    }
    _emit_json(args, report)
    # The unitary window certificate is informational: genuinely shifting
    # automata lose row mass at any finite window boundary.
    if not (lp.ok and qs.ok and wf_n == args.window):
        raise _Failure()


def _jsonable(obj):
    if isinstance(obj, tuple):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, (list, set, frozenset)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def cmd_pqca_run(args) -> None:
    tol = _tolerance(args)
    spec = pqca.spec_from_json(_load_json(args.spec))
    if not pqca.check_unitary(spec, tol):
        raise ValueError("the per-cell matrix is not unitary")
    init_obj = _load_json(args.init)
    try:
        support = {int(c): tuple(s) for c, s in init_obj["cells"]}
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed initial config: {exc}") from exc
    for state in support.values():
        if state not in spec.index():
            raise ValueError(f"state {state!r} is not a composite state of the spec")
    config = tuple(sorted((c, s) for c, s in support.items() if s != spec.quiescent))
    trace = pqca.run_steps(config, spec, args.steps, tol)
    _emit_json(args, _trace_json(trace))


def cmd_pqca_epr(args) -> None:
    spec = pqca.epr_spec()
    trace = pqca.run_steps(pqca.epr_initial(), spec, args.steps)
    _emit_json(args, _trace_json(trace))


def _load_schedule(obj) -> list[gates.Gate]:
    out = []
    for item in obj:
        if isinstance(item, str):
            out.append(gates.named_gate(item))
        elif isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item):
            out.append(gates.tensor(gates.named_gate(item[0]), gates.named_gate(item[1])))
        elif isinstance(item, dict):
            out.append(gates.Gate.from_json(item))
        else:
            raise SpecFormatError(f"cannot read schedule entry {item!r}")
    return out


def cmd_bqca_run(args) -> None:
    tol = _tolerance(args)
    schedule = _load_schedule(_load_json(args.schedule))
    if not schedule:
        raise ValueError("schedule is empty")
    steps = args.steps if args.steps is not None else len(schedule)
    full = [schedule[t % len(schedule)] for t in range(steps)]
    spec = bqca.BqcaSpec(n=args.n, schedule=tuple(full))
    initial = args.initial or "0" * args.n
    state = gates.QubitRegister.basis(initial)
    final, trace = bqca.run_schedule(state, spec, tol)
    if args.trace:
        jsonio.dump_path(_trace_json([s.state for s in trace]), args.trace, indent=1)
    _emit_json(args, final.state.to_json_terms())


def cmd_qtm_run(args) -> None:
    tol = _tolerance(args)
    spec = qtm.spec_from_json(_load_json(args.machine))
    trace = qtm.run(spec, _symbols(args.input), args.steps, tol)
    payload = {"steps": args.steps, "final": trace[-1].to_json_terms()}
    if args.accept is not None:
        payload["acceptance"] = {
            "k": args.k,
            "symbols": _symbols(args.accept),
            "p": qtm.acceptance_probability(
                spec, _symbols(args.input), args.steps, args.k, _symbols(args.accept), tol
            ),
        }
    _emit_json(args, payload)


def cmd_qtm_check(args) -> None:
    tol = _tolerance(args)
    spec = qtm.spec_from_json(_load_json(args.machine))
    uni, uni_witness = qtm.is_unidirectional(spec)
    report = qtm.check_well_formed_window(spec, args.window, args.audit_steps, tol)
    payload = {
        "well_formed_window": report.ok,
        "column_defect": report.column_defect,
        "max_drift": report.max_drift,
        "domain_size": report.domain_size,
        "unidirectional": uni,
    }
    if not report.ok and report.witness is not None:
        payload["witness"] = _jsonable(report.witness)
    if not uni:
        payload["unidirectional_witness"] = _jsonable(uni_witness)
    _emit_json(args, payload)
    if not report.ok:
        raise _Failure()


def cmd_compile_qtm(args) -> None:
    machine = qtm.spec_from_json(_load_json(args.infile))
    compiled = compiler.compile_qtm(machine)
    payload = pqca.spec_to_json(compiled.spec)
    payload["meta"] = {
        "k_l": sorted(compiled.k_l),
        "k_r": sorted(compiled.k_r),
        "hash": compiler.HASH,
    }
    jsonio.dump_path(payload, args.outfile, indent=1)
    sys.stdout.write(
        f"compiled {args.infile} -> {args.outfile} "
        f"({len(compiled.spec.states())} cell states)\n"
    )


def cmd_equiv(args) -> None:
    machine = qtm.spec_from_json(_load_json(args.machine))
    report = compiler.equivalence_check(
        machine, _symbols(args.input), args.steps, args.k, _symbols(args.accept)
    )
    _emit_json(args, report.to_json())


def cmd_interferometer(args) -> None:
    probs = gates.interferometer(obstacle=args.obstacle, splitters=args.splitters)
    _emit_json(args, {"A": probs["A"], "B": probs["B"]})


def cmd_gates_demo(args) -> None:
    tol = _tolerance(args)
    names = [args.gate] if args.gate else ["I", "X", "Y", "Z", "H", "T", "CNOT"]
    payload = {}
    for name in names:
        g = gates.named_gate(name)
        payload[name] = {
            "arity": g.arity,
            "unitary": gates.is_unitary(g, tol),
            "matrix": g.to_json()["matrix"],
        }
    _emit_json(args, payload)


class _Failure(Exception):
    """Signals a check failure after the report was already emitted."""


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcasim",
        description="Cellular-automaton and quantum-machine simulation workbench",
    )
    parser.add_argument("--tolerance-norm", type=float, default=1e-9)
    parser.add_argument("--tolerance-unitary", type=float, default=1e-9)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, generic_out: bool = True, **kwargs):
        p = sub.add_parser(name, **kwargs)
        if generic_out:
            p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--format", choices=["json", "text", "pbm"])
        p.set_defaults(func=fn)
        return p

    p = add("eca", cmd_eca, help="elementary rule space-time diagram")
    p.add_argument("--rule", type=_rule_number, required=True)
    p.add_argument("--steps", type=_nonnegative, required=True)
    p.add_argument("--seed", default="single",
                   help="'single', 'random', or an explicit bitstring")
    p.add_argument("--width", type=int)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--ring", action="store_true", help="periodic boundary")

    p = add("ca2d", cmd_ca2d, help="two-dimensional automaton (Life by default)")
    p.add_argument("--spec-file")
    p.add_argument("--pattern", choices=sorted(ca.LIFE_PATTERNS), default="blinker")
    p.add_argument("--seed-file", help="JSON [[row, col, state], ...]")
    p.add_argument("--steps", type=_nonnegative, required=True)

    p = add("qca-run", cmd_qca_run, help="evolve a 1d quantum cellular automaton")
    p.add_argument("--spec", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--steps", type=_nonnegative, required=True)

    p = add("qca-check", cmd_qca_check, help="validity report for a QCA spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--window", type=int, default=3,
                   help="largest window for the bounded certificates")

    p = add("pqca-run", cmd_pqca_run, help="evolve a partitioned QCA")
    p.add_argument("--spec", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--steps", type=_nonnegative, required=True)

    p = add("pqca-epr", cmd_pqca_epr, help="run the pair-splitting example")
    p.add_argument("--steps", type=_nonnegative, required=True)

    p = add("bqca-run", cmd_bqca_run, help="two-qubit block rules on a chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--schedule", required=True,
                   help="JSON list of gate names, [name, name] tensor pairs, or matrices")
    p.add_argument("--steps", type=_nonnegative)
    p.add_argument("--initial", help="starting bitstring (default all zeros)")
    p.add_argument("--trace", help="write the per-step trace to this file")

    p = add("qtm-run", cmd_qtm_run, help="run a quantum Turing machine")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", default="")
    p.add_argument("--steps", type=_nonnegative, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--accept", help="comma-separated accepting symbols")

    p = add("qtm-check", cmd_qtm_check, help="bounded well-formedness audit")
    p.add_argument("--machine", required=True)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--audit-steps", type=_nonnegative, default=2)

    p = add("compile-qtm", cmd_compile_qtm, generic_out=False,
            help="compile a machine to a partitioned QCA")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True,
                   help="path for the compiled automaton spec")

    p = add("equiv", cmd_equiv, help="acceptance equality of machine vs compiled automaton")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", default="")
    p.add_argument("--steps", type=_nonnegative, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--accept", required=True)

    p = add("interferometer", cmd_interferometer, help="beam-splitter detector probabilities")
    p.add_argument("--obstacle", action="store_true")
    p.add_argument("--splitters", type=int, choices=[1, 2], default=2)

    p = add("gates-demo", cmd_gates_demo, help="named gates and their unitarity")
    p.add_argument("--gate", choices=["I", "X", "Y", "Z", "H", "T", "CNOT"])

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except _Failure:
        return 1
    except SpecFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, NormalizationError, EnumerationLimitError,
            compiler.CompileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
