"""Command-line front end: classify, compose, witness, probe, gen, verify.

Exit codes: 0 success, 2 parse/usage error, 3 axiom or sum-rule failure,
4 arity or enumeration overflow, 5 construction precondition not met,
6 exponent cap exceeded, 1 other errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .classify import classify
from .compose import compose
from .documents import SystemDocument, read_document, write_document
from .errors import (
    AxiomViolationError,
    BruteForceLimitError,
    DocumentError,
    PreconditionError,
    QCapError,
    QmtError,
    SumRuleViolationError,
)
from .functional import Tolerance, check_axioms, check_quantal_sum_rule
from .galois import build_probe_system, probe_quadratic_form
from .gen import KINDS, GenSpec, generate
from .witness import build_witness

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_AXIOM = 3
EXIT_OVERFLOW = 4
EXIT_PRECONDITION = 5
EXIT_QCAP = 6


def _tolerance(args) -> Tolerance:
    return Tolerance(eps_abs=args.eps, eps_rel=args.eps)


def _load_system(path, tol):
    doc = read_document(path)
    return doc, doc.to_system(tol)


def _flag(value: bool) -> str:
    return "yes" if value else "no"


def _event_labels(event, labels) -> str:
    names = [labels[i] for i in event.indices()]
    return "{" + ", ".join(names) + "}"


def cmd_classify(args) -> int:
    tol = _tolerance(args)
    doc, system = _load_system(args.path, tol)
    result = classify(system, tol)
    if args.json:
        payload = {
            "name": doc.name,
            "atoms": list(system.labels),
            "flags": result.flags(),
            "min_eigenvalue": result.min_eigenvalue,
            "weak_violation": None
            if result.weak_violation is None
            else {
                "atoms": list(result.weak_violation.indices()),
                "value": result.weak_violation_value,
            },
            "entry_violation": result.entry_violation,
            "dual_violation": result.dual_violation,
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    print(f"system: {doc.name}  (atoms: {system.n})")
    weak_note = ""
    if not result.weakly_positive:
        weak_note = (
            f"  (event {_event_labels(result.weak_violation, system.labels)}"
            f" has measure {result.weak_violation_value:.9g})"
        )
    print(f"  weakly positive:    {_flag(result.weakly_positive)}{weak_note}")
    print(
        f"  strongly positive:  {_flag(result.strongly_positive)}"
        f"  (lambda_min = {result.min_eigenvalue:.9g})"
    )
    entry_note = ""
    if result.entry_violation is not None:
        i, j = result.entry_violation
        entry_note = f"  (entry ({i},{j}) = {system.matrix[i, j]:.9g})"
    print(f"  positive entry:     {_flag(result.positive_entry)}{entry_note}")
    print(f"  classical:          {_flag(result.classical)}")
    print(f"  dual of pos-entry:  {_flag(result.in_dual_of_posentry)}")
    print(f"  real symmetric:     {_flag(result.real_symmetric)}")
    return EXIT_OK


def cmd_compose(args) -> int:
    tol = _tolerance(args)
    doc_a, sys_a = _load_system(args.first, tol)
    doc_b, sys_b = _load_system(args.second, tol)
    composed = compose(sys_a, sys_b, tol)
    name = args.name or f"{doc_a.name}(x){doc_b.name}"
    meta = dict(composed.metadata)
    meta["composed_of"] = [doc_a.name, doc_b.name]
    out = SystemDocument(name=name, atoms=composed.labels, matrix=composed.matrix, metadata=meta)
    write_document(args.output, out)
    print(f"wrote {args.output}: {name} with {composed.n} atoms")
    return EXIT_OK


def cmd_witness(args) -> int:
    tol = _tolerance(args)
    doc, system = _load_system(args.path, tol)
    w = build_witness(system, tol, q_cap=args.qmax)
    labels = system.labels

    def factor_name(fid):
        idx = w.factors[fid].indices()
        if len(idx) == 1:
            return labels[idx[0]]
        return _event_labels(w.factors[fid], labels)

    if args.json:
        payload = {
            "name": doc.name,
            "case": w.case,
            "phase_pair": {
                "first": list(w.phase_pair.first.indices()),
                "second": list(w.phase_pair.second.indices()),
                "theta": w.phase_pair.theta,
                "modulus": w.phase_pair.modulus,
            },
            "neg_det_atoms": w.neg_det_atoms,
            "ee": w.ee,
            "eo": w.eo,
            "p": w.p,
            "q": w.q,
            "k": w.k,
            "component_count": w.component_count,
            "components": None
            if w.components is None
            else [[factor_name(fid) for fid in comp] for comp in w.components[:64]],
            "predicted_value": w.predicted_value,
            "verified_value": w.verified_value,
            "cross_checked": w.cross_checked,
            "cross_check_value": w.cross_check_value,
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    print(f"system: {doc.name}  case: {w.case}")
    print(
        f"  phase pair: ({factor_name(0)}, {factor_name(1)})"
        f"  theta = {w.phase_pair.theta:.9g}  r = {w.phase_pair.modulus:.9g}"
    )
    if w.neg_det_atoms is not None:
        names = ", ".join(labels[i] for i in w.neg_det_atoms)
        print(f"  neg-det atoms: [{names}]  ee = {w.ee:.9g}  eo = {w.eo:.9g}")
        print(f"  p = {w.p}  q = {w.q}  k = {w.k}")
    else:
        print(f"  k = {w.k}")
    print(f"  event components: {w.component_count}")
    if w.components is not None:
        for comp in w.components[:16]:
            print("    (" + ", ".join(factor_name(fid) for fid in comp) + ")")
        if w.component_count > 16:
            print(f"    ... {w.component_count - 16} more")
    print(f"  predicted: {w.predicted_value:.17g}")
    print(f"  verified:  {w.verified_value:.17g}")
    if w.cross_checked:
        print(f"  materialized cross-check: {w.cross_check_value:.17g}")
    else:
        print(f"  materialized cross-check: skipped ({system.n}^{w.k} atoms exceeds limit)")
    return EXIT_OK


def cmd_probe(args) -> int:
    tol = _tolerance(args)
    doc, system = _load_system(args.path, tol)
    if args.vector is not None:
        try:
            v = np.array(
                [complex(part.strip().replace("i", "j")) for part in args.vector.split(",")],
            )
        except ValueError as exc:
            raise DocumentError(f"cannot parse probe vector {args.vector!r}: {exc}") from exc
        if v.size != system.n:
            raise DocumentError(
                f"probe vector has {v.size} entries, system has {system.n} atoms"
            )
        source = "given"
    else:
        v = np.linalg.eigh(system.matrix)[1][:, 0]
        source = "min-eigenvector"
    probe = build_probe_system(v, tol)
    value = probe_quadratic_form(system, system.atoms(), v, tol)
    if args.json:
        payload = {
            "name": doc.name,
            "vector": [[z.real, z.imag] for z in v],
            "vector_source": source,
            "rho": probe.rho,
            "value": value,
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    print(f"system: {doc.name}")
    print(f"  probe vector ({source}): [{', '.join(f'{z:.6g}' for z in v)}]")
    print(f"  rho = {probe.rho:.17g}")
    print(f"  value = {value:.17g}")
    return EXIT_OK


def cmd_gen(args) -> int:
    tol = _tolerance(args)
    request = GenSpec(kind=args.kind, atoms=args.atoms, seed=args.seed)
    system = generate(request, tol)
    name = args.name or f"{args.kind}-{args.atoms}-{args.seed}"
    doc = SystemDocument(
        name=name, atoms=system.labels, matrix=system.matrix, metadata=system.metadata
    )
    write_document(args.output, doc)
    print(f"wrote {args.output}: {name} ({args.kind}, {args.atoms} atoms, seed {args.seed})")
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = _tolerance(args)
    doc = read_document(args.path)
    report = check_axioms(doc.matrix, tol)
    print(f"system: {doc.name}  (atoms: {len(doc.atoms)})")
    print(f"  hermitian:  {_flag(report.hermitian)}  (residual {report.hermitian_residual:.3e})")
    print(f"  normalized: {_flag(report.normalized)}  (entry sum {report.entry_sum:.9g})")
    print(f"  additivity: {report.additivity}")
    if not report.is_system:
        print("  quantal sum rule: skipped (axioms failed)")
        return EXIT_AXIOM
    system = doc.to_system(tol)
    rule = check_quantal_sum_rule(system, tol)
    mode = "exhaustive" if rule.exhaustive else "sampled"
    print(
        f"  quantal sum rule: {'pass' if rule.passed else 'FAIL'}"
        f"  (max residual {rule.max_residual:.3e}, {mode})"
    )
    if report.weakly_positive is not None:
        note = ""
        if not report.weakly_positive:
            note = f"  (violating measure {report.weak_violation_value:.9g})"
        print(f"  weakly positive:  {_flag(report.weakly_positive)}{note}  [informational]")
    return EXIT_OK if rule.passed else EXIT_AXIOM


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmt",
        description="Finite quantum measure systems: classification, composition, witnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--eps", type=float, default=1e-9, help="tolerance (default 1e-9)")

    p = sub.add_parser("classify", help="positivity classification of a system document")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compose", help="tensor-compose two system documents")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", required=True, help="output document path")
    p.add_argument("--name", help="name for the composed document")
    add_common(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("witness", help="self-composition negative-measure witness")
    p.add_argument("path")
    p.add_argument("--qmax", type=int, default=64, help="cap on the q exponent (default 64)")
    p.add_argument("--json", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("probe", help="quadratic-form probe via composition")
    p.add_argument("path")
    p.add_argument(
        "--vector",
        help="comma-separated complex entries, e.g. '1,-1' or '0.5+0.5j'"
        " (default: most-negative eigenvector)",
    )
    p.add_argument("--json", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("gen", help="generate a seeded system of a positivity class")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--name")
    p.add_argument("-o", "--output", required=True)
    add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="axioms and quantal sum rule of a document")
    p.add_argument("path")
    add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (AxiomViolationError, SumRuleViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except BruteForceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except QCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QCAP
    except QmtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
