"""Command-line entry point: ``affind <command> [options]``.

Machine output (``--format machine``) is a JSON record tagged with
``"schema": "affind.run/1"``, keys sorted, rationals as ``"p/q"`` strings and
no timing fields, so identical inputs give identical bytes.  With
``--results DIR`` the machine record is also written to
``DIR/<command>-<input digest>.json``.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .config import ConfigError, build_plan, load_config
from .induction_engine import (
    FULL, NILRADICAL, EngineError, HighestWeightSpec, Triangular, check_reduction,
    format_element, induce, levi_verma, pbw_character, primitives,
)
from .lie_structure import CapabilityError, LoopAlgebra, chevalley_constants, verify_antisymmetry, verify_jacobi
from .parabolic import (
    Flag, ParabolicError, ParabolicSubset, admissible_alpha0_nodes, kind, levi_components,
    levi_table_rows, pseudo_parabolic, required_window, subset_from_S,
)
from .root_core import AffineTypeLabel, CatalogError, FiniteTypeLabel, affine_gcm, enumerate_roots

SCHEMA = "affind.run/1"


@dataclass
class RunRecord:
    command: str
    input: dict
    output: dict
    verdicts: dict = field(default_factory=dict)
    elapsed: float = 0.0
    human: list = field(default_factory=list)

    def machine(self):
        return {"schema": SCHEMA, "version": __version__, "command": self.command,
                "input": self.input, "output": self.output, "verdicts": self.verdicts}


def jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        raise TypeError("floating point value in machine output")
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def emit(record, fmt="human"):
    if fmt == "machine":
        return json.dumps(jsonable(record.machine()), sort_keys=True, indent=2) + "\n"
    lines = list(record.human)
    for name, verdict in sorted(record.verdicts.items()):
        lines.append(f"{name}: {verdict}")
    return "\n".join(lines) + "\n"


def _label(text):
    return AffineTypeLabel.parse(text)


def resolve_subset(plan):
    gcm = affine_gcm(_label(plan.type))
    if plan.S is not None:
        alpha0 = plan.alpha0
        if alpha0 is None:
            nodes = admissible_alpha0_nodes(gcm)
            if not nodes:
                raise ParabolicError(f"{gcm.label} has no admissible affine node")
            alpha0 = nodes[0]
        plan.alpha0 = alpha0
        return subset_from_S(gcm, alpha0, plan.S)
    return ParabolicSubset(Flag.parse(gcm, plan.flag))


def _specs(plan, tri):
    nl = tri.n_levi_cartan
    nc = tri.finite_rank - nl
    if not plan.weights:
        # generic default: values avoiding small integer coincidences
        plan.weights = [{"levi": (Fraction(1, 3),) * nl, "complement": (Fraction(2, 7),) * nc,
                         "charge": Fraction(1), "degree": Fraction(0)}]
    out = []
    for w in plan.weights:
        if len(w["levi"]) != nl or len(w["complement"]) != nc:
            raise EngineError(f"weights need {nl} Levi value(s) and {nc} complement value(s)")
        out.append(HighestWeightSpec(w["levi"], w["complement"], w["charge"], w["degree"]))
    return out


def _modules(plan):
    P = resolve_subset(plan)
    pp = pseudo_parabolic(P)
    tri = Triangular(pp, plan.mode)
    V = levi_verma(tri, _specs(plan, tri), plan.depth)
    return pp, V, induce(pp, V, plan.window)


def _weight_str(w):
    alpha, n = w
    return f"({','.join(str(a) for a in alpha)};{n})"


# -- commands -------------------------------------------------------------------------

def cmd_roots(args):
    gcm = affine_gcm(_label(args.type))
    rs = enumerate_roots(gcm, args.bound)
    rows = [{"coeffs": list(r.coeffs), "kind": r.kind, "multiplicity": r.multiplicity} for r in rs]
    rec = RunRecord("roots", {"type": args.type, "bound": args.bound}, {"count": len(rows), "roots": rows})
    rec.human = [f"{len(rows)} roots of {gcm.label} with |height| <= {args.bound}"]
    rec.human += [f"  {r.kind:9s} mult {r.multiplicity}  {','.join(map(str, r.coeffs))}" for r in rs]
    return rec


def _subset_args(args):
    data = {"type": args.type}
    if args.S is not None:
        data["S"] = _node_list(args.S)
    if args.flag is not None:
        data["flag"] = args.flag
    if getattr(args, "alpha0", None) is not None:
        data["alpha0"] = args.alpha0
    return build_plan(data)


def _node_list(text):
    text = text.strip()
    if not text:
        return []
    out = []
    pos = 0
    for part in text.split(","):
        try:
            out.append(int(part))
        except ValueError:
            raise ConfigError([f"cannot parse node list {text!r} at position {pos}"])
        pos += len(part) + 1
    return out


def cmd_classify(args):
    plan = _subset_args(args)
    P = resolve_subset(plan)
    k = kind(P)
    out = {"kind": k.kind, "s_index": k.s_index, "delta_values": list(P.delta_values), "flag": P.to_dict()}
    rec = RunRecord("classify", plan.to_dict(), out)
    rec.human = [f"{k.kind}" + (f" (s = {k.s_index})" if k.s_index is not None else "")]
    return rec


def cmd_levi(args):
    plan = _subset_args(args)
    P = resolve_subset(plan)
    bound = args.window or required_window(P)
    data = levi_components(P, enumerate_roots(P.gcm, bound))
    comps = [{"label": str(c.label), "basis": [list(b) for b in c.basis], "cartan": [list(r) for r in c.cartan]}
             for c in data.components]
    out = {"components": comps}
    if P.is_type_ii:
        out["heisenberg_complement_rank"] = [data.heisenberg_complement_rank(k) for k in (1, 2, 3)]
    rec = RunRecord("levi", dict(plan.to_dict(), window=bound), out)
    rec.human = [f"{len(comps)} Levi component(s)"]
    rec.human += [f"  {c['label']}: basis {c['basis']}" for c in comps]
    if P.is_type_ii:
        rec.human.append(f"  Heisenberg complement rank at k=1,2,3: {out['heisenberg_complement_rank']}")
    return rec


def cmd_table(args):
    rows = levi_table_rows(_label(args.type))
    labels = sorted({str(x) for r in rows for x in r.recognized})
    rec = RunRecord("table", {"type": args.type}, {"rows": [r.to_dict() for r in rows], "labels": labels})
    rec.human = [f"Levi table for {args.type}: {', '.join(labels)}"]
    rec.human += [f"  alpha0={r.alpha0} S={list(r.S)} -> {', '.join(str(x) for x in r.recognized)}" for r in rows]
    return rec


def _module_plan(args):
    if args.config:
        plan = load_config(args.config)
    else:
        if not args.type:
            raise ConfigError(["give --config or --type with --S/--flag"])
        data = {"type": args.type, "bounds": {}}
        if args.S is not None:
            data["S"] = _node_list(args.S)
        if args.flag is not None:
            data["flag"] = args.flag
        for key, attr in (("window", "window"), ("operator", "operator_bound"), ("depth", "depth")):
            if getattr(args, attr, None) is not None:
                data["bounds"][key] = getattr(args, attr)
        if args.levi is not None or args.charge is not None or args.complement is not None:
            w = {"charge": args.charge or "1"}
            w["levi"] = [s for s in (args.levi or "").split(",") if s.strip()]
            w["complement"] = [s for s in (args.complement or "").split(",") if s.strip()]
            data["weights"] = [w]
        if args.mode:
            data["mode"] = args.mode
        if getattr(args, "primitive_mode", None):
            data["primitive_mode"] = args.primitive_mode
        plan = build_plan(data)
    return plan


def cmd_induce(args):
    plan = _module_plan(args)
    pp, V, M = _modules(plan)
    spaces = sorted(M.weight_spaces().items())
    rows = [{"summand": s, "weight": [list(w[0]), w[1]], "dim": len(keys)} for (s, w), keys in spaces]
    out = {"dimension": len(M.basis()), "top_dimension": len(M.top()), "weights": rows,
           "nilradical_generators": [format_element(x) for x in M.generators]}
    rec = RunRecord("induce", plan.to_dict(), out)
    rec.human = [f"induced window: {len(M.basis())} basis vectors, 1(x)V part {len(M.top())}"]
    rec.human += [f"  summand {r['summand']} weight {_weight_str(w)}: {r['dim']}"
                  for r, ((s, w), _) in zip(rows, spaces)]
    return rec


def cmd_primitives(args):
    plan = _module_plan(args)
    pp, V, M = _modules(plan)
    mode = plan.primitive_mode
    report = primitives(M, plan.operator_bound, mode)
    v_report = primitives(V, plan.operator_bound, FULL) if mode == FULL else None
    verdict = check_reduction(M, report, v_report)
    out = {"report": report.to_dict(), "reduction": verdict.to_dict()}
    rec = RunRecord("primitives", plan.to_dict(), out, {"reduction": verdict.verdict})
    rec.human = [f"{len(report.operators)} operators ({mode} mode), {len(report.windows)} weight windows"]
    for w in report.windows:
        if w.kernel_dim:
            rec.human.append(f"  summand {w.summand} weight {_weight_str(w.weight)}: kernel {w.kernel_dim}"
                             f" vs baseline {w.baseline_dim} (window dim {w.dimension})")
    return rec


def cmd_character(args):
    plan = _module_plan(args)
    pp, V, M = _modules(plan)
    basis = M.character()
    product = pbw_character(pp, V, plan.window, plan.mode)
    keys = sorted(set(basis) | set(product))
    mism = [k for k in keys if basis.get(k, 0) != product.get(k, 0)]
    fmt = lambda ch: [{"summand": s, "weight": [list(w[0]), w[1]], "coefficient": ch.get((s, w), 0)}
                      for s, w in keys]
    out = {"basis": fmt(basis), "product": fmt(product), "mismatches": len(mism)}
    verdict = "agree" if not mism else "differ"
    rec = RunRecord("character", plan.to_dict(), out, {"characters": verdict})
    rec.human = [f"{len(keys)} weights, {len(mism)} mismatching coefficients"]
    return rec


def cmd_verify(args):
    label = _label(args.type)
    if label.twist != 1:
        raise CapabilityError("structure constants are available for untwisted types only")
    alg = LoopAlgebra(chevalley_constants(FiniteTypeLabel(label.series, label.rank)))
    out, verdicts, human = {}, {}, []
    checks = []
    if args.jacobi or not args.antisymmetry:
        checks.append(("jacobi", verify_jacobi))
    if args.antisymmetry or not args.jacobi:
        checks.append(("antisymmetry", verify_antisymmetry))
    for name, fn in checks:
        bad = fn(alg, args.bound)
        out[f"{name}_violations"] = len(bad)
        verdicts[name] = "PASS" if not bad else "FAIL"
        human.append(f"{name}: {len(bad)} violations")
    rec = RunRecord("verify", {"type": args.type, "bound": args.bound}, out, verdicts)
    rec.human = human
    return rec


COMMANDS = {
    "roots": cmd_roots, "classify": cmd_classify, "levi": cmd_levi, "table": cmd_table,
    "induce": cmd_induce, "primitives": cmd_primitives, "character": cmd_character, "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="affind", description="Parabolic induction for affine Lie algebras.")
    parser.add_argument("--version", action="version", version=f"affind {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("human", "machine"), default="human")
        p.add_argument("--results", metavar="DIR", help="also write the machine record into DIR")

    p = sub.add_parser("roots", help="enumerate roots in a height window")
    p.add_argument("--type", required=True)
    p.add_argument("--bound", type=int, default=3)
    common(p)

    for name, hlp in (("classify", "classify a parabolic subset"), ("levi", "Levi components of a subset")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--type", required=True)
        p.add_argument("--flag", help='functionals, e.g. "m2-m0; m1"')
        p.add_argument("--S", help="comma-separated node indices")
        p.add_argument("--alpha0", type=int)
        if name == "levi":
            p.add_argument("--window", type=int, help="root window height bound")
        common(p)

    p = sub.add_parser("table", help="type II Levi table of an affine type")
    p.add_argument("--type", required=True)
    common(p)

    for name, hlp in (("induce", "build an induced module window"),
                      ("primitives", "search for primitive vectors"),
                      ("character", "compare basis and product-formula characters")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--config")
        p.add_argument("--type")
        p.add_argument("--flag")
        p.add_argument("--S")
        p.add_argument("--levi", help="highest weight on Levi coroots, e.g. 1/3")
        p.add_argument("--complement", help="highest weight on the Heisenberg complement")
        p.add_argument("--charge")
        p.add_argument("--mode", choices=("pseudo", "heisenberg"))
        p.add_argument("--window", type=int)
        p.add_argument("--depth", type=int)
        p.add_argument("--operator-bound", dest="operator_bound", type=int)
        if name == "primitives":
            p.add_argument("--primitive-mode", dest="primitive_mode", choices=(NILRADICAL, FULL))
        common(p)

    p = sub.add_parser("verify", help="exhaustive Jacobi / antisymmetry checks")
    p.add_argument("--type", required=True)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--jacobi", action="store_true")
    p.add_argument("--antisymmetry", action="store_true")
    common(p)
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "flag", None) is not None and getattr(args, "S", None) is not None:
        raise ConfigError(["both --flag and --S given; choose one"])
    start = time.perf_counter()
    record = COMMANDS[args.command](args)
    record.elapsed = time.perf_counter() - start
    return record, args


def write_results(record, directory):
    os.makedirs(directory, exist_ok=True)
    digest = hashlib.sha256(json.dumps(jsonable(record.input), sort_keys=True).encode()).hexdigest()[:12]
    path = os.path.join(directory, f"{record.command}-{digest}.json")
    with open(path, "w") as fh:
        fh.write(emit(record, "machine"))
    return path


def main(argv=None):
    try:
        record, args = run(argv)
    except (ConfigError, CatalogError, ParabolicError, EngineError, CapabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(emit(record, args.format))
    if args.results:
        write_results(record, args.results)
    return 0


if __name__ == "__main__":
    sys.exit(main())
