"""Command-line entry point.

Subcommands: site, sections, cats-manifold, heyting, stack, info, carnap,
dyn, verify.  Global flags: --seed, --out, --format, --bound (the
SHEAFNET_BOUND environment variable overrides the default enumeration
bound).  Exit codes: 0 success, 1 check failure, 2 input error.  Reports
are stable-ordered (sorted JSON keys, fixed row order) so identical
configurations diff byte-identically.
"""

import argparse
import json
import random
import sys

import numpy as np

from . import heyting as hey
from .arch_site import (
    FinitePoset,
    build_poset,
    fork_surgery,
    load_architecture,
    site_report,
)
from .carnap import (
    build_language,
    build_symmetry_group,
    orbit_report,
    self_duality_holds,
    simple_content_report,
    simple_propositions,
    simples_form_single_orbit,
)
from .chains import DeltaSequence
from .dynamics import (
    CELLS,
    Node,
    PARAM_COUNTS,
    SumLoss,
    WeightedNetwork,
    cubic_cell_step,
    cusp_scan,
    gradient_agreement,
    gru_step,
    lstm_step,
    mgu2_step,
)
from .errors import SheafnetError
from .groupoids import (
    GroupoidFunctor,
    StackOverPoset,
    check_adjunction_and_section,
    check_fibrant_injective,
)
from .presheaf import Presheaf, cats_manifold, sections
from .seminfo import (
    BooleanAlgebra,
    BooleanLanguage,
    ambiguity,
    cbh_precision,
    check_cocycle,
    check_concavity,
    check_independence,
    content,
    localized_precision,
    mutual_information,
)
from .verify import run_all


# ---------------------------------------------------------------------------
# IO helpers
# ---------------------------------------------------------------------------

def emit_report(data, fmt="json", out=None):
    """Bit-stable JSON (sorted keys) or CSV with a header row."""
    if fmt == "json":
        text = json.dumps(data, sort_keys=True, indent=2, default=str) + "\n"
    elif fmt == "csv":
        header, rows = data
        lines = [",".join(header)]
        lines += [",".join(str(x) for x in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        raise SheafnetError(f"unsupported format {fmt!r}")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SheafnetError(f"cannot read {path!r}: {exc}") from exc


def _load_poset(doc):
    if "elements" not in doc:
        raise SheafnetError("poset document needs 'elements' and 'leq'")
    return FinitePoset.from_dict(doc)


def _load_presheaf(doc):
    poset = _load_poset(doc["poset"])
    carriers = {x: tuple(doc["carriers"][str(x)]) for x in poset.elements}
    maps = {}
    for key, m in doc.get("maps", {}).items():
        x, y = key.split("<=")
        maps[(x, y)] = dict(m)
    return Presheaf(poset, carriers, maps)


def _simple_component_groupoid(doc):
    """Pair groupoid per generated component, with plain object names."""
    objects = [str(o) for o in doc["objects"]]
    parent = {o: o for o in objects}

    def find(o):
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    for gen in doc.get("generators", []):
        a, b = find(str(gen["src"])), find(str(gen["dst"]))
        if a != b:
            parent[a] = b
    comps = {}
    for o in objects:
        comps.setdefault(find(o), []).append(o)
    morphisms, src, dst, inv, ident, comp_table = [], {}, {}, {}, {}, {}
    for members in comps.values():
        for a in members:
            for b in members:
                m = (a, b)
                morphisms.append(m)
                src[m], dst[m], inv[m] = a, b, (b, a)
                if a == b:
                    ident[a] = m
        for a in members:
            for b in members:
                for c in members:
                    comp_table[((b, c), (a, b))] = (a, c)
    from .groupoids import FiniteGroupoid

    return FiniteGroupoid(tuple(objects), tuple(morphisms), src, dst,
                          comp_table, inv, ident)


def _states(text):
    return frozenset(s for s in text.split(",") if s)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_site(args):
    g = load_architecture(args.infile)
    emit_report(site_report(g), args.format, args.out)
    return 0


def cmd_sections(args):
    p = _load_presheaf(_load_json(args.infile))
    secs = sections(p, bound=args.bound or 10**6)
    report = {
        "count": len(secs),
        "sections": [{str(k): str(v) for k, v in s.items()} for s in secs][:args.limit],
    }
    emit_report(report, args.format, args.out)
    return 0


def cmd_cats_manifold(args):
    p = _load_presheaf(_load_json(args.infile))
    pred_doc = _load_json(args.predicate)
    predicate = {k: list(v) for k, v in pred_doc.items()}
    hits = cats_manifold(p, predicate)
    report = {
        "count": len(hits),
        "sections": [{str(k): str(v) for k, v in s.items()} for s in hits][:args.limit],
    }
    emit_report(report, args.format, args.out)
    return 0


def cmd_heyting(args):
    if args.arch:
        poset = build_poset(fork_surgery(load_architecture(args.arch)))
    else:
        poset = _load_poset(_load_json(args.infile))
    emit_report(hey.implication_table(poset, bound=args.bound), args.format, args.out)
    return 0


def cmd_stack(args):
    doc = _load_json(args.infile)
    if args.stack_cmd == "check-fibrant":
        if "carriers" in doc:
            diagram = _load_presheaf(doc)
        else:
            poset = _load_poset(doc["poset"])
            fibers = {x: _simple_component_groupoid(doc["fibers"][str(x)])
                      for x in poset.elements}
            glue = {}
            for key, omap in doc["glue"].items():
                x, y = key.split("<=")
                f_omap = {o: omap[str(o)] for o in fibers[y].objects}
                f_mmap = {(a, b): (f_omap[a], f_omap[b]) for a, b in fibers[y].morphisms}
                glue[(x, y)] = GroupoidFunctor.of(fibers[y], fibers[x], f_omap, f_mmap)
            diagram = StackOverPoset(poset, fibers, glue)
        report = check_fibrant_injective(diagram)
        emit_report(report.as_dict(), args.format, args.out)
        return 0 if report.fibrant else 1
    # adjunction
    src = _simple_component_groupoid(doc["source"])
    dst = _simple_component_groupoid(doc["target"])
    omap = {o: str(doc["object_map"][str(o)]) for o in src.objects}
    mmap = {(a, b): (omap[a], omap[b]) for a, b in src.morphisms}
    f = GroupoidFunctor.of(src, dst, omap, mmap)
    report = check_adjunction_and_section(f)
    emit_report({
        "adjunction_ok": report.adjunction_ok,
        "unit_ok": report.unit_ok,
        "surjective_on_components": report.surjective_on_components,
        "section_ok": report.section_ok,
        "failures": [str(f) for f in report.failures],
    }, args.format, args.out)
    return 0 if report.ok else 1


def cmd_info(args):
    doc = _load_json(args.infile)
    lang = BooleanLanguage([str(s) for s in doc["states"]],
                           doc.get("measure"))
    alg = BooleanAlgebra(lang)
    theory = _states(args.theory) if args.theory else alg.top
    q = _states(args.q) if args.q else alg.top
    q2 = _states(args.q2) if args.q2 else alg.top
    p = _states(args.p) if args.p else frozenset()
    psi = localized_precision(lang, p) if p else cbh_precision(lang)
    rng = random.Random(args.seed)
    states = list(lang.states)

    def sample_theory():
        t = frozenset(rng.sample(states, rng.randint(1, len(states)))) - p
        return t or frozenset({next(s for s in states if s not in p)})

    def sample_prop():
        return frozenset(rng.sample(states, rng.randint(1, len(states)))) | p

    triples = [(sample_theory(), sample_prop(), sample_prop()) for _ in range(2000)]
    cocycle = check_cocycle(psi, triples)
    domain = []
    for _ in range(2000):
        t, t2 = sample_theory(), sample_theory()
        if alg.leq(t, t2):
            domain.append((sample_prop(), t, t2))
    concavity = check_concavity(psi, domain)
    independent, residual = check_independence(lang, q, q2)
    report = {
        "content": content(lang, theory),
        "psi": psi(theory),
        "ambiguity": ambiguity(psi, theory, q),
        "mutual_information": mutual_information(psi, theory, q, q2),
        "checks": {
            "cocycle": {"samples": cocycle.samples,
                        "max_residual": cocycle.max_residual,
                        "ok": cocycle.passed(args.tolerance)},
            "concavity": {"samples": concavity.samples,
                          "minimum": concavity.minimum,
                          "ok": concavity.passed(args.tolerance)},
            "independence": {"independent": independent,
                             "additivity_residual": residual},
        },
    }
    if args.delta:
        delta = DeltaSequence.of([float(x) for x in args.delta.split(",")])
        report["delta"] = {"values": list(delta.values), "dominated": True}
    emit_report(report, args.format, args.out)
    ok = report["checks"]["cocycle"]["ok"] and report["checks"]["concavity"]["ok"]
    return 0 if ok else 1


def cmd_carnap(args):
    counts = [int(c) for c in args.attributes.split(",") if c]
    lang = build_language(args.subjects, counts)
    group = build_symmetry_group(lang)
    report = orbit_report(lang, group)
    simples = simple_propositions(lang)
    out = {
        "states": len(lang.states),
        "proposition_count": str(lang.proposition_count),
        "group_order": group.order,
        "orbits": report.as_dict(lang)["orbits"],
        "simples": {
            "count": len(simples),
            "labels": sorted(s.label for s in simples),
            "self_dual": self_duality_holds(lang, simples),
            "single_orbit": simples_form_single_orbit(lang, group, simples),
            "content": simple_content_report(lang),
        },
    }
    emit_report(out, args.format, args.out)
    return 0


def _network_from_architecture(g, rng):
    order = []
    remaining = {v: set(g.predecessors(v)) for v in g.vertices}
    while remaining:
        ready = sorted(v for v, preds in remaining.items() if not preds)
        if not ready:
            raise SheafnetError("architecture has a cycle")
        for v in ready:
            order.append(v)
            del remaining[v]
        for preds in remaining.values():
            preds.difference_update(ready)
    dims = {v: rng.randint(1, 3) for v in g.vertices}
    nodes = []
    for v in order:
        preds = tuple(sorted(g.predecessors(v)))
        if not preds:
            nodes.append(Node(v, "input", dims[v]))
        else:
            total = sum(dims[p] for p in preds)
            weight = np.array([[rng.uniform(-1, 1) for _ in range(total)]
                               for _ in range(dims[v])])
            nodes.append(Node(v, "affine", dims[v], preds, "tanh", weight=weight))
    sinks = tuple(sorted(v for v in g.vertices if g.out_degree(v) == 0))
    total = sum(dims[s] for s in sinks)
    nodes.append(Node("__loss_readout", "affine", 1, sinks, "identity",
                      weight=np.array([[rng.uniform(-1, 1) for _ in range(total)]])))
    return WeightedNetwork(nodes)


def cmd_dyn(args):
    rng = random.Random(args.seed)
    if args.dyn_cmd == "cusp":
        rows = cusp_scan(grid=args.grid)
        emit_report((("u", "v", "delta", "root_count"), rows), "csv", args.out)
        return 0
    if args.dyn_cmd == "gradcheck":
        g = load_architecture(args.arch)
        net = _network_from_architecture(g, rng)
        inputs = {name: [rng.uniform(-1, 1) for _ in range(net.nodes[name].dim)]
                  for name in net.inputs}
        vs_rev, vs_fd, res = gradient_agreement(net, inputs, SumLoss())
        report = {
            "max_error_vs_reverse_mode": vs_rev,
            "max_error_vs_finite_differences": vs_fd,
            "path_counts": {k: v for k, v in sorted(res.path_counts.items())},
            "saturated_nodes": list(res.saturated),
            "ok": vs_rev <= 1e-12 and vs_fd <= 1e-6,
        }
        emit_report(report, args.format, args.out)
        return 0 if report["ok"] else 1
    # cell trajectory
    m, n = args.m, args.n
    params = CELLS[args.cell].init(m, n, rng)
    h = np.zeros(m)
    c = np.zeros(m)
    rows = []
    for step in range(args.steps):
        x = np.array([rng.uniform(-1, 1) for _ in range(n)])
        if args.cell == "lstm":
            h, c = lstm_step(params, x, h, c)
        elif args.cell == "gru":
            h = gru_step(params, x, h)
        elif args.cell == "mgu2":
            h = mgu2_step(params, x, h)
        else:
            h = cubic_cell_step(params, x, h)
        rows.append({"step": step, "h": [round(float(v), 12) for v in h]})
    report = {
        "cell": args.cell,
        "m": m,
        "n": n,
        "parameter_count": params.n_parameters,
        "parameter_count_formula": PARAM_COUNTS[args.cell](m, n),
        "trajectory": rows,
    }
    emit_report(report, args.format, args.out)
    return 0


def cmd_verify(args):
    results = run_all(seed=args.seed)
    for res in results:
        sys.stderr.write(res.line() + "\n")
    report = {
        "criteria": [
            {"number": r.number, "name": r.name,
             "passed": r.passed, "detail": r.detail}
            for r in results
        ],
        "passed": sum(1 for r in results if r.passed),
        "failed": sum(1 for r in results if not r.passed),
    }
    emit_report(report, args.format, args.out)
    return 0 if report["failed"] == 0 else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--bound", type=int, default=None)
    common.add_argument("--tolerance", type=float, default=1e-12)

    parser = argparse.ArgumentParser(
        prog="sheafnet",
        description="Finite sites, sheaves, stacks and semantic information "
                    "measures for layered network architectures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("site", help="poset site report for an architecture")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_site)

    p = add_parser("sections", help="global sections of a presheaf")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--limit", type=int, default=100)
    p.set_defaults(fn=cmd_sections)

    p = add_parser("cats-manifold", help="sections filtered by an output predicate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--predicate", required=True)
    p.add_argument("--limit", type=int, default=100)
    p.set_defaults(fn=cmd_cats_manifold)

    p = add_parser("heyting", help="implication table of the open-set algebra")
    p.add_argument("--in", dest="infile")
    p.add_argument("--arch", help="derive the poset from an architecture file")
    p.set_defaults(fn=cmd_heyting)

    p = add_parser("stack", help="stack checks over a poset")
    p.add_argument("stack_cmd", choices=("check-fibrant", "adjunction"))
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_stack)

    p = add_parser("info", help="semantic information report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--theory", default=None, help="comma-separated states")
    p.add_argument("--q", default=None, help="conditioning proposition")
    p.add_argument("--q2", default=None, help="second proposition")
    p.add_argument("--p", default=None, help="localizing proposition")
    p.add_argument("--delta", default=None, help="comma-separated weights")
    p.set_defaults(fn=cmd_info)

    p = add_parser("carnap", help="subject/attribute language report")
    p.add_argument("--subjects", type=int, required=True)
    p.add_argument("--attributes", required=True, help='e.g. "2,2"')
    p.set_defaults(fn=cmd_carnap)

    p = add_parser("dyn", help="cells, gradient checks, cusp scans")
    p.add_argument("dyn_cmd", nargs="?", default="cell",
                   choices=("cell", "gradcheck", "cusp"))
    p.add_argument("--cell", choices=tuple(CELLS), default="lstm")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--arch", default=None)
    p.add_argument("--grid", type=int, default=100)
    p.set_defaults(fn=cmd_dyn)

    p = add_parser("verify", help="run the acceptance suite")
    p.add_argument("--all", action="store_true")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SheafnetError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
