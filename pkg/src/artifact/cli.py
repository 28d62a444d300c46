"""Command line entry point.

    artifact classify  --quiver Q
    artifact catalog   --quiver Q
    artifact basegraph --quiver Q [--d D] [--dot]
    artifact minmatch  --quiver Q --d D [--dot]
    artifact poset     --quiver Q --d D [--trace]
    artifact fpoly     --quiver Q --d D --method dimer|evector|mutation|all [--trace]
    artifact compare   --quiver Q
    artifact render    --quiver Q [--d D] [--e E]

Every command accepts ``--json`` and ``--out PATH``.  Exit status is 0 on
success, 1 when polynomials disagree, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .dimer import (
    BaseGraphError,
    build_base_graph,
    count_cycles,
    enumerate_poset,
    f_polynomial_dimer,
    minimal_matching,
    place_nodes,
    to_dot,
)
from .evector import BijectionError, critical_components, dimer_to_e, e_to_dimer, f_polynomial_evector
from .jacobian import module_for_vector
from .oracle import f_polynomial_mutation, thread_count
from .poly import Poly
from .quiver import NOT_TYPE_D, Quiver, QuiverError, classify_vatne
from .surface import SurfaceError, catalog_dvectors

METHODS = ("dimer", "evector", "mutation")


class UsageError(ValueError):
    """Bad command line input; reported with exit status 2."""


def _parse_vector(text: str | None, n: int, what: str) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        vec = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--{what} must be comma-separated integers") from exc
    if len(vec) != n:
        raise UsageError(f"--{what} has {len(vec)} entries, the quiver has {n} vertices")
    if any(x < 0 or x > 2 for x in vec):
        raise UsageError(f"--{what} entries must lie in 0..2")
    return vec


def _load_quiver(path: str) -> Quiver:
    try:
        return Quiver.parse(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except QuiverError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def singular_for(q: Quiver, d) -> frozenset:
    """Singular arrows of the arc module with crossing vector ``d`` (none for d = 0)."""
    if not any(d):
        return frozenset()
    try:
        return module_for_vector(q, d).singular
    except SurfaceError as exc:
        raise UsageError(f"{','.join(map(str, d))} is not the crossing vector of an arc") from exc


def polynomials(q: Quiver, d, methods=METHODS) -> dict[str, Poly]:
    sing = singular_for(q, d)
    out = {}
    for name in methods:
        if name == "dimer":
            out[name] = f_polynomial_dimer(q, d, sing)
        elif name == "evector":
            out[name] = f_polynomial_evector(q, d, sing)
        else:
            out[name] = f_polynomial_mutation(q, d)
    return out


def _compare_one(args) -> tuple[tuple[int, ...], str, dict[str, str], bool]:
    q, d, provenance = args
    polys = polynomials(q, d)
    texts = {k: str(v) for k, v in polys.items()}
    return d, provenance, texts, len(set(polys.values())) == 1


# ---------------------------------------------------------------------------
# commands


def cmd_classify(q, opts, out):
    vc = classify_vatne(q)
    if opts.json:
        return {"type": vc.type_tag, "subtype": vc.subtype, "roles": {str(k): v for k, v in sorted(vc.role_map.items())},
                "central_cycle": list(vc.central_cycle)}
    out(vc.describe())


def cmd_catalog(q, opts, out):
    vc = classify_vatne(q)
    if vc.type_tag == NOT_TYPE_D:
        raise UsageError("catalog needs a type D quiver")
    rows = []
    for cv in catalog_dvectors(q, vc):
        if opts.json:
            rows.append({"d": list(cv.entries), "family": cv.provenance})
        else:
            out(f"{cv.serialize()}\t{cv.provenance}")
    if opts.json:
        return rows


def _graph(q, d):
    g = build_base_graph(q)
    if d is None:
        return g, frozenset()
    sing = singular_for(q, d)
    return place_nodes(g, d, sing), sing


def cmd_basegraph(q, opts, out):
    g, _ = _graph(q, opts.dvec)
    if opts.dot:
        out(to_dot(g), end="")
        return None
    if opts.json:
        return {"colors": list(g.colors), "names": list(g.names), "edges": [list(e) for e in g.edges],
                "tiles": [list(t) for t in g.tiles], "nodes": [[v, c] for v, c in g.nodes]}
    out(g.describe())


def _need_d(opts):
    if opts.dvec is None:
        raise UsageError(f"{opts.command} needs --d")


def cmd_minmatch(q, opts, out):
    _need_d(opts)
    g, sing = _graph(q, opts.dvec)
    m = minimal_matching(g, opts.dvec, sing)
    if opts.dot:
        out(to_dot(g, m), end="")
        return None
    rows = [(g.names[b], g.names[w], x) for (b, w), x in zip(g.edges, m.mult) if x]
    if opts.json:
        return {"singular": [list(a) for a in sorted(sing)], "edges": [list(r) for r in rows]}
    out("singular " + (" ".join(f"{a}->{b}" for a, b in sorted(sing)) or "none"))
    for b, w, x in rows:
        out(f"{b} {w} {x}")


def cmd_poset(q, opts, out):
    _need_d(opts)
    g, sing = _graph(q, opts.dvec)
    poset = enumerate_poset(g, opts.dvec, sing)
    mmin = poset.elements[0]
    rows = []
    for k, m in enumerate(poset.elements):
        c = count_cycles(g, m)
        row = {"index": k, "flips": list(m.flips), "cycles": c, "monomial": str(Poly.monomial(m.flips, 2 ** c))}
        if opts.trace:
            steps: list[str] = []
            dimer_to_e(g, m, mmin, steps)
            row["trace"] = steps
        rows.append(row)
        if not opts.json:
            out(f"{k}\t{','.join(map(str, m.flips))}\t{row['monomial']}\tcycles={c}")
            for s in row.get("trace", ()):
                out(f"\t{s}")
    if opts.json:
        return {"elements": rows, "covers": [list(c) for c in poset.covers],
                "excluded": [list(m.flips) for m in poset.excluded]}
    for a, b, i in poset.covers:
        out(f"cover {a} -> {b} tile {i}")
    for m in poset.excluded:
        out(f"excluded {','.join(map(str, m.flips))}")


def cmd_fpoly(q, opts, out):
    _need_d(opts)
    methods = METHODS if opts.method == "all" else (opts.method,)
    polys = polynomials(q, opts.dvec, methods)
    verdict = None
    if len(methods) > 1:
        verdict = "MATCH" if len(set(polys.values())) == 1 else "MISMATCH"
    trace = []
    if opts.trace and "dimer" in methods:
        g, sing = _graph(q, opts.dvec)
        mmin = minimal_matching(g, opts.dvec, sing)
        for m in enumerate_poset(g, opts.dvec, sing).elements:
            steps: list[str] = []
            e_to_dimer(g, q, opts.dvec, sing, m.flips, steps)
            dimer_to_e(g, m, mmin, steps)
            comps = critical_components(q, opts.dvec, m.flips, sing)
            trace.append({"e": list(m.flips), "cycles": count_cycles(g, m),
                          "critical": [[sorted(s), nu] for s, nu in comps], "steps": steps})
    if opts.json:
        doc = {"d": list(opts.dvec), "polynomials": {k: str(v) for k, v in polys.items()}}
        if verdict:
            doc["verdict"] = verdict
        if trace:
            doc["trace"] = trace
        return doc, (1 if verdict == "MISMATCH" else 0)
    for t in trace:
        out(f"e={','.join(map(str, t['e']))} cycles={t['cycles']}")
        for s in t["steps"]:
            out(f"  {s}")
    for k in methods:
        out(f"{k}: {polys[k]}" if len(methods) > 1 else str(polys[k]))
    if verdict:
        out(verdict)
    return None, (1 if verdict == "MISMATCH" else 0)


def cmd_compare(q, opts, out):
    vc = classify_vatne(q)
    if vc.type_tag == NOT_TYPE_D:
        raise UsageError("compare needs a type D quiver")
    jobs = [(q, cv.entries, cv.provenance) for cv in catalog_dvectors(q, vc)]
    workers = thread_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_compare_one, jobs)
            rows = list(_stream(results, opts, out))
    else:
        rows = list(_stream(map(_compare_one, jobs), opts, out))
    bad = sum(1 for r in rows if not r["match"])
    if opts.json:
        return {"results": rows, "mismatches": bad}, (1 if bad else 0)
    out(f"{len(rows)} vectors, {bad} mismatches")
    return None, (1 if bad else 0)


def _stream(results, opts, out):
    for d, prov, texts, ok in results:
        row = {"d": list(d), "family": prov, "match": ok, "polynomials": texts}
        if not opts.json:
            out(f"{','.join(map(str, d))}\t{'MATCH' if ok else 'MISMATCH'}\t{prov}")
            if not ok:
                for k, v in texts.items():
                    out(f"  {k}: {v}")
        yield row


def cmd_render(q, opts, out):
    g, sing = _graph(q, opts.dvec)
    m = None
    if opts.dvec is not None:
        e = _parse_vector(opts.e, q.n, "e")
        m = minimal_matching(g, opts.dvec, sing) if e is None else e_to_dimer(g, q, opts.dvec, sing, e)
    elif opts.e is not None:
        raise UsageError("--e needs --d")
    out(to_dot(g, m), end="")


COMMANDS = {
    "classify": cmd_classify,
    "catalog": cmd_catalog,
    "basegraph": cmd_basegraph,
    "minmatch": cmd_minmatch,
    "poset": cmd_poset,
    "fpoly": cmd_fpoly,
    "compare": cmd_compare,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description="Mixed dimer models for type D cluster algebras with a punctured-disk surface model.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--quiver", required=True, help="quiver file: n=<int> and arrows=a->b,...")
        s.add_argument("--d", dest="d", help="crossing vector, comma separated")
        s.add_argument("--e", dest="e", help="submodule-indexing vector (render only)")
        s.add_argument("--method", choices=METHODS + ("all",), default="all" if name == "fpoly" else None)
        s.add_argument("--dot", action="store_true")
        s.add_argument("--trace", action="store_true")
        s.add_argument("--json", action="store_true")
        s.add_argument("--out", help="write output here instead of stdout")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        opts = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    sink = open(opts.out, "w") if opts.out else sys.stdout

    def out(text: str, end: str = "\n") -> None:
        sink.write(text + end)
        sink.flush()

    try:
        q = _load_quiver(opts.quiver)
        opts.dvec = _parse_vector(opts.d, q.n, "d")
        result = COMMANDS[opts.command](q, opts, out)
        status = 0
        if isinstance(result, tuple):
            result, status = result
        if opts.json and result is not None:
            out(json.dumps(result, indent=2, sort_keys=True))
        return status
    except (UsageError, BaseGraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BijectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if opts.out:
            sink.close()


if __name__ == "__main__":
    sys.exit(main())
