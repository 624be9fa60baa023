"""
Batch computations and verification reports.

    python -m intforms homology --space S2 --ring Z --m 1
    python -m intforms steenrod --space rp2min --ring F2 --format json

Exit status: 0 when every listed check passes, 1 when one fails, 2 on
bad input.  JSON reports carry "schema": "1" and the fields command,
space, ring, sections, passed; each section has a title, optional
data and a list of {"name", "pass"} checks.
"""

import argparse
import json
import sys
from pathlib import Path

from .chain_core import F2, QQ, GroundRing
from .sset_eval import SimplicialSetError, build_space

SCHEMA = "1"
COMMANDS = ("homology", "compare", "fibrancy", "cupring", "steenrod",
            "hocolim-scan", "verify-identities", "adjunction-count")


class InputError(ValueError):
    pass


class Section:
    def __init__(self, title, data=None):
        self.title, self.data, self.checks = title, data or {}, []

    def check(self, name, ok):
        self.checks.append((name, bool(ok)))

    def to_dict(self):
        return {"title": self.title, "data": self.data,
                "checks": [{"name": n, "pass": ok} for n, ok in self.checks]}


def _range(text, what):
    """'2' -> [2], '1:3' -> [1, 2, 3], '1,3' -> [1, 3]."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError("bad %s %r" % (what, text)) from None


def _pair(text, what):
    vals = _range(text, what) if ":" in text else None
    if not vals:
        raise InputError("%s must look like lo:hi" % what)
    return vals[0], vals[-1]


def _group(h, ring):
    return h.describe(ring)


# ---------------------------------------------------------------------------
# commands


def cmd_homology(job):
    from .bar_ai import AISystem
    from .sset_eval import evaluate_functor, normalized_cochains
    X, ring = job["space"], job["ring"]
    oracle = normalized_cochains(X, ring)
    degs = range(-X.dim, 1) if X.order else range(0, 1)
    out = []
    for m in job["m"]:
        E = evaluate_functor(AISystem(ring), X, m).complex
        table = {q: E.homology(q) for q in degs}
        ref = {q: oracle.homology(q) for q in degs}
        s = Section("homology m=%d" % m,
                    {"table": {str(q): _group(h, ring) for q, h in table.items()},
                     "oracle": {str(q): _group(h, ring) for q, h in ref.items()}})
        for q in degs:
            s.check("H_%d matches ordinary cochains" % q, table[q] == ref[q])
        out.append(s)
    return out


def cmd_compare(job):
    from .sset_eval import comparison_zigzag
    out = []
    for m in job["m"]:
        z = comparison_zigzag(job["space"], m, job["ring"], window=job.get("window"))
        s = Section("comparison m=%d" % m, {"window": list(z["window"])})
        s.check("A -> B quasi-iso", z["A_quasi_iso"])
        s.check("C -> B quasi-iso", z["C_quasi_iso"])
        s.check("both quasi-iso", z["A_quasi_iso"] and z["C_quasi_iso"])
        out.append(s)
    return out


def cmd_fibrancy(job):
    from .bar_ai import AISystem
    from .chain_core import is_quasi_iso
    from .icat import enumerate_injections
    from .sset_eval import evaluate_functor, induced_map_of_injection, latching_surjectivity
    X, ring = job["space"], job["ring"]
    sysm = AISystem(ring)
    lo, hi = job.get("trunc") or (1, 3)
    window = job.get("window") or (-X.dim, 0)
    evals = {n: evaluate_functor(sysm, X, n) for n in range(max(lo, 1), hi + 1)}
    s = Section("injections act by quasi-isomorphisms", {"window": list(window)})
    for m in evals:
        for n in evals:
            if n < m:
                continue
            for alpha in enumerate_injections(m, n):
                f = induced_map_of_injection(alpha, evals[m], evals[n])
                s.check("%r" % (alpha,), is_quasi_iso(f, window)[0])
    lat = Section("latching maps surjective")
    for m in job["m"]:
        for p in range(1, 4):
            res = latching_surjectivity(p, m, ring, sysm)
            lat.check("Delta^%d -> boundary m=%d" % (p, m), all(res.values()))
    return [s, lat]


def cmd_cupring(job):
    from .sset_eval import CupStructure, FibrancyError, aw_cup_oracle, match_rings
    X, ring = job["space"], job["ring"]
    oracle = aw_cup_oracle(X, ring)
    out = []
    for m in job["m"]:
        s = Section("cup ring m0=%d" % m, {"oracle": oracle.to_dict(ring)})
        try:
            table = CupStructure(X, ring, m).table()
        except FibrancyError as e:
            s.data["error"] = str(e)
            s.check("products defined", False)
            out.append(s)
            continue
        s.data["ring"] = table.to_dict(ring)
        basis = match_rings(table, oracle, ring)
        s.check("isomorphic to the Alexander-Whitney ring", basis is not None)
        out.append(s)
    return out


def cmd_steenrod(job):
    from .chain_core import HomologyPresentation
    from .hocolim_einfty import steenrod_square
    from .sset_eval import aw_cup_oracle
    X, ring = job["space"], job["ring"]
    if ring != F2:
        raise InputError("steenrod needs --ring F2")
    M = (job.get("trunc") or (1, 3))[1]
    oracle = aw_cup_oracle(X, ring)
    s = Section("Sq^1 on degree -1 classes", {"M": M})
    r = steenrod_square(X, 1, -1, ring, M=M)
    s.data.update({"p_max": r.p_max, "target": _group(r.target_group, ring),
                   "values": [{k: v for k, v in e.items()} for e in r.entries]})
    s.check("P(2) -> hocolim iso in degree -2", r.verified)
    for e in r.entries:
        g = e["generator"]
        square = oracle.table.get(((-1, g), (-1, g)), ())
        nonzero = any(e["class"] or ())
        s.check("Sq^1(a%d) is a cycle" % g, e["cycle"])
        s.check("Sq^1(a%d) = a%d^2" % (g, g), e["class"] == e["product_class"])
        s.check("Sq^1(a%d) nonzero iff oracle square nonzero" % g, nonzero == any(square))
    return [s]


def cmd_hocolim_scan(job):
    from .hocolim_einfty import EvaluationDiagram, stabilization_scan
    X, ring = job["space"], job["ring"]
    lo, hi = job.get("trunc") or (1, 3)
    window = job.get("window") or (-2, 0)
    res = stabilization_scan(EvaluationDiagram(X, ring), range(max(lo, 1), hi + 1), window)
    s = Section("hocolim over [1, M]", {
        "window": list(window),
        "P1": {str(q): _group(h, ring) for q, h in res["P1"].items()},
        "scan": {str(M): {"p_max": row["p_max"],
                          "homology": {str(q): _group(h, ring) for q, h in row["homology"].items()}}
                 for M, row in res["scan"].items()}})
    for M, row in res["scan"].items():
        s.check("P(1) -> hocolim quasi-iso M=%d" % M, row["matches_P1"])
    return [s]


def cmd_verify_identities(job):
    from .apl_bridge import check_rho
    from .bar_ai import AISystem, CISystem, verify_extra_degeneracies, verify_simplicial_identities
    ring = job["ring"]
    p_max = (job.get("trunc") or (0, 3))[1]
    out = []
    for system in (AISystem(ring), CISystem(ring)):
        for rep in (verify_simplicial_identities(system, p_max, job["m"]),
                    verify_extra_degeneracies(system, p_max, job["m"])):
            s = Section(rep.title)
            s.checks = list(rep.items)
            out.append(s)
    s = Section("rho into polynomial forms over Q")
    for name, ok in check_rho(min(p_max, 3), max(job["m"]), QQ).items():
        s.check(name, ok)
    out.append(s)
    return out


def cmd_adjunction_count(job):
    from .sset_eval import adjunction_count_f2
    X = job["space"]
    s = Section("adjunction counts over F2")
    for m in job["m"]:
        for q in (0, -1):
            for kind in ("sphere", "disk"):
                a, b = adjunction_count_f2(X, m, q, kind)
                s.data["m=%d q=%d %s" % (m, q, kind)] = [a, b]
                s.check("m=%d q=%d %s: %d = %d" % (m, q, kind, a, b), a == b)
    return [s]


HANDLERS = {
    "homology": cmd_homology, "compare": cmd_compare, "fibrancy": cmd_fibrancy,
    "cupring": cmd_cupring, "steenrod": cmd_steenrod, "hocolim-scan": cmd_hocolim_scan,
    "verify-identities": cmd_verify_identities, "adjunction-count": cmd_adjunction_count,
}


# ---------------------------------------------------------------------------
# plumbing


def make_job(args):
    """Merge an optional JSON config with the flags; flags win."""
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError("config: %s" % e) from None
    pick = lambda name, default=None: getattr(args, name) if getattr(args, name) is not None \
        else cfg.get(name, default)
    space_spec = pick("space")
    if space_spec is None and args.command != "verify-identities":
        raise InputError("--space is required for %s" % args.command)
    try:
        ring = GroundRing.parse(pick("ring", "Z"))
    except ValueError as e:
        raise InputError(str(e)) from None
    job = {"command": args.command, "ring": ring, "space_spec": space_spec,
           "m": _range(str(pick("m", "1")), "--m"), "format": pick("format", "text")}
    for key in ("window", "trunc"):
        val = pick(key)
        job[key] = _pair(str(val), "--" + key) if val is not None else None
    if space_spec is not None:
        try:
            job["space"] = build_space(space_spec)
        except (SimplicialSetError, json.JSONDecodeError, OSError, KeyError, TypeError,
                ValueError) as e:
            raise InputError("space: %s" % e) from None
    return job


def _space_label(spec):
    if isinstance(spec, str) and not spec.lstrip().startswith("{"):
        return spec
    return None if spec is None else "inline"


def run(job):
    sections = HANDLERS[job["command"]](job)
    return {"schema": SCHEMA, "command": job["command"],
            "space": _space_label(job["space_spec"]),
            "ring": job["ring"].name,
            "sections": [s.to_dict() for s in sections],
            "passed": all(ok for s in sections for _, ok in s.checks)}


def report_format(report, fmt="text"):
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=str)
    lines = []
    if report.get("command"):
        lines.append("%s  space=%s  ring=%s" % (report["command"], report["space"], report["ring"]))
    for s in report.get("sections", []):
        lines.append("")
        lines.append("== " + s["title"])
        for k, v in s["data"].items():
            lines.append("  %s: %s" % (k, json.dumps(v, sort_keys=True, default=str)))
        for c in s["checks"]:
            lines.append("  %s: %s" % (c["name"], "PASS" if c["pass"] else "FAIL"))
    return "\n".join(lines)


def build_parser():
    ap = argparse.ArgumentParser(prog="intforms", description=__doc__.split("\n\n")[0].strip())
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--space", help="named space, inline JSON or JSON file")
    ap.add_argument("--ring", help="Z, Q, F2 or Zmod:m")
    ap.add_argument("--m", help="object(s) of I: 1, 1:2 or 1,3")
    ap.add_argument("--window", help="degree window lo:hi")
    ap.add_argument("--trunc", help="truncation window lo:hi")
    ap.add_argument("--format", choices=("text", "json"))
    ap.add_argument("--config", help="JSON file with any of the above")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = make_job(args)
        report = run(job)
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    print(report_format(report, job["format"]))
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
