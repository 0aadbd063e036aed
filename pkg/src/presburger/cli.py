"""Command-line front end.

Every subcommand produces a report with a status (ok, fail or error), a
JSON payload and diagnostics.  ``--json`` prints the report as one JSON
object; diagnostics always go to standard error.  Exit codes: ok 0, fail 1,
error 2.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, field

from . import catalog as CAT
from . import counting as CNT
from . import formula as F
from . import lexrep as LR
from . import orderanalysis as OA
from . import qelim as Q
from . import semilinear as SL
from .interp import Interpretation, SchemaError, validate, xs

EXIT = {"ok": 0, "fail": 1, "error": 2}


@dataclass
class Report:
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": self.diagnostics}


class UsageError(Exception):
    pass


def load_interpretation(ref: str) -> Interpretation:
    """``catalog:<name>`` or a path to an interpretation JSON file."""
    if ref.startswith("catalog:"):
        name = ref.split(":", 1)[1]
        try:
            return CAT.get(name)
        except KeyError:
            raise UsageError(f"unknown catalog entry {name!r}; try 'catalog list'") from None
    try:
        return Interpretation.load(ref)
    except FileNotFoundError:
        raise UsageError(f"file not found: {ref}") from None


def _names_for(phi: F.Formula, m: int) -> list[str]:
    fv = F.free_vars(phi)
    default = xs(m)
    if fv <= set(default):
        return default
    if len(fv) > m:
        raise UsageError(f"formula has {len(fv)} free variables but -m is {m}")
    names = sorted(fv)
    while len(names) < m:
        names.append(F.fresh_name("pad", names))
    return names


def _point(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad point {text!r}; expected k1,k2,...") from None


# ------------------------------------------------------------ handlers


def cmd_qe(a) -> Report:
    phi = F.parse(a.formula)
    out = Q.eliminate(phi, a.budget_nodes)
    return Report("ok", {"formula": F.format_formula(out)})


def cmd_decide(a) -> Report:
    return Report("ok", {"value": Q.decide(F.parse(a.formula), a.budget_nodes)})


def _decompose(a) -> tuple[SL.Decomposition, list[str]]:
    phi = F.parse(a.formula)
    names = _names_for(phi, a.m)
    return SL.decompose_formula(phi, names, a.budget_pieces), names


def cmd_decompose(a) -> Report:
    D, names = _decompose(a)
    payload = D.to_json()
    payload["variables"] = names
    payload["dimension"] = D.dimension
    return Report("ok", payload)


def cmd_dim(a) -> Report:
    D, names = _decompose(a)
    return Report("ok", {"dimension": D.dimension, "empty": D.empty, "variables": names})


def cmd_validate(a) -> Report:
    I = load_interpretation(a.interp)
    rep = validate(I, a.budget_nodes)
    diags = [f"{v.axiom}: {v.error}" for v in rep.verdicts if v.error]
    if any(v.holds is None for v in rep.verdicts):
        return Report("error", rep.to_json(), diags)
    return Report("ok" if rep.ok else "fail", rep.to_json(), diags)


def cmd_galaxy(a) -> Report:
    I = load_interpretation(a.interp)
    if a.point is None:
        raise UsageError("galaxy needs --point k1,k2,...")
    p = _point(a.point)
    t = OA.galaxy_type(I, p, a.budget_nodes, count_budget=10**6)
    return Report("ok", {"point": list(p), "type": str(t)})


def cmd_condense(a) -> Report:
    I = load_interpretation(a.interp)
    res = OA.condense(I, a.budget_nodes, a.budget_pieces, split_z=a.split_z)
    return Report("ok", res.to_json())


def cmd_rank(a) -> Report:
    I = load_interpretation(a.interp)
    return Report("ok", OA.vd_rank(I, a.budget_nodes, a.budget_pieces).to_json())


def cmd_catalog(a) -> Report:
    if a.action == "list":
        entries = [{"name": I.name, "dim": I.dim, "description": I.description} for I in CAT.catalog()]
        return Report("ok", {"entries": entries})
    if not a.name:
        raise UsageError("catalog get needs a name")
    try:
        I = CAT.get(a.name)
    except KeyError:
        raise UsageError(f"unknown catalog entry {a.name!r}") from None
    return Report("ok", I.to_json())


def _range(text: str) -> range:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected lo:hi") from None
    return range(lo, hi + 1)


def cmd_count(a) -> Report:
    if a.A is None:
        raise UsageError("count needs -A")
    A = CNT.parse_matrix(a.A)
    if a.action == "fit":
        r = _range(a.range or "0:20")
        samples = list(itertools.product(r, repeat=len(A)))
        try:
            pp = CNT.fit_piecewise(A, samples)
        except CNT.FitFailure as exc:
            return Report("fail", {"degree_bound": CNT.degree_bound(A)}, [str(exc)])
        payload = pp.to_json()
        payload["degree_bound"] = CNT.degree_bound(A)
        payload["degree_bound_holds"] = CNT.verify_degree_bound(A, pp)
        return Report("ok" if payload["degree_bound_holds"] else "fail", payload)
    if a.u is None:
        raise UsageError("count needs -u (or the 'fit' action)")
    c = CNT.count_solutions(A, CNT.parse_vector(a.u))
    return Report("ok", {"count": "infinite" if c == CNT.INFINITE else c})


def cmd_lexrep(a) -> Report:
    I = load_interpretation(a.interp)
    budget = (a.box + 1) ** I.dim if a.box else LR.DEFAULT_POINT_BUDGET
    if a.action == "build":
        R = LR.construct_lex_rep(I, budget_nodes=a.budget_nodes)
        ver = LR.verify_lex_rep(I, R, a.prefix, budget)
        return Report("ok" if ver.ok else "fail", {"representation": R.to_json(), "verification": ver.to_json()})
    if not a.rep:
        raise UsageError("lexrep verify needs a representation file")
    try:
        with open(a.rep, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"file not found: {a.rep}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if "payload" in data:
        data = data["payload"]
    if "representation" in data:
        data = data["representation"]
    R = LR.LexRepresentation.from_json(data)
    ver = LR.verify_lex_rep(I, R, a.prefix, budget)
    return Report("ok" if ver.ok else "fail", ver.to_json())


# ------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON object")
    common.add_argument("--budget-nodes", type=int, default=None, help="QE node budget")
    common.add_argument("--budget-pieces", type=int, default=SL.DEFAULT_BUDGET_PIECES, help="decomposition piece budget")
    common.add_argument("--box", type=int, default=None, help="largest brute-force box side")
    common.add_argument("--prefix", type=int, default=LR.DEFAULT_PREFIX, help="prefix length for lexrep verify")

    p = argparse.ArgumentParser(prog="presburger", description="Presburger arithmetic and interpreted orders")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    add("qe", cmd_qe, "eliminate quantifiers").add_argument("formula")
    add("decide", cmd_decide, "decide a sentence").add_argument("formula")
    for name, fn, help in (("decompose", cmd_decompose, "disjoint decomposition"), ("dim", cmd_dim, "dimension")):
        sp = add(name, fn, help)
        sp.add_argument("-m", type=int, required=True, help="arity")
        sp.add_argument("formula")
    add("validate", cmd_validate, "check the linear order axioms").add_argument("interp")
    sp = add("galaxy", cmd_galaxy, "galaxy type of a point")
    sp.add_argument("interp")
    sp.add_argument("--point")
    sp = add("condense", cmd_condense, "condensation")
    sp.add_argument("interp")
    sp.add_argument("--split-z", action="store_true", help="cut Z-galaxies before condensing")
    add("rank", cmd_rank, "VD*-rank").add_argument("interp")
    sp = add("catalog", cmd_catalog, "built-in interpretations")
    sp.add_argument("action", choices=["list", "get"])
    sp.add_argument("name", nargs="?")
    sp = add("count", cmd_count, "count solutions of A lam = u")
    sp.add_argument("action", nargs="?", choices=["fit"])
    sp.add_argument("-A", help='matrix, e.g. "1,1;0,2"')
    sp.add_argument("-u", help='right-hand side, e.g. "5,4"')
    sp.add_argument("--range", help="sample range lo:hi per coordinate (fit)")
    sp = add("lexrep", cmd_lexrep, "lexicographic representations")
    sp.add_argument("action", choices=["build", "verify"])
    sp.add_argument("interp")
    sp.add_argument("rep", nargs="?")
    return p


def _human(report: Report) -> str:
    lines = [f"status: {report.status}"]
    for k, v in report.payload.items():
        lines.append(f"{k}: {v if isinstance(v, (str, int, float, bool)) or v is None else json.dumps(v)}")
    return "\n".join(lines)


def emit(report: Report, as_json: bool, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if as_json:
        out.write(json.dumps(report.to_json()) + "\n")
    else:
        out.write(_human(report) + "\n")
    for d in report.diagnostics:
        err.write(d + "\n")
    return EXIT[report.status]


def dispatch(argv: list[str] | None = None) -> tuple[Report, bool]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args), args.json
    except (UsageError, SchemaError, F.ParseError, ValueError, KeyError) as exc:
        return Report("error", {}, [f"{type(exc).__name__}: {exc}"]), args.json
    except (Q.ResourceLimit, SL.PieceBudgetExceeded, LR.SpineSynthesisFailed, LR.UnsupportedShape,
            LR.CardinalityFitFailed, OA.RankBoundExceeded, CNT.EnumerationBudgetExceeded) as exc:
        return Report("error", {}, [f"{type(exc).__name__}: {exc}"]), args.json


def main(argv: list[str] | None = None) -> int:
    report, as_json = dispatch(argv)
    return emit(report, as_json)


if __name__ == "__main__":
    sys.exit(main())
