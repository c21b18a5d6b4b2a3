"""Command-line front end: ``cuntz <command> [options]``.

Exit status 0 on success, 1 when a checked property fails (the report
carries a witness), 2 on configuration errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import core, elliott, grothendieck, limits, lsc, matrix, states
from .core import ConfigurationError, CuModel, Report, UndecidedError
from .values import QuadraticNumber, decode_value

COMMANDS = ("check-axioms", "check-morphism", "compare", "eps-cut", "dtau", "kr-contract", "groth",
            "states", "almost-unperforated", "weak-divisibility", "limit", "continuity", "recover",
            "demo")

DEFAULT_TOLERANCES = {"rankTolerance": "1/1000000000", "krTolerance": "1e-6"}
_TOL_ALIASES = {"rank": "rankTolerance", "kr": "krTolerance"}


# ------------------------------------------------------------ inputs

def load_json(path: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigurationError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _maybe_json(arg: str):
    """A JSON file path, an inline JSON literal, or a plain name."""
    if arg.endswith(".json") or Path(arg).is_file():
        return load_json(arg)
    if arg.lstrip().startswith(("{", "[")):
        try:
            return json.loads(arg)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"inline JSON: {exc.msg} at column {exc.colno}") from exc
    return arg


def build_model(spec, horizon: int = 64) -> CuModel:
    """Model from a name (``extnat``, ``semigroup:2,3``, ``ranks:2``, ...) or a JSON spec."""
    if isinstance(spec, dict):
        kind = spec.get("model")
        if kind == "monoid":
            m = grothendieck.FgCommMonoid.from_json(spec["monoid"])
            return states.MonoidModel(m)
        if kind == "limit":
            return limits.build_limit(limits.system_from_json(spec["system"]), horizon=horizon)
        if kind == "recover":
            return elliott.functor_f(elliott.EllInvariant.from_json(spec["ell"]))
        if kind is None:
            raise ConfigurationError("model spec needs a 'model' field")
        args = spec.get("args", "")
        return build_model(f"{kind}:{args}" if args else kind, horizon)
    name, _, arg = str(spec).partition(":")
    try:
        if name == "extnat":
            return core.ExtNatModel()
        if name == "twopoint":
            return core.TwoPointModel()
        if name == "semigroup":
            return core.NumericalSemigroupModel([int(g) for g in (arg or "2,3").split(",")])
        if name == "scalar":
            return core.ScalarModel(int(arg) if arg else None)
        if name == "ranks":
            return core.rank_tuple_model(int(arg or 2))
        if name == "lsc":
            return lsc.LscModel()
        if name == "calkin":
            return elliott.CalkinModel()
        if name == "goodearl":
            return elliott.goodearl_model()
        if name == "rotation":
            return elliott.rotation_model(decode_value(arg) if arg else None)
        if name == "whk":
            return elliott.whk_model()
        if name == "laff":
            return elliott.laff_model(int(arg or 2))
        if name == "perforated":
            return states.perforated_monoid()
        if name in ("uhf", "uhf2", "uhf3", "fibonacci"):
            sysname = f"uhf{arg or 2}" if name == "uhf" else name
            return limits.build_limit(limits.system_from_json(sysname), horizon=horizon)
    except (ValueError, TypeError) as exc:
        raise ConfigurationError(f"bad model argument {arg!r}: {exc}") from exc
    raise ConfigurationError(f"unknown model {spec!r}")


MODEL_NAMES = ("extnat", "twopoint", "semigroup:2,3", "scalar", "ranks:k", "lsc", "calkin", "goodearl",
               "rotation", "whk", "laff:n", "perforated", "uhf:n", "fibonacci")


def _tolerances(pairs) -> dict:
    out = dict(DEFAULT_TOLERANCES)
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--tolerance expects key=value, got {item!r}")
        key = _TOL_ALIASES.get(key, key)
        if key not in out:
            raise ConfigurationError(f"unknown tolerance {key!r}; known: {', '.join(out)}")
        try:
            float(Fraction(val))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"tolerance {key} must be a number") from exc
        out[key] = val
    return out


# ------------------------------------------------------------ output

class Result:
    """What a command produced: verdicts, free-form facts and a status."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.verdicts: list[dict] = []
        self.facts: list[dict] = []
        self.lines: list[str] = []
        self.failed = False
        self.timings: dict = {}

    def add_report(self, rep: Report, model: Optional[CuModel] = None, label: str = ""):
        for v in rep.verdicts:
            d = v.to_json(model)
            if label:
                d["subject"] = label
            self.verdicts.append(d)
            if v.verdict == core.FAIL:
                self.failed = True

    def fact(self, text: str, ok: Optional[bool] = None, **data):
        self.facts.append({"statement": text, **({"holds": ok} if ok is not None else {}), **data})
        if ok is False:
            self.failed = True

    def to_json(self, timings: bool) -> dict:
        return {"command": self.command, "config": self.config, "verdicts": self.verdicts,
                "witnesses": [v["witness"] for v in self.verdicts if v.get("witness") is not None],
                "facts": self.facts, "timings": self.timings if timings else {}}

    def to_text(self) -> str:
        out = list(self.lines)
        for f in self.facts:
            if "holds" in f:
                out.append(f"[{'ok' if f['holds'] else 'FAILED'}] {f['statement']}")
            elif f["statement"] not in self.lines:
                out.append(f["statement"])
        for v in self.verdicts:
            head = f"{v.get('subject', '') + ' ' if v.get('subject') else ''}{v['axiom']}: {v['verdict']}"
            head += f" (checked {v['checked']})"
            if v.get("note"):
                head += f" [{v['note']}]"
            out.append(head)
            if v.get("witness") is not None:
                out.append("  witness: " + json.dumps(v["witness"], sort_keys=True, ensure_ascii=False))
        return "\n".join(out)


def _b(x: bool) -> str:
    return "true" if x else "false"


# ------------------------------------------------------------ commands

def cmd_check_axioms(a, res: Result):
    model = build_model(_maybe_json(a.model), a.horizon)
    res.config["model"] = model.describe()
    rep = core.check_cu_axioms(model, budget=a.budget, seed=a.seed, horizon=min(a.horizon, 32))
    res.add_report(rep, model)


_BUILTIN_MORPHISMS = {
    "double": ("extnat", "extnat", lambda x: x + x),
    "zero": ("extnat", "extnat", lambda x: 0),
    "collapse": ("extnat", "twopoint", lambda x: x if x == 0 else core.INF),
}


def cmd_check_morphism(a, res: Result):
    spec = _maybe_json(a.morphism)
    if isinstance(spec, str):
        if spec not in _BUILTIN_MORPHISMS:
            raise ConfigurationError(f"unknown morphism {spec!r}; choose {', '.join(_BUILTIN_MORPHISMS)} "
                                     "or a JSON spec with domain, codomain and matrix")
        d, c, f = _BUILTIN_MORPHISMS[spec]
        dom, cod = build_model(d), build_model(c)
    else:
        try:
            mat = spec["matrix"]
            dom, cod = build_model(spec["domain"]), build_model(spec["codomain"])
        except KeyError as exc:
            raise ConfigurationError(f"morphism spec is missing field {exc}") from exc
        f = lambda x: limits._matvec_ext(mat, x)  # noqa: E731
    rep = core.check_cu_morphism(f, dom, cod, budget=a.budget, seed=a.seed, horizon=min(a.horizon, 32))
    res.add_report(rep, dom)


def cmd_compare(a, res: Result):
    model = build_model(_maybe_json(a.model), a.horizon)
    x, y = model.parse(a.x), model.parse(a.y)
    try:
        le, wb = model.leq(x, y), model.way_below(x, y)
    except UndecidedError as exc:
        raise ConfigurationError(f"undecided within horizon {a.horizon}: {exc}") from exc
    line = f"{model.format(x)} ≤ {model.format(y)}: {_b(le)}; {model.format(x)} ≪ {model.format(y)}: {_b(wb)}"
    res.lines.append(line)
    res.fact(line, None, leq=le, way_below=wb)


def cmd_eps_cut(a, res: Result):
    el = matrix.parse_spectral(a.element)
    eps = Fraction(a.eps)
    out = matrix.eps_cut(el, eps)
    res.lines.append(matrix.format_spectral(out))
    res.fact(matrix.format_spectral(out), None, result=matrix.spectral_to_json(out))


def cmd_dtau(a, res: Result):
    el = matrix.parse_spectral(a.element)
    if a.weights:
        tau = matrix.TraceSpec(tuple(Fraction(w) for w in a.weights.split(",")), el.dims)
    else:
        tau = matrix.TraceSpec.uniform(el.dims)
    d = matrix.dtau(el, tau)
    line = f"d_tau = {d}"
    res.lines.append(line)
    res.fact(line, None, value=str(d), weights=[str(w) for w in tau.weights])


def cmd_kr(a, res: Result):
    from .kr import DomainError, kr_contraction
    spec = load_json(a.spec)
    try:
        x = matrix.DenseElement.from_json(spec["a"])
        y = matrix.DenseElement.from_json(spec["b"])
        eps = Fraction(str(spec["eps"]))
    except KeyError as exc:
        raise ConfigurationError(f"{a.spec}: missing field {exc}") from exc
    tol = float(Fraction(res.config["tolerances"]["krTolerance"]))
    try:
        r = kr_contraction(x, y, eps, tol=tol)
    except DomainError as exc:
        raise ConfigurationError(str(exc)) from exc
    ok = r.residual <= tol and r.norm <= 1 + tol
    res.fact(f"||d b d* - (a - eps)+|| = {r.residual:.3e}, ||d|| = {r.norm:.9f}", ok,
             residual=r.residual, norm=r.norm, iterations=r.iterations, d=r.d_float())


def cmd_groth(a, res: Result):
    m = grothendieck.FgCommMonoid.from_json(load_json(a.spec))
    g = grothendieck.groth_group(m)
    res.fact(f"G({m.name}) = Z^{g.rank}" + "".join(f" + Z/{t}" for t in g.torsion), None,
             group=g.to_json())
    res.add_report(grothendieck.check_group(m, budget=min(a.budget, 60)))


def cmd_states(a, res: Result):
    spec = load_json(a.spec)
    m = grothendieck.FgCommMonoid.from_json(spec.get("monoid", spec))
    unit = a.unit.split(",") if a.unit else spec.get("unit")
    if unit is None:
        raise ConfigurationError("an order unit is required (--unit or a 'unit' field in the JSON file)")
    try:
        rep = states.find_states(m, tuple(int(u) for u in unit))
    except states.DomainError as exc:
        raise ConfigurationError(str(exc)) from exc
    head = f"{len(rep.vertices)} extreme state(s), dimension {rep.dimension}"
    res.lines.append(head)
    res.fact(head, None, polytope=rep.to_json())
    for v in rep.vertices:
        res.lines.append("  state: (" + ", ".join(str(x) for x in v.values) + ")")


def cmd_au(a, res: Result):
    model = build_model(_maybe_json(a.model), a.horizon)
    res.add_report(states.check_almost_unperforated(model, bound=a.bound, budget=min(a.budget, 60)), model)


def cmd_wd(a, res: Result):
    model = build_model(_maybe_json(a.model), a.horizon)
    res.add_report(states.check_weak_divisibility(model, bound=a.bound, budget=min(a.budget, 60)), model)


def _system(arg):
    return limits.system_from_json(_maybe_json(arg))


def cmd_limit(a, res: Result):
    sysm = _system(a.system)
    model = limits.build_limit(sysm, horizon=a.horizon)
    res.config["system"] = sysm.spec
    pool = list(itertools.islice(model.basis(), 10))
    head = "order table (rows <= columns; ? = unknown within horizon):"
    res.lines.append(head)
    res.lines.append("      " + " ".join(f"{i:>2}" for i in range(len(pool))))
    table = []
    for i, x in enumerate(pool):
        row = []
        for y in pool:
            v = model.compare(x, y).verdict
            row.append("?" if v is None else "1" if v else "0")
        table.append("".join(row))
        res.lines.append(f"  {i:>2}  " + " ".join(f"{c:>2}" for c in row) + f"   {model.format(x)}")
    res.fact(head, None, elements=[model.format(x) for x in pool], table=table)
    rep = core.check_cu_axioms(model, budget=a.budget, seed=a.seed, horizon=32)
    res.add_report(rep, model, label=model.name)


def cmd_continuity(a, res: Result):
    spec = _maybe_json(a.system)
    if isinstance(spec, str):
        spec = {"uhf2": {"matrices": [[[2]]]}, "uhf3": {"matrices": [[[3]]]},
                "fibonacci": {"matrices": [[[1, 1], [1, 0]]]}}.get(spec)
        if spec is None:
            raise ConfigurationError("continuity needs uhf2, uhf3, fibonacci or a JSON system spec")
    rep = limits.functor_continuity_check(spec["matrices"], pairs=a.pairs, seed=a.seed, horizon=a.horizon)
    res.add_report(rep)


_BUILTIN_ELL = {"integers": elliott.integers_ell,
                "rotation": lambda: elliott.rotation_ell(QuadraticNumber(-1, 1, 2)),
                "matrix": elliott.matrix_ell}


def cmd_recover(a, res: Result):
    spec = _maybe_json(a.ell)
    if isinstance(spec, str):
        if spec not in _BUILTIN_ELL:
            raise ConfigurationError(f"unknown invariant {spec!r}; choose {', '.join(_BUILTIN_ELL)}")
        ell = _BUILTIN_ELL[spec]()
    else:
        ell = elliott.EllInvariant.from_json(spec)
    wt = elliott.functor_f(ell)
    res.config["ell"] = ell.to_json()
    res.fact(f"F({ell.name}): V = {wt.V.name}, simplex {list(wt.simplex.labels)}, unit "
             f"{wt.format(wt.unit) if wt.unit is not None else '-'}", None, model=wt.describe())
    res.add_report(elliott.wtilde_boundary_check(wt), wt, label=wt.name)
    res.add_report(core.check_cu_axioms(wt, budget=min(a.budget, 60), seed=a.seed), wt, label=wt.name)


def cmd_demo(a, res: Result):
    for text, ok in elliott.demo_facts(a.name):
        res.fact(text, ok)


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=200)
    common.add_argument("--horizon", type=int, default=64)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--tolerance", action="append", metavar="KEY=VALUE",
                        help="rankTolerance or krTolerance (aliases rank, kr)")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in JSON")

    p = argparse.ArgumentParser(prog="cuntz", description="Exact experiments with Cuntz semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    models = ", ".join(MODEL_NAMES)
    s = add("check-axioms", cmd_check_axioms, "sample axioms O1-O6 on a model")
    s.add_argument("--model", default="extnat", help=f"one of {models}, or a JSON spec")
    s = add("check-morphism", cmd_check_morphism, "sample M1-M4 on a map")
    s.add_argument("morphism", help="double, zero, collapse, or a JSON spec {domain, codomain, matrix}")
    s = add("compare", cmd_compare, "decide <= and << for two elements")
    s.add_argument("--model", default="extnat")
    s.add_argument("x")
    s.add_argument("y")
    s = add("eps-cut", cmd_eps_cut, "(a - eps)+ of a spectral element")
    s.add_argument("element", help="e.g. 'blocks: [n=2: (1,1)(1/2,1)]'")
    s.add_argument("eps")
    s = add("dtau", cmd_dtau, "dimension function of a spectral element")
    s.add_argument("element")
    s.add_argument("--weights", help="comma-separated trace weights, one per block")
    s = add("kr-contract", cmd_kr, "contraction d with d b d* = (a - eps)+")
    s.add_argument("spec", help="JSON file {a, b, eps}")
    s = add("groth", cmd_groth, "Grothendieck group and cones of a monoid")
    s.add_argument("spec")
    s = add("states", cmd_states, "state space of a monoid with order unit")
    s.add_argument("spec")
    s.add_argument("--unit")
    s = add("almost-unperforated", cmd_au, "search for perforation witnesses")
    s.add_argument("--model", default="extnat")
    s.add_argument("--bound", type=int, default=4)
    s = add("weak-divisibility", cmd_wd, "search for divisibility failures")
    s.add_argument("--model", default="extnat")
    s.add_argument("--bound", type=int, default=4)
    s = add("limit", cmd_limit, "build an inductive limit and tabulate its order")
    s.add_argument("--system", default="uhf2", help="uhf2, uhf3, fibonacci, constant or a JSON spec")
    s = add("continuity", cmd_continuity, "limit of W(A_i) vs the direct dimension-group model")
    s.add_argument("--system", default="uhf2")
    s.add_argument("--pairs", type=int, default=100)
    s = add("recover", cmd_recover, "W~ from an Elliott invariant")
    s.add_argument("ell", help="integers, rotation, matrix or a JSON invariant")
    s = add("demo", cmd_demo, "worked examples")
    s.add_argument("name", choices=elliott.DEMOS)
    return p


def run(argv=None) -> tuple[int, str]:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 2), ""
    try:
        tols = _tolerances(a.tolerance)
        cfg = {"seed": a.seed, "budget": a.budget, "horizon": a.horizon, "tolerances": tols}
        if a.budget <= 0 or a.horizon <= 0:
            raise ConfigurationError("budget and horizon must be positive")
        random.seed(a.seed)
        res = Result(a.command, cfg)
        t0 = time.perf_counter()
        a.fn(a, res)
        res.timings["total_s"] = round(time.perf_counter() - t0, 4)
    except ConfigurationError as exc:
        return 2, f"configuration error: {exc}"
    except (ValueError, KeyError, matrix.BlockMismatchError) as exc:
        return 2, f"configuration error: {exc}"
    if a.format == "json":
        text = json.dumps(res.to_json(a.timings), sort_keys=True, ensure_ascii=False, default=str)
    else:
        text = res.to_text()
    return (1 if res.failed else 0), text


def main(argv=None) -> int:
    code, text = run(argv)
    if text:
        print(text, file=sys.stderr if code == 2 else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
