"""Scenario-driven command line front end.

A scenario is a flat TOML file::

    # conic in the plane
    variety = "P2"
    subscheme = "X0*X1 + X2**2"
    window = 0
    tasks = ["tangent", "lift"]

``dgdef run conic.toml --out report.json`` writes a JSON report and prints a
plain-text summary.  Exit status is 0 when every assertion passed, 1 when one
failed and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import tomli

log = logging.getLogger("dgdef")

TASK_ORDER = ("axioms", "cech", "cohomology", "tot-compare", "tw-orders", "tangent", "lift", "crosscheck")
KEYS = ("variety", "subscheme", "window", "ring", "apl_degree_cap", "apl_working_cap", "lift_order",
        "crosscheck", "tasks")
NEEDS_SUBSCHEME = {"tw-orders", "tangent", "lift", "crosscheck"}


class ScenarioError(ValueError):
    """Malformed or unsupported scenario; maps to exit status 2."""


@dataclass
class Scenario:
    variety: str
    tasks: List[str]
    subscheme: Optional[str] = None
    window: int = 0
    ring: str = "dual"
    apl_degree_cap: int = 1
    apl_working_cap: Optional[int] = None
    lift_order: int = 3
    crosscheck: bool = False

    @property
    def n(self) -> int:
        return int(self.variety[1:])

    def ordered_tasks(self) -> List[str]:
        wanted = set(self.tasks)
        if self.crosscheck:
            wanted.add("crosscheck")
        return [t for t in TASK_ORDER if t in wanted]


def _expect(key: str, value, kind):
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ScenarioError(f"key '{key}': expected {kind.__name__}, got {value!r}")
    return value


def parse_scenario(text: str) -> Scenario:
    """Validate every key before anything is computed."""
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ScenarioError(f"malformed scenario: {exc}") from None
    unknown = sorted(set(raw) - set(KEYS))
    if unknown:
        raise ScenarioError(f"unknown key '{unknown[0]}'")
    for key in ("variety", "tasks"):
        if key not in raw:
            raise ScenarioError(f"missing key '{key}'")
    variety = _expect("variety", raw["variety"], str)
    if variety not in ("P1", "P2"):
        raise ScenarioError(f"key 'variety': unsupported variety {variety!r}")
    tasks = _expect("tasks", raw["tasks"], list)
    for t in tasks:
        if t not in TASK_ORDER:
            raise ScenarioError(f"key 'tasks': unknown task {t!r}")
    sc = Scenario(variety=variety, tasks=list(tasks))
    if "subscheme" in raw:
        sc.subscheme = _expect("subscheme", raw["subscheme"], str)
    for key in ("window", "apl_degree_cap", "apl_working_cap", "lift_order"):
        if key in raw:
            v = _expect(key, raw[key], int)
            if v < 0:
                raise ScenarioError(f"key '{key}': must be non-negative")
            setattr(sc, key, v)
    if "ring" in raw:
        sc.ring = _expect("ring", raw["ring"], str)
    if "crosscheck" in raw:
        sc.crosscheck = _expect("crosscheck", raw["crosscheck"], bool)
    if sc.apl_degree_cap < 1:
        raise ScenarioError("key 'apl_degree_cap': must be at least 1")
    if sc.apl_working_cap is None:
        sc.apl_working_cap = sc.apl_degree_cap + 1
    if sc.apl_working_cap < sc.apl_degree_cap:
        raise ScenarioError("key 'apl_working_cap': must be at least apl_degree_cap")
    if sc.lift_order not in (2, 3):
        raise ScenarioError("key 'lift_order': only 2 or 3 is supported")

    from .coefficients import parse_ring
    from .geometry import UnsupportedInput, parse_subscheme

    try:
        parse_ring(sc.ring)
    except ValueError as exc:
        raise ScenarioError(f"key 'ring': {exc}") from None
    if sc.subscheme is not None:
        try:
            parse_subscheme(sc.subscheme, sc.n)
        except (UnsupportedInput, ValueError) as exc:
            raise ScenarioError(f"key 'subscheme': {exc}") from None
    missing = NEEDS_SUBSCHEME.intersection(sc.ordered_tasks())
    if missing and sc.subscheme is None:
        raise ScenarioError(f"key 'subscheme': required by task '{sorted(missing)[0]}'")
    return sc


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from None
    return parse_scenario(text)


# ----------------------------------------------------------------------------
# tasks


@dataclass
class Result:
    value: Any
    pipeline: str
    stable_at_window: Optional[int] = None


@dataclass
class Assertion:
    name: str
    passed: bool
    expected: Any
    actual: Any


@dataclass
class Run:
    sc: Scenario
    results: Dict[str, Result] = field(default_factory=dict)
    assertions: List[Assertion] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    def check(self, name: str, expected, actual):
        self.assertions.append(Assertion(name, expected == actual, expected, actual))


def _Z(sc: Scenario):
    from .geometry import parse_subscheme

    return parse_subscheme(sc.subscheme, sc.n)


def _keys(d: Dict) -> Dict[str, Any]:
    return {str(k): v for k, v in sorted(d.items())}


def task_axioms(run: Run):
    from .coefficients import parse_ring
    from .dgla import bch, check_dgla_axioms, gauge_action, nilpotent
    from .geometry import ThetaSheaf, cech_lie, chi_bisemicosimplicial
    from .bisimplicial import tot_tw_triangle
    from .simplicial import tot_tw

    sc = run.sc
    L = tot_tw(cech_lie(ThetaSheaf(sc.n), sc.window), sc.apl_degree_cap)
    algebras = [("tot_tw(cech Θ)", L)]
    if sc.subscheme is not None:
        algebras.append(("tot_tw_triangle(χ)", tot_tw_triangle(chi_bisemicosimplicial(_Z(sc), sc.window),
                                                                sc.apl_degree_cap)))
    value = {}
    for name, A in algebras:
        rep = check_dgla_axioms(A)
        value[name] = rep.ok
        run.check(f"axioms: {name}", True, rep.ok)
    # gauge group law on a few deterministic instances over the scenario ring
    R = parse_ring(sc.ring)
    rng = random.Random(0)
    m = [mono for mono in R.basis if any(mono)]
    ok = True
    for _ in range(3):
        def rand(deg):
            terms = {}
            for mono in m:
                v = {}
                for b in L.basis(deg):
                    c = rng.randint(-2, 2)
                    for k, x in b.items():
                        v[k] = v.get(k, 0) + c * x
                terms[mono] = {k: Fraction(x) for k, x in v.items() if x}
            return nilpotent(L, R, terms, deg)
        a, b, x = rand(0), rand(0), rand(1)
        ok &= gauge_action(a, gauge_action(b, x)) == gauge_action(bch(a, b), x)
    value["gauge group law"] = ok
    run.check("axioms: gauge group law", True, ok)
    run.results["axioms"] = Result(value, "check_dgla_axioms; gauge_action vs bch")


def task_cech(run: Run):
    from .bisimplicial import check_bisemicosimplicial
    from .geometry import LogThetaSheaf, ThetaSheaf, cech_lie, chi_bisemicosimplicial
    from .simplicial import check_semicosimplicial

    sc = run.sc
    S = cech_lie(ThetaSheaf(sc.n), sc.window)
    value = {"Θ": [sum(V.dims().values()) for V in S.levels]}
    run.check("cech: Θ semicosimplicial identities", True, check_semicosimplicial(S).ok)
    if sc.subscheme is not None:
        Z = _Z(sc)
        SL = cech_lie(LogThetaSheaf(Z), sc.window)
        value["Θlog"] = [sum(V.dims().values()) for V in SL.levels]
        run.check("cech: Θlog semicosimplicial identities", True, check_semicosimplicial(SL).ok)
        run.check("cech: χ mixed squares", True, check_bisemicosimplicial(chi_bisemicosimplicial(Z, sc.window)).ok)
    run.results["cech"] = Result(value, "cech_lie level dimensions", sc.window)


def _stable(label: str, f: Callable[[int], Dict], w: int) -> Dict:
    from .geometry import UnstableWindow

    a, b = f(w), f(w + 2)
    if a != b:
        raise UnstableWindow(f"{label} changes from {a} to {b} between windows {w} and {w + 2}")
    return a


def task_cohomology(run: Run):
    from .geometry import LogThetaSheaf, ThetaSheaf, cech_lie
    from .simplicial import tot

    sc = run.sc
    sheaves = [("Θ", ThetaSheaf(sc.n))]
    if sc.subscheme is not None:
        sheaves.append(("Θlog", LogThetaSheaf(_Z(sc))))
    value = {}
    for name, F in sheaves:
        value[name] = _keys(_stable(f"H*({name})", lambda w: tot(cech_lie(F, w)).cohomology_dims(), sc.window))
    run.results["cohomology"] = Result(value, "tot of the Čech object", sc.window)


def task_tot_compare(run: Run):
    from .geometry import ThetaSheaf, cech_lie
    from .simplicial import tot, tot_tw

    sc = run.sc
    S = cech_lie(ThetaSheaf(sc.n), sc.window)
    ref = _keys(tot(S).cohomology_dims())
    value = {"tot": ref}
    for cap in sorted({sc.apl_degree_cap, sc.apl_working_cap}):
        got = _keys(tot_tw(S, cap).cohomology_dims())
        value[f"tot_tw cap {cap}"] = got
        run.check(f"tot-compare: Θ, cap {cap}", ref, got)
    run.results["tot-compare"] = Result(value, "tot vs tot_tw of Čech Θ")


def task_tw_orders(run: Run):
    from .bisimplicial import tw_orders_coincide
    from .geometry import chi_bisemicosimplicial

    sc = run.sc
    rep = tw_orders_coincide(chi_bisemicosimplicial(_Z(sc), sc.window), sc.apl_degree_cap)
    run.check("tw-orders: three Thom-Whitney constructions agree", True, rep.ok)
    run.results["tw-orders"] = Result({"coincide": rep.ok, "dims": _keys(rep.dims or {}),
                                       "bracket_pairs": rep.pairs_checked},
                                      "tw_orders_coincide on χ")


def task_tangent(run: Run):
    from .hilb import hilb_tangent, normal_sheaf_h0

    sc = run.sc
    Z = _Z(sc)
    h = hilb_tangent(Z, sc.window)
    nh = normal_sheaf_h0(Z, sc.window)
    run.check("tangent: hilb_tangent == normal_sheaf_h0", nh, h)
    run.results["tangent"] = Result(h, "hilb_tangent (gluing data)", sc.window)
    run.results["normal_h0"] = Result(nh, "normal_sheaf_h0 (quotient sheaf)", sc.window)


def task_lift(run: Run):
    from .hilb import equation_level_lift, lift_gluing, normal_directions, tangent_classes, first_order_datum

    sc = run.sc
    Z = _Z(sc)
    classes = tangent_classes(Z, sc.window)
    lifted = 0
    if sc.lift_order == 3:
        for fields in classes:
            lifted += lift_gluing(first_order_datum(Z, fields), 3, sc.window).ok
    else:
        lifted = len(classes)
    oracle = 0
    for G in normal_directions(Z):
        try:
            equation_level_lift(Z, G)
            oracle += 1
        except ValueError:
            pass
    run.check("lift: every first-order class lifts", len(classes), lifted)
    run.check("lift: equation-level oracle", len(classes), oracle)
    run.results["lift"] = Result({"classes": len(classes), "lifted": lifted, "equation_level": oracle,
                                  "order": sc.lift_order}, "lift_gluing; equation_level_lift", sc.window)


def task_crosscheck(run: Run):
    from .hilb import functor_crosscheck

    sc = run.sc
    rep = functor_crosscheck(_Z(sc), sc.window, sc.apl_degree_cap)
    run.check("crosscheck: four routes agree", True, rep.agree)
    run.results["crosscheck"] = Result(dict(rep.values), "functor_crosscheck", sc.window)


TASKS: Dict[str, Callable[[Run], None]] = {
    "axioms": task_axioms,
    "cech": task_cech,
    "cohomology": task_cohomology,
    "tot-compare": task_tot_compare,
    "tw-orders": task_tw_orders,
    "tangent": task_tangent,
    "lift": task_lift,
    "crosscheck": task_crosscheck,
}


def execute(sc: Scenario) -> Run:
    run = Run(sc)
    for name in sc.ordered_tasks():
        log.info("task %s", name)
        t0 = time.perf_counter()
        TASKS[name](run)
        run.timing[name] = round(time.perf_counter() - t0, 3)
    return run


def report(run: Run) -> Dict[str, Any]:
    sc = asdict(run.sc)
    sc["tasks"] = run.sc.ordered_tasks()
    return {
        "scenario": sc,
        "results": {k: asdict(v) for k, v in run.results.items()},
        "assertions": [asdict(a) for a in run.assertions],
        "timing": run.timing,
    }


def canonical(rep: Dict[str, Any]) -> str:
    """The deterministic part of a report (everything except timing)."""
    return json.dumps({k: v for k, v in rep.items() if k != "timing"}, indent=2, ensure_ascii=False)


def summary(rep: Dict[str, Any]) -> str:
    sc = rep["scenario"]
    lines = [f"scenario: {sc['variety']}" + (f", Z = {sc['subscheme']}" if sc["subscheme"] else "")
             + f", window {sc['window']}"]
    for name, r in rep["results"].items():
        lines.append(f"  {name}: {json.dumps(r['value'], ensure_ascii=False)}  [{r['pipeline']}]")
    for a in rep["assertions"]:
        lines.append(f"  {'PASS' if a['passed'] else 'FAIL'}  {a['name']}")
    return "\n".join(lines)


def run_file(path: str, out: Optional[str] = None) -> int:
    from .geometry import UnstableWindow, UnsupportedInput

    try:
        sc = load_scenario(path)
        run = execute(sc)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnstableWindow as exc:
        print(f"error: key 'window': unstable window: {exc}", file=sys.stderr)
        return 2
    except UnsupportedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = report(run)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    print(summary(rep))
    return 0 if all(a.passed for a in run.assertions) else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    p = argparse.ArgumentParser(prog="dgdef", description="Run deformation-theory scenarios.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario and write a report")
    r.add_argument("scenario")
    r.add_argument("--out", help="path of the JSON report")
    r.add_argument("--verbose", action="store_true")
    v = sub.add_parser("validate", help="parse and validate a scenario without computing")
    v.add_argument("scenario")
    args = p.parse_args(argv)
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    if args.command == "validate":
        try:
            sc = load_scenario(args.scenario)
        except ScenarioError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"ok: {sc.variety}, tasks {', '.join(sc.ordered_tasks())}")
        return 0
    return run_file(args.scenario, args.out)


if __name__ == "__main__":
    sys.exit(main())
