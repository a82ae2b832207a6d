"""Command-line front end.

A problem document is a JSON object naming a ring, an ideal, and any
modules, maps, descriptors, complexes, groups, and comodules the command
refers to; the verb dispatches to the engine and the report is printed as
deterministic JSON (sorted keys, no timestamps in the body).  Exit codes:

    0  success or a true/complete/exact verdict
    1  a computed false / not-complete / failure verdict
    2  inconclusive, unrecognized tower, or budget exhaustion
    3  invalid input

Timing goes to stderr so identical inputs produce byte-identical reports.
"""

import argparse
import json
import os
import sys
import time

from .complexes import ChainComplex
from .criteria import homology_membership, is_L_complete, is_lambda_local
from .descriptors import FPObj, Rational, Telescope, TelescopeQuotient
from .errors import (BudgetExceeded, InternalInconsistency, InvalidInput,
                     LoduaError, UnrecognizedTower, UnsupportedRing)
from .hopf import (Comodule, CompleteComodule, comodule_completion, iota,
                   make_group_like, verify_theorems, _completed_hopf,
                   _base_change_comodule)
from .local import (IdealData, adic_completion, derived_completion, gamma,
                    gm_ses_check, local_cohomology, local_homology_Ls)
from .modules import FPModule, ModuleMap, ext as module_ext, tor as module_tor
from .ring import DEFAULT_PRECISION, make_ring
from .towers import weak_proregularity_check

SCHEMA_VERSION = "1"

VERBS = ("resolve", "tor", "ext", "localcoh", "localhom", "gamma", "lambda",
         "gm-check", "complete", "lcomplete-check", "torsion-check",
         "lambda-local-check", "proreg-check", "comodule-limit",
         "comodule-complete", "iota", "verify")


class Problem:
    """A validated problem document with name resolution."""

    def __init__(self, doc):
        if not isinstance(doc, dict):
            raise InvalidInput("document must be a JSON object")
        if doc.get("version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise InvalidInput(f"unsupported schema version {doc.get('version')}")
        self.doc = doc
        self.options = dict(doc.get("options", {}))
        if "LODUA_BUDGET" in os.environ:
            self.options.setdefault("budget", int(os.environ["LODUA_BUDGET"]))
        self.ring = make_ring(doc.get("ring", {"base": "Z"}))
        self.ideal = None
        if doc.get("ideal"):
            self.ideal = IdealData(self.ring, doc["ideal"])
        self.modules = {}
        for name, spec in doc.get("modules", {}).items():
            self._unique(name)
            rels = [tuple(self.ring.el(e) for e in col)
                    for col in spec.get("relations", [])]
            self.modules[name] = FPModule(self.ring, spec["generators"], rels,
                                          name=name)
        self.maps = {}
        for name, spec in doc.get("maps", {}).items():
            self._unique(name)
            self.maps[name] = ModuleMap(self.module(spec["source"]),
                                        self.module(spec["target"]),
                                        spec["matrix"])
        self.descriptors = {}
        for name, spec in doc.get("descriptors", {}).items():
            self._unique(name)
            self.descriptors[name] = self._descriptor(spec)
        self.complexes = {}
        for name, spec in doc.get("complexes", {}).items():
            self._unique(name)
            mods = {int(k): self.module(v) for k, v in spec["modules"].items()}
            diffs = {int(k): self.maps[v] for k, v in spec.get("diffs", {}).items()}
            self.complexes[name] = ChainComplex(self.ring, mods, diffs)
        self.towers = {}
        for name, spec in doc.get("towers", {}).items():
            self._unique(name)
            self.towers[name] = self._tower(spec)
        self.hopf = None
        if doc.get("group"):
            g = doc["group"]
            table = {(a, b): g["table"][a][b] for a in g["elements"]
                     for b in g["elements"]}
            self.hopf = make_group_like(self.ring, g["elements"], table,
                                        g.get("action", {}))
        self.comodules = {}
        for name, spec in doc.get("comodules", {}).items():
            self._unique(name)
            if self.hopf is None:
                raise InvalidInput("comodules need a group block")
            self.comodules[name] = Comodule(self.hopf, self.module(spec["module"]),
                                            spec.get("action", {}))

    def _unique(self, name):
        for pool in (getattr(self, "modules", {}), getattr(self, "maps", {}),
                     getattr(self, "descriptors", {}),
                     getattr(self, "complexes", {}),
                     getattr(self, "comodules", {})):
            if name in pool:
                raise InvalidInput(f"duplicate name {name!r}")

    def _tower(self, spec):
        from .towers import standard_tower
        kind = spec["kind"]
        if kind == "adic":
            return standard_tower("adic", module=self.module(spec["module"]),
                                  ideal=[self.ring.el(g) for g in spec["ideal"]])
        if kind == "mult":
            return standard_tower("mult",
                                  descriptor=self._target_or_module(spec),
                                  x=self.ring.el(spec["x"]))
        if kind == "tor":
            return standard_tower("tor",
                                  descriptor=self._target_or_module(spec),
                                  ideal=[self.ring.el(g) for g in spec["ideal"]],
                                  s=int(spec["s"]))
        raise InvalidInput(f"unknown tower kind {kind!r}")

    def _target_or_module(self, spec):
        name = spec.get("descriptor") or spec.get("module")
        if name in self.descriptors:
            return self.descriptors[name]
        return self.module(name)

    def _descriptor(self, spec):
        kind = spec["kind"]
        if kind == "fp":
            return FPObj(self.module(spec["module"]))
        if kind == "telescope":
            return Telescope(self.module(spec["module"]),
                             self.ring.el(spec["mult"]))
        if kind == "telescope_quotient":
            return TelescopeQuotient(self.module(spec["module"]),
                                     self.ring.el(spec["mult"]))
        if kind == "rational":
            return Rational(self.ring, spec.get("dim", 1))
        raise InvalidInput(f"unknown descriptor kind {kind!r}")

    def module(self, name):
        if name not in self.modules:
            raise InvalidInput(f"unknown module {name!r}")
        return self.modules[name]

    def target(self, name):
        """A module, descriptor, or complex by name."""
        if name in self.descriptors:
            return self.descriptors[name]
        if name in self.modules:
            return self.modules[name]
        if name in self.complexes:
            return self.complexes[name]
        raise InvalidInput(f"unknown object {name!r}")

    def need_ideal(self):
        if self.ideal is None:
            raise InvalidInput("this verb needs an `ideal` block")
        return self.ideal

    def opt(self, key, default):
        return self.options.get(key, default)


def run(doc, verb, args=None):
    """Execute a verb on a document; returns (exit_code, report dict)."""
    args = args or {}
    problem = Problem(doc)
    cmd = dict(doc.get("command", {}))
    cmd.update({k: v for k, v in args.items() if v is not None})
    precision = problem.opt("precision", cmd.get("precision") or DEFAULT_PRECISION)
    K = problem.opt("K", cmd.get("K") or 12)
    lag = problem.opt("lag", cmd.get("lag") or 6)
    report = {"version": SCHEMA_VERSION, "verb": verb}
    code = 0

    if verb == "resolve":
        report["ring"] = repr(problem.ring)
        report["modules"] = {n: m.describe() for n, m in
                             sorted(problem.modules.items())}
        report["descriptors"] = {n: d.describe() for n, d in
                                 sorted(problem.descriptors.items())}
        if problem.towers:
            from .towers import lim_lim1
            report["towers"] = {
                n: lim_lim1(t, K, lag, precision).describe()
                for n, t in sorted(problem.towers.items())}
        if problem.ideal:
            report["ideal"] = problem.ideal.describe()
    elif verb == "tor":
        M, N = problem.module(cmd["M"]), problem.module(cmd["N"])
        out = module_tor(M, N, int(cmd["s"]))
        report["result"] = out.describe()
    elif verb == "ext":
        M, N = problem.module(cmd["M"]), problem.module(cmd["N"])
        out = module_ext(M, N, int(cmd["s"]))
        report["result"] = out.describe()
    elif verb == "localcoh":
        d = problem.need_ideal()
        v = local_cohomology(d, problem.target(cmd["target"]), int(cmd["s"]))
        report["result"] = v.describe()
        code = 0 if v.is_recognized() else 2
    elif verb == "localhom":
        d = problem.need_ideal()
        tgt = problem.target(cmd["target"])
        if isinstance(tgt, ChainComplex):
            raise InvalidInput("localhom takes a module or descriptor; "
                               "use `lambda` for complexes")
        v = local_homology_Ls(d, tgt, int(cmd["s"]), K, lag, precision)
        report["result"] = v.describe()
    elif verb == "gamma":
        d = problem.need_ideal()
        g = gamma(d, problem.target(cmd["target"]))
        report["result"] = g.describe()
    elif verb == "lambda":
        d = problem.need_ideal()
        table = derived_completion(d, problem.target(cmd["target"]),
                                   K, lag, precision)
        report["result"] = table.describe()
    elif verb == "gm-check":
        d = problem.need_ideal()
        tgt = problem.target(cmd["target"])
        out = gm_ses_check(d, tgt, int(cmd["s"]), K, lag, precision)
        report["result"] = out
        code = 0 if out["status"] == "exact" else 2
    elif verb == "complete":
        d = problem.need_ideal()
        out, nat = adic_completion(problem.module(cmd["module"]), d, precision)
        report["result"] = out.describe()
        report["natural_map"] = nat
        report["precision"] = precision
    elif verb == "lcomplete-check":
        d = problem.need_ideal()
        cert = is_L_complete(problem.target(cmd["target"]), d, precision)
        report["result"] = cert.describe()
        code = {"complete": 0, "not-complete": 1, "inconclusive": 2}[cert.verdict]
    elif verb == "torsion-check":
        d = problem.need_ideal()
        out = homology_membership(problem.target(cmd["target"]), d, "torsion",
                                  K, lag, precision)
        report["result"] = out
        code = 0 if out["verdict"] is True else (
            1 if out["verdict"] is False else 2)
    elif verb == "lambda-local-check":
        d = problem.need_ideal()
        out = is_lambda_local(problem.target(cmd["target"]), d, K, lag, precision)
        report["result"] = out
        code = {"local": 0, "not-local": 1, "inconclusive": 2}[out["verdict"]]
    elif verb == "proreg-check":
        d = problem.need_ideal()
        out = weak_proregularity_check(problem.ring, d.gens,
                                       stage_bound=min(K, 4), lag=lag)
        report["result"] = out
        code = {"weakly-proregular": 0, "not-weakly-proregular": 1,
                "inconclusive": 2}[out["status"]]
    elif verb in ("comodule-limit", "comodule-complete"):
        d = problem.need_ideal()
        com = problem.comodules[cmd["comodule"]]
        method = cmd.get("method", "kernel")
        limit, cert = comodule_completion(com, d, precision, method)
        other, _ = comodule_completion(com, d, precision,
                                       "pullback" if method == "kernel"
                                       else "kernel")
        from .descriptors import _same_presentation
        agree = _same_presentation(limit.module, other.module)
        if not agree:
            raise InternalInconsistency("limit methods disagree")
        report["result"] = limit.describe()
        report["certificate"] = cert
        report["method_agreement"] = ("kernel and pullback limits share the "
                                      "presentation; identity witness")
    elif verb == "iota":
        d = problem.need_ideal()
        com = problem.comodules[cmd["comodule"]]
        h_hat = _completed_hopf(problem.hopf, d.gens, precision)
        chat = _base_change_comodule(h_hat, com)
        res, cert = iota(CompleteComodule(h_hat, chat, precision))
        report["result"] = res.describe()
        report["certificate"] = cert
    elif verb == "verify":
        d = problem.need_ideal()
        which = cmd["which"]
        com = problem.comodules[cmd["comodule"]] if cmd.get("comodule") else None
        if com is None and problem.comodules:
            com = next(iter(problem.comodules.values()))
        out = verify_theorems(problem.hopf, d, com, which, precision=precision)
        report["result"] = out
        verdict = out.get("verdict", "pass")
        code = 0 if verdict in ("pass", "true-level") else 2
    else:
        raise InvalidInput(f"unknown verb {verb!r}")
    return code, report


def recheck(doc, report):
    """Revalidate the replayable parts of a report without recomputation.

    Confirms the document still parses and names resolve, the report body
    is well-formed deterministic JSON, any witness matrices define
    relation-preserving maps, and verb-specific certificate invariants hold
    (grid coverage and verdict consistency for the completeness check,
    outer-term/isomorphism consistency for the lim/lim^1 sequence).
    """
    problem = Problem(doc)
    if report.get("version") != SCHEMA_VERSION:
        raise InvalidInput("report version mismatch")
    body = json.dumps(report, sort_keys=True)
    json.loads(body)
    rechecked = {"names_resolve": True, "witnesses": 0, "invariants": []}
    result = report.get("result", {})
    verb = report.get("verb")
    wit = result.get("witness") if isinstance(result, dict) else None
    if isinstance(wit, list) and problem.comodules:
        com = next(iter(problem.comodules.values()))
        M = com.module
        ModuleMap(M, M, wit)  # raises if the witness is not a valid map
        rechecked["witnesses"] += 1
    if verb == "lcomplete-check" and isinstance(result, dict):
        table = result.get("table", {})
        n = problem.ideal.n if problem.ideal else 0
        want = {f"i={i},q={q}" for i in range(1, n + 1) for q in range(i + 1)}
        if set(table) != want:
            raise InvalidInput("certificate grid does not cover i<=n, q<=i")
        all_zero = all(cell.get("kind") == "zero" for cell in table.values())
        verdict = result.get("verdict")
        if verdict == "complete" and not all_zero:
            raise InvalidInput("complete verdict with a nonzero cell")
        if verdict == "not-complete" and all_zero:
            raise InvalidInput("not-complete verdict with an all-zero grid")
        rechecked["invariants"].append("completeness grid covers and matches")
    if verb == "gm-check" and isinstance(result, dict):
        if result.get("status") == "exact":
            left = result.get("lim1_tor_next", {}).get("kind")
            right = result.get("lim_tor", {}).get("kind")
            if left != "zero" and right != "zero":
                raise InvalidInput("exact status but neither outer term is zero")
            rechecked["invariants"].append("sequence has a vanishing outer term")
    return rechecked


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lodua",
        description="exact local duality engine: torsion, completion, "
                    "local (co)homology, towers, comodules")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("document", help="problem document (JSON)")
    parser.add_argument("--s", type=int, default=None)
    parser.add_argument("--which", default=None)
    parser.add_argument("--method", default=None)
    parser.add_argument("--target", default=None)
    parser.add_argument("--module", default=None)
    parser.add_argument("--comodule", default=None)
    parser.add_argument("--M", default=None)
    parser.add_argument("--N", default=None)
    parser.add_argument("--precision", type=int, default=None)
    parser.add_argument("--K", type=int, default=None)
    parser.add_argument("--lag", type=int, default=None)
    parser.add_argument("--recheck", default=None,
                        help="revalidate the certificates of a prior report")
    ns = parser.parse_args(argv)
    t0 = time.time()
    try:
        with open(ns.document) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        print(f"invalid input: {ex}", file=sys.stderr)
        return 3
    args = {k: getattr(ns, k) for k in ("s", "which", "method", "target",
                                        "module", "comodule", "M", "N",
                                        "precision", "K", "lag")}
    try:
        if ns.recheck:
            with open(ns.recheck) as fh:
                prior = json.load(fh)
            out = recheck(doc, prior)
            print(json.dumps({"recheck": out}, sort_keys=True, indent=2))
            print(f"# recheck in {time.time() - t0:.3f}s", file=sys.stderr)
            return 0
        code, report = run(doc, ns.verb, args)
    except InvalidInput as ex:
        print(f"invalid input: {ex}", file=sys.stderr)
        return 3
    except (UnrecognizedTower, BudgetExceeded, UnsupportedRing) as ex:
        print(f"inconclusive: {ex}", file=sys.stderr)
        return 2
    except InternalInconsistency as ex:
        print(f"internal inconsistency (hard error): {ex}", file=sys.stderr)
        return 2
    except LoduaError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    print(json.dumps(report, sort_keys=True, indent=2))
    print(f"# {ns.verb} in {time.time() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
