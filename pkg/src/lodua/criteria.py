"""Membership criteria: Ext-completeness, completion-locality, and the
homology-level torsion/complete tests for bounded complexes.

The completeness test follows the telescope grid: M is complete iff
Ext^q(x_i^-1 A/(x_1..x_(i-1)), M) vanishes for 1 <= i <= n and 0 <= q <= i
(higher q vanish for free: the telescope has projective dimension <= i).
Each cell is assembled from multiplication towers on the Ext modules of
A/(x_1..x_(i-1)) through the Milnor sequence, so every verdict carries an
exact certificate or an explicit nonzero witness.

Assumption: testing against the unit suffices because over the supported
rings (principal ideal domains and polynomial rings) finitely generated
projectives are free, so the dualizable objects are generated by the ring
itself.  Rings with nontrivial projectives would need the full dualizable
family; that case is out of scope here.
"""

from .descriptors import (FPObj, LimitModule, Sum, Telescope, values_agree)
from .errors import InvalidInput, UnsupportedRing
from .local import GradedObject, derived_completion, gamma, _ideal_nilpotent_on
from .modules import FPModule, ext as module_ext
from .towers import mult_tower_values


class CompletenessCertificate:
    def __init__(self, verdict, table, bounds=None, witness=None):
        assert verdict in ("complete", "not-complete", "inconclusive")
        self.verdict = verdict
        self.table = table        # {(i, q): LimitModule}
        self.bounds = bounds or {}
        self.witness = witness

    def __bool__(self):
        return self.verdict == "complete"

    def describe(self):
        out = {"verdict": self.verdict,
               "table": {f"i={i},q={q}": v.describe()
                         for (i, q), v in sorted(self.table.items())},
               "bounds": self.bounds}
        if self.witness:
            out["witness"] = self.witness
        return out


def _stage_module(d, i):
    """A/(x_1, ..., x_(i-1))."""
    ring = d.ring
    if i == 1:
        return FPModule.free(ring, 1)
    return FPModule.cyclic(ring, [d.gens[t] for t in range(i - 1)])


def _ext_against_stage(d, i, desc, q):
    """Ext^q(A/(x_1..x_(i-1)), target) as a descriptor-valued answer."""
    ring = d.ring
    C = _stage_module(d, i)
    if q < 0:
        return FPObj(FPModule.zero(ring))
    if desc.kind == "fp":
        M = desc.module
        if M.ring == ring:
            return FPObj(module_ext(C, M, q))
        if M.ring.is_completed and M.ring.underlying() == ring:
            # flat base change: Ext_A(C, M) = Ext_A^(C^, M) for f.p. C
            chat = FPModule(M.ring, C.ngens,
                            [tuple(M.ring.el(e.num, e.dexp) for e in col)
                             for col in C.relations])
            return FPObj(module_ext(chat, M, q))
        raise UnsupportedRing(f"no Ext rule from {ring} into {M.ring}")
    if desc.kind == "rational":
        if i == 1:
            return desc if q == 0 else FPObj(FPModule.zero(ring))
        # Hom out of torsion into Q vanishes, and Q is divisible
        return FPObj(FPModule.zero(ring))
    if desc.kind == "telescope":
        # Ext^q(C, u^-1 N) = u^-1 Ext^q(C, N): localization is flat
        inner = _ext_against_stage(d, i, FPObj(desc.module), q)
        if inner.kind == "fp" and inner.module.is_zero():
            return inner
        if inner.kind != "fp":
            raise UnsupportedRing("nested telescope targets unsupported")
        return Telescope(inner.module, desc.mult)
    if desc.kind == "telescope_quotient":
        if i == 1:
            # Ext^0(A, Z) = Z, higher vanish
            return desc if q == 0 else FPObj(FPModule.zero(ring))
        raise UnsupportedRing(
            "telescope-quotient targets are supported at the first stage only")
    if desc.kind == "sum":
        parts = [_ext_against_stage(d, i, p, q) for p in desc.parts]
        return Sum(parts)
    raise UnsupportedRing(f"no Ext rule for descriptor kind {desc.kind}")


def ext_telescope(d, i, desc, q, precision=None):
    """Ext^q(x_i^-1 A/(x_1..x_(i-1)), target) via multiplication towers."""
    ring = d.ring
    if not (1 <= i <= d.n):
        raise InvalidInput(f"index {i} outside 1..{d.n}")
    if q > i:
        return LimitModule.zero(
            basis=f"projective dimension of the telescope is at most {i}")
    if isinstance(desc, FPModule):
        desc = FPObj(desc)
    x = d.gens[i - 1]
    low = _ext_against_stage(d, i, desc, q - 1)
    high = _ext_against_stage(d, i, desc, q)
    t_low = mult_tower_values(low, _coerce(low, x), precision) \
        if not _is_zero_desc(low) else None
    t_high = mult_tower_values(high, _coerce(high, x), precision) \
        if not _is_zero_desc(high) else None
    lim1 = t_low.lim1 if t_low else LimitModule.zero(basis="Ext module vanishes")
    lim = t_high.lim if t_high else LimitModule.zero(basis="Ext module vanishes")
    if not lim.is_recognized() or not lim1.is_recognized():
        return LimitModule.unrecognized({"lim": lim.describe(),
                                         "lim1": lim1.describe()})
    if lim1.is_zero():
        return lim
    if lim.is_zero():
        return lim1
    return LimitModule("ind", {"extension": [lim1.describe(), lim.describe()]},
                       basis="Milnor extension, both terms nonzero")


def _coerce(desc, x):
    ring = desc.ring
    if ring == x.ring:
        return x
    if ring.is_completed and ring.underlying() == x.ring:
        return ring.el(x.num, x.dexp)
    raise UnsupportedRing(f"cannot act by {x.render()} on {ring}")


def _is_zero_desc(desc):
    return desc.kind == "fp" and desc.module.is_zero() or \
        (desc.kind == "sum" and not desc.parts)


def is_L_complete(desc, d, precision=None):
    """The full (i, q) grid; complete iff every cell vanishes."""
    cert = d.regular_certificate()
    if not cert.regular:
        raise InvalidInput("completeness grid needs a regular sequence "
                           f"certificate; got {cert.describe()}")
    if isinstance(desc, FPModule):
        desc = FPObj(desc)
    table = {}
    witness = None
    verdict = "complete"
    for i in range(1, d.n + 1):
        for q in range(0, i + 1):
            cell = ext_telescope(d, i, desc, q, precision)
            table[(i, q)] = cell
            if not cell.is_recognized():
                verdict = "inconclusive"
            elif not cell.is_zero() and verdict == "complete":
                verdict = "not-complete"
                witness = {"i": i, "q": q, "value": cell.describe()}
    return CompletenessCertificate(verdict, table,
                                   bounds={"grid": f"i<=n={d.n}, q<=i"},
                                   witness=witness)


def is_lambda_local(C, d, stage_bound=12, lag=6, precision=None):
    """True iff every homology module passes the grid; cross-checked against
    the completion functor returning the complex's own homology."""
    obj = GradedObject.of(C)
    table = {}
    verdict = "local"
    for dgr, piece in sorted(obj.pieces.items()):
        cert = is_L_complete(piece, d, precision)
        table[dgr] = cert
        if cert.verdict == "inconclusive":
            verdict = "inconclusive"
        elif cert.verdict == "not-complete" and verdict == "local":
            verdict = "not-local"
    out = {"verdict": verdict,
           "per_degree": {str(k): v.describe() for k, v in table.items()}}
    if verdict != "local":
        return out
    lam = derived_completion(d, obj, stage_bound, lag, precision)
    for dgr, piece in obj.pieces.items():
        got = lam.value(dgr)
        expected = _expected_value(piece)
        ok, detail = values_agree(got, expected)
        if not ok:
            out["verdict"] = "inconclusive"
            out["fixed_point_failure"] = {"degree": dgr, "detail": detail}
            return out
    out["fixed_point"] = "completion returns the complex's own homology"
    return out


def _expected_value(piece):
    if piece.kind == "fp":
        return LimitModule.of_module(piece.module)
    if piece.kind == "rational":
        return LimitModule("rational", piece)
    if piece.kind in ("telescope", "telescope_quotient"):
        return LimitModule(piece.kind, piece)
    raise UnsupportedRing(f"no fixed-point form for {piece.kind}")


def homology_membership(C, d, kind, stage_bound=12, lag=6, precision=None):
    """Degreewise torsion/completeness of homology, with functor certification.

    kind='torsion': every H_n is I-power torsion, certified by the torsion
    functor returning the homology unchanged.  kind='complete': every H_n
    passes the Ext grid (discrete rings only), certified by the completion
    functor returning the homology unchanged.
    """
    if kind not in ("torsion", "complete"):
        raise InvalidInput(f"unknown membership kind {kind!r}")
    obj = GradedObject.of(C)
    report = {"kind": kind, "per_degree": {}}
    if kind == "torsion":
        for dgr, piece in sorted(obj.pieces.items()):
            if piece.kind == "fp":
                j = _ideal_nilpotent_on(d, piece.module)
                if j is None:
                    report["per_degree"][str(dgr)] = {
                        "torsion": False,
                        "witness": "generator not killed by any materialized "
                                   "power of I"}
                    report["verdict"] = False
                    return report
                report["per_degree"][str(dgr)] = {"torsion": True,
                                                  "killed_by_power": j}
            elif piece.kind == "telescope_quotient":
                from .towers import _require_radical_membership
                m = _require_radical_membership(d.ring, piece.mult, d.gens)
                report["per_degree"][str(dgr)] = {
                    "torsion": True,
                    "note": f"stage k is killed by I^{m}k"}
            else:
                report["per_degree"][str(dgr)] = {"torsion": False,
                                                  "witness": piece.kind}
                report["verdict"] = False
                return report
        gm = gamma(d, obj)
        for dgr, piece in obj.pieces.items():
            got = gm.value(dgr)
            ok, detail = values_agree(got, _expected_value(piece))
            if not ok:
                report["verdict"] = False
                report["gamma_failure"] = {"degree": dgr, "detail": detail}
                return report
        report["verdict"] = True
        report["gamma_fixed_point"] = ("the torsion functor returns the "
                                       "homology unchanged")
        return report
    # kind == 'complete'
    local = is_lambda_local(C, d, stage_bound, lag, precision)
    report["per_degree"] = local.get("per_degree", {})
    if local["verdict"] == "local":
        report["verdict"] = True
        report["lambda_fixed_point"] = local.get("fixed_point")
    elif local["verdict"] == "not-local":
        report["verdict"] = False
    else:
        report["verdict"] = "inconclusive"
    return report
