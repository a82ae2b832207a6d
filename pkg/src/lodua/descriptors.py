"""Finite descriptors for the module-like objects the engine manipulates.

Beyond finitely presented modules, the exact answers the engine produces or
consumes can be:

  * Telescope(M, u)          -- u^-1 M = colim(M -u-> M -u-> ...)
  * TelescopeQuotient(M, u)  -- u^-1 M / M = colim(M/u^k M) along u-inclusions
                                (u regular on M, certified); e.g. Z/p^infty
  * Rational(dim)            -- Q^dim as a Z-module: every nonzero integer
                                acts invertibly
  * Sum(parts)               -- a finite direct sum of the above

plus LimitModule, the stamped value type for lim/lim1 and local homology:
zero, an honest module (possibly over a completed ring at stated precision),
a completion cokernel (e.g. Z_p/Z, with an explicit nonzero witness), one of
the ind descriptors above, or `unrecognized` carrying evidence.  The engine
never silently converts an unrecognized answer into a guess.
"""

from .errors import InvalidInput
from .modules import FPModule, iso_check


class Descriptor:
    kind = "abstract"

    def is_fp(self):
        return False


class FPObj(Descriptor):
    kind = "fp"

    def __init__(self, module):
        self.module = module
        self.ring = module.ring

    def is_fp(self):
        return True

    def describe(self):
        return {"kind": "fp", "module": self.module.describe()}

    def __repr__(self):
        return f"<fp {self.module!r}>"


class Telescope(Descriptor):
    """u^-1 M as the mapping telescope of multiplication by u."""

    kind = "telescope"

    def __init__(self, module, mult):
        self.module = module
        self.ring = module.ring
        self.mult = self.ring.el(mult)
        if self.mult.is_zero():
            raise InvalidInput("telescope multiplier must be nonzero")

    def describe(self):
        return {"kind": "telescope", "module": self.module.describe(),
                "mult": self.mult.render()}

    def __repr__(self):
        return f"<telescope by {self.mult.render()} on {self.module!r}>"


class TelescopeQuotient(Descriptor):
    """u^-1 M / M; stages M/u^k M with injective u-multiplication maps."""

    kind = "telescope_quotient"

    def __init__(self, module, mult, check_regular=True):
        self.module = module
        self.ring = module.ring
        self.mult = self.ring.el(mult)
        if check_regular:
            self._check_regularity()

    def _check_regularity(self):
        # u must act injectively on M, else the stage maps are not inclusions
        from .modules import ModuleMap
        mat = [[self.mult if i == j else self.ring.zero()
                for j in range(self.module.ngens)] for i in range(self.module.ngens)]
        f = ModuleMap(self.module, self.module, mat, check=False)
        K, _ = f.kernel()
        if not K.is_zero():
            raise InvalidInput("telescope quotient needs an injective multiplier")

    def stage(self, k):
        """M/u^k M."""
        extra = []
        uk = self.mult ** k
        for i in range(self.module.ngens):
            col = [self.ring.zero()] * self.module.ngens
            col[i] = uk
            extra.append(tuple(col))
        return FPModule(self.ring, self.module.ngens,
                        self.module.relations + extra)

    def stage_map(self, k):
        """Multiplication by u: stage k -> stage k+1 (injective)."""
        from .modules import ModuleMap
        mat = [[self.mult if i == j else self.ring.zero()
                for j in range(self.module.ngens)]
               for i in range(self.module.ngens)]
        return ModuleMap(self.stage(k), self.stage(k + 1), mat, check=False)

    def describe(self):
        return {"kind": "telescope_quotient", "module": self.module.describe(),
                "mult": self.mult.render()}

    def __repr__(self):
        return f"<colim {self.module!r}/{self.mult.render()}^k>"


class Rational(Descriptor):
    """Q^dim viewed over the integers; integers act invertibly."""

    kind = "rational"

    def __init__(self, ring, dim=1):
        if ring.base != "Z" or ring.nvars != 0:
            raise InvalidInput("rational descriptors live over Z")
        self.ring = ring
        self.dim = dim

    def describe(self):
        return {"kind": "rational", "dim": self.dim}

    def __repr__(self):
        return f"<Q^{self.dim}>"


class Sum(Descriptor):
    kind = "sum"

    def __init__(self, parts):
        parts = [p for p in parts if not _desc_is_zero(p)]
        self.parts = parts
        self.ring = parts[0].ring if parts else None

    def describe(self):
        return {"kind": "sum", "parts": [p.describe() for p in self.parts]}

    def __repr__(self):
        return " + ".join(repr(p) for p in self.parts) or "<0>"


def _desc_is_zero(d):
    return d.kind == "fp" and d.module.is_zero()


def as_descriptor(x, ring=None):
    if isinstance(x, Descriptor):
        return x
    if isinstance(x, FPModule):
        return FPObj(x)
    raise InvalidInput(f"cannot interpret {x!r} as a module descriptor")


class CompletionCokernel:
    """coker(M -> completion of M); zero iff M is already complete.

    Carries the free rank of M (over euclidean rings), which measures the
    cokernel: coker = (completion/ring)^rank there.
    """

    def __init__(self, module, ideal_gens, free_rank=None, witness=None):
        self.module = module
        self.ideal_gens = tuple(ideal_gens)
        self.free_rank = free_rank
        self.witness = witness

    def is_zero(self):
        return self.free_rank == 0

    def describe(self):
        return {"kind": "completion_cokernel",
                "module": self.module.describe(),
                "ideal": [g.render() for g in self.ideal_gens],
                "free_rank": self.free_rank,
                "witness": self.witness}


class LimitModule:
    """A recognized exact value, stamped with its precision when completed."""

    def __init__(self, kind, payload=None, precision=None, basis=None, evidence=None):
        assert kind in ("zero", "module", "completion_cokernel", "telescope",
                        "telescope_quotient", "rational", "ind", "unrecognized")
        self.kind = kind
        self.payload = payload
        self.precision = precision
        self.basis = basis          # short tag naming the recognition rule
        self.evidence = evidence

    @classmethod
    def zero(cls, basis=None):
        return cls("zero", basis=basis)

    @classmethod
    def of_module(cls, M, basis=None):
        if M.is_zero():
            return cls("zero", basis=basis,
                       precision=M.ring.precision if M.ring.is_completed else None)
        return cls("module", M, precision=M.ring.precision if M.ring.is_completed
                   else None, basis=basis)

    @classmethod
    def unrecognized(cls, evidence):
        return cls("unrecognized", evidence=evidence)

    def is_zero(self):
        if self.kind == "zero":
            return True
        if self.kind == "module":
            return self.payload.is_zero()
        if self.kind == "completion_cokernel":
            return self.payload.is_zero() if isinstance(self.payload, CompletionCokernel) \
                else False
        if self.kind == "rational":
            return self.payload == 0
        return False

    def is_recognized(self):
        return self.kind != "unrecognized"

    def module(self):
        if self.kind != "module":
            raise InvalidInput(f"no module payload in a {self.kind} value")
        return self.payload

    def describe(self):
        out = {"kind": self.kind}
        if self.basis:
            out["basis"] = self.basis
        if self.precision is not None:
            out["precision"] = self.precision
        if self.kind == "module":
            out["module"] = self.payload.describe()
            out["ring"] = repr(self.payload.ring)
        elif self.kind in ("telescope", "telescope_quotient", "rational"):
            out["value"] = self.payload.describe()
        elif self.kind == "completion_cokernel":
            out.update(self.payload.describe())
        elif self.kind == "ind":
            out["value"] = self.payload
        elif self.kind == "unrecognized":
            out["evidence"] = self.evidence
        return out

    def __repr__(self):
        if self.kind == "zero":
            return "<0>"
        if self.kind == "module":
            return f"<value {self.payload!r}>"
        return f"<{self.kind} value>"


def values_agree(a, b):
    """Exact comparison of two LimitModules, at the coarser precision.

    Returns (bool, detail).  Module values over completed rings are compared
    by canonical invariant factors (euclidean) or by the presentations after
    reduction to the common precision.
    """
    if a.kind == "zero" or b.kind == "zero":
        return (a.is_zero() and b.is_zero(),
                "zero comparison")
    if a.kind != b.kind:
        return False, f"kinds differ: {a.kind} vs {b.kind}"
    if a.kind == "module":
        Ma, Mb = a.payload, b.payload
        if Ma.ring == Mb.ring:
            if Ma.ring.is_euclidean:
                return bool(iso_check(Ma, Mb)), "invariant factors"
            same = _same_presentation(Ma, Mb)
            return same, "presentation comparison"
        ra, rb = Ma.ring, Mb.ring
        if ra.is_completed and rb.is_completed and ra.underlying() == rb.underlying():
            prec = min(ra.precision, rb.precision)
            Ma2 = change_precision(Ma, prec)
            Mb2 = change_precision(Mb, prec)
            if Ma2.ring.is_euclidean:
                return bool(iso_check(Ma2, Mb2)), f"compared at precision {prec}"
            return _same_presentation(Ma2, Mb2), f"compared at precision {prec}"
        if rb.is_completed and ra == rb.underlying():
            return values_agree(b, a)
        if ra.is_completed and rb == ra.underlying():
            # a torsion module killed by a power of I equals its completion
            if _killed_by_completion_ideal(Mb, ra):
                lifted = FPModule(ra, Mb.ngens,
                                  [tuple(ra.el(e.num, e.dexp) for e in col)
                                   for col in Mb.relations])
                if ra.is_euclidean:
                    return bool(iso_check(Ma, lifted)), \
                        "I-power-torsion module compared after completion"
                return _same_presentation(Ma, lifted), \
                    "I-power-torsion module compared after completion"
            return False, ("modules over the discrete ring must be I-power "
                           "torsion to equal a completed value")
        return False, f"rings differ: {ra} vs {rb}"
    if a.kind == "rational":
        return a.payload.dim == b.payload.dim, "rational dimension"
    if a.kind in ("telescope", "telescope_quotient"):
        da, db = a.payload, b.payload
        if da.ring == db.ring:
            if not (da.mult == db.mult):
                return False, "multipliers differ"
            if da.module.ring.is_euclidean:
                return bool(iso_check(da.module, db.module)), "descriptor base modules"
            return _same_presentation(da.module, db.module), "descriptor presentations"
        if a.kind == "telescope_quotient":
            ra, rb = da.ring, db.ring
            ua, ub = ra.underlying(), rb.underlying()
            if ua == rb or ub == ra or ua == ub:
                # one side lives over a completion of the other: compare the
                # materialized stage systems at the available precision
                bound = min(r.precision for r in (ra, rb) if r.is_completed)
                bound = min(bound - 1, 8) if bound else 8
                for k in range(1, bound + 1):
                    sa, sb = da.stage(k), db.stage(k)
                    if sa.ring.is_euclidean and sb.ring.is_euclidean:
                        fa = sorted(x.render() for x in sa.decomposition()[0])
                        fb = sorted(x.render() for x in sb.decomposition()[0])
                        if fa != fb or sa.decomposition()[1] != sb.decomposition()[1]:
                            return False, f"stages differ at k={k}"
                    elif not _same_presentation(sa, sb):
                        return False, f"stages differ at k={k}"
                return True, f"stage systems agree through k={bound}"
        return False, "rings differ"
    if a.kind == "completion_cokernel":
        return a.payload.describe() == b.payload.describe(), "cokernel descriptor"
    if a.kind == "ind":
        # symbolic values compare by their full structural description
        return a.describe() == b.describe(), "symbolic descriptor comparison"
    return False, "unrecognized values never compare equal"


def _killed_by_completion_ideal(M, completed_ring, bound=24):
    gens = [M.ring.el(g) for g in completed_ring.completion[0]]
    from .ring import power_products
    for j in range(1, bound + 1):
        prods = power_products([g.num for g in gens], j)
        ok = True
        for f in prods:
            fe = M.ring.el(f)
            for i in range(M.ngens):
                if not M.contains_in_relations(tuple(fe * e for e in M.gen(i))):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def _same_presentation(Ma, Mb):
    if Ma.ngens != Mb.ngens:
        # fall back to mutual witness-free zero test
        return Ma.is_zero() and Mb.is_zero()
    # same generators: mutual containment of relation lattices
    for col in Ma.relations:
        if not Mb.contains_in_relations(col):
            return False
    for col in Mb.relations:
        if not Ma.contains_in_relations(col):
            return False
    return True


def change_precision(M, prec):
    """Reduce a module over a completed ring to a coarser precision."""
    ring = M.ring
    if not ring.is_completed or ring.precision == prec:
        return M
    if prec > ring.precision:
        raise InvalidInput("cannot refine precision of a computed answer")
    new_ring = ring.at_precision(prec)
    rels = [tuple(new_ring.el(e.num, e.dexp) for e in col) for col in M.relations]
    return FPModule(new_ring, M.ngens, rels)
