"""Inverse systems of modules with exact lim and lim^1 on recognized classes.

A Tower materializes stages M_1, M_2, ... with transition maps
M_(k+1) -> M_k.  The lim/lim^1 engine only ever reports a value when a
recognition rule with an exact justification applies (Artin-Rees for adic
and Tor towers of finitely presented modules, Mittag-Leffler via surjective
or stabilized images, multiplication towers via the completion-comparison
model RHom(tel_x A, M) = [M -> M^]); anything else is reported as
`unrecognized`, carrying the materialized evidence, never a guess.
"""

from .complexes import ChainMap, induced_on_homology
from .descriptors import (CompletionCokernel, FPObj, LimitModule, Telescope)
from .errors import InvalidInput, UnrecognizedTower, UnsupportedRing
from .koszul import koszul_chain, koszul_transition
from .linalg import lift_through
from .modules import (FPModule, ModuleMap, free_resolution, identity_map,
                      zero_map)
from .ring import power_products

DEFAULT_STAGE_BOUND = 12
DEFAULT_LAG = 6


def ideal_power_module(ring, gens, k):
    """A/(gens)^k as a cyclic module."""
    return FPModule.cyclic(ring, power_products([ring.el(g) for g in gens], k))


def quotient_by_ideal_power(M, gens, k):
    """M/(I^k)M with the same generators."""
    ring = M.ring
    prods = power_products([ring.el(g) for g in gens], k)
    extra = []
    for f in prods:
        for i in range(M.ngens):
            col = [ring.zero()] * M.ngens
            col[i] = ring.el(f)
            extra.append(tuple(col))
    return FPModule(ring, M.ngens, M.relations + extra)


class TowerLimits:
    def __init__(self, lim, lim1, basis, certificates=None):
        self.lim = lim
        self.lim1 = lim1
        self.basis = basis
        self.certificates = certificates or {}

    def recognized(self):
        return self.lim.is_recognized() and self.lim1.is_recognized()

    def describe(self):
        return {"lim": self.lim.describe(), "lim1": self.lim1.describe(),
                "basis": self.basis, "certificates": self.certificates}

    def __repr__(self):
        return f"<lim={self.lim!r} lim1={self.lim1!r} [{self.basis}]>"


class ProTrivialVerdict:
    def __init__(self, status, lag=None, failing_stage=None, note=None):
        assert status in ("pro-trivial", "not-pro-trivial", "inconclusive")
        self.status = status
        self.lag = lag
        self.failing_stage = failing_stage
        self.note = note

    def __bool__(self):
        return self.status == "pro-trivial"

    def describe(self):
        out = {"status": self.status}
        if self.lag is not None:
            out["lag"] = self.lag
        if self.failing_stage is not None:
            out["failing_stage"] = self.failing_stage
        if self.note:
            out["note"] = self.note
        return out


class Tower:
    """kind in {'adic', 'mult', 'tor', 'koszul_homology', 'koszul_stage',
    'explicit', 'zero', 'sum'}; stages are memoized."""

    def __init__(self, ring, kind, params, note=None):
        self.ring = ring
        self.kind = kind
        self.params = params
        self.note = note
        self._stages = {}
        self._transitions = {}
        self._res_cache = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def adic(cls, M, ideal_gens):
        gens = tuple(M.ring.el(g) for g in ideal_gens)
        return cls(M.ring, "adic", {"module": M, "ideal": gens})

    @classmethod
    def mult(cls, desc, x):
        if isinstance(desc, FPModule):
            desc = FPObj(desc)
        return cls(desc.ring, "mult", {"desc": desc, "x": desc.ring.el(x)})

    @classmethod
    def tor(cls, desc, ideal_gens, s):
        if isinstance(desc, FPModule):
            desc = FPObj(desc)
        ring = desc.ring
        gens = tuple(ring.el(g) for g in ideal_gens)
        if desc.kind == "telescope_quotient":
            if s == 0:
                return cls(ring, "zero", {"why": "Tor_0 of a divisible quotient"})
            _require_radical_membership(ring, desc.mult, gens)
            # triangle M -> u^-1 M -> Z shifts Tor degrees by one
            return cls.tor(FPObj(desc.module), gens, s - 1)
        if desc.kind == "telescope":
            _require_radical_membership(ring, desc.mult, gens)
            return cls(ring, "zero",
                       {"why": "multiplier invertible and nilpotent on stages"})
        if desc.kind == "rational":
            return cls(ring, "zero", {"why": "ideal acts invertibly on Q"})
        if desc.kind == "sum":
            parts = [cls.tor(p, gens, s) for p in desc.parts]
            return cls(ring, "sum", {"parts": parts})
        if s == 0:
            return cls.adic(desc.module, gens)
        return cls(ring, "tor", {"module": desc.module, "ideal": gens, "s": s})

    @classmethod
    def koszul_homology(cls, ring, gens, i):
        gens = tuple(ring.el(g) for g in gens)
        return cls(ring, "koszul_homology", {"ideal": gens, "i": i})

    @classmethod
    def koszul_stage(cls, C, gens, s, shared=None):
        # `shared` lets the completion routes reuse the stage complexes
        # across homological degrees
        gens = tuple(C.ring.el(g) for g in gens)
        return cls(C.ring, "koszul_stage",
                   {"complex": C, "ideal": gens, "s": s,
                    "shared": shared if shared is not None else {}})

    @classmethod
    def explicit(cls, stages, transitions, periodic=None):
        ring = stages[0].ring
        return cls(ring, "explicit",
                   {"stages": list(stages), "transitions": list(transitions),
                    "periodic": periodic})

    @classmethod
    def zero_tower(cls, ring, why=""):
        return cls(ring, "zero", {"why": why})

    # -- materialization -----------------------------------------------------

    def stage(self, k):
        if k not in self._stages:
            self._stages[k] = self._make_stage(k)
        return self._stages[k]

    def transition(self, k):
        """stage(k+1) -> stage(k)."""
        if k not in self._transitions:
            self._transitions[k] = self._make_transition(k)
        return self._transitions[k]

    def composite(self, k, j):
        """stage(k+j) -> stage(k)."""
        f = self.transition(k)
        for t in range(1, j):
            f = f.compose(self.transition(k + t))
        return f

    def _make_stage(self, k):
        kind = self.kind
        if kind == "zero":
            return FPModule.zero(self.ring)
        if kind == "adic":
            return quotient_by_ideal_power(self.params["module"],
                                           self.params["ideal"], k)
        if kind == "mult":
            desc = self.params["desc"]
            if desc.kind != "fp":
                raise UnsupportedRing("mult towers materialize fp stages only")
            return desc.module
        if kind == "tor":
            return self._tor_data(k)[0]
        if kind == "koszul_homology":
            return self._koszul_data(k)[0]
        if kind == "koszul_stage":
            return self._koszul_stage_data(k)[0]
        if kind == "explicit":
            stages = self.params["stages"]
            period = self.params.get("periodic")
            if k <= len(stages):
                return stages[k - 1]
            if period:
                return stages[(k - 1 - len(stages)) % period + len(stages) - period]
            raise InvalidInput(f"explicit tower has no stage {k}")
        if kind == "sum":
            from .modules import direct_sum
            parts = [t.stage(k) for t in self.params["parts"]]
            out = parts[0]
            for p in parts[1:]:
                out, _, _ = direct_sum(out, p)
            return out
        raise InvalidInput(f"unknown tower kind {kind}")

    def _make_transition(self, k):
        kind = self.kind
        if kind == "zero":
            return zero_map(self.stage(k + 1), self.stage(k))
        if kind == "adic":
            return ModuleMap(self.stage(k + 1), self.stage(k),
                             identity_map(self.params["module"]).matrix, check=False)
        if kind == "mult":
            M = self.stage(k)
            x = self.params["x"]
            mat = [[x if i == j else self.ring.zero() for j in range(M.ngens)]
                   for i in range(M.ngens)]
            return ModuleMap(M, M, mat, check=False)
        if kind == "tor":
            _, cx_next = self._tor_data(k + 1)
            _, cx_this = self._tor_data(k)
            maps = {n: ModuleMap(cx_next.module(n), cx_this.module(n),
                                 identity_map(cx_this.module(n)).matrix, check=False)
                    for n in cx_this.degrees()}
            chmap = ChainMap(cx_next, cx_this, maps, check=False)
            return induced_on_homology(chmap, self.params["s"])
        if kind == "koszul_homology":
            _, kos_this = self._koszul_data(k)
            _, kos_next = self._koszul_data(k + 1)
            tr = koszul_transition(self.ring, self.params["ideal"], k,
                                   kos_next, kos_this)
            return induced_on_homology(tr, self.params["i"])
        if kind == "koszul_stage":
            _, cx_this = self._koszul_stage_data(k)
            _, cx_next = self._koszul_stage_data(k + 1)
            tr = self._koszul_stage_transition(k, cx_next, cx_this)
            return induced_on_homology(tr, self.params["s"])
        if kind == "explicit":
            trans = self.params["transitions"]
            period = self.params.get("periodic")
            if k <= len(trans):
                return trans[k - 1]
            if period:
                return trans[(k - 1 - len(trans)) % period + len(trans) - period]
            raise InvalidInput(f"explicit tower has no transition {k}")
        if kind == "sum":
            from .modules import direct_sum
            parts = self.params["parts"]
            maps = [t.transition(k) for t in parts]
            S1, S0 = self.stage(k + 1), self.stage(k)
            mat = [[self.ring.zero()] * S1.ngens for _ in range(S0.ngens)]
            ro = co = 0
            for m in maps:
                for i, row in enumerate(m.matrix):
                    for j, e in enumerate(row):
                        mat[ro + i][co + j] = e
                ro += m.target.ngens
                co += m.source.ngens
            return ModuleMap(S1, S0, mat, check=False)
        raise InvalidInput(f"unknown tower kind {kind}")

    def _tor_data(self, k):
        """(H_s(F(M) (x) A/I^k), that tensored complex)."""
        key = ("tor", k)
        if self._res_cache is None:
            s = self.params["s"]
            self._res_cache = {"res": free_resolution(self.params["module"], s + 2)}
        cache = self._res_cache
        if key not in cache:
            quot = ideal_power_module(self.ring, self.params["ideal"], k)
            cx = cache["res"].tensor_module(quot)
            cache[key] = (cx.homology(self.params["s"]), cx)
        return cache[key][0], cache[key][1]

    def _koszul_data(self, k):
        key = ("kos", k)
        if self._res_cache is None:
            self._res_cache = {}
        if key not in self._res_cache:
            kos = koszul_chain(self.ring, self.params["ideal"], k)
            self._res_cache[key] = (kos.homology(self.params["i"]), kos)
        return self._res_cache[key][0], self._res_cache[key][1]

    def _koszul_stage_data(self, k):
        shared = self.params["shared"]
        ckey = ("cx", k)
        if ckey not in shared:
            kos = koszul_chain(self.ring, self.params["ideal"], k)
            cx = kos.tensor_complex(self.params["complex"])
            shared[ckey] = (cx, kos)
        cx, _ = shared[ckey]
        hkey = ("H", k, self.params["s"])
        if hkey not in shared:
            shared[hkey] = cx.homology_data(self.params["s"])
        return shared[hkey].H, cx

    def _koszul_stage_transition(self, k, cx_next, cx_this):
        shared = self.params["shared"]
        tkey = ("chmap", k)
        if tkey not in shared:
            kos_this = shared[("cx", k)][1]
            kos_next = shared[("cx", k + 1)][1]
            base = koszul_transition(self.ring, self.params["ideal"], k,
                                     kos_next, kos_this)
            C = self.params["complex"]
            maps = {}
            for n in cx_this.degrees():
                S, T = cx_next.module(n), cx_this.module(n)
                mat = [[self.ring.zero()] * S.ngens for _ in range(T.ngens)]
                src_off = tgt_off = 0
                for p in sorted(kos_this.modules):
                    for q in sorted(C.modules):
                        if p + q != n:
                            continue
                        blk = base.map(p)
                        Cq = C.module(q)
                        for i in range(blk.target.ngens):
                            for j in range(blk.source.ngens):
                                c = blk.matrix[i][j]
                                if c.is_zero():
                                    continue
                                for t in range(Cq.ngens):
                                    mat[tgt_off + i * Cq.ngens + t][
                                        src_off + j * Cq.ngens + t] = c
                        src_off += blk.source.ngens * Cq.ngens
                        tgt_off += blk.target.ngens * Cq.ngens
                maps[n] = ModuleMap(S, T, mat, check=False)
            shared[tkey] = ChainMap(cx_next, cx_this, maps, check=False)
        return shared[tkey]


def _stages_small(tower, upto, max_gens=8, max_rels=30, max_deg=6):
    """Deterministic gate for the optional lag probe: composite checks on
    large stage presentations are skipped in favor of the theorem, keeping
    reports byte-stable without wall-clock heuristics."""
    for k in range(1, upto + 1):
        M = tower.stage(k)
        if M.ngens > max_gens or len(M.relations) > max_rels:
            return False
        for col in M.relations:
            for e in col:
                if e.num.total_degree() > max_deg:
                    return False
    return True


def _require_radical_membership(ring, u, ideal_gens, bound=8):
    for m in range(1, bound + 1):
        target = (u ** m,)
        cols = [(ring.el(g),) for g in ideal_gens]
        if lift_through(ring, cols, target, 1) is not None:
            return m
    raise UnrecognizedTower(
        f"multiplier {u.render()} is not visibly in the radical of the ideal")


# -- pro-triviality -------------------------------------------------------------


def is_pro_trivial(tower, lag=DEFAULT_LAG, stage_bound=DEFAULT_STAGE_BOUND):
    """Composite-vanishing test with the minimal lag, else a failing stage.

    Needs materialization within the bounds; towers that run out of stages
    (finite explicit lists without a periodicity tag) are inconclusive, not
    an error.
    """
    if tower.kind == "explicit" and not tower.params.get("periodic"):
        avail = len(tower.params["stages"])
        trans = len(tower.params["transitions"])
        stage_bound = min(stage_bound, avail, trans + 1)
        lag = min(lag, max(stage_bound - 1, 0))
        if stage_bound < 1:
            return ProTrivialVerdict("inconclusive",
                                     note="no materializable stages")
    if tower.kind == "zero":
        return ProTrivialVerdict("pro-trivial", lag=0)
    if tower.kind == "sum":
        worst = ProTrivialVerdict("pro-trivial", lag=0)
        for part in tower.params["parts"]:
            v = is_pro_trivial(part, lag, stage_bound)
            if v.status != "pro-trivial":
                return v
            worst = v if (v.lag or 0) > (worst.lag or 0) else worst
        return worst
    for j in range(0, lag + 1):
        if stage_bound - j < 1:
            break  # no composite of this lag is materializable: no claim
        ok = True
        for k in range(1, stage_bound - j + 1):
            if tower.stage(k).is_zero():
                continue
            if j == 0:
                ok = False
                break
            if not tower.composite(k, j).is_zero_map():
                ok = False
                break
        if ok:
            return ProTrivialVerdict("pro-trivial", lag=j)
    # a periodic tower of isomorphisms can never be pro-trivial
    if tower.kind == "explicit" and tower.params.get("periodic"):
        comp = tower.composite(1, lag)
        K, _ = comp.kernel()
        C, _ = comp.cokernel()
        if K.is_zero() and C.is_zero() and not comp.source.is_zero():
            return ProTrivialVerdict(
                "not-pro-trivial", failing_stage=1,
                note="periodic tower with isomorphic composites")
    if tower.kind == "mult":
        desc = tower.params["desc"]
        x = tower.params["x"]
        if desc.kind == "fp" and _mult_is_iso(desc.module, x) \
                and not desc.module.is_zero():
            return ProTrivialVerdict("not-pro-trivial", failing_stage=1,
                                     note="multiplier acts invertibly")
    return ProTrivialVerdict("inconclusive", note=f"lag bound {lag} exhausted")


def weak_proregularity_check(ring, seq, stage_bound=4, lag=DEFAULT_LAG):
    """Pro-triviality of H_i(Kos(x^k)) for every 0 < i <= n, within bounds.

    Over a completed ring the check runs on the underlying ring: completion
    is flat, so the Koszul homology towers base-change and pro-triviality
    transfers exactly (and the at-precision model would otherwise introduce
    phantom classes).
    """
    seq = [ring.el(x) for x in seq]
    if not seq:
        raise InvalidInput("need a nonempty sequence")
    if ring.is_completed:
        base = ring.underlying()
        out = weak_proregularity_check(base, [base.el(x.num, x.dexp)
                                              for x in seq],
                                       stage_bound, lag)
        out["note"] = ("computed over the underlying ring; completion is "
                       "flat, so pro-triviality transfers")
        return out
    results = {}
    for i in range(1, len(seq) + 1):
        t = Tower.koszul_homology(ring, seq, i)
        v = is_pro_trivial(t, lag=lag, stage_bound=stage_bound)
        results[i] = v
        if v.status == "inconclusive":
            return {"status": "inconclusive", "degree": i, "detail": v.describe(),
                    "per_degree": {d: w.describe() for d, w in results.items()}}
        if v.status == "not-pro-trivial":
            return {"status": "not-weakly-proregular", "degree": i,
                    "detail": v.describe(),
                    "per_degree": {d: w.describe() for d, w in results.items()}}
    return {"status": "weakly-proregular",
            "per_degree": {d: w.describe() for d, w in results.items()}}


# -- multiplication towers: the completion-comparison model ---------------------


def _mult_is_iso(M, x):
    mat = [[x if i == j else M.ring.zero() for j in range(M.ngens)]
           for i in range(M.ngens)]
    f = ModuleMap(M, M, mat, check=False)
    K, _ = f.kernel()
    if not K.is_zero():
        return False
    C, _ = f.cokernel()
    return C.is_zero()


def _mult_is_nilpotent(M, x, bound=24):
    # over a completed ring only exponents below the precision are evidence:
    # x^j M = 0 at precision N with j < N implies x^j M = 0 exactly
    # (Nakayama: x^j M is contained in x M . x^j M)
    if M.ring.is_completed:
        bound = min(bound, (M.ring.precision or 1) - 1)
    for j in range(1, bound + 1):
        xj = x ** j
        if all(M.contains_in_relations(tuple(xj * e for e in M.gen(i)))
               for i in range(M.ngens)):
            return j
    return None


def _gcd_el(ring, a, b):
    while not b.is_zero():
        _, r = ring.divmod_el(a, b)
        a, b = b, r
    from .linalg import _unit_part
    u = _unit_part(ring, a)
    return a * u.inv() if not a.is_zero() else a


def is_finite_dimensional(M):
    """Over k[x_1..x_m] (and quotients): is M finite dimensional over k?

    Exact: the leading-term module of the relations must contain a pure
    power of every variable in every generator coordinate.
    """
    ring = M.ring
    if ring.classify() not in ("poly",):
        raise UnsupportedRing("finite-dimension test is for polynomial rings")
    from .groebner import GBasis, _lead
    from .poly import Poly
    mod = list(ring.quotient)
    if ring.is_completed:
        cgens, prec = ring.completion
        mod += power_products(list(cgens), prec)
    gens = [tuple(e.num for e in col) for col in M.relations]
    zero = Poly.zero(ring.dom, ring.nvars)
    for m in mod:
        for i in range(M.ngens):
            vec = [zero] * M.ngens
            vec[i] = m
            gens.append(tuple(vec))
    if not gens:
        return M.ngens == 0
    gb = GBasis(gens, M.ngens, order=ring.order)
    leads = {}
    for e in gb.elements:
        (coord, mono), _ = _lead(e, gb.key)
        leads.setdefault(coord, []).append(mono)
    for i in range(M.ngens):
        monos = leads.get(i, [])
        for v in range(ring.nvars):
            if not any(all(m[w] == 0 for w in range(ring.nvars) if w != v)
                       and m[v] > 0 for m in monos):
                if not any(sum(m) == 0 for m in monos):
                    return False
    return True


def _all_homogeneous(M, x):
    if not x.num.is_homogeneous() or x.num.total_degree() < 1 or x.dexp:
        return False
    for col in M.relations:
        for e in col:
            if e.dexp or not e.num.is_homogeneous():
                return False
    return True


def divisible_part(M, x):
    """The largest submodule D with x.D = D (that is, the intersection of the
    images of multiplication by x^k), as a LimitModule.  None if unrecognized."""
    ring = M.ring
    if M.is_zero():
        return LimitModule.zero(basis="zero module")
    if _mult_is_nilpotent(M, x):
        return LimitModule.zero(basis="nilpotent multiplier")
    if _mult_is_iso(M, x):
        return LimitModule.of_module(M, basis="invertible multiplier")
    kind = ring.classify()
    if ring.is_euclidean and not ring.is_completed:
        factors, rank = M.decomposition()
        # free part contributes nothing; each A/(d) contributes A/(d/g) with
        # g the stabilized gcd(x^k, d)
        anns = []
        for d in factors:
            g = _gcd_el(ring, d, x)
            prev = ring.one()
            while not (g == prev):
                prev = g
                g = _gcd_el(ring, d, g * g)
            # g now generates the stabilized x-part of (d)
            q, r = ring.divmod_el(d, g)
            assert r.is_zero()
            if not q.is_unit():
                anns.append(q)
        if not anns:
            return LimitModule.zero(basis="euclidean decomposition")
        from .modules import direct_sum
        D = FPModule.cyclic(ring, [anns[0]])
        for a in anns[1:]:
            D, _, _ = direct_sum(D, FPModule.cyclic(ring, [a]))
        return LimitModule.of_module(D, basis="euclidean decomposition")
    if kind == "poly" and not ring.is_completed and _all_homogeneous(M, x):
        return LimitModule.zero(basis="graded: positive-degree multiplier")
    if ring.is_completed:
        # at stated precision the image chain stabilizes; report that value
        prev_gens = None
        for k in range(1, (ring.precision or 8) + 2):
            xk = x ** k
            gens = [tuple(xk * e for e in M.gen(i)) for i in range(M.ngens)]
            if prev_gens is not None and _span_equal(M, gens, prev_gens):
                sub = _submodule(M, prev_gens)
                if sub.is_zero():
                    return LimitModule.zero(basis=f"image chain stabilized at {k}")
                return LimitModule.of_module(sub,
                                             basis=f"image chain stabilized at {k}")
            prev_gens = gens
    return None


def _span_equal(M, gens_a, gens_b):
    ring = M.ring
    cols_a = gens_a + M.relations
    cols_b = gens_b + M.relations
    for g in gens_a:
        if lift_through(ring, cols_b, g, M.ngens) is None:
            return False
    for g in gens_b:
        if lift_through(ring, cols_a, g, M.ngens) is None:
            return False
    return True


def _submodule(M, gens):
    from .linalg import syzygies
    ring = M.ring
    gens = [g for g in gens if not M.contains_in_relations(g)]
    if not gens:
        return FPModule.zero(ring)
    rel_syz = syzygies(ring, gens + M.relations, M.ngens)
    rels = [tuple(s[:len(gens)]) for s in rel_syz]
    return FPModule(ring, len(gens), rels)


def completion_cokernel(M, ideal_gens):
    """coker(M -> M^) as a decided CompletionCokernel, or None if undecidable."""
    ring = M.ring
    gens = tuple(ring.el(g) for g in ideal_gens)
    if ring.is_completed:
        # finitely generated modules over a complete ring are complete
        for g in gens:
            try:
                _require_radical_membership(ring, g, [ring.el(h) for h in
                                                      ring.completion[0]])
            except UnrecognizedTower:
                return None
        return CompletionCokernel(M, gens, free_rank=0)
    if ring.is_euclidean:
        factors, rank = M.decomposition()
        witness = None if rank == 0 else "a free generator is not in the image"
        return CompletionCokernel(M, gens, free_rank=rank, witness=witness)
    if ring.classify() == "poly":
        if all(_all_homogeneous(M, g) for g in gens):
            quot = FPModule.cyclic(ring, list(gens))
            if not is_finite_dimensional(quot):
                return None  # the ideal is not 0-dimensional; no rule applies
            if is_finite_dimensional(M):
                return CompletionCokernel(M, gens, free_rank=0)
            return CompletionCokernel(
                M, gens, free_rank=None,
                witness="module has unbounded grading; completion is strictly larger")
    return None


def completed_module(M, ideal_gens, precision=None):
    """M (x) A^ by base-changing the presentation (exact for f.p. modules)."""
    from .ring import DEFAULT_PRECISION
    ring = M.ring
    if ring.is_completed:
        old = set(g.num for g in (ring.el(h) for h in ring.completion[0]))
        gens = tuple(ring.el(g).num for g in ideal_gens)
        joined = tuple(sorted(old | set(gens), key=lambda p: sorted(p.terms)))
        new_ring = ring.underlying().completed(joined, precision or ring.precision)
    else:
        gens = tuple(ring.el(g).num for g in ideal_gens)
        new_ring = ring.completed(gens, precision or DEFAULT_PRECISION)
    rels = [tuple(new_ring.el(e.num, e.dexp) for e in col) for col in M.relations]
    return FPModule(new_ring, M.ngens, rels)


def mult_tower_values(desc, x, precision=None):
    """(lim, lim1) of the tower (M <-x- M <-x- ...) via RHom(x^-1 A, M) = [M -> M^].

    Exact on: fp modules over euclidean/graded/completed supported rings,
    telescopes and rationals (x acting invertibly), and telescope quotients
    via the defining triangle.
    """
    ring = desc.ring
    x = ring.el(x)
    if desc.kind == "rational":
        return TowerLimits(LimitModule("rational", desc, basis="x invertible on Q"),
                           LimitModule.zero(basis="x invertible on Q"),
                           "invertible multiplier")
    if desc.kind == "telescope":
        try:
            _require_radical_membership(ring, x, [desc.mult])
        except UnrecognizedTower:
            return TowerLimits(LimitModule.unrecognized("telescope multiplier"),
                               LimitModule.unrecognized("telescope multiplier"),
                               "unrecognized")
        return TowerLimits(LimitModule("telescope", desc, basis="x invertible"),
                           LimitModule.zero(basis="x invertible"),
                           "invertible multiplier")
    if desc.kind == "telescope_quotient":
        # triangle M -> T -> Z: lim fits 0 -> Hom(tel,T) -> lim -> coker(eta_M) -> 0
        inner = mult_tower_values(FPObj(desc.module), x, precision)
        tpart = mult_tower_values(Telescope(desc.module, desc.mult), x, precision)
        nonzero = (not tpart.lim.is_zero()) or (not inner.lim1.is_zero())
        if nonzero:
            lim = LimitModule("ind",
                              {"extension": "0 -> telescope part -> lim -> "
                                            "completion cokernel -> 0",
                               "witness": "compatible system (u^-k m)_k"},
                              basis="telescope-quotient six-term")
        else:
            lim = LimitModule.zero(basis="telescope-quotient six-term")
        return TowerLimits(lim, LimitModule.zero(basis="divisible target"),
                           "telescope-quotient six-term")
    if desc.kind == "sum":
        parts = [mult_tower_values(p, x, precision) for p in desc.parts]
        return _combine_sum(parts)
    M = desc.module
    if _mult_is_iso(M, x):
        return TowerLimits(LimitModule.of_module(M, basis="invertible multiplier"),
                           LimitModule.zero(basis="invertible multiplier"),
                           "invertible multiplier")
    nil = _mult_is_nilpotent(M, x)
    if nil:
        why = (f"x^{nil} = 0 on M at precision {ring.precision}"
               if ring.is_completed else f"x^{nil} = 0 on M")
        return TowerLimits(LimitModule.zero(basis=why),
                           LimitModule.zero(basis=why),
                           "nilpotent multiplier")
    D = divisible_part(M, x)
    coker = completion_cokernel(M, [x])
    if D is None or coker is None:
        return TowerLimits(LimitModule.unrecognized("no divisibility rule applies"),
                           LimitModule.unrecognized("no completion rule applies"),
                           "unrecognized")
    if coker.is_zero():
        lim1 = LimitModule.zero(basis="module already complete at x")
    else:
        lim1 = LimitModule("completion_cokernel", coker,
                           basis="completion comparison")
    return TowerLimits(D, lim1, "completion comparison model")


def _combine_sum(parts):
    lims = [p.lim for p in parts]
    lim1s = [p.lim1 for p in parts]

    def combine(vals):
        vals = [v for v in vals if not v.is_zero()]
        if not vals:
            return LimitModule.zero(basis="sum of zeros")
        if any(not v.is_recognized() for v in vals):
            return LimitModule.unrecognized("unrecognized summand")
        if len(vals) == 1:
            return vals[0]
        if all(v.kind == "module" for v in vals):
            from .modules import direct_sum
            out = vals[0].payload
            for v in vals[1:]:
                out, _, _ = direct_sum(out, v.payload)
            return LimitModule.of_module(out, basis="direct sum")
        return LimitModule("ind", {"sum": [v.describe() for v in vals]},
                           basis="direct sum of values")

    return TowerLimits(combine(lims), combine(lim1s), "componentwise")


# -- the main lim/lim1 dispatcher ------------------------------------------------


def lim_lim1(tower, stage_bound=DEFAULT_STAGE_BOUND, lag=DEFAULT_LAG,
             precision=None):
    kind = tower.kind
    if kind == "zero":
        z = LimitModule.zero(basis=tower.params.get("why", "zero tower"))
        return TowerLimits(z, z, "zero tower")
    if kind == "sum":
        parts = [lim_lim1(t, stage_bound, lag, precision)
                 for t in tower.params["parts"]]
        return _combine_sum(parts)
    if kind == "adic":
        M = tower.params["module"]
        gens = tower.params["ideal"]
        if M.is_zero() or quotient_by_ideal_power(M, gens, 1).is_zero():
            # M = IM forces M = I^k M for every k: all stages vanish
            z = LimitModule.zero(basis="M = IM, all stages vanish")
            return TowerLimits(z, z, "degenerate adic tower")
        Mhat = completed_module(M, gens, precision)
        _adic_stage_crosscheck(tower, Mhat, min(stage_bound, 3))
        return TowerLimits(
            LimitModule.of_module(Mhat, basis="Artin-Rees: adic tower of an "
                                              "f.p. module"),
            LimitModule.zero(basis="Mittag-Leffler: surjective transitions"),
            "artin-rees")
    if kind == "mult":
        return mult_tower_values(tower.params["desc"], tower.params["x"], precision)
    if kind == "tor":
        # Artin-Rees: for a finitely presented module over a Noetherian
        # supported ring, the towers Tor_s(A/I^k, M) are pro-zero for s >= 1.
        # The lag search enriches the certificate with a concrete lag; it is
        # attempted only when the materialized stages are small (a
        # deterministic size gate), and the theorem carries the verdict
        # otherwise.
        bound = min(stage_bound, 4)
        if _stages_small(tower, bound):
            verdict = is_pro_trivial(tower, lag=min(lag, 3), stage_bound=bound)
            if verdict.status == "pro-trivial":
                z = LimitModule.zero(
                    basis=f"Artin-Rees pro-trivial Tor tower (lag {verdict.lag})")
                return TowerLimits(z, z, "artin-rees pro-trivial",
                                   {"lag": verdict.lag})
            note = {"materialized": verdict.describe()}
        else:
            note = {"materialized": "stage presentations exceed the probe gate"}
        z = LimitModule.zero(
            basis="Artin-Rees: Tor towers of f.p. modules over Noetherian "
                  "rings are pro-zero in positive degrees "
                  "(lag not located within the materialization bounds)")
        return TowerLimits(z, z, "artin-rees theorem", note)
    if kind == "koszul_stage":
        return _koszul_stage_limits(tower, stage_bound, lag, precision)
    if kind == "explicit":
        return _explicit_limits(tower, stage_bound, lag)
    if kind == "koszul_homology":
        verdict = is_pro_trivial(tower, lag=lag, stage_bound=stage_bound)
        if verdict.status == "pro-trivial":
            z = LimitModule.zero(basis=f"pro-trivial (lag {verdict.lag})")
            return TowerLimits(z, z, "pro-trivial", {"lag": verdict.lag})
        u = LimitModule.unrecognized(verdict.describe())
        return TowerLimits(u, u, "unrecognized")
    raise InvalidInput(f"unknown tower kind {kind}")


def _adic_stage_crosscheck(tower, Mhat, upto):
    """(M^)/I^k must match the materialized stage M/I^k M."""
    gens = tower.params["ideal"]
    for k in range(1, upto + 1):
        stage = tower.stage(k)
        hat_stage = quotient_by_ideal_power(Mhat, [Mhat.ring.el(g.num, g.dexp)
                                                   for g in gens], k)
        if stage.ring.is_euclidean and hat_stage.ring.is_euclidean:
            fa = sorted(x.render() for x in stage.decomposition()[0])
            fb = sorted(x.render() for x in hat_stage.decomposition()[0])
            ra = stage.decomposition()[1]
            rb = hat_stage.decomposition()[1]
            if k < (Mhat.ring.precision or k + 1) and (fa != fb or ra != rb):
                from .errors import InternalInconsistency
                raise InternalInconsistency(
                    f"adic recognition disagrees with stage {k}")


def _explicit_limits(tower, stage_bound, lag):
    period = tower.params.get("periodic")
    stages = tower.params["stages"]
    if not period:
        return TowerLimits(LimitModule.unrecognized("no periodicity tag"),
                           LimitModule.unrecognized("no periodicity tag"),
                           "unrecognized")
    bound = min(stage_bound, len(stages) + period)
    verdict = is_pro_trivial(tower, lag=lag, stage_bound=bound)
    if verdict.status == "pro-trivial":
        z = LimitModule.zero(basis=f"periodic pro-trivial (lag {verdict.lag})")
        return TowerLimits(z, z, "periodic pro-trivial")
    all_iso = True
    for k in range(1, bound):
        f = tower.transition(k)
        K, _ = f.kernel()
        C, _ = f.cokernel()
        if not (K.is_zero() and C.is_zero()):
            all_iso = False
            break
    if all_iso:
        return TowerLimits(
            LimitModule.of_module(tower.stage(1),
                                  basis="periodic tower of isomorphisms"),
            LimitModule.zero(basis="Mittag-Leffler"),
            "periodic isomorphisms")
    return TowerLimits(LimitModule.unrecognized("periodic but unrecognized shape"),
                       LimitModule.unrecognized("periodic but unrecognized shape"),
                       "unrecognized")


def _koszul_stage_limits(tower, stage_bound, lag, precision):
    """Stages H_s(Kos(x^k) (x) C) for a bounded complex C with f.p. levels."""
    C = tower.params["complex"]
    gens = tower.params["ideal"]
    s = tower.params["s"]
    ring = tower.ring
    # single-module complexes in degree d reduce to plain Koszul homology of M
    if len(C.modules) == 1:
        (d, M), = C.modules.items()
        if s - d == 0:
            inner = Tower.adic(M, gens)
            return lim_lim1(inner, stage_bound, lag, precision)
        if s - d < 0 or s - d > len(gens):
            z = LimitModule.zero(basis="degree outside Koszul range")
            return TowerLimits(z, z, "range")
        bound = min(stage_bound, 4)
        if _stages_small(tower, bound):
            verdict = is_pro_trivial(tower, lag=min(lag, 3), stage_bound=bound)
            if verdict.status == "pro-trivial":
                z = LimitModule.zero(
                    basis="weakly proregular stages pro-trivial "
                          f"(lag {verdict.lag})")
                return TowerLimits(z, z, "pro-trivial", {"lag": verdict.lag})
            note = verdict.describe()
        else:
            note = "stage presentations exceed the probe gate"
        if tower.params.get("wpr_certified"):
            z = LimitModule.zero(
                basis="weak proregularity + Artin-Rees: Koszul-stage towers "
                      "of f.p. modules are pro-zero in positive degrees "
                      "(lag not located within the materialization bounds)")
            return TowerLimits(z, z, "wpr theorem", {"materialized": note})
        u = LimitModule.unrecognized(note)
        return TowerLimits(u, u, "unrecognized")
    # general bounded complex: fall back to materialized pro-triviality or
    # stabilization; adic-type content is handled by the caller splitting C
    verdict = is_pro_trivial(tower, lag=lag, stage_bound=stage_bound)
    if verdict.status == "pro-trivial":
        z = LimitModule.zero(basis=f"pro-trivial (lag {verdict.lag})")
        return TowerLimits(z, z, "pro-trivial", {"lag": verdict.lag})
    u = LimitModule.unrecognized(verdict.describe())
    return TowerLimits(u, u, "unrecognized")


def standard_tower(kind, **kwargs):
    """Front door for the standard tower kinds: adic | tor | mult."""
    if kind == "adic":
        return Tower.adic(kwargs["module"], kwargs["ideal"])
    if kind == "tor":
        return Tower.tor(kwargs["descriptor"], kwargs["ideal"], kwargs["s"])
    if kind == "mult":
        return Tower.mult(kwargs["descriptor"], kwargs["x"])
    raise InvalidInput(f"unknown standard tower kind {kind!r}")
