"""Buchberger engine for ideals and submodules of free modules.

Works over field coefficients (Q, F_p); over Z only computations whose
leading coefficients stay units are supported, and anything else raises
UnsupportedRing.  Every basis element carries its cofactor expression over
the original generators, which gives membership certificates, lifts, and
syzygies (via Schreyer's theorem) in one pass.

Vectors are tuples of Poly, one per free-module coordinate.  Leading terms
use position-over-term order with coordinate 0 largest; pair selection is
the normal strategy with a deterministic tie-break, so output is stable.
"""

import os

from .errors import BudgetExceeded, UnsupportedRing
from .poly import Poly, mono_div, mono_lcm, order_key


def default_budget():
    try:
        return int(os.environ.get("LODUA_BUDGET", "100000"))
    except ValueError:
        return 100000


def vec_zero(dom, nvars, nrows):
    return tuple(Poly.zero(dom, nvars) for _ in range(nrows))


def vec_is_zero(v):
    return all(p.is_zero() for p in v)


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale_term(v, mono, coeff):
    t = Poly(v[0].dom, v[0].nvars, {mono: coeff})
    return tuple(t * p for p in v)


def _lead(v, key):
    """((coord, mono), coeff) of the POT-leading term, or None for zero."""
    best = None
    for i, p in enumerate(v):
        if p.is_zero():
            continue
        m, c = p.leading(key)
        cand = ((i, m), c)
        if best is None:
            best = cand
        else:
            (bi, bm), _ = best
            # coordinate 0 is largest; within a coordinate use the mono order
            if (i < bi) or (i == bi and key(m) > key(bm)):
                best = cand
    return best


class GBasis:
    """A Groebner basis of a submodule of A^nrows with cofactor data."""

    def __init__(self, gens, nrows, order="grevlex", budget=None, track=True):
        if not gens:
            raise ValueError("need at least one generator (possibly zero)")
        self.nrows = nrows
        self.order = order
        self.key = order_key(order)
        self.dom = gens[0][0].dom
        self.nvars = gens[0][0].nvars
        self.gens = [tuple(g) for g in gens]
        self.track = track
        self.budget = budget if budget is not None else default_budget()
        self._steps = 0
        self.elements = []       # basis vectors
        self.cofactors = []      # elements[i] = sum_j cofactors[i][j] * gens[j]
        self._syz = []           # syzygies over the original generators
        self._run()

    def _tick(self):
        self._steps += 1
        if self._steps > self.budget:
            raise BudgetExceeded("groebner budget exceeded",
                                 partial=[list(e) for e in self.elements])

    def _unit_coeff(self, c):
        if self.dom.kind == "Z" and c not in (1, -1):
            raise UnsupportedRing(
                "Groebner over Z is restricted to unit leading coefficients")
        return c

    def _reduce(self, v, cof):
        """Full normal form of v against the current basis, updating cof."""
        key = self.key
        dom = self.dom
        out = vec_zero(dom, self.nvars, self.nrows)
        while not vec_is_zero(v):
            self._tick()
            (ci, cm), cc = _lead(v, key)
            hit = None
            for idx, g in enumerate(self.elements):
                (gi, gm), gc = self._leads[idx]
                if gi != ci:
                    continue
                q = mono_div(cm, gm)
                if q is not None:
                    hit = (idx, q, gc)
                    break
            if hit is None:
                # move the leading term to the remainder
                t = Poly(dom, self.nvars, {cm: cc})
                mv = [Poly.zero(dom, self.nvars)] * self.nrows
                mv[ci] = t
                out = vec_add(out, tuple(mv))
                v = vec_sub(v, tuple(mv))
                continue
            idx, q, gc = hit
            factor = dom.exact_div(cc, gc)
            if factor is None:
                self._unit_coeff(gc)
                raise UnsupportedRing("non-exact coefficient division")
            v = vec_sub(v, vec_scale_term(self.elements[idx], q, factor))
            if cof is not None:
                base = self.cofactors[idx]
                t = Poly(dom, self.nvars, {q: factor})
                cof = tuple(a if b.is_zero() else a - t * b
                            for a, b in zip(cof, base))
        return out, cof

    def _run(self):
        dom, nv, nr = self.dom, self.nvars, self.nrows
        ngen = len(self.gens)
        unit = lambda j: tuple(
            Poly.const(dom, nv, 1) if i == j else Poly.zero(dom, nv)
            for i in range(ngen)) if self.track else None
        self._leads = []
        for j, g in enumerate(self.gens):
            nf, cof = self._reduce(g, unit(j))
            if vec_is_zero(nf):
                # 0 = cof . gens, so the cofactor vector is itself a syzygy
                if cof is not None and not vec_is_zero(cof):
                    self._syz.append(cof)
                continue
            nf, cof = self._monicize(nf, cof)
            self.elements.append(nf)
            self.cofactors.append(cof)
            self._leads.append(_lead(nf, self.key))
        pairs = [(i, j) for i in range(len(self.elements))
                 for j in range(i + 1, len(self.elements))
                 if self._leads[i][0][0] == self._leads[j][0][0]]
        while pairs:
            pairs.sort(key=self._pair_key)
            i, j = pairs.pop(0)
            if self._chain_criterion(i, j, pairs):
                continue
            sv, scof = self._spair(i, j)
            nf, cof = self._reduce(sv, scof)
            if vec_is_zero(nf):
                if cof is not None and not vec_is_zero(cof):
                    self._syz.append(cof)
                continue
            nf, cof = self._monicize(nf, cof)
            self.elements.append(nf)
            self.cofactors.append(cof)
            self._leads.append(_lead(nf, self.key))
            new = len(self.elements) - 1
            for t in range(new):
                if self._leads[t][0][0] == self._leads[new][0][0]:
                    pairs.append((t, new))
        self._make_reduced()

    def _monicize(self, nf, cof):
        # keeping reducers monic tames coefficient growth over Q
        if self.dom.kind == "Z":
            return nf, cof
        _, c = _lead(nf, self.key)
        inv = self.dom.inv(c)
        nf = tuple(p.scale(inv) for p in nf)
        if cof is not None:
            cof = tuple(p.scale(inv) for p in cof)
        return nf, cof

    def _pair_key(self, pair):
        i, j = pair
        (ci, mi), _ = self._leads[i]
        (_, mj), _ = self._leads[j]
        lcm = mono_lcm(mi, mj)
        return (sum(lcm), self.key(lcm), ci, i, j)

    def _chain_criterion(self, i, j, pending):
        (ci, mi), _ = self._leads[i]
        (_, mj), _ = self._leads[j]
        lcm = mono_lcm(mi, mj)
        for t in range(len(self.elements)):
            if t in (i, j):
                continue
            (ct, mt), _ = self._leads[t]
            if ct != ci or mono_div(lcm, mt) is None:
                continue
            a, b = (min(i, t), max(i, t)), (min(j, t), max(j, t))
            if a not in pending and b not in pending:
                return True
        return False

    def _spair(self, i, j):
        (ci, mi), cci = self._leads[i]
        (_, mj), ccj = self._leads[j]
        lcm = mono_lcm(mi, mj)
        qi, qj = mono_div(lcm, mi), mono_div(lcm, mj)
        if self.dom.kind == "Z":
            self._unit_coeff(cci)
            self._unit_coeff(ccj)
            ai, aj = ccj, cci
        else:
            ai, aj = self.dom.inv(cci), self.dom.inv(ccj)
        sv = vec_sub(vec_scale_term(self.elements[i], qi, ai),
                     vec_scale_term(self.elements[j], qj, aj))
        if not self.track:
            return sv, None
        sc = tuple(a - b for a, b in zip(
            vec_scale_term(self.cofactors[i], qi, ai),
            vec_scale_term(self.cofactors[j], qj, aj)))
        return sv, sc

    def _make_reduced(self):
        # minimalize, then inter-reduce tails and normalize; sort for stability
        keep = []
        for i in range(len(self.elements)):
            (ci, mi), _ = self._leads[i]
            shadowed = False
            for j in range(len(self.elements)):
                if i == j:
                    continue
                (cj, mj), _ = self._leads[j]
                if cj == ci and mono_div(mi, mj) is not None:
                    if mono_div(mj, mi) is not None and j > i:
                        continue  # equal leads: keep the earlier one
                    shadowed = True
                    break
            if not shadowed:
                keep.append(i)
        elements = [self.elements[i] for i in keep]
        cofs = [self.cofactors[i] for i in keep] if self.track else None
        self.elements = elements
        self.cofactors = cofs
        self._leads = [_lead(e, self.key) for e in self.elements]
        for i in range(len(self.elements)):
            others = self.elements[:i] + self.elements[i + 1:]
            ocofs = (self.cofactors[:i] + self.cofactors[i + 1:]) \
                if self.track else None
            sub = _SubBasis(others, ocofs, self)
            nf, cof = sub.reduce(self.elements[i],
                                 self.cofactors[i] if self.track else None)
            self.elements[i] = nf
            if self.track:
                self.cofactors[i] = cof
        for i, e in enumerate(self.elements):
            _, c = _lead(e, self.key)
            if self.dom.kind == "Z":
                if c < 0:
                    self.elements[i] = tuple(-p for p in e)
                    if self.track:
                        self.cofactors[i] = tuple(-p for p in self.cofactors[i])
            else:
                inv = self.dom.inv(c)
                self.elements[i] = tuple(p.scale(inv) for p in e)
                if self.track:
                    self.cofactors[i] = tuple(p.scale(inv)
                                              for p in self.cofactors[i])
        order = sorted(range(len(self.elements)),
                       key=lambda i: (self._leads[i][0][0],
                                      self.key(self._leads[i][0][1])))
        self.elements = [self.elements[i] for i in order]
        if self.track:
            self.cofactors = [self.cofactors[i] for i in order]
        self._leads = [_lead(e, self.key) for e in self.elements]

    # public interface ----------------------------------------------------

    def normal_form(self, v):
        nf, _ = self._reduce(tuple(v), None)
        return nf

    def contains(self, v):
        return vec_is_zero(self.normal_form(v))

    def lift(self, v):
        """Coefficients c with v = sum_j c[j] * gens[j], or None."""
        if not self.track:
            raise UnsupportedRing("this basis was built without cofactors")
        zero_cof = tuple(Poly.zero(self.dom, self.nvars) for _ in self.gens)
        nf, cof = self._reduce(tuple(v), zero_cof)
        if not vec_is_zero(nf):
            return None
        return tuple(-p for p in cof)

    def syzygies(self):
        """Generators of the syzygy module of the original generators."""
        if not self.track:
            raise UnsupportedRing("this basis was built without cofactors")
        out = list(self._syz)
        # relations expressing each original generator over the basis give
        # extra syzygies e_j - lift(gen_j)
        for j, g in enumerate(self.gens):
            lifted = self.lift(g)
            assert lifted is not None
            row = list(lifted)
            row[j] = row[j] - Poly.const(self.dom, self.nvars, 1)
            if not vec_is_zero(tuple(row)):
                out.append(tuple(-p for p in row))
        return out


class _SubBasis:
    """Reduction against a fixed sublist, reusing GBasis bookkeeping."""

    def __init__(self, elements, cofactors, parent):
        self.elements = elements
        self.cofactors = cofactors
        self.key = parent.key
        self.dom = parent.dom
        self.nvars = parent.nvars
        self.nrows = parent.nrows
        self._leads = [_lead(e, self.key) for e in elements]
        self._parent = parent

    def reduce(self, v, cof):
        key, dom = self.key, self.dom
        out = vec_zero(dom, self.nvars, self.nrows)
        while not vec_is_zero(v):
            self._parent._tick()
            (ci, cm), cc = _lead(v, key)
            hit = None
            for idx in range(len(self.elements)):
                (gi, gm), gc = self._leads[idx]
                if gi != ci:
                    continue
                q = mono_div(cm, gm)
                if q is not None:
                    hit = (idx, q, gc)
                    break
            if hit is None:
                t = Poly(dom, self.nvars, {cm: cc})
                mv = [Poly.zero(dom, self.nvars)] * self.nrows
                mv[ci] = t
                out = vec_add(out, tuple(mv))
                v = vec_sub(v, tuple(mv))
                continue
            idx, q, gc = hit
            factor = dom.exact_div(cc, gc)
            if factor is None:
                raise UnsupportedRing("non-exact coefficient division")
            v = vec_sub(v, vec_scale_term(self.elements[idx], q, factor))
            if cof is not None:
                t = Poly(dom, self.nvars, {q: factor})
                cof = tuple(a if b.is_zero() else a - t * b
                            for a, b in zip(cof, self.cofactors[idx]))
        return out, cof


def groebner_ideal(polys, order="grevlex", budget=None):
    """Reduced Groebner basis of the ideal generated by polys (rank 1)."""
    gens = [(p,) for p in polys]
    gb = GBasis(gens, 1, order=order, budget=budget)
    return gb


def ideal_basis_polys(gb):
    return [e[0] for e in gb.elements]
