"""Bounded chain complexes of finitely presented modules.

Homological indexing: the differential lowers degree by one.  Signs follow
the fixed convention d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy and, for Hom,
d(f) = d . f - (-1)^|f| f . d; these are used consistently everywhere.
"""

from .errors import InvalidInput
from .modules import (FPModule, HomModule, ModuleMap, identity_map,
                      tensor, tensor_map, zero_map)


class ChainComplex:
    def __init__(self, ring, modules, diffs, check=True):
        self.ring = ring
        self.modules = dict(modules)
        self.diffs = dict(diffs)
        self._hcache = {}
        if self.modules:
            self.lo = min(self.modules)
            self.hi = max(self.modules)
        else:
            self.lo, self.hi = 0, -1
        if check:
            self._check()

    def _check(self):
        for n, d in self.diffs.items():
            nxt = self.diffs.get(n - 1)
            if nxt is not None:
                comp = nxt.compose(d)
                if not comp.is_zero_map():
                    raise InvalidInput(f"d.d != 0 between degrees {n} and {n - 2}")

    @classmethod
    def single(cls, M, degree=0):
        return cls(M.ring, {degree: M}, {}, check=False)

    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, {}, check=False)

    def module(self, n):
        M = self.modules.get(n)
        return M if M is not None else FPModule.zero(self.ring)

    def diff(self, n):
        d = self.diffs.get(n)
        if d is not None:
            return d
        return zero_map(self.module(n), self.module(n - 1))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def homology(self, n):
        """H_n = ker(d_n)/im(d_(n+1)), with a minimized presentation."""
        return self.homology_data(n).H

    def homology_data(self, n):
        """Cycle-level bookkeeping for homology classes.

        Returns a HomologyData with H (minimized), the cycle module Z, its
        inclusion into C_n, the projection Z -> H, and a section H -> Z
        picking representative cycles for the generators.
        """
        if n in self._hcache:
            return self._hcache[n]
        out = self._homology_data(n)
        self._hcache[n] = out
        return out

    def _homology_data(self, n):
        Cn = self.module(n)
        if n < self.lo or n > self.hi:
            Zm = FPModule.zero(self.ring)
            return HomologyData(Zm, Zm, zero_map(Zm, Cn), identity_map(Zm),
                                identity_map(Zm))
        if n == self.lo and (n - 1) not in self.modules:
            Z, incl = Cn, identity_map(Cn)
        else:
            Z, incl = self.diff(n).kernel()
        if (n + 1) in self.modules:
            g = self.diff(n + 1).factor_through(incl)
            if g is None:
                raise InvalidInput("boundaries do not land in cycles")
            H_raw = FPModule(self.ring, Z.ngens, Z.relations + g.cols())
        else:
            H_raw = Z
        from .modules import minimize_presentation
        H, fwd, bwd = minimize_presentation(H_raw)
        proj = ModuleMap(Z, H, fwd.matrix, check=False)
        rep = ModuleMap(H, Z, bwd.matrix, check=False)
        return HomologyData(H, Z, incl, proj, rep)

    # -- complex algebra -----------------------------------------------------

    def shift(self, k):
        """C[k]_n = C_(n-k); differentials pick up the sign (-1)^k."""
        mods = {n + k: M for n, M in self.modules.items()}
        sign = self.ring.el(-1 if k % 2 else 1)
        diffs = {n + k: d.scale(sign) for n, d in self.diffs.items()}
        return ChainComplex(self.ring, mods, diffs, check=False)

    def tensor_module(self, N):
        mods = {n: tensor(M, N) for n, M in self.modules.items()}
        diffs = {n: tensor_map(d, N) for n, d in self.diffs.items()}
        return ChainComplex(self.ring, mods, diffs, check=False)

    def hom_into_module(self, N):
        """Hom(C, N) for a complex of frees, placed in negative degrees."""
        ring = self.ring
        homs = {}
        for n, M in self.modules.items():
            if M.relations:
                raise InvalidInput("hom_into_module expects free levels")
            homs[n] = _module_power(N, M.ngens)
        mods = {-n: H for n, H in homs.items()}
        diffs = {}
        for n, d in self.diffs.items():
            # precomposition Hom(C_(n-1), N) -> Hom(C_n, N), degree -(n-1) -> -n
            src, tgt = homs[n - 1], homs[n]
            gN = N.ngens
            mat = [[ring.zero()] * src.ngens for _ in range(tgt.ngens)]
            for i in range(d.target.ngens):      # gens of C_(n-1)
                for t in range(d.source.ngens):  # gens of C_n
                    c = d.matrix[i][t]
                    if c.is_zero():
                        continue
                    for j in range(gN):
                        mat[t * gN + j][i * gN + j] = c
            diffs[-(n - 1)] = ModuleMap(src, tgt, mat, check=False)
        return ChainComplex(ring, mods, diffs, check=False)

    def truncate_ge(self, n):
        """tau_>=n: H_i preserved for i >= n, zero below."""
        if n > self.hi:
            return ChainComplex.zero(self.ring)
        if n <= self.lo:
            return self
        Z, incl = self.diff(n).kernel()
        mods = {m: M for m, M in self.modules.items() if m > n}
        mods[n] = Z
        diffs = {m: d for m, d in self.diffs.items() if m > n + 1}
        if (n + 1) in self.modules:
            g = self.diff(n + 1).factor_through(incl)
            diffs[n + 1] = g
        return ChainComplex(self.ring, mods, diffs, check=False)

    def truncate_le(self, n):
        """tau_<=n: H_i preserved for i <= n, zero above."""
        if n < self.lo:
            return ChainComplex.zero(self.ring)
        if n >= self.hi:
            return self
        Q, proj = self.diff(n + 1).cokernel()
        mods = {m: M for m, M in self.modules.items() if m < n}
        mods[n] = Q
        diffs = {m: d for m, d in self.diffs.items() if m < n}
        if n in self.diffs:
            d = self.diffs[n]
            diffs[n] = ModuleMap(Q, d.target, d.matrix, check=True)
        return ChainComplex(self.ring, mods, diffs, check=False)

    def direct_sum(self, other):
        from .modules import direct_sum as msum
        mods, inc1, inc2 = {}, {}, {}
        for n in set(self.modules) | set(other.modules):
            S, i1, i2 = msum(self.module(n), other.module(n))
            mods[n], inc1[n], inc2[n] = S, i1, i2
        diffs = {}
        for n in set(self.diffs) | set(other.diffs):
            d1, d2 = self.diff(n), other.diff(n)
            S, T = mods.get(n), mods.get(n - 1)
            if S is None or T is None:
                continue
            mat = [[self.ring.zero()] * S.ngens for _ in range(T.ngens)]
            _paste(mat, d1.matrix, 0, 0)
            _paste(mat, d2.matrix, d1.target.ngens, d1.source.ngens)
            diffs[n] = ModuleMap(S, T, mat, check=False)
        return ChainComplex(self.ring, mods, diffs, check=False)

    def tensor_complex(self, other):
        """Totalized tensor product of bounded complexes."""
        ring = self.ring
        pieces = {}
        for p, Mp in self.modules.items():
            for q, Nq in other.modules.items():
                pieces[(p, q)] = tensor(Mp, Nq)
        mods = {}
        offsets = {}
        for (p, q), T in sorted(pieces.items()):
            n = p + q
            offsets[(p, q)] = mods.get(n, FPModule.zero(ring)).ngens if n in mods else 0
            if n in mods:
                combined = FPModule(ring, mods[n].ngens + T.ngens,
                                    [tuple(col) + (ring.zero(),) * T.ngens
                                     for col in mods[n].relations]
                                    + [(ring.zero(),) * mods[n].ngens + tuple(col)
                                       for col in T.relations])
                mods[n] = combined
            else:
                mods[n] = T
        diffs = {}
        for n in sorted(mods):
            if (n - 1) not in mods:
                continue
            S, T = mods[n], mods[n - 1]
            mat = [[ring.zero()] * S.ngens for _ in range(T.ngens)]
            for (p, q), piece in pieces.items():
                if p + q != n:
                    continue
                src_off = offsets[(p, q)]
                if p - 1 + q == n - 1 and (p - 1, q) in pieces and p in self.diffs:
                    dm = tensor_map(self.diffs[p], other.module(q))
                    _paste(mat, dm.matrix, offsets[(p - 1, q)], src_off)
                if (p, q - 1) in pieces and q in other.diffs:
                    dm = _tensor_map_right(self.module(p), other.diffs[q])
                    sign = ring.el(-1 if p % 2 else 1)
                    dm = dm.scale(sign)
                    _paste(mat, dm.matrix, offsets[(p, q - 1)], src_off)
            diffs[n] = ModuleMap(S, T, mat, check=False)
        return ChainComplex(ring, mods, diffs, check=False)

    def __repr__(self):
        return f"<ChainComplex degrees [{self.lo},{self.hi}] over {self.ring}>"


def _paste(mat, block, row_off, col_off):
    for i, row in enumerate(block):
        for j, e in enumerate(row):
            mat[row_off + i][col_off + j] = e


def _module_power(N, r):
    """N^r flattened as (i, j) -> i*N.ngens + j."""
    ring = N.ring
    g = r * N.ngens
    rels = []
    for i in range(r):
        for col in N.relations:
            vec = [ring.zero()] * g
            for j in range(N.ngens):
                vec[i * N.ngens + j] = col[j]
            rels.append(tuple(vec))
    return FPModule(ring, g, rels)


def _tensor_map_right(M, g):
    """id_M (x) g."""
    ring = g.ring
    S = tensor(M, g.source)
    T = tensor(M, g.target)
    mat = [[ring.zero()] * S.ngens for _ in range(T.ngens)]
    for i in range(M.ngens):
        for a in range(g.target.ngens):
            for b in range(g.source.ngens):
                c = g.matrix[a][b]
                if not c.is_zero():
                    mat[i * g.target.ngens + a][i * g.source.ngens + b] = c
    return ModuleMap(S, T, mat, check=False)


class ChainMap:
    def __init__(self, source, target, maps, check=True):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        if check:
            for n in set(source.diffs) | {m + 1 for m in self.maps}:
                f_lo = self.maps.get(n - 1, zero_map(source.module(n - 1),
                                                     target.module(n - 1)))
                f_hi = self.maps.get(n, zero_map(source.module(n), target.module(n)))
                left = f_lo.compose(source.diff(n))
                right = target.diff(n).compose(f_hi)
                if not left.equals(right):
                    raise InvalidInput(f"chain map does not commute in degree {n}")

    def map(self, n):
        return self.maps.get(n, zero_map(self.source.module(n), self.target.module(n)))


def cone(f):
    """cone(f)_n = Y_n + X_(n-1); d(y, x) = (dy + fx, -dx)."""
    from .modules import direct_sum
    X, Y = f.source, f.target
    ring = X.ring
    lo = min(Y.lo, X.lo + 1)
    hi = max(Y.hi, X.hi + 1)
    mods = {}
    for n in range(lo, hi + 1):
        S, _, _ = direct_sum(Y.module(n), X.module(n - 1))
        mods[n] = S
    diffs = {}
    for n in range(lo + 1, hi + 1):
        Tn, Tn1 = mods[n], mods[n - 1]
        mat = [[ring.zero()] * Tn.ngens for _ in range(Tn1.ngens)]
        _paste(mat, Y.diff(n).matrix, 0, 0)
        _paste(mat, f.map(n - 1).matrix, 0, Y.module(n).ngens)
        dx = X.diff(n - 1).scale(ring.el(-1))
        _paste(mat, dx.matrix, Y.module(n - 1).ngens, Y.module(n).ngens)
        diffs[n] = ModuleMap(Tn, Tn1, mat, check=False)
    return ChainComplex(ring, mods, diffs, check=True)


class HomologyData:
    """H with its cycle-level certificates: proj . rep = id on H."""

    def __init__(self, H, Z, incl, proj, rep):
        self.H = H
        self.Z = Z
        self.incl = incl
        self.proj = proj
        self.rep = rep


def induced_on_homology(f, n):
    """H_n(f): the map on homology induced by a chain map."""
    src = f.source.homology_data(n)
    tgt = f.target.homology_data(n)
    cols = []
    for t in range(src.H.ngens):
        z = src.rep.col(t)                    # representative cycle
        v = f.map(n).apply(src.incl.apply(z))
        lifted = tgt.incl.lift_element(v)
        if lifted is None:
            raise InvalidInput("chain map does not preserve cycles")
        cols.append(tgt.proj.apply(lifted))
    mat = [[cols[j][i] for j in range(src.H.ngens)]
           for i in range(tgt.H.ngens)]
    return ModuleMap(src.H, tgt.H, mat, check=True)


def complex_algebra(op, *args):
    """Dispatcher: cone | shift | tensor | hom | truncate_ge | truncate_le | total."""
    if op == "cone":
        return cone(*args)
    if op == "shift":
        return args[0].shift(args[1])
    if op == "tensor":
        return args[0].tensor_complex(args[1])
    if op == "hom":
        return hom_complex(*args)
    if op == "truncate_ge":
        return args[0].truncate_ge(args[1])
    if op == "truncate_le":
        return args[0].truncate_le(args[1])
    if op == "total":
        return total_complex(*args)
    raise InvalidInput(f"unknown complex operation {op!r}")


def hom_complex(C, D):
    """Hom(C, D)_n = prod_p Hom(C_p, D_(p+n)); d(f) = d.f - (-1)^|f| f.d."""
    ring = C.ring
    homs = {}
    for p in C.degrees():
        for q in D.degrees():
            homs[(p, q)] = HomModule(C.module(p), D.module(q))
    mods = {}
    offsets = {}
    for (p, q), hm in sorted(homs.items()):
        n = q - p
        off = mods[n].ngens if n in mods else 0
        offsets[(p, q)] = off
        piece = hm.module
        if n in mods:
            prev = mods[n]
            mods[n] = FPModule(ring, prev.ngens + piece.ngens,
                               [tuple(col) + (ring.zero(),) * piece.ngens
                                for col in prev.relations]
                               + [(ring.zero(),) * prev.ngens + tuple(col)
                                  for col in piece.relations])
        else:
            mods[n] = piece
    diffs = {}
    for n in sorted(mods):
        if (n - 1) not in mods:
            continue
        S, T = mods[n], mods[n - 1]
        mat = [[ring.zero()] * S.ngens for _ in range(T.ngens)]
        for (p, q), hm in homs.items():
            if q - p != n:
                continue
            src_off = offsets[(p, q)]
            sign = ring.el(-1 if n % 2 else 1)
            for t in range(hm.module.ngens):
                fmap = hm.interp(hm.module.gen(t))
                # post-compose with d_D
                if (p, q - 1) in homs:
                    tgt_hm = homs[(p, q - 1)]
                    comp = D.diff(q).compose(fmap)
                    coords = tgt_hm.coords(comp)
                    for i, c in enumerate(coords):
                        mat[offsets[(p, q - 1)] + i][src_off + t] = \
                            mat[offsets[(p, q - 1)] + i][src_off + t] + c
                # pre-compose with d_C, sign -(-1)^n
                if (p + 1, q) in homs:
                    tgt_hm = homs[(p + 1, q)]
                    comp = fmap.compose(C.diff(p + 1)).scale(ring.el(-1) * sign)
                    coords = tgt_hm.coords(comp)
                    for i, c in enumerate(coords):
                        mat[offsets[(p + 1, q)] + i][src_off + t] = \
                            mat[offsets[(p + 1, q)] + i][src_off + t] + c
        diffs[n] = ModuleMap(S, T, mat, check=False)
    return ChainComplex(ring, mods, diffs, check=True)


def total_complex(ring, pieces, horiz, vert):
    """Flatten a bounded bicomplex; vertical maps get the sign (-1)^p.

    pieces: {(p, q): FPModule}; horiz: {(p, q): map to (p-1, q)};
    vert: {(p, q): map to (p, q-1)}.
    """
    mods, offsets = {}, {}
    for (p, q), piece in sorted(pieces.items()):
        n = p + q
        off = mods[n].ngens if n in mods else 0
        offsets[(p, q)] = off
        if n in mods:
            prev = mods[n]
            mods[n] = FPModule(ring, prev.ngens + piece.ngens,
                               [tuple(col) + (ring.zero(),) * piece.ngens
                                for col in prev.relations]
                               + [(ring.zero(),) * prev.ngens + tuple(col)
                                  for col in piece.relations])
        else:
            mods[n] = piece
    diffs = {}
    for n in sorted(mods):
        if (n - 1) not in mods:
            continue
        S, T = mods[n], mods[n - 1]
        mat = [[ring.zero()] * S.ngens for _ in range(T.ngens)]
        for (p, q) in pieces:
            if p + q != n:
                continue
            if (p, q) in horiz and (p - 1, q) in pieces:
                _paste(mat, horiz[(p, q)].matrix, offsets[(p - 1, q)], offsets[(p, q)])
            if (p, q) in vert and (p, q - 1) in pieces:
                sign = ring.el(-1 if p % 2 else 1)
                _paste(mat, vert[(p, q)].scale(sign).matrix,
                       offsets[(p, q - 1)], offsets[(p, q)])
        diffs[n] = ModuleMap(S, T, mat, check=False)
    return ChainComplex(ring, mods, diffs, check=True)
