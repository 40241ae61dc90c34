"""F2[U_1..U_m] chain complexes, mapping cones, hyperboxes, compression.

Elements are F2-combinations of generator * monomial; a monomial is an
exponent tuple.  Gradings are stored doubled (so half-integer Maslov
gradings stay integers); each U variable drops the doubled grading by 4 and
the differential drops it by 2.
"""

from __future__ import annotations

from . import f2


class NotAComplex(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class NonDivisibleByTorus(ValueError):
    pass


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def zero_mono(nvars):
    return (0,) * nvars


def add_into(entries, tgt, mono):
    """F2-add one generator*monomial term into a dict-of-sets element."""
    s = entries.setdefault(tgt, set())
    if mono in s:
        s.remove(mono)
        if not s:
            del entries[tgt]
    else:
        s.add(mono)


def elem_add(a, b):
    out = {k: set(v) for k, v in a.items()}
    for k, monos in b.items():
        for m in monos:
            add_into(out, k, m)
    return out


class GradedComplexF2U:
    """Finitely generated complex over F2[U_1..U_m].

    diff[i] is a dict target_index -> set of exponent tuples.  var_labels
    name the variables; identify_groups (optional) records which variables
    act identically on homology.
    """

    def __init__(self, gens, gr2, var_labels, diff=None):
        self.gens = list(gens)
        self.gr2 = list(gr2)
        self.var_labels = list(var_labels)
        self.nvars = len(var_labels)
        self.index = {g: i for i, g in enumerate(self.gens)}
        self.diff = diff if diff is not None else [dict() for _ in self.gens]

    def add_diff(self, src, tgt, mono):
        add_into(self.diff[src], tgt, mono)

    def apply_diff(self, element):
        out = {}
        for i, monos in element.items():
            for m in monos:
                for j, dmonos in self.diff[i].items():
                    for dm in dmonos:
                        add_into(out, j, mono_mul(m, dm))
        return out

    def check_d_squared(self):
        for i in range(len(self.gens)):
            dd = self.apply_diff(self.diff[i])
            if dd:
                raise NotAComplex("d^2 != 0 at generator %r" % (self.gens[i],))
        return True

    def check_grading(self):
        """Every differential term drops the doubled grading by exactly 2."""
        for i, row in enumerate(self.diff):
            for j, monos in row.items():
                for m in monos:
                    drop = self.gr2[i] - (self.gr2[j] - 4 * sum(m))
                    if drop != 2:
                        raise NotAComplex(
                            "differential term %r -> %r drops grading by %s/2"
                            % (self.gens[i], self.gens[j], drop))
        return True

    def set_var_zero(self, var_idx):
        """Quotient complex with one U variable set to zero."""
        diff = []
        for row in self.diff:
            new = {}
            for j, monos in row.items():
                kept = {m for m in monos if m[var_idx] == 0}
                if kept:
                    new[j] = kept
            diff.append(new)
        return GradedComplexF2U(self.gens, self.gr2, self.var_labels, diff)


def cone_tensor(cx, factors):
    """Tensor with mapping cones R --(U_a + U_b)--> R.

    factors is a list of (var_a, var_b) index pairs.  New generators are
    (g, bits); bit j = 1 is the R side of factor j, with doubled grading
    gr2(g) + 2 * sum(bits).
    """
    k = len(factors)
    gens, gr2 = [], []
    for bits in range(1 << k):
        for i, g in enumerate(cx.gens):
            gens.append((g, bits))
            gr2.append(cx.gr2[i] + 2 * bin(bits).count("1"))
    out = GradedComplexF2U(gens, gr2, cx.var_labels)
    nv = cx.nvars
    for bits in range(1 << k):
        for i, g in enumerate(cx.gens):
            src = out.index[(g, bits)]
            for j, monos in cx.diff[i].items():
                for m in monos:
                    out.add_diff(src, out.index[(cx.gens[j], bits)], m)
            for j, (va, vb) in enumerate(factors):
                if not bits & (1 << j):
                    tgt = out.index[(g, bits | (1 << j))]
                    for v in (va, vb):
                        m = [0] * nv
                        m[v] = 1
                        out.add_diff(src, tgt, tuple(m))
    return out


# -- homology over F2[U]/U^N after identifying all variables -----------

def _expanded_blocks(cx, ncut):
    """Basis (gen, k), k < ncut, of cx ox F2[U]/U^ncut with all variables
    identified, grouped by doubled grading."""
    blocks = {}
    for i, g in enumerate(cx.gens):
        for k in range(ncut):
            blocks.setdefault(cx.gr2[i] - 4 * k, []).append((i, k))
    order = {}
    for g2, items in blocks.items():
        items.sort()
        for pos, it in enumerate(items):
            order[it] = pos
    return blocks, order


def _diff_matrix(cx, blocks, order, ncut, zero_vars=frozenset()):
    """For each doubled grading, the matrix of d into the next block down.
    Rows are sources as bitmasks over targets."""
    mats = {}
    for g2, items in blocks.items():
        tgt_items = blocks.get(g2 - 2, [])
        rows = []
        for (i, k) in items:
            row = 0
            for j, monos in cx.diff[i].items():
                for m in monos:
                    if any(m[v] for v in zero_vars):
                        continue
                    k2 = k + sum(m[v] for v in range(cx.nvars)
                                 if v not in zero_vars)
                    if k2 < ncut:
                        row ^= 1 << order[(j, k2)]
            rows.append(row)
        mats[g2] = (rows, len(tgt_items))
    return mats


def homology_ranks(cx, ncut, zero_vars=frozenset()):
    """Graded F2 ranks of H(cx ox F2[U]/U^ncut), all variables identified
    (any in zero_vars set to 0 instead).  Returns {doubled grading: rank}."""
    cx.check_d_squared()
    blocks, order = _expanded_blocks(cx, ncut)
    mats = _diff_matrix(cx, blocks, order, ncut, zero_vars)
    rk = {g2: f2.rank(rows) for g2, (rows, _) in mats.items()}
    out = {}
    for g2, items in blocks.items():
        dim = len(items)
        r_out = rk.get(g2, 0)
        r_in = rk.get(g2 + 2, 0)
        h = dim - r_out - r_in
        if h:
            out[g2] = h
    return out


def homology_with_u(cx, ncut, zero_vars=frozenset()):
    """Homology plus the ranks of the identified U-power actions on it.

    Returns (ranks, u_rank) with ranks[g2] = dim H_{g2} and
    u_rank[(g2, t)] = rank of U^t : H_{g2} -> H_{g2 - 4t}, computed from
    explicit cycle bases (U of a boundary is a boundary, so the induced map
    is rank(U^t Z + B) - rank(B) on the target block).
    """
    blocks, order = _expanded_blocks(cx, ncut)
    mats = _diff_matrix(cx, blocks, order, ncut, zero_vars)

    cycles = {g2: f2.kernel_basis(rows, len(rows))
              for g2, (rows, _t) in mats.items()}
    bnd_rows = {g2 - 2: rows for g2, (rows, _t) in mats.items()}

    ranks = {}
    for g2, kb in cycles.items():
        elim = f2.Eliminator()
        for row in bnd_rows.get(g2, []):
            elim.add(row)
        hrank = sum(1 for v in kb if elim.add(v))
        if hrank:
            ranks[g2] = hrank

    def u_shift(vec, g2, power):
        tgt_order = {it: p for p, it in enumerate(blocks.get(g2 - 4 * power, []))}
        out = 0
        for pos, (i, k) in enumerate(blocks[g2]):
            if vec >> pos & 1 and (i, k + power) in tgt_order:
                out ^= 1 << tgt_order[(i, k + power)]
        return out

    u_rank = {}
    for g2 in ranks:
        for t in range(1, ncut + 1):
            tg = g2 - 4 * t
            if tg not in blocks:
                u_rank[(g2, t)] = 0
                continue
            elim = f2.Eliminator()
            for row in bnd_rows.get(tg, []):
                elim.add(row)
            u_rank[(g2, t)] = sum(1 for v in cycles.get(g2, [])
                                  if elim.add(u_shift(v, g2, t)))
    return ranks, u_rank


def tower_table(cx, ncut, zero_vars=frozenset()):
    """F2[U]-tower decomposition of the homology: list of
    (doubled top grading, length) with length None meaning >= ncut (not
    distinguishable from an infinite tower at this truncation).

    Barcode counting for the graded nilpotent U action, with
    r_t(g) = rank(U^t|_{H_g}):
      #bars(top g, len >= t+1) = r_t(g) - r_{t+1}(g + 4).
    """
    ranks, u_rank = homology_with_u(cx, ncut, zero_vars)

    def r(g2, t):
        if t == 0:
            return ranks.get(g2, 0)
        return u_rank.get((g2, t), 0)

    towers = []
    for g2 in sorted(ranks, reverse=True):
        for t in range(1, ncut):
            exact = (r(g2, t - 1) - r(g2 + 4, t)) - (r(g2, t) - r(g2 + 4, t + 1))
            towers.extend([(g2, t)] * exact)
        at_least_ncut = r(g2, ncut - 1) - r(g2 + 4, ncut)
        towers.extend([(g2, None)] * at_least_ncut)
    return towers


def _grading_floor(cx):
    # genuine tower tops live in the generators' grading range; anything
    # far below is truncation debris (Tor echoes at gradings ~ -4 ncut)
    return min(cx.gr2, default=0) - 2


def stable_tower_report(cx, ncut, zero_vars=frozenset()):
    """Tower table computed at ncut and 2*ncut with the stabilization
    protocol: truncation echoes below the generator grading range are
    dropped, lengths >= ncut report as None ("infinite at this cutoff").
    Returns (towers, stable_flag)."""
    floor = _grading_floor(cx)

    def filt(towers):
        out = [(g, None if (L is None or L >= ncut) else L)
               for (g, L) in towers if g >= floor]
        return sorted(out, key=lambda t: (t[0], -1 if t[1] is None else t[1]))

    t1 = filt(tower_table(cx, ncut, zero_vars))
    t2 = filt(tower_table(cx, 2 * ncut, zero_vars))
    return t2, t1 == t2


def stable_rank_report(cx, ncut, zero_vars=frozenset()):
    """Graded ranks agreeing between cutoffs ncut and 2*ncut, above the
    echo floor.  Returns (ranks, stable_flag)."""
    floor = _grading_floor(cx)
    r1 = homology_ranks(cx, ncut, zero_vars)
    r2 = homology_ranks(cx, 2 * ncut, zero_vars)
    kept = {g: r for g, r in r2.items() if g >= floor and r1.get(g) == r}
    stable = all(r1.get(g) == r2.get(g)
                 for g in set(r1) | set(r2) if g >= floor)
    return kept, stable


# -- chain maps and hyperboxes ------------------------------------------

class ChainMap:
    """F2[U]-linear map between complexes sharing a variable list.

    entries[src] is a dict tgt -> set of monomials; degree2 is the doubled
    grading shift (target grading - source grading + 4 * |monomial|).
    """

    def __init__(self, src, dst, entries=None, degree2=0):
        self.src = src
        self.dst = dst
        self.degree2 = degree2
        self.entries = entries if entries is not None else [dict() for _ in src.gens]

    @classmethod
    def identity(cls, cx):
        ent = [{i: {zero_mono(cx.nvars)}} for i in range(len(cx.gens))]
        return cls(cx, cx, ent, 0)

    @classmethod
    def zero(cls, src, dst, degree2=0):
        return cls(src, dst, None, degree2)

    def add_entry(self, src_idx, tgt_idx, mono):
        add_into(self.entries[src_idx], tgt_idx, mono)

    def apply(self, element):
        out = {}
        for i, monos in element.items():
            for m in monos:
                for j, fmonos in self.entries[i].items():
                    for fm in fmonos:
                        add_into(out, j, mono_mul(m, fm))
        return out

    def compose(self, other):
        """self o other (apply other first)."""
        assert other.dst is self.src or other.dst.gens == self.src.gens
        ent = []
        for i in range(len(other.src.gens)):
            ent.append(self.apply(other.entries[i]))
        return ChainMap(other.src, self.dst, ent,
                        self.degree2 + other.degree2)

    def add(self, other):
        assert self.degree2 == other.degree2
        ent = [elem_add(a, b) for a, b in zip(self.entries, other.entries)]
        return ChainMap(self.src, self.dst, ent, self.degree2)

    def commutator_with_d(self):
        """d_dst o f + f o d_src, as a ChainMap."""
        ent = []
        for i in range(len(self.src.gens)):
            a = self.dst.apply_diff(self.entries[i])
            b = self.apply(self.src.diff[i])
            ent.append(elem_add(a, b))
        return ChainMap(self.src, self.dst, ent, self.degree2 - 2)

    def is_chain_map(self):
        return all(not e for e in self.commutator_with_d().entries)

    def is_zero(self):
        return all(not e for e in self.entries)

    def check_degree(self):
        for i, row in enumerate(self.entries):
            for j, monos in row.items():
                for m in monos:
                    d2 = self.dst.gr2[j] - 4 * sum(m) - self.src.gr2[i]
                    if d2 != self.degree2:
                        raise ShapeMismatch("map entry of wrong degree")
        return True


class Hyperbox:
    """Hyperbox of chain complexes of size d = (d_1..d_n).

    complexes[eps] for eps in E(d); maps[(eps0, off)] : C^eps0 -> C^(eps0+off)
    for off in {0,1}^n \\ 0 (off == 0 is the internal differential).
    """

    def __init__(self, shape, complexes, maps):
        self.shape = tuple(shape)
        self.n = len(self.shape)
        self.complexes = dict(complexes)
        self.maps = dict(maps)

    def vertices(self):
        import itertools
        return itertools.product(*[range(d + 1) for d in self.shape])

    def map_at(self, eps0, off):
        if all(o == 0 for o in off):
            cx = self.complexes[eps0]
            f = ChainMap(cx, cx, [dict(r) for r in cx.diff], -2)
            return f
        key = (tuple(eps0), tuple(off))
        if key in self.maps:
            return self.maps[key]
        src = self.complexes[tuple(eps0)]
        dst = self.complexes[tuple(a + b for a, b in zip(eps0, off))]
        deg2 = 2 * sum(off) - 2
        return ChainMap.zero(src, dst, deg2)

    def check(self):
        """Hyperbox relations: for every eps0 and every off in {0,1}^n,
        sum over splittings off = a + b of (map a after map b) vanishes."""
        import itertools
        for eps0 in self.vertices():
            for off in itertools.product((0, 1), repeat=self.n):
                tgt = tuple(a + b for a, b in zip(eps0, off))
                if any(t > d for t, d in zip(tgt, self.shape)):
                    continue
                total = None
                for split in itertools.product(*[range(o + 1) for o in off]):
                    rest = tuple(o - s for o, s in zip(off, split))
                    mid = tuple(a + b for a, b in zip(eps0, split))
                    f = self.map_at(mid, rest).compose(self.map_at(eps0, split))
                    total = f if total is None else total.add(f)
                if total is not None and not total.is_zero():
                    return False
        return True


class UnsupportedDimension(ValueError):
    pass


def compress(box):
    """Compress a hyperbox of dimension <= 2 to a unit hypercube.

    Edges become compositions of the edge maps along each axis; a 2-face
    acquires the staircase homotopy summing, over the cells of the box,
    pre-edge maps, the cell's diagonal, and post-edge maps.
    """
    n = box.n
    if n == 0:
        return Hyperbox((), dict(box.complexes), {})
    if n == 1:
        (d,) = box.shape
        c0, c1 = box.complexes[(0,)], box.complexes[(d,)]
        f = ChainMap.identity(c0)
        for k in range(d):
            f = box.map_at((k,), (1,)).compose(f)
        if d == 0:
            f = ChainMap.identity(c0)
        return Hyperbox((1,) if d else (0,),
                        {(0,): c0, (1,): c1} if d else {(0,): c0},
                        {((0,), (1,)): f} if d else {})
    if n != 2:
        raise UnsupportedDimension(
            "compression implemented for hyperbox dimension <= 2")
    d1, d2 = box.shape
    if d1 == 0 or d2 == 0:
        # degenerate: compress the surviving axis
        raise UnsupportedDimension("degenerate 2-d hyperbox; drop the axis first")

    def edge_comp(axis, fixed, lo, hi):
        """Composite of edge maps along one axis at the given other-axis value."""
        if axis == 0:
            cx = box.complexes[(lo, fixed)]
        else:
            cx = box.complexes[(fixed, lo)]
        f = ChainMap.identity(cx)
        for k in range(lo, hi):
            eps0 = (k, fixed) if axis == 0 else (fixed, k)
            off = (1, 0) if axis == 0 else (0, 1)
            f = box.map_at(eps0, off).compose(f)
        return f

    corners = {(0, 0): box.complexes[(0, 0)],
               (1, 0): box.complexes[(d1, 0)],
               (0, 1): box.complexes[(0, d2)],
               (1, 1): box.complexes[(d1, d2)]}
    maps = {
        ((0, 0), (1, 0)): edge_comp(0, 0, 0, d1),
        ((0, 1), (1, 0)): edge_comp(0, d2, 0, d1),
        ((0, 0), (0, 1)): edge_comp(1, 0, 0, d2),
        ((1, 0), (0, 1)): edge_comp(1, d1, 0, d2),
    }
    total = None
    for a in range(d1):
        for b in range(d2):
            pre_i = edge_comp(0, 0, 0, a)          # along axis 1 at level 0
            pre_j = edge_comp(1, a, 0, b)          # up at column a
            diag = box.map_at((a, b), (1, 1))
            post_j = edge_comp(1, a + 1, b + 1, d2)
            post_i = edge_comp(0, d2, a + 1, d1)
            f = post_i.compose(post_j).compose(diag).compose(pre_j).compose(pre_i)
            total = f if total is None else total.add(f)
    maps[((0, 0), (1, 1))] = total
    return Hyperbox((1, 1), corners, maps)
