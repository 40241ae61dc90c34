"""Enhanced domains on marked grids: index, positivity, bounded enumeration.

A marked grid ("model") is a grid whose counted markings each carry a U
variable, with some of them marked for destabilization.  The destabilization
point p_j of a marking in square (c, r) is the corner point (c, r) (lower
left of the square).  An enhanced domain is (D, eps, rho): a 2-chain of
squares, one L/R bit per destabilization point, and the real multiplicity
there.  With a, b, c, d the multiplicities NW, NE, SW, SE of p_j (so b is
the total multiplicity at the marking) and f_j = b_j - rho_j the fake
multiplicity, positivity demands D >= 0 and

    a_j >= f_j,  b_j >= f_j,  c_j >= f_j + eps_j - 1,  d_j >= f_j + eps_j,

and the index is Lipshitz's corner-average count minus sum(eps_j + 2 f_j).

Pairs [x, y~] are witnessed by such domains up to the pair-preserving
lattice (column minus row through a counted marking, column through a
destabilized one); feasibility questions about witnesses reduce to small
integer systems solved exactly by interval propagation plus branching.
"""

from __future__ import annotations

import itertools

from .griddiag import GridDiagram, destabilize_diagram, marking_set, Marking
from .gradings import GradingCalculator


class BoundTooSmall(Warning):
    pass


# ---------------------------------------------------------------------
# marked grids

class ModelGrid:
    """A grid with counted, variable-carrying markings and destabilization
    points.

    Fields:
      n            grid size
      marks        tuple of (col, row) counted markings
      mark_var     variable index (into var_labels) per marking
      var_labels   the variable universe
      destab       indices into marks of the destabilized markings
      below_exps   per destabilized marking, the exponent vector of the
                   full-row annulus one row below its point
      diagram      honest diagram (for x-side Maslov gradings)
      dest_diagram honest destabilized diagram (for y-side gradings)
    """

    def __init__(self, n, marks, mark_var, var_labels, destab,
                 diagram, dest_diagram, dest_col_map, dest_row_map):
        self.n = n
        self.marks = tuple(marks)
        self.mark_var = tuple(mark_var)
        self.var_labels = tuple(var_labels)
        self.destab = tuple(destab)
        self.k = len(destab)
        self.diagram = diagram
        self.dest_diagram = dest_diagram
        self.dest_col_map = tuple(dest_col_map)
        self.dest_row_map = tuple(dest_row_map)
        self._calc_x = GradingCalculator(diagram) if diagram else None
        self._calc_y = GradingCalculator(dest_diagram) if dest_diagram else None
        self.mark_at = {}
        for idx, (c, r) in enumerate(self.marks):
            self.mark_at.setdefault((c, r), []).append(idx)
        self.below_exps = [self._annulus_exps((self.marks[j][1] - 1) % n)
                           for j in self.destab]
        self._col_of_new = {c: i for i, c in enumerate(self.dest_col_map)}
        self._row_of_new = {r: i for i, r in enumerate(self.dest_row_map)}

    def _annulus_exps(self, row):
        exps = [0] * len(self.var_labels)
        for idx, (c, r) in enumerate(self.marks):
            if r == row:
                exps[self.mark_var[idx]] += 1
        return tuple(exps)

    @property
    def destab_points(self):
        return [self.marks[j] for j in self.destab]

    def maslov_x(self, x):
        return self._calc_x.maslov(x)

    def maslov_y(self, y):
        """Maslov grading of a final-point generator (destabilization points
        adjoined), inherited from the parent grid: with this normalization
        the trivial enhanced domain has index exactly 0, so pair degrees
        M(x) - M(y~) agree with the Lipshitz index of any witness."""
        return self._calc_x.maslov(y)

    def maslov_small(self, y):
        """The destabilized diagram's own planar-formula grading; differs
        from maslov_y by a constant per diagram."""
        return self._calc_y.maslov(self.compact_gen(y))

    def compact_gen(self, y):
        """Drop destabilized columns/rows and renumber."""
        return tuple(self._row_of_new[y[c]] for c in self.dest_col_map)

    def expand_gen(self, small):
        """Inverse of compact_gen: re-adjoin the destabilization points."""
        y = [None] * self.n
        for j in self.destab:
            c, r = self.marks[j]
            y[c] = r
        for i, c in enumerate(self.dest_col_map):
            y[c] = self.dest_row_map[small[i]]
        return tuple(y)

    def contains_destab_points(self, y):
        return all(y[c] == r for (c, r) in self.destab_points)

    def mono_degree_bound(self, x, y, eps, d):
        """Total U-exponent of a pair of index d: fixed by the gradings."""
        t2 = d - self.maslov_x(x) + self.maslov_y(y) + sum(eps)
        if t2 < 0 or t2 % 2:
            return None
        return t2 // 2


def model_from_marked_grid(o_row, destab_cols):
    """Section-3 style model: an O-only grid (one marking per column) with
    one variable per marking, destabilized at the given columns."""
    n = len(o_row)
    g = GridDiagram(o_row, [None] * n)
    marks = [(c, o_row[c]) for c in range(n)]
    var_labels = list(range(n))
    zset = [Marking('O', c, o_row[c], 0) for c in destab_cols]
    dest, col_map, row_map = _delete_rows_cols(o_row, destab_cols)
    return ModelGrid(n, marks, list(range(n)), var_labels,
                     list(destab_cols), g, dest, col_map, row_map)


def _delete_rows_cols(o_row, destab_cols):
    n = len(o_row)
    dead_c = set(destab_cols)
    dead_r = {o_row[c] for c in destab_cols}
    col_map = [c for c in range(n) if c not in dead_c]
    row_map = [r for r in range(n) if r not in dead_r]
    row_new = {r: i for i, r in enumerate(row_map)}
    small = GridDiagram([row_new[o_row[c]] for c in col_map],
                        [None] * len(col_map))
    return small, col_map, row_map


def model_from_diagram(g, z0, z):
    """The O-only model of a link diagram destabilized at z0, with the
    markings of z destabilization-marked: the counted markings are the O's
    of components untouched or touched through O's, the X's (relabeled) of
    components touched through X's, and all free markings; variables are
    inherited from g."""
    z0 = marking_set(g, z0)
    z = marking_set(g, z)
    both = marking_set(g, set(z0) | set(z))
    d0, col_map0, row_map0 = destabilize_diagram(g, z0)
    col_new = {c: i for i, c in enumerate(col_map0)}
    row_new = {r: i for i, r in enumerate(row_map0)}
    sign = {}
    for m in both:
        sign[m.comp] = +1 if m.kind == 'O' else -1
    var_labels = list(g.var_universe)
    var_idx = {v: i for i, v in enumerate(var_labels)}
    marks, mark_var = [], []
    for c_old in col_map0:
        comp = g.comp_of_col.get(c_old)
        s = sign.get(comp, +1) if comp is not None else None
        if comp is None or s == +1 or comp in {m.comp for m in z0}:
            # the surviving honest O of this column (possibly a relabeled X
            # from the z0 destabilization)
            c_new = col_new[c_old]
            marks.append((c_new, d0.o_row[c_new]))
            mark_var.append(var_idx[d0.var_of_o[c_new]])
        else:
            # component destabilized through its X's: count the X markings
            r_old = g.x_row[c_old]
            marks.append((col_new[c_old], row_new[r_old]))
            mark_var.append(var_idx[('c', comp)])
    destab = []
    for m in sorted(z, key=lambda m: m.col):
        c_new = col_new[m.col]
        r_new = row_new[m.row]
        destab.append(marks.index((c_new, r_new)))
    dest_d, col_map1, row_map1 = destabilize_diagram(
        d0, {_remap_marking(m, col_new, row_new) for m in z})
    return ModelGrid(d0.n, marks, mark_var, var_labels, destab,
                     d0, dest_d, col_map1, row_map1)


def _remap_marking(m, col_new, row_new):
    return Marking(m.kind, col_new[m.col], row_new[m.row], m.comp)


# ---------------------------------------------------------------------
# domains

def domain_between(x, y):
    """A canonical 2-chain from x to y (columns-major n x n tuple),
    row-normalized to minimum 0 in every row."""
    n = len(x)
    cols = []
    prev = [0] * n
    for c in range(n):
        if x[c] != y[c]:
            r = x[c]
            while r != y[c]:
                prev[r] += 1
                r = (r + 1) % n
        cols.append(prev[:])
    for r in range(n):
        m = min(col[r] for col in cols)
        if m:
            for col in cols:
                col[r] -= m
    return tuple(tuple(col) for col in cols)


def check_boundary(D, x, y):
    """The corner defect NE + SW - NW - SE at each point must be
    #x(point) - #y(point)."""
    n = len(x)
    for c in range(n):
        for r in range(n):
            defect = (D[c][r] + D[c - 1][r - 1] - D[c - 1][r] - D[c][r - 1])
            want = (1 if x[c] == r else 0) - (1 if y[c] == r else 0)
            if defect != want:
                return False
    return True


def lipshitz4(D, x, y):
    """4 * (sum of average corner multiplicities at the points of x and y)."""
    n = len(x)
    tot = 0
    for gen in (x, y):
        for c in range(n):
            r = gen[c]
            tot += (D[c][r] + D[c - 1][r] + D[c - 1][r - 1] + D[c][r - 1])
    return tot


class EnhancedDomain:
    """(D, eps, rho) between model generators x and y (y contains the
    destabilization points)."""

    def __init__(self, model, D, x, y, eps, rho):
        self.model = model
        self.D = tuple(tuple(col) for col in D)
        self.x = tuple(x)
        self.y = tuple(y)
        self.eps = tuple(eps)
        self.rho = tuple(rho)

    def corner_mults(self, j):
        c, r = self.model.marks[self.model.destab[j]]
        D = self.D
        a = D[c - 1][r]
        b = D[c][r]
        cc = D[c - 1][r - 1]
        d = D[c][r - 1]
        return a, b, cc, d

    def fake(self, j):
        _, b, _, _ = self.corner_mults(j)
        return b - self.rho[j]

    def index(self):
        i4 = lipshitz4(self.D, self.x, self.y)
        total = i4 - 4 * sum(e + 2 * self.fake(j)
                             for j, e in enumerate(self.eps))
        assert total % 4 == 0, "corner sums of a grid domain are integral"
        return total // 4

    def is_positive(self):
        if any(v < 0 for col in self.D for v in col):
            return False
        for j, e in enumerate(self.eps):
            a, b, cc, d = self.corner_mults(j)
            f = b - self.rho[j]
            if not (a >= f and b >= f and cc >= f + e - 1 and d >= f + e):
                return False
        return True

    def mark_mults(self):
        return [self.D[c][r] for (c, r) in self.model.marks]

    def mono(self):
        """Per-variable exponents of the final point: real multiplicities
        at destabilized markings, plain multiplicities elsewhere."""
        exps = [0] * len(self.model.var_labels)
        dest = set(self.model.destab)
        for idx, (c, r) in enumerate(self.model.marks):
            val = self.rho[self.model.destab.index(idx)] if idx in dest \
                else self.D[c][r]
            exps[self.model.mark_var[idx]] += val
        return tuple(exps)

    def pair(self):
        return Pair(self.x, self.y, self.eps, self.mono())

    def add_periodic(self, col_coef, row_coef, rho=None):
        """D + sum col_coef[c] * column_c + sum row_coef[r] * row_r."""
        D = [[self.D[c][r] + col_coef[c] + row_coef[r]
              for r in range(self.model.n)] for c in range(self.model.n)]
        return EnhancedDomain(self.model, D, self.x, self.y, self.eps,
                              self.rho if rho is None else rho)


def enhanced_index(e):
    return e.index()


def is_positive(e):
    return e.is_positive()


def index_is_invariant(e, col_coef, row_coef):
    """Index invariance under a pair-preserving periodic domain.  The
    caller supplies column/row coefficients whose marking counts vanish
    except at destabilized markings (where rho stays fixed)."""
    e2 = e.add_periodic(col_coef, row_coef)
    return e2.index() == e.index()


# ---------------------------------------------------------------------
# pairs and the witness solver

class Pair:
    """[x, y~]: final point y with eps markings and a per-variable monomial."""

    __slots__ = ("x", "y", "eps", "mono")

    def __init__(self, x, y, eps, mono):
        self.x = tuple(x)
        self.y = tuple(y)
        self.eps = tuple(eps)
        self.mono = tuple(mono)

    def key(self):
        return (self.x, self.y, self.eps, self.mono)

    def __eq__(self, other):
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Pair(x=%r, y=%r, eps=%r, mono=%r)" % self.key()

    def index(self, model):
        m_y = (model.maslov_y(self.y) + sum(self.eps)
               - 2 * sum(self.mono))
        return model.maslov_x(self.x) - m_y


class LinSolver:
    """Tiny exact solver for small integer systems: interval propagation
    to a fixpoint plus branching on the smallest domain.  Constraints are
    sum(coef * var) + const >= 0 (or == 0)."""

    def __init__(self):
        self.lo = []
        self.hi = []
        self.cons = []  # (terms, const, is_eq)

    def var(self, lo, hi):
        self.lo.append(lo)
        self.hi.append(hi)
        return len(self.lo) - 1

    def ge(self, terms, const):
        self.cons.append((tuple(terms), const, False))

    def eq(self, terms, const):
        self.cons.append((tuple(terms), const, True))

    def _propagate(self, lo, hi):
        def ceil_div(a, b):
            return -((-a) // b)

        changed = True
        while changed:
            changed = False
            for terms, const, is_eq in self.cons:
                smin = smax = const
                for cf, v in terms:
                    if cf > 0:
                        smin += cf * lo[v]
                        smax += cf * hi[v]
                    else:
                        smin += cf * hi[v]
                        smax += cf * lo[v]
                if smax < 0 or (is_eq and smin > 0):
                    return False
                for cf, v in terms:
                    cmin = cf * (lo[v] if cf > 0 else hi[v])
                    cmax = cf * (hi[v] if cf > 0 else lo[v])
                    rest_min = smin - cmin - const
                    rest_max = smax - cmax - const
                    # cf*v + rest + const >= 0, rest in [rest_min, rest_max]:
                    # so cf*v >= -rest_max - const, and for equalities also
                    # cf*v <= -rest_min - const
                    b1 = -rest_max - const
                    if cf > 0:
                        nlo = ceil_div(b1, cf)
                        if nlo > lo[v]:
                            lo[v] = nlo
                            changed = True
                    else:
                        nhi = b1 // cf
                        if nhi < hi[v]:
                            hi[v] = nhi
                            changed = True
                    if is_eq:
                        b2 = -rest_min - const
                        if cf > 0:
                            nhi = b2 // cf
                            if nhi < hi[v]:
                                hi[v] = nhi
                                changed = True
                        else:
                            nlo = ceil_div(b2, cf)
                            if nlo > lo[v]:
                                lo[v] = nlo
                                changed = True
                    if lo[v] > hi[v]:
                        return False
        return True

    def solve(self, mode="exists", limit=None):
        """mode 'exists' -> solution list or None; 'count' -> number of
        solutions (capped at limit); 'all' -> list of solutions."""
        lo = list(self.lo)
        hi = list(self.hi)
        found = []

        def rec(lo, hi):
            if not self._propagate(lo, hi):
                return False
            free = [v for v in range(len(lo)) if lo[v] < hi[v]]
            if not free:
                found.append(list(lo))
                return mode == "exists"
            v = min(free, key=lambda v: hi[v] - lo[v])
            mid = lo[v]
            for val in range(lo[v], hi[v] + 1):
                l2, h2 = list(lo), list(hi)
                l2[v] = h2[v] = val
                if rec(l2, h2):
                    return True
                if limit is not None and len(found) >= limit:
                    return True
            return False

        rec(lo, hi)
        if mode == "exists":
            return found[0] if found else None
        if mode == "count":
            return len(found)
        return found


def _witness_system(model, pair, B):
    """Linear system over row shifts a_r, column shifts b_c (gauge a_0 = 0)
    and real multiplicities rho_j, describing positive witnesses
    D = D0 + a (+) b of the pair with all multiplicities <= B."""
    n = model.n
    x = pair.x
    y = pair.y
    D0 = domain_between(x, y)
    top = max(v for col in D0 for v in col)
    sys = LinSolver()
    a = [sys.var(-top - B, top + B) for _ in range(n)]
    b = [sys.var(-top - B, top + B) for _ in range(n)]
    sys.eq([(1, a[0])], 0)
    for c in range(n):
        for r in range(n):
            sys.ge([(1, a[r]), (1, b[c])], D0[c][r])
            sys.ge([(-1, a[r]), (-1, b[c])], B - D0[c][r])
    rho = []
    dest_set = set(model.destab)
    for j, mk in enumerate(model.destab):
        c, r = model.marks[mk]
        rv = sys.var(0, sum(pair.mono))
        rho.append(rv)
        e = pair.eps[j]
        # f_j = D(c, r) - rho_j; corner inequalities at p_j = (c, r):
        #   NW >= f, SW >= f + e - 1, SE >= f + e   (NE >= f is rho >= 0)
        for (cc, rr, slack) in (((c - 1) % n, r, 0),
                                ((c - 1) % n, (r - 1) % n, 1 - e),
                                (c, (r - 1) % n, -e)):
            # D0[cc][rr] + a_rr + b_cc - (D0[c][r] + a_r + b_c - rho) + slack >= 0
            terms = [(1, a[rr]), (1, b[cc]), (-1, a[r]), (-1, b[c]), (1, rv)]
            sys.ge(terms, D0[cc][rr] - D0[c][r] + slack)
    # per-variable monomial equations
    by_var = {}
    for idx, (c, r) in enumerate(model.marks):
        by_var.setdefault(model.mark_var[idx], []).append(idx)
    for v, mono_v in enumerate(pair.mono):
        idxs = by_var.get(v, [])
        terms = []
        const = 0
        for idx in idxs:
            c, r = model.marks[idx]
            if idx in dest_set:
                terms.append((1, rho[model.destab.index(idx)]))
            else:
                terms.append((1, a[r]))
                terms.append((1, b[c]))
                const += D0[c][r]
        if not idxs:
            if mono_v:
                return None, None, None, None
            continue
        sys.eq(terms, const - mono_v)
    return sys, D0, (a, b), rho


def pair_is_positive(model, pair, B=16):
    sys, _, _, _ = _witness_system(model, pair, B)
    if sys is None:
        return False
    return sys.solve("exists") is not None


def pair_witnesses(model, pair, B=16):
    """All positive witnesses (as EnhancedDomains) with multiplicities <= B."""
    sys, D0, (a, b), rho = _witness_system(model, pair, B)
    if sys is None:
        return []
    out = []
    n = model.n
    for sol in sys.solve("all"):
        av = [sol[v] for v in a]
        bv = [sol[v] for v in b]
        D = [[D0[c][r] + av[r] + bv[c] for r in range(n)] for c in range(n)]
        rv = tuple(sol[v] for v in rho)
        e = EnhancedDomain(model, D, pair.x, pair.y, pair.eps, rv)
        out.append(e)
    return out


def pair_witness_count_mod2(model, pair, B=16):
    return len(pair_witnesses(model, pair, B)) % 2


def canonical_witness(model, pair, B=16):
    """Deterministic minimal witness: least (total multiplicity, flattened
    matrix, rho) among all positive witnesses."""
    ws = pair_witnesses(model, pair, B)
    if not ws:
        return None
    return min(ws, key=lambda e: (sum(map(sum, e.D)), e.D, e.rho))


# ---------------------------------------------------------------------
# enumeration of positive pairs

def _candidate_ys(model, x, m_max=None):
    """Model generators containing the destabilization points; when m_max
    is given, only those differing from x in at most m_max columns."""
    n = model.n
    forced = {c: r for (c, r) in model.destab_points}
    free_cols = [c for c in range(n) if c not in forced]
    used = set(forced.values())
    avail = [r for r in range(n) if r not in used]
    if m_max is None or m_max >= len(free_cols):
        for perm in itertools.permutations(avail):
            y = [0] * n
            for c, r in forced.items():
                y[c] = r
            for c, r in zip(free_cols, perm):
                y[c] = r
            yield tuple(y)
        return
    # bounded support: choose which free columns move
    base_needed = [c for c in free_cols if x[c] in used]  # must move
    rest = [c for c in free_cols if x[c] not in used]
    for extra in range(0, m_max + 1 - len(base_needed)):
        for moving_extra in itertools.combinations(rest, extra):
            moving = list(base_needed) + list(moving_extra)
            fixed = [c for c in rest if c not in moving_extra]
            rows = [r for r in avail if r not in {x[c] for c in fixed}]
            for perm in itertools.permutations(rows):
                y = [0] * n
                for c, r in forced.items():
                    y[c] = r
                for c in fixed:
                    y[c] = x[c]
                ok = True
                for c, r in zip(moving, perm):
                    y[c] = r
                for c in moving:  # derangement on the moving block
                    if y[c] == x[c]:
                        ok = False
                        break
                if ok:
                    yield tuple(y)


def positive_pairs_from(model, x, window, B=16, m_max=None):
    """All positive pairs [x, y~] with index in the closed window.

    Complete for witnesses with multiplicities <= B; pairs whose every
    witness touches the bound are still found, but a caller wanting a
    completeness certificate should retry with a larger B.
    """
    lo, hi = window
    out = []
    k = model.k
    nv = len(model.var_labels)
    mx = model.maslov_x(x)
    for y in _candidate_ys(model, x, m_max):
        my = model.maslov_y(y)
        for eps in itertools.product((0, 1), repeat=k):
            for d in range(lo, hi + 1):
                t2 = d - mx + my + sum(eps)
                if t2 < 0 or t2 % 2:
                    continue
                total = t2 // 2
                for mono in _monomials(nv, total):
                    pair = Pair(x, y, eps, mono)
                    if pair_is_positive(model, pair, B):
                        out.append((d, pair))
    return out


def _monomials(nvars, total):
    if nvars == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _monomials(nvars - 1, total - head):
            yield (head,) + rest


def enumerate_positive_pairs(model, window, B=16, m_max=None, xs=None):
    """Positive pairs with index in the window, grouped as
    {index: [pair, ...]}, over all initial generators (or the given xs)."""
    table = {}
    gens = xs if xs is not None else itertools.permutations(range(model.n))
    for x in gens:
        for d, pair in positive_pairs_from(model, x, window, B, m_max):
            table.setdefault(d, []).append(pair)
    return table


# ---------------------------------------------------------------------
# fast index-0 generation for one destabilization point

def _cyc_interval(a, b, n):
    """Rows of the half-open cyclic interval [a, b)."""
    out = []
    r = a
    while r != b:
        out.append(r)
        r = (r + 1) % n
    return out


class _ChainSearch:
    """Index-0 positive pairs out of x, one destabilization point.

    A reduced witness (no full-circle boundary components) meets each
    column circle in one arc from the y-point to the x-point; horizontal
    boundary arcs force y(c_{t+1}) = x(c_t) along a chain of columns
    starting at p's column and closing at the column where x sits at p's
    row.  Each arc goes up or down; writing A_t for the upward strip
    interval [y_t, x_t), the cyclic closure of the domain says exactly
    that sum_t 1_{A_t} is a constant function K, with K arcs down.  The
    search walks chains, pruning on the spread of the partial cover, and
    integrates a candidate domain for every K-subset of downward arcs.
    """

    def __init__(self, model, x):
        self.model = model
        self.x = x
        self.n = model.n
        self.cp, self.rp = model.destab_points[0]
        self.out = []

    def run(self):
        n = self.n
        x = self.x
        cover = [0] * n
        arc0 = _cyc_interval(self.rp, x[self.cp], n)
        for r in arc0:
            cover[r] += 1
        self._grow([self.cp], 1 << self.cp, cover, [tuple(arc0)])
        return self.out

    def _grow(self, chain, used, cover, arcs):
        x = self.x
        n = self.n
        if x[chain[-1]] == self.rp:
            self._emit(chain, cover, arcs)
            return
        remaining = n - len(chain)
        if remaining <= 0:
            return
        if max(cover) - min(cover) > remaining:
            return
        prev_h = x[chain[-1]]
        for c2 in range(n):
            if used >> c2 & 1:
                continue
            arc = _cyc_interval(prev_h, x[c2], n)
            cover2 = list(cover)
            for r in arc:
                cover2[r] += 1
            if max(cover2) - min(cover2) > remaining - 1:
                continue
            chain.append(c2)
            arcs.append(tuple(arc))
            self._grow(chain, used | (1 << c2), cover2, arcs)
            chain.pop()
            arcs.pop()

    def _emit(self, chain, cover, arcs):
        n = self.n
        x = self.x
        model = self.model
        k = cover[0]
        if any(v != k for v in cover):
            return
        m = len(chain)
        if k > m:
            return
        y = list(x)
        prev = self.rp
        for c in chain:
            y[c] = prev
            prev = x[c]
        y = tuple(y)
        # base domain: every arc upward; flipping arc t to downward adds 1
        # to every jump in its column, i.e. a unit step at column c_t
        P = [[0] * n for _ in range(n)]
        jump_col = {}
        for t, c in enumerate(chain):
            colj = [0] * n
            for r in arcs[t]:
                colj[r] = -1
            jump_col[c] = colj
        for r in range(n):
            run = 0
            for c in range(1, n):
                j = jump_col.get(c)
                if j is not None:
                    run += j[r]
                P[c][r] = run
        if not check_boundary(P, x, y):
            return
        mx = model.maslov_x(x)
        my = model.maslov_x(y)
        cp, rp = self.cp, self.rp
        rp1 = (rp - 1) % n
        cp1 = (cp - 1) % n
        marks = model.marks
        cols_sorted = sorted(chain)
        prow_rp = P and [P[c][rp] for c in range(n)]
        prow_rp1 = [P[c][rp1] for c in range(n)]
        for down in itertools.combinations(cols_sorted, k):
            off = [0] * n
            acc = 0
            it = 0
            for c in range(n):
                if it < k and down[it] == c:
                    acc += 1
                    it += 1
                off[c] = acc
            min_rp = min(prow_rp[c] + off[c] for c in range(n))
            min_rp1 = min(prow_rp1[c] + off[c] for c in range(n))
            bq = prow_rp[cp] + off[cp] - min_rp
            aq = prow_rp[cp1] + off[cp1] - min_rp
            dq = prow_rp1[cp] + off[cp] - min_rp1
            cq = prow_rp1[cp1] + off[cp1] - min_rp1
            # corner prefilter: need f = (I - eps)/2 in [0, min(aq, bq,
            # cq+1-eps, dq-eps)] for some eps; I unknown yet but f <= bq
            # always, so demand the box is nonempty for eps in {0, 1}
            if min(aq, bq, dq) < 0:
                continue
            rowmin = [0] * n
            for r in range(n):
                if r == rp:
                    rowmin[r] = min_rp
                elif r == rp1:
                    rowmin[r] = min_rp1
                else:
                    rowmin[r] = min(P[c][r] + off[c] for c in range(n))
            tot = 0
            for (c, r) in marks:
                tot += P[c][r] + off[c] - rowmin[r]
            # I(D) = M(x) - M(y) + 2 * (total marking multiplicity), and
            # index 0 forces eps + 2 f = I(D)
            i_d = mx - my + 2 * tot
            built = None
            for eps in (0, 1):
                f2x = i_d - eps
                if f2x % 2 or f2x < 0:
                    continue
                f = f2x // 2
                rho = bq - f
                if rho < 0 or f > min(aq, bq, cq + 1 - eps, dq - eps):
                    continue
                if built is None:
                    built = [[P[c][r] + off[c] - rowmin[r] for r in range(n)]
                             for c in range(n)]
                e = EnhancedDomain(model, built, x, y, (eps,), (rho,))
                if e.is_positive():
                    self.out.append(e)
                    self._ladder(e)

    def _ladder(self, e):
        """f-preserving additions: the destabilized marking's row and
        column keep the index at 0 and may stay positive a few steps."""
        n = self.n
        cp, rp = self.cp, self.rp
        stack = [e]
        seen = set()
        while stack:
            cur = stack.pop()
            for which in ("row", "col"):
                D = [list(col) for col in cur.D]
                if which == "row":
                    for c in range(n):
                        D[c][rp] += 1
                    rho = cur.rho
                else:
                    for r in range(n):
                        D[cp][r] += 1
                    rho = cur.rho
                nxt = EnhancedDomain(self.model, D, cur.x, cur.y,
                                     cur.eps, rho)
                key = (nxt.D, nxt.rho)
                if key in seen:
                    continue
                seen.add(key)
                if nxt.index() == 0 and nxt.is_positive():
                    self.out.append(nxt)
                    stack.append(nxt)


def snails_from(model, x):
    """All positive index-0 enhanced domains from x (one destabilization
    point); distinct domains listed once."""
    assert model.k == 1
    out = []
    seen = set()
    for e in _ChainSearch(model, x).run():
        key = (e.D, e.y, e.eps, e.rho)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


def snail_pairs_from(model, x):
    """Index-0 pair basis out of x: {Pair: 1} for pairs with an odd number
    of distinct positive witnesses."""
    counts = {}
    for e in snails_from(model, x):
        p = e.pair()
        counts[p] = counts.get(p, 0) ^ 1
    return {p: c for p, c in counts.items() if c}


def classify_snail(e):
    """('snail_L', h) / ('snail_R', h) for positive index-0 one-point
    domains, 'not_snail' otherwise; complexity h = fake + eps."""
    if e.model.k != 1 or not e.is_positive() or e.index() != 0:
        return ("not_snail", None)
    h = e.fake(0) + e.eps[0]
    return ("snail_L" if e.eps[0] == 0 else "snail_R", h)
