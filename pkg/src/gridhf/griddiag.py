"""Toroidal grid diagrams with free markings.

Conventions (fixed once, used everywhere):
  * columns and rows are 0-based internally, 1-based in the text format;
  * square (c, r) is the cell right of vertical circle c and above
    horizontal circle r; torus arithmetic is mod n;
  * the O of column c sits in square (c, o_row[c]); the X, if any, in
    (c, x_row[c]);
  * horizontal arcs run O -> X inside a row, vertical arcs X -> O inside a
    column, and vertical arcs are overpasses.

Variables: every O marking carries a label, ('c', i) for the O's (and X's)
of link component i, ('f', j) for the j-th free marking.  Destabilized
diagrams inherit labels from their parent, which is how the surgery
machinery keeps track of identified U variables.
"""

from __future__ import annotations

from typing import NamedTuple, Optional


class GridError(ValueError):
    pass


class DuplicateMarking(GridError):
    pass


class FreeMarkingRule(GridError):
    pass


class NoFreeMarking(GridError):
    pass


class InconsistentMarkingSet(GridError):
    pass


class Marking(NamedTuple):
    kind: str  # 'O' or 'X'
    col: int
    row: int
    comp: Optional[int]  # component index, None for free markings

    @property
    def is_free(self):
        return self.comp is None


class GridDiagram:
    """A validated toroidal grid diagram.

    Immutable after construction; safe to share between workers.
    """

    def __init__(self, o_row, x_row, orient=None, var_of_o=None,
                 var_universe=None, alex_offset2=None):
        self.n = len(o_row)
        self.o_row = tuple(o_row)
        self.x_row = tuple(x_row)
        self._check_basic()
        self._trace_components()
        if orient is None:
            orient = (1,) * self.ell
        self.orient = tuple(orient)
        if len(self.orient) != self.ell:
            raise GridError("orientation list does not match component count")
        if var_of_o is None:
            var_of_o = self._default_vars()
        self.var_of_o = tuple(var_of_o)
        if var_universe is None:
            var_universe = tuple([('c', i) for i in range(self.ell)]
                                 + [('f', j) for j in range(self.q)])
        self.var_universe = tuple(var_universe)
        for v in self.var_of_o:
            if v not in self.var_universe:
                raise GridError("marking variable %r outside universe" % (v,))
        # doubled Alexander normalization offsets, one per component; None
        # means "use the planar pair-counting normalization of this diagram"
        self.alex_offset2 = alex_offset2

    # -- validation ---------------------------------------------------

    def _check_basic(self):
        n = self.n
        if n < 1:
            raise GridError("empty grid")
        if sorted(self.o_row) != list(range(n)):
            raise DuplicateMarking("O markings must fill each row and column once")
        xs = [r for r in self.x_row if r is not None]
        if len(xs) != len(set(xs)):
            raise DuplicateMarking("two X markings share a row")
        if len(self.x_row) != n:
            raise GridError("x_row length mismatch")
        for c, r in enumerate(self.x_row):
            if r is not None and not (0 <= r < n):
                raise GridError("X row out of range")
            if r is not None and r == self.o_row[c]:
                raise DuplicateMarking("O and X in the same square")
        # free-marking rule: if the row of an O has no X, its column has none
        x_in_row = {r for r in self.x_row if r is not None}
        for c, r in enumerate(self.o_row):
            if r not in x_in_row and self.x_row[c] is not None:
                raise FreeMarkingRule(
                    "column %d has an X but its O's row %d has none" % (c, r))

    def _trace_components(self):
        """Trace linked markings into components, numbering components by
        the first column (left to right) that carries one of their markings."""
        n = self.n
        x_in_row = {}
        for c, r in enumerate(self.x_row):
            if r is not None:
                x_in_row[r] = c
        comp_of_col = {}
        comps = []
        for c0 in range(n):
            if c0 in comp_of_col or self.x_row[c0] is None:
                continue
            # walk O -> (row) -> X -> (column) -> O ...
            cols = []
            c = c0
            while True:
                cols.append(c)
                comp_of_col[c] = len(comps)
                r = self.o_row[c]
                cx = x_in_row.get(r)
                if cx is None:
                    raise FreeMarkingRule(
                        "O in linked column %d has no X in its row" % c)
                c = cx  # X at (cx, r); its column leads to the next O
                if c == c0:
                    break
                if c in comp_of_col:
                    raise GridError("component tracing crossed itself")
            comps.append(tuple(cols))
        self.comp_cols = tuple(comps)
        self.comp_of_col = comp_of_col
        self.ell = len(comps)
        self.free_cols = tuple(c for c in range(n) if self.x_row[c] is None)
        self.q = len(self.free_cols)

    def _default_vars(self):
        var = [None] * self.n
        for i, cols in enumerate(self.comp_cols):
            for c in cols:
                var[c] = ('c', i)
        for j, c in enumerate(self.free_cols):
            var[c] = ('f', j)
        return var

    # -- basic queries ------------------------------------------------

    def markings(self):
        out = []
        for c in range(self.n):
            out.append(Marking('O', c, self.o_row[c], self.comp_of_col.get(c)))
        for c in range(self.n):
            if self.x_row[c] is not None:
                out.append(Marking('X', c, self.x_row[c], self.comp_of_col[c]))
        return out

    def o_markings(self, comp):
        """O markings of a component, ordered by column."""
        return tuple(Marking('O', c, self.o_row[c], comp)
                     for c in sorted(self.comp_cols[comp]))

    def x_markings(self, comp):
        return tuple(Marking('X', c, self.x_row[c], comp)
                     for c in sorted(self.comp_cols[comp]))

    def require_free_marking(self):
        if self.q == 0:
            raise NoFreeMarking("this computation needs at least one free O marking")

    def comp_var(self, i):
        """Variable label carried by component i's markings."""
        return self.var_of_o[self.comp_cols[i][0]]

    def __eq__(self, other):
        return (isinstance(other, GridDiagram)
                and self.o_row == other.o_row and self.x_row == other.x_row
                and self.orient == other.orient
                and self.var_of_o == other.var_of_o)

    def __hash__(self):
        return hash((self.o_row, self.x_row, self.orient, self.var_of_o))

    def __repr__(self):
        return "GridDiagram(n=%d, ell=%d, q=%d)" % (self.n, self.ell, self.q)

    # -- serialization ------------------------------------------------

    def serialize(self):
        lines = ["grid n=%d q=%d" % (self.n, self.q)]
        lines.append("O: " + " ".join(str(r + 1) for r in self.o_row))
        lines.append("X: " + " ".join("-" if r is None else str(r + 1)
                                      for r in self.x_row))
        if any(o != 1 for o in self.orient):
            lines.append("orient: " + " ".join("+" if o > 0 else "-"
                                               for o in self.orient))
        return "\n".join(lines) + "\n"


def validate(text):
    """Parse and validate the grid text format; returns a GridDiagram."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("grid"):
        raise GridError("missing 'grid' header line")
    header = dict(tok.split("=") for tok in lines[0].split()[1:])
    n = int(header["n"])
    body = {}
    for ln in lines[1:]:
        key, _, rest = ln.partition(":")
        body[key.strip()] = rest.split()
    if "O" not in body or "X" not in body:
        raise GridError("need O: and X: lines")
    o_row = [int(t) - 1 for t in body["O"]]
    x_row = [None if t == "-" else int(t) - 1 for t in body["X"]]
    if len(o_row) != n or len(x_row) != n:
        raise GridError("marking lines do not match n=%d" % n)
    orient = None
    if "orient" in body:
        orient = tuple(1 if t == "+" else -1 for t in body["orient"])
    g = GridDiagram(o_row, x_row, orient=orient)
    if "q" in header and int(header["q"]) != g.q:
        raise GridError("declared q=%s does not match grid" % header["q"])
    return g


def is_sparse(g):
    """No two cyclically adjacent rows (or columns) both carry linked markings."""
    linked_rows = set()
    linked_cols = set()
    for m in g.markings():
        if not m.is_free:
            linked_rows.add(m.row)
            linked_cols.add(m.col)
    for r in linked_rows:
        if (r + 1) % g.n in linked_rows:
            return False
    for c in linked_cols:
        if (c + 1) % g.n in linked_cols:
            return False
    return True


def sparse_double(g):
    """Double the grid, putting the old markings on even squares and a free
    O on each odd diagonal square.  The result is sparse and represents the
    same link; q grows by n."""
    n2 = 2 * g.n
    o_row = [None] * n2
    x_row = [None] * n2
    for c in range(g.n):
        o_row[2 * c] = 2 * g.o_row[c]
        if g.x_row[c] is not None:
            x_row[2 * c] = 2 * g.x_row[c]
    for i in range(g.n):
        o_row[2 * i + 1] = 2 * i + 1
    return GridDiagram(o_row, x_row, orient=g.orient)


def marking_set(g, markings):
    """Canonical consistent marking set: frozenset of Marking tuples.

    Raises InconsistentMarkingSet if some component contributes both O's
    and X's.
    """
    ms = frozenset(markings)
    seen = {}
    for m in ms:
        if m.is_free:
            raise InconsistentMarkingSet("free markings cannot be destabilized")
        prev = seen.setdefault(m.comp, m.kind)
        if prev != m.kind:
            raise InconsistentMarkingSet(
                "component %d contributes both O and X markings" % m.comp)
    return ms


def whole_sublink_markings(g, comps, signs):
    """Z(M) for an oriented sublink: all O's of positively oriented
    components, all X's of negatively oriented ones."""
    out = []
    for comp, sign in zip(comps, signs):
        out.extend(g.o_markings(comp) if sign > 0 else g.x_markings(comp))
    return marking_set(g, out)


def destabilize_diagram(g, zset):
    """G^Z: delete the X's (resp. O's) of components met by Z in O's (resp.
    X's), drop the rows and columns of Z, relabel newly free X's as O's.

    Returns (diagram, col_map, row_map) where the maps send new indices to
    old ones.  U-variable labels are inherited: every marking of a partially
    erased component keeps that component's variable.
    """
    zset = marking_set(g, zset)
    comp_sign = {}
    for m in zset:
        comp_sign[m.comp] = +1 if m.kind == 'O' else -1
    dead_cols = sorted(m.col for m in zset)
    dead_rows = sorted(m.row for m in zset)
    col_map = [c for c in range(g.n) if c not in set(dead_cols)]
    row_map = [r for r in range(g.n) if r not in set(dead_rows)]
    col_new = {c: i for i, c in enumerate(col_map)}
    row_new = {r: i for i, r in enumerate(row_map)}

    o_row = [None] * len(col_map)
    x_row = [None] * len(col_map)
    var_of_o = [None] * len(col_map)
    for c in col_map:
        comp = g.comp_of_col.get(c)
        oc, xc = g.o_row[c], g.x_row[c]
        sign = comp_sign.get(comp) if comp is not None else None
        if sign == +1:
            # component destabilized at O's: its X markings disappear, the
            # surviving O's become free but keep the component variable
            new_o, new_x = oc, None
        elif sign == -1:
            # destabilized at X's: O's disappear, X's become free O's
            new_o, new_x = xc, None
        else:
            new_o, new_x = oc, xc
        if new_o is None or new_o not in row_new:
            raise GridError("marking deletion left column %d without an O" % c)
        o_row[col_new[c]] = row_new[new_o]
        x_row[col_new[c]] = row_new[new_x] if (
            new_x is not None and new_x in row_new) else None
        # every surviving marking keeps the variable it carried in g; for a
        # relabeled X this is its component's variable
        var_of_o[col_new[c]] = g.var_of_o[c]
    d = GridDiagram(o_row, x_row, var_of_o=var_of_o,
                    var_universe=g.var_universe)
    return d, col_map, row_map


def linking_matrix(g):
    """Pairwise linking numbers by signed crossing counts, vertical arcs
    over horizontal ones.  Entry (i, j), i != j, sums the crossing signs of
    component i's vertical arcs over component j's horizontal arcs."""
    n = g.n
    lk = [[0] * g.ell for _ in range(g.ell)]
    # arcs in doubled planar coordinates (marking centers at 2c+1, 2r+1)
    vert = []  # (comp, x, y0, y1, direction)
    horiz = []
    x_in_row = {r: c for c, r in enumerate(g.x_row) if r is not None}
    for c in range(n):
        if g.x_row[c] is None:
            continue
        comp = g.comp_of_col[c]
        s = g.orient[comp]
        yo, yx = 2 * g.o_row[c] + 1, 2 * g.x_row[c] + 1
        d = 1 if yo > yx else -1  # X -> O travel direction (up/down)
        vert.append((comp, 2 * c + 1, min(yo, yx), max(yo, yx), d * s))
    for r in range(n):
        if r not in x_in_row:
            continue
        cx = x_in_row[r]
        co = g.o_row.index(r)
        comp = g.comp_of_col[co]
        s = g.orient[comp]
        xo, xx = 2 * co + 1, 2 * cx + 1
        d = 1 if xx > xo else -1  # O -> X travel direction (right/left)
        horiz.append((comp, 2 * r + 1, min(xo, xx), max(xo, xx), d * s))
    for (ci, x, y0, y1, dv) in vert:
        for (cj, y, x0, x1, dh) in horiz:
            if ci == cj:
                continue
            if x0 < x < x1 and y0 < y < y1:
                # over = (0, dv), under = (dh, 0); sign = det(over, under)
                lk[ci][cj] += -dv * dh
    # each crossing contributes half a linking number; over-crossings of i
    # above j and of j above i each appear once and agree in total
    out = [[0] * g.ell for _ in range(g.ell)]
    for i in range(g.ell):
        for j in range(g.ell):
            if i != j:
                tot = lk[i][j] + lk[j][i]
                assert tot % 2 == 0
                out[i][j] = tot // 2
    return LinkingData(out)


class LinkingData:
    """Symmetric linking matrix plus doubled Alexander offsets
    lk(L_i, L - L_i)."""

    def __init__(self, lk):
        self.lk = tuple(tuple(row) for row in lk)
        self.ell = len(lk)
        self.offset2 = tuple(sum(row) for row in self.lk)
        for i in range(self.ell):
            assert self.lk[i][i] == 0
            for j in range(self.ell):
                assert self.lk[i][j] == self.lk[j][i]

    def __repr__(self):
        return "LinkingData(%r)" % (self.lk,)
