"""Dense F2 linear algebra on python-int bitmask rows.

A matrix is a list of ints; bit j of row i is the (i, j) entry.  Everything
here is small enough (a few thousand rows) that bitmask Gaussian elimination
beats any external dependency.
"""

from __future__ import annotations


def rank(rows):
    """Rank of the span of the given bitmask rows."""
    basis = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
    return len(basis)


class Eliminator:
    """Incremental row reducer keeping pivot bookkeeping.

    Rows are reduced against previously added rows; each stored row is
    identified by its lowest set bit (pivot).
    """

    def __init__(self):
        self.pivots = {}  # pivot bit -> reduced row

    def reduce(self, row):
        while row:
            low = row & -row
            b = self.pivots.get(low)
            if b is None:
                return row
            row ^= b
        return 0

    def add(self, row):
        """Reduce and insert; returns the reduced row (0 if dependent)."""
        row = self.reduce(row)
        if row:
            self.pivots[row & -row] = row
        return row

    @property
    def rank(self):
        return len(self.pivots)


def solve(rows, rhs):
    """One solution x (bitmask over row indices) of sum_i x_i rows[i] = rhs.

    Returns None if inconsistent.  Works over the augmented space
    (row | 1 << (index + shift)) so the combination is recovered exactly.
    """
    if rhs == 0:
        return 0
    shift = max((r.bit_length() for r in rows), default=0)
    shift = max(shift, rhs.bit_length())
    elim = Eliminator()
    tagged = []
    for i, r in enumerate(rows):
        tagged.append(r | (1 << (shift + i)))
    for t in tagged:
        elim.add(t)
    # reduce rhs against the value part only: redo manually
    acc = rhs
    combo = 0
    for t in sorted(elim.pivots.values(), key=lambda v: v & -v):
        low = t & -t
        if low.bit_length() > shift:
            continue
        if acc & low:
            acc ^= t & ((1 << shift) - 1)
            combo ^= t >> shift
    if acc:
        return None
    return combo


def solve_lex_min(rows, rhs, order=None):
    """Lexicographically least solution of sum_i x_i rows[i] = rhs.

    ``order`` lists row indices from most to least significant for the lex
    comparison; defaults to range(len(rows)).  Returns None if inconsistent,
    else a set of chosen row indices.  Greedy: force each variable to 0 in
    order, keep it 0 whenever the rest of the system stays consistent.
    """
    if order is None:
        order = range(len(rows))
    order = list(order)
    if solve(rows, rhs) is None:
        return None
    chosen = set()
    active = {i: rows[i] for i in order}
    cur = rhs
    for i in order:
        r = active.pop(i)
        rest = list(active.values())
        if solve(rest, cur) is not None:
            continue  # variable i can stay 0
        chosen.add(i)
        cur ^= r
    assert cur == 0
    return chosen


def kernel_basis(rows, width):
    """Basis of {v in F2^width : sum_j v_j rows-as-columns... }

    Here ``rows`` are the columns of a map applied to basis vectors: we
    compute all F2-combinations of the given rows that vanish.  Returns
    bitmasks over row indices.
    """
    elim = Eliminator()
    out = []
    shift = max((r.bit_length() for r in rows), default=0)
    for i, r in enumerate(rows):
        red = elim.add(r | (1 << (shift + i)))
        if red and (red & ((1 << shift) - 1)) == 0:
            out.append(red >> shift)
            del elim.pivots[red & -red]
    return out
