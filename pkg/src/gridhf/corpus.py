"""Built-in example diagrams used by tests and the CLI."""

from __future__ import annotations

import itertools

from .griddiag import GridDiagram, sparse_double, is_sparse


def unknot2():
    """Smallest unknot grid: 2x2, no free markings."""
    return GridDiagram([0, 1], [1, 0])


def unknot3():
    """3x3 unknot with one free marking."""
    return GridDiagram([0, 1, 2], [1, 0, None])


def unknot4_sparse():
    """Sparse double of the 2x2 unknot: n=4, q=2."""
    return sparse_double(unknot2())


def unknot6_sparse():
    return sparse_double(unknot3())


def unlink5():
    """Two split unknots plus one free marking on a 5x5 grid."""
    return GridDiagram([0, 1, 2, 3, 4], [1, 0, 3, 2, None])


def hopf4():
    """4x4 Hopf link grid, no free markings, lk = -1 for default orientations."""
    return GridDiagram([3, 0, 1, 2], [1, 2, 3, 0])


def hopf8_sparse():
    return sparse_double(hopf4())


def named():
    return {
        "unknot2": unknot2(),
        "unknot3": unknot3(),
        "unknot4_sparse": unknot4_sparse(),
        "unknot6_sparse": unknot6_sparse(),
        "unlink5": unlink5(),
        "hopf4": hopf4(),
        "hopf8_sparse": hopf8_sparse(),
    }


def sparse_corpus(max_n=6):
    return {k: g for k, g in named().items()
            if is_sparse(g) and g.n <= max_n and g.q >= 1}


def all_valid_grids(n):
    """Every valid grid of size n (O-permutation x partial X-placement)."""
    for o_row in itertools.permutations(range(n)):
        x_choices = []
        for c in range(n):
            x_choices.append([None] + [r for r in range(n) if r != o_row[c]])
        for x_row in itertools.product(*x_choices):
            xs = [r for r in x_row if r is not None]
            if len(xs) != len(set(xs)):
                continue
            try:
                yield GridDiagram(o_row, x_row)
            except Exception:
                continue


def all_sparse_grids(n):
    for g in all_valid_grids(n):
        if is_sparse(g):
            yield g
