"""Knuth's Algorithm X over dict-of-sets, for the small irregular cover problems.

The torus tiling search in :mod:`leelab.search` has its own array-based
engine; this one handles anything expressed as ``{row: [columns]}``.
"""
from __future__ import annotations

from typing import Hashable, Iterator, Mapping, Sequence


def solve_exact_cover(rows: Mapping[Hashable, Sequence[Hashable]],
                      columns: Sequence[Hashable] | None = None) -> Iterator[list]:
    """Yield every exact cover as a list of row keys.

    Columns default to the union of all row columns.  Branching is on the
    column with the fewest remaining rows, ties broken by first appearance,
    so the output order is deterministic.
    """
    if columns is None:
        seen: dict = {}
        for r in rows.values():
            for c in r:
                seen.setdefault(c, None)
        columns = list(seen)
    order = {c: i for i, c in enumerate(columns)}
    X: dict = {c: [] for c in columns}
    for key, cols in rows.items():
        for c in cols:
            if c not in X:
                raise KeyError(f"row {key!r} uses unknown column {c!r}")
            X[c].append(key)
    Xs = {c: set(v) for c, v in X.items()}
    Y = {k: list(v) for k, v in rows.items()}
    row_order = {k: i for i, k in enumerate(rows)}
    yield from _search(Xs, Y, order, row_order, [])


def _search(X, Y, order, row_order, partial):
    if not X:
        yield list(partial)
        return
    col = min(X, key=lambda c: (len(X[c]), order[c]))
    for r in sorted(X[col], key=row_order.__getitem__):
        partial.append(r)
        removed = _select(X, Y, r)
        yield from _search(X, Y, order, row_order, partial)
        _deselect(X, Y, r, removed)
        partial.pop()


def _select(X, Y, r):
    removed = []
    for j in Y[r]:
        for i in X[j]:
            for k in Y[i]:
                if k != j:
                    X[k].remove(i)
        removed.append(X.pop(j))
    return removed


def _deselect(X, Y, r, removed):
    for j in reversed(Y[r]):
        X[j] = removed.pop()
        for i in X[j]:
            for k in Y[i]:
                if k != j:
                    X[k].add(i)
