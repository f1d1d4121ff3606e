"""Exact solver for the balanced transportation problem.

Minimizes sum f[i][j] * cost[i][j] over nonnegative flows with fixed
row sums (supplies) and column sums (demands), using the transportation
form of the network simplex: a northwest-corner starting basis, dual
variables solved along the basis tree, and Bland's least-index rule for
both the entering and the leaving cell, which rules out cycling even on
degenerate instances.  All pivoting is done in the caller's arithmetic
(rationals or tolerant floats), so optimal flows and duals are exact in
exact mode.

Returns the optimal cost, the positive flows, and one optimal dual pair
(u, v) with u[i] + v[j] <= cost[i][j] everywhere and equality on basic
cells; the duals are what certificates are built from.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InternalDefect
from .scalars import Mode, Scalar


def solve_transport(cost: Sequence[Sequence[Scalar]], supply: Sequence[Scalar],
                    demand: Sequence[Scalar], mode: Mode):
    """Solve min sum f*c with row sums `supply` and column sums `demand`.

    Requires balanced positive supplies and demands; the caller
    guarantees both (zero-total-mass reductions always are).
    """
    m, n = len(supply), len(demand)
    if m == 0 or n == 0:
        raise InternalDefect("transport instance with an empty side")

    flow: dict[tuple[int, int], Scalar] = {}
    basis: set[tuple[int, int]] = set()
    a = list(supply)
    b = list(demand)
    i = j = 0
    while True:
        t = a[i] if a[i] <= b[j] else b[j]
        flow[(i, j)] = t
        basis.add((i, j))
        a[i] -= t
        b[j] -= t
        if i == m - 1 and j == n - 1:
            break
        if i < m - 1 and a[i] == 0:
            i += 1
        elif j < n - 1:
            j += 1
        else:
            i += 1
    if len(basis) != m + n - 1:
        raise InternalDefect("northwest-corner basis is not a spanning tree")

    zero = mode.zero()
    max_pivots = 1000 * (m + n) * max(m, n)
    for _ in range(max_pivots):
        u, v = _duals(cost, basis, m, n)
        entering = None
        for ei in range(m):
            ui = u[ei]
            row = cost[ei]
            for ej in range(n):
                if (ei, ej) in basis:
                    continue
                if mode.lt(row[ej] - ui - v[ej], zero):
                    entering = (ei, ej)
                    break
            if entering:
                break
        if entering is None:
            break

        cycle = _cycle(basis, entering, m, n)
        minus = cycle[1::2]
        theta = None
        leaving = None
        for cell in minus:
            f = flow.get(cell, zero)
            if theta is None or f < theta or (f == theta and cell < leaving):
                theta = f
                leaving = cell
        for k, cell in enumerate(cycle):
            if k % 2 == 0:
                flow[cell] = flow.get(cell, zero) + theta
            else:
                flow[cell] = flow[cell] - theta
        basis.remove(leaving)
        basis.add(entering)
        del flow[leaving]
    else:
        raise InternalDefect("transport simplex did not terminate")

    u, v = _duals(cost, basis, m, n)
    total = zero
    flows = {}
    for (fi, fj), amt in sorted(flow.items()):
        total += amt * cost[fi][fj]
        if amt > zero:
            flows[(fi, fj)] = amt
    return total, flows, u, v


def _duals(cost, basis, m: int, n: int):
    """Solve u[i] + v[j] = cost[i][j] on the basis tree, with u[0] = 0."""
    u: list = [None] * m
    v: list = [None] * n
    by_row: list[list[int]] = [[] for _ in range(m)]
    by_col: list[list[int]] = [[] for _ in range(n)]
    for (i, j) in basis:
        by_row[i].append(j)
        by_col[j].append(i)
    u[0] = 0
    stack = [("r", 0)]
    while stack:
        side, k = stack.pop()
        if side == "r":
            for j in by_row[k]:
                if v[j] is None:
                    v[j] = cost[k][j] - u[k]
                    stack.append(("c", j))
        else:
            for i in by_col[k]:
                if u[i] is None:
                    u[i] = cost[i][k] - v[k]
                    stack.append(("r", i))
    if any(x is None for x in u) or any(x is None for x in v):
        raise InternalDefect("basis does not span the bipartite node set")
    return u, v


def _cycle(basis, entering, m: int, n: int):
    """The unique cycle closed by `entering`, as alternating +/- cells.

    Returns cells starting with `entering` (a plus cell); consecutive
    cells share a row or column alternately, and odd positions are the
    minus cells whose flow decreases.
    """
    ei, ej = entering
    # Path in the basis tree from column node ej back to row node ei.
    adj: dict = {}
    for (i, j) in basis:
        adj.setdefault(("r", i), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("r", i))
    start, goal = ("c", ej), ("r", ei)
    parent = {start: None}
    stack = [start]
    while stack:
        node = stack.pop()
        if node == goal:
            break
        for nxt in adj.get(node, ()):
            if nxt not in parent:
                parent[nxt] = node
                stack.append(nxt)
    if goal not in parent:
        raise InternalDefect("entering cell closes no cycle in the basis tree")
    path_nodes = []
    node = goal
    while node is not None:
        path_nodes.append(node)
        node = parent[node]
    # path_nodes runs r(ei) ... c(ej); adjacent nodes give basis cells.
    cells = [entering]
    for k in range(len(path_nodes) - 1):
        x, y = path_nodes[k], path_nodes[k + 1]
        cell = (x[1], y[1]) if x[0] == "r" else (y[1], x[1])
        cells.append(cell)
    if len(cells) % 2 != 0:
        raise InternalDefect("transport cycle has odd length")
    return cells
