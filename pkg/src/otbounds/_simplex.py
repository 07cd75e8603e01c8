"""Dense transportation network simplex with integer flows.

Solves min sum c[i,j] f[i,j] subject to row sums = supply, column sums =
demand, f >= 0, with int64 supplies/demands.  Classic primal network simplex
on the bipartite graph plus an artificial root: block pricing for the entering
arc, leaving arc by minimum residual along the cycle (ties broken on the
target-side path, which keeps the basis strongly feasible enough in practice),
potentials recomputed per pivot in O(V).

Compiled with numba unless OTBOUNDS_DISABLE_NUMBA is set.
"""

from __future__ import annotations

import numpy as np

from ._accel import maybe_njit

# status codes
OPTIMAL = 0
PIVOT_LIMIT = 1
UNBOUNDED = 2


@maybe_njit
def solve_transportation(cost, supply, demand):  # pragma: no cover - numba kernel
    """Returns (flow matrix int64, potentials float64 length m+n, status)."""
    m, n = cost.shape
    V = m + n
    root = V

    parent = np.empty(V + 1, np.int64)
    sign = np.empty(V + 1, np.int64)    # +1: arc node->parent, -1: parent->node
    aid = np.empty(V + 1, np.int64)     # real-arc id i*n+j, or -1 for artificial
    bflow = np.zeros(V + 1, np.int64)
    bcost = np.zeros(V + 1, np.float64)
    depth = np.empty(V + 1, np.int64)
    pot = np.empty(V + 1, np.float64)

    maxc = 0.0
    for i in range(m):
        for j in range(n):
            if cost[i, j] > maxc:
                maxc = cost[i, j]
    big = 1.0 + (V + 1) * (maxc + 1.0)

    parent[root] = -1
    depth[root] = 0
    pot[root] = 0.0
    aid[root] = -1
    for i in range(m):
        parent[i] = root
        sign[i] = 1
        aid[i] = -1
        bflow[i] = supply[i]
        bcost[i] = big
        depth[i] = 1
        pot[i] = big
    for j in range(n):
        w = m + j
        parent[w] = root
        sign[w] = -1
        aid[w] = -1
        bflow[w] = demand[j]
        bcost[w] = big
        depth[w] = 1
        pot[w] = -big

    num_arcs = m * n
    block = int(np.sqrt(num_arcs)) + 10
    tol = 1e-11 * (1.0 + maxc) + 1e-13 * big

    # scratch for the potential/depth rebuild
    head = np.empty(V + 2, np.int64)
    nxt_sib = np.empty(V + 1, np.int64)
    stack = np.empty(V + 1, np.int64)

    max_pivots = 2000 * (V + 10)
    status = PIVOT_LIMIT
    next_start = 0

    for _pivot in range(max_pivots):
        # --- entering arc: best within block runs of the arc list ---
        enter = np.int64(-1)
        best = -tol
        a = next_start
        scanned = 0
        cnt = 0
        while scanned < num_arcs:
            i = a // n
            j = a - i * n
            red = cost[i, j] - pot[i] + pot[m + j]
            if red < best:
                best = red
                enter = a
            cnt += 1
            scanned += 1
            a += 1
            if a == num_arcs:
                a = 0
            if cnt == block:
                if enter >= 0:
                    break
                cnt = 0
        if enter < 0:
            status = OPTIMAL
            break
        next_start = a

        u = enter // n
        v = m + (enter - u * n)

        # --- cycle apex ---
        x = u
        y = v
        while depth[x] > depth[y]:
            x = parent[x]
        while depth[y] > depth[x]:
            y = parent[y]
        while x != y:
            x = parent[x]
            y = parent[y]
        join = x

        # --- leaving arc: min residual among arcs opposing the new flow ---
        # Source-side path carries flow down toward u; target-side up from v.
        delta = np.int64(0x7FFFFFFFFFFFFFFF)
        leave = np.int64(-1)
        leave_on_v_side = False
        w = u
        while w != join:
            if sign[w] == 1 and bflow[w] < delta:
                delta = bflow[w]
                leave = w
                leave_on_v_side = False
            w = parent[w]
        w = v
        while w != join:
            if sign[w] == -1 and bflow[w] <= delta:
                delta = bflow[w]
                leave = w
                leave_on_v_side = True
            w = parent[w]
        if leave < 0:
            status = UNBOUNDED
            break

        # --- augment along the cycle ---
        w = u
        while w != join:
            bflow[w] -= sign[w] * delta
            w = parent[w]
        w = v
        while w != join:
            bflow[w] += sign[w] * delta
            w = parent[w]

        # --- re-root the subtree cut off by the leaving arc ---
        if leave_on_v_side:
            stem = v
            new_par = u
            new_sign = np.int64(-1)  # arc u->v seen from v: parent->node
        else:
            stem = u
            new_par = v
            new_sign = np.int64(1)   # arc u->v seen from u: node->parent
        p_node = parent[stem]
        p_sign = sign[stem]
        p_cost = bcost[stem]
        p_flow = bflow[stem]
        p_aid = aid[stem]
        parent[stem] = new_par
        sign[stem] = new_sign
        bcost[stem] = cost[u, v - m]
        bflow[stem] = delta
        aid[stem] = enter
        w = stem
        while w != leave:
            nxt = p_node
            q_node = parent[nxt]
            q_sign = sign[nxt]
            q_cost = bcost[nxt]
            q_flow = bflow[nxt]
            q_aid = aid[nxt]
            parent[nxt] = w
            sign[nxt] = -p_sign
            bcost[nxt] = p_cost
            bflow[nxt] = p_flow
            aid[nxt] = p_aid
            p_node = q_node
            p_sign = q_sign
            p_cost = q_cost
            p_flow = q_flow
            p_aid = q_aid
            w = nxt

        # --- rebuild depths and potentials (O(V)) ---
        for w in range(V + 2):
            head[w] = -1
        for w in range(V):
            pa = parent[w]
            nxt_sib[w] = head[pa]
            head[pa] = w
        top = 0
        stack[top] = root
        top = 1
        while top > 0:
            top -= 1
            x = stack[top]
            c = head[x]
            while c != -1:
                depth[c] = depth[x] + 1
                if sign[c] == 1:
                    pot[c] = bcost[c] + pot[parent[c]]
                else:
                    pot[c] = pot[parent[c]] - bcost[c]
                stack[top] = c
                top += 1
                c = nxt_sib[c]

    flow = np.zeros((m, n), np.int64)
    for w in range(V):
        if aid[w] >= 0 and bflow[w] > 0:
            i = aid[w] // n
            j = aid[w] - i * n
            flow[i, j] = bflow[w]
    return flow, pot[:V].copy(), status
