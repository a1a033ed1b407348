"""Pure-Python versions of the hot graph kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``.
Graphs arrive in CSR form: ``indptr`` (n + 1 offsets) and the parallel
arrays ``adj_node`` / ``adj_link`` listing, for each node, its neighbours and
the link used to reach them.  ``allowed`` is a length-m byte mask of usable
links and ``blocked`` a length-n byte mask of nodes a path may not pass
through.
"""

from __future__ import annotations

from collections import deque


def reach(indptr, adj_node, adj_link, s, allowed):
    """Return a byte mask of the nodes reachable from ``s``."""
    n = len(indptr) - 1
    seen = bytearray(n)
    seen[s] = 1
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for i in range(indptr[u], indptr[u + 1]):
            v = adj_node[i]
            if not seen[v] and allowed[adj_link[i]]:
                seen[v] = 1
                queue.append(v)
    return seen


def simple_paths(indptr, adj_node, adj_link, s, t, allowed, blocked, limit):
    """Enumerate node-simple s-t paths as tuples of link indices.

    Stops once more than ``limit`` paths were found; callers treat a list of
    length ``limit + 1`` as an overflow.
    """
    if s == t:
        return [()]
    n = len(indptr) - 1
    on_path = bytearray(n)
    on_path[s] = 1
    out = []
    nodes = [s]
    cursor = [indptr[s]]
    links = []
    while nodes:
        u = nodes[-1]
        i = cursor[-1]
        if i == indptr[u + 1]:
            nodes.pop()
            cursor.pop()
            on_path[u] = 0
            if links:
                links.pop()
            continue
        cursor[-1] = i + 1
        e = adj_link[i]
        v = adj_node[i]
        if not allowed[e] or on_path[v]:
            continue
        if v == t:
            links.append(e)
            out.append(tuple(links))
            links.pop()
            if len(out) > limit:
                return out
            continue
        if blocked[v]:
            continue
        on_path[v] = 1
        nodes.append(v)
        cursor.append(indptr[v])
        links.append(e)
    return out


def bonds(n, us, vs, order, level):
    """Enumerate bonds (minimal edge cuts) with at most ``level`` links.

    Branch and bound over node bipartitions: ``order[0]`` is pinned to side 0
    and every other node is assigned in ``order``; a branch is cut as soon as
    the links between already-assigned nodes on opposite sides exceed
    ``level``.  Leaves are kept when both sides induce connected subgraphs.
    The graph is assumed connected.
    """
    m = len(us)
    rank = [0] * n
    for k, v in enumerate(order):
        rank[v] = k
    # links become decidable once their later endpoint (in order) is assigned
    closing = [[] for _ in range(n)]
    for e in range(m):
        a, b = us[e], vs[e]
        later = a if rank[a] > rank[b] else b
        closing[rank[later]].append(e)
    adj = [[] for _ in range(n)]
    for e in range(m):
        adj[us[e]].append(vs[e])
        adj[vs[e]].append(us[e])

    side = [0] * n
    out = []

    def side_connected(flag):
        start = -1
        count = 0
        for v in range(n):
            if side[v] == flag:
                count += 1
                if start < 0:
                    start = v
        if count == 0:
            return False
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if side[w] == flag and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == count

    def recurse(k, cut):
        if k == n:
            if side_connected(1) and side_connected(0):
                out.append(tuple(e for e in range(m) if side[us[e]] != side[vs[e]]))
            return
        v = order[k]
        for flag in (0, 1):
            side[v] = flag
            extra = 0
            for e in closing[k]:
                if side[us[e]] != side[vs[e]]:
                    extra += 1
            if cut + extra <= level:
                recurse(k + 1, cut + extra)
        side[v] = 0

    if n < 2:
        return out
    side[order[0]] = 0
    base = sum(1 for e in closing[0] if side[us[e]] != side[vs[e]])
    recurse(1, base)
    return out


def best_pair(p1, b1, p2s, b2s, pf, tol):
    """Scan every (p2, b2) combination for the lowest second-connection failure.

    Paths are integer link bitmasks.  Returns ``(value, i, j)`` indexing the
    winning ``p2s[i]`` / ``b2s[j]`` (``(inf, -1, -1)`` when a list is empty).
    Among values within ``tol`` of each other the first one found wins, except
    that a combination in one of the three retained overlap patterns replaces
    an earlier one that is not.
    """
    m = len(pf)
    full = (1 << m) - 1
    on_backup = p1 & ~b1
    cache = {}
    best = float("inf")
    bi = bj = -1
    bdom = False
    for i, p2 in enumerate(p2s):
        x = (p2 & b1) != 0
        p2ok = ~p2 & (~on_backup if x else full)
        for j, b2 in enumerate(b2s):
            y = (b2 & b1) != 0
            z = (b2 & p1) != 0
            b2ok = ~b2 & (~on_backup if y else full) & (p1 if z else full)
            fail = full & ~(p2ok | b2ok)
            val = cache.get(fail)
            if val is None:
                val = 0.0
                for e in range(m):
                    if fail >> e & 1:
                        val += pf[e]
                cache[fail] = val
            dom = (not z and not x) or (not z and x and y) or (z and x and not y)
            if val < best - tol or (val <= best + tol and dom and not bdom):
                best, bi, bj, bdom = val, i, j, dom
    return best, bi, bj
