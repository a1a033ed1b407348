# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``; identical signatures and output."""

from libc.stdlib cimport malloc, free


def reach(indptr, adj_node, adj_link, Py_ssize_t s, allowed):
    cdef const long[:] ip = indptr
    cdef const long[:] an = adj_node
    cdef const long[:] al = adj_link
    cdef const unsigned char[:] ok = allowed
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef bytearray seen_buf = bytearray(n)
    cdef unsigned char[:] seen = seen_buf
    cdef long *queue = <long *> malloc((n + 1) * sizeof(long))
    cdef Py_ssize_t head = 0, tail = 0, i
    cdef long u, v
    if queue == NULL:
        raise MemoryError()
    try:
        seen[s] = 1
        queue[tail] = s
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for i in range(ip[u], ip[u + 1]):
                v = an[i]
                if not seen[v] and ok[al[i]]:
                    seen[v] = 1
                    queue[tail] = v
                    tail += 1
    finally:
        free(queue)
    return seen_buf


def simple_paths(indptr, adj_node, adj_link, Py_ssize_t s, Py_ssize_t t,
                 allowed, blocked, Py_ssize_t limit):
    if s == t:
        return [()]
    cdef const long[:] ip = indptr
    cdef const long[:] an = adj_node
    cdef const long[:] al = adj_link
    cdef const unsigned char[:] ok = allowed
    cdef const unsigned char[:] bl = blocked
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef unsigned char *on_path = <unsigned char *> malloc(n)
    cdef long *nodes = <long *> malloc((n + 1) * sizeof(long))
    cdef long *cursor = <long *> malloc((n + 1) * sizeof(long))
    cdef long *links = <long *> malloc((n + 1) * sizeof(long))
    cdef Py_ssize_t depth, i, k
    cdef long u, v, e
    out = []
    if on_path == NULL or nodes == NULL or cursor == NULL or links == NULL:
        free(on_path); free(nodes); free(cursor); free(links)
        raise MemoryError()
    try:
        for i in range(n):
            on_path[i] = 0
        on_path[s] = 1
        nodes[0] = s
        cursor[0] = ip[s]
        depth = 1
        while depth > 0:
            u = nodes[depth - 1]
            i = cursor[depth - 1]
            if i == ip[u + 1]:
                depth -= 1
                on_path[u] = 0
                continue
            cursor[depth - 1] = i + 1
            e = al[i]
            v = an[i]
            if not ok[e] or on_path[v]:
                continue
            if v == t:
                links[depth - 1] = e
                out.append(tuple([links[k] for k in range(depth)]))
                if len(out) > limit:
                    return out
                continue
            if bl[v]:
                continue
            on_path[v] = 1
            links[depth - 1] = e
            nodes[depth] = v
            cursor[depth] = ip[v]
            depth += 1
    finally:
        free(on_path); free(nodes); free(cursor); free(links)
    return out


cdef bint _side_connected(int n, int flag, int *side, int *adj_ptr, int *adj,
                          int *stack, unsigned char *seen):
    cdef int v, u, w, i, top = 0, count = 0, start = -1, found = 0
    for v in range(n):
        seen[v] = 0
        if side[v] == flag:
            count += 1
            if start < 0:
                start = v
    if count == 0:
        return False
    seen[start] = 1
    stack[top] = start
    top += 1
    found = 1
    while top > 0:
        top -= 1
        u = stack[top]
        for i in range(adj_ptr[u], adj_ptr[u + 1]):
            w = adj[i]
            if side[w] == flag and not seen[w]:
                seen[w] = 1
                found += 1
                stack[top] = w
                top += 1
    return found == count


def bonds(int n, us, vs, order, int level):
    cdef int m = len(us)
    out = []
    if n < 2:
        return out
    cdef int *eu = <int *> malloc(m * sizeof(int) + 1)
    cdef int *ev = <int *> malloc(m * sizeof(int) + 1)
    cdef int *rank = <int *> malloc(n * sizeof(int))
    cdef int *ordr = <int *> malloc(n * sizeof(int))
    cdef int *close_ptr = <int *> malloc((n + 1) * sizeof(int))
    cdef int *close = <int *> malloc(m * sizeof(int) + 1)
    cdef int *adj_ptr = <int *> malloc((n + 1) * sizeof(int))
    cdef int *adj = <int *> malloc(2 * m * sizeof(int) + 1)
    cdef int *fill = <int *> malloc((n + 1) * sizeof(int))
    cdef int *side = <int *> malloc(n * sizeof(int))
    cdef int *stack = <int *> malloc((2 * m + n + 1) * sizeof(int))
    cdef unsigned char *seen = <unsigned char *> malloc(n)
    # explicit DFS state: per depth k, which flag is being tried and the cut so far
    cdef int *flag_at = <int *> malloc((n + 1) * sizeof(int))
    cdef int *cut_at = <int *> malloc((n + 1) * sizeof(int))
    cdef int e, a, b, k, v, extra, j, later
    try:
        for e in range(m):
            eu[e] = us[e]
            ev[e] = vs[e]
        for k in range(n):
            ordr[k] = order[k]
            rank[ordr[k]] = k
        for k in range(n + 1):
            close_ptr[k] = 0
            adj_ptr[k] = 0
        for e in range(m):
            a = eu[e]
            b = ev[e]
            later = rank[a] if rank[a] > rank[b] else rank[b]
            close_ptr[later + 1] += 1
            adj_ptr[a + 1] += 1
            adj_ptr[b + 1] += 1
        for k in range(n):
            close_ptr[k + 1] += close_ptr[k]
            adj_ptr[k + 1] += adj_ptr[k]
        for k in range(n):
            fill[k] = close_ptr[k]
        for e in range(m):
            later = rank[eu[e]] if rank[eu[e]] > rank[ev[e]] else rank[ev[e]]
            close[fill[later]] = e
            fill[later] += 1
        for k in range(n):
            fill[k] = adj_ptr[k]
        for e in range(m):
            adj[fill[eu[e]]] = ev[e]
            fill[eu[e]] += 1
            adj[fill[ev[e]]] = eu[e]
            fill[ev[e]] += 1
        for k in range(n):
            side[k] = 0

        cut_at[1] = 0
        flag_at[1] = -1
        k = 1
        while k >= 1:
            if k == n:
                if _side_connected(n, 1, side, adj_ptr, adj, stack, seen) and \
                        _side_connected(n, 0, side, adj_ptr, adj, stack, seen):
                    out.append(tuple([e for e in range(m) if side[eu[e]] != side[ev[e]]]))
                k -= 1
                continue
            v = ordr[k]
            flag_at[k] += 1
            if flag_at[k] > 1:
                side[v] = 0
                k -= 1
                continue
            side[v] = flag_at[k]
            extra = 0
            for j in range(close_ptr[k], close_ptr[k + 1]):
                e = close[j]
                if side[eu[e]] != side[ev[e]]:
                    extra += 1
            if cut_at[k] + extra <= level:
                cut_at[k + 1] = cut_at[k] + extra
                flag_at[k + 1] = -1
                k += 1
    finally:
        free(eu); free(ev); free(rank); free(ordr); free(close_ptr); free(close)
        free(adj_ptr); free(adj); free(fill); free(side); free(stack); free(seen)
        free(flag_at); free(cut_at)
    return out


def best_pair(p1, b1, p2s, b2s, pf, double tol):
    cdef Py_ssize_t m = len(pf)
    if m > 64:
        raise OverflowError("compiled scan handles at most 64 links")
    cdef unsigned long long full = 0xFFFFFFFFFFFFFFFFULL if m == 64 else ((1ULL << m) - 1)
    cdef unsigned long long P1 = p1, B1 = b1
    cdef unsigned long long on_backup = P1 & ~B1
    cdef unsigned long long P2, B2, p2ok, b2ok, fail
    cdef Py_ssize_t n2 = len(p2s), nb = len(b2s), i, j, e
    cdef double *w = <double *> malloc((m + 1) * sizeof(double))
    cdef unsigned long long *bs = <unsigned long long *> malloc((nb + 1) * sizeof(unsigned long long))
    cdef double best = float("inf"), val
    cdef Py_ssize_t bi = -1, bj = -1
    cdef bint bdom = False, x, y, z, dom
    if w == NULL or bs == NULL:
        free(w); free(bs)
        raise MemoryError()
    try:
        for e in range(m):
            w[e] = pf[e]
        for j in range(nb):
            bs[j] = b2s[j]
        for i in range(n2):
            P2 = p2s[i]
            x = (P2 & B1) != 0
            p2ok = ~P2 & (~on_backup if x else full)
            for j in range(nb):
                B2 = bs[j]
                y = (B2 & B1) != 0
                z = (B2 & P1) != 0
                b2ok = ~B2 & (~on_backup if y else full) & (P1 if z else full)
                fail = full & ~(p2ok | b2ok)
                val = 0.0
                e = 0
                while fail:
                    if fail & 1ULL:
                        val += w[e]
                    fail >>= 1
                    e += 1
                dom = (not z and not x) or (not z and x and y) or (z and x and not y)
                if val < best - tol or (val <= best + tol and dom and not bdom):
                    best = val
                    bi = i
                    bj = j
                    bdom = dom
    finally:
        free(w); free(bs)
    return best, bi, bj
