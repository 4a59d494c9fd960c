# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport cython
cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef struct Entry:
    double key
    Py_ssize_t node


cdef inline bint _less(Entry a, Entry b) nogil:
    return a.key < b.key or (a.key == b.key and a.node < b.node)


cdef inline void _push(Entry* heap, Py_ssize_t* size, double key, Py_ssize_t node) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    cdef Entry item
    item.key = key
    item.node = node
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(item, heap[parent]):
            heap[i] = heap[parent]
            i = parent
        else:
            break
    heap[i] = item


cdef inline Entry _pop(Entry* heap, Py_ssize_t* size) nogil:
    cdef Entry top = heap[0]
    cdef Entry last
    cdef Py_ssize_t i = 0, child, n
    size[0] -= 1
    n = size[0]
    if n > 0:
        last = heap[n]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and _less(heap[child + 1], heap[child]):
                child += 1
            if _less(heap[child], last):
                heap[i] = heap[child]
                i = child
            else:
                break
        heap[i] = last
    return top


def dijkstra(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] nbr,
             const cnp.int64_t[::1] eid, const double[::1] weight,
             Py_ssize_t src, Py_ssize_t dst=-1, Py_ssize_t banned=-1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.full(n, np.inf)
    pred_arr = np.full(n, -1, dtype=np.int64)
    cdef double[::1] dist = dist_arr
    cdef cnp.int64_t[::1] pred = pred_arr
    cdef char* done = <char*> malloc(n)
    cdef Entry* heap = <Entry*> malloc(sizeof(Entry) * (nbr.shape[0] + 1))
    cdef Py_ssize_t size = 0, k, u, v, e
    cdef double d, nd
    cdef Entry top
    if done == NULL or heap == NULL:
        free(done); free(heap)
        raise MemoryError()
    with nogil:
        for k in range(n):
            done[k] = 0
        dist[src] = 0.0
        _push(heap, &size, 0.0, src)
        while size > 0:
            top = _pop(heap, &size)
            u = top.node
            d = top.key
            if done[u]:
                continue
            done[u] = 1
            if u == dst:
                break
            for k in range(indptr[u], indptr[u + 1]):
                e = eid[k]
                if e == banned:
                    continue
                v = nbr[k]
                nd = d + weight[e]
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = e
                    _push(heap, &size, nd, v)
    free(done)
    free(heap)
    return dist_arr, pred_arr


def bottleneck_widths(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] nbr,
                      const cnp.int64_t[::1] eid, const double[::1] weight,
                      Py_ssize_t src, Py_ssize_t dst=-1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    width_arr = np.full(n, -np.inf)
    cdef double[::1] width = width_arr
    cdef char* done = <char*> malloc(n)
    cdef Entry* heap = <Entry*> malloc(sizeof(Entry) * (nbr.shape[0] + 1))
    cdef Py_ssize_t size = 0, k, u, v
    cdef double cur, cand
    cdef Entry top
    if done == NULL or heap == NULL:
        free(done); free(heap)
        raise MemoryError()
    with nogil:
        for k in range(n):
            done[k] = 0
        width[src] = INFINITY
        _push(heap, &size, -INFINITY, src)
        while size > 0:
            top = _pop(heap, &size)
            u = top.node
            if done[u]:
                continue
            done[u] = 1
            if u == dst:
                break
            cur = -top.key
            for k in range(indptr[u], indptr[u + 1]):
                v = nbr[k]
                if done[v]:
                    continue
                cand = weight[eid[k]]
                if cur < cand:
                    cand = cur
                if cand > width[v]:
                    width[v] = cand
                    _push(heap, &size, -cand, v)
    free(done)
    free(heap)
    return width_arr


def bfs_hops(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] nbr,
             const cnp.int64_t[::1] eid, allowed, Py_ssize_t src):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef const cnp.uint8_t[::1] ok = np.ascontiguousarray(allowed, dtype=np.uint8)
    hops_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] hops = hops_arr
    cdef Py_ssize_t* queue = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (n + 1))
    cdef Py_ssize_t head = 0, tail = 0, u, v, k
    if queue == NULL:
        raise MemoryError()
    with nogil:
        hops[src] = 0
        queue[tail] = src
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = nbr[k]
                if hops[v] < 0 and ok[eid[k]]:
                    hops[v] = hops[u] + 1
                    queue[tail] = v
                    tail += 1
    free(queue)
    return hops_arr


def min_bipartition(Py_ssize_t n, eu, ev, weight):
    if n == 1:
        return 0.0, np.zeros(1, dtype=np.int64)
    cdef const cnp.int64_t[::1] u = np.ascontiguousarray(eu, dtype=np.int64)
    cdef const cnp.int64_t[::1] v = np.ascontiguousarray(ev, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weight, dtype=np.float64)
    cdef Py_ssize_t m = w.shape[0], j
    cdef long long total = (<long long> 1) << (n - 1)
    cdef long long mask, best_mask = 0
    cdef double cost, best = INFINITY
    cdef int su, sv
    with nogil:
        for mask in range(total):
            cost = 0.0
            for j in range(m):
                su = (mask >> (n - 1 - u[j])) & 1
                sv = (mask >> (n - 1 - v[j])) & 1
                if su != sv:
                    cost = cost + w[j]
            if cost < best:
                best = cost
                best_mask = mask
    side = (best_mask >> (n - 1 - np.arange(n, dtype=np.int64))) & 1
    return best, side.astype(np.int64)


cdef struct PartitionSearch:
    Py_ssize_t n
    Py_ssize_t m
    const cnp.int64_t* eu
    const cnp.int64_t* ev
    const double* w
    const cnp.int64_t* e_ptr      # edges whose later endpoint is i: e_idx[e_ptr[i]:e_ptr[i+1]]
    const cnp.int64_t* e_idx
    const cnp.int64_t* e_other
    const cnp.int64_t* p_ptr
    const cnp.int64_t* p_other
    const double* neg_rest
    cnp.int64_t* label
    cnp.int64_t* best_label
    double best
    bint have


cdef bint _cut_less(PartitionSearch* s) nogil:
    cdef Py_ssize_t e
    cdef int a, b
    for e in range(s.m):
        a = s.label[s.eu[e]] != s.label[s.ev[e]]
        b = s.best_label[s.eu[e]] != s.best_label[s.ev[e]]
        if a != b:
            return a < b
    return False


cdef void _partition_rec(PartitionSearch* s, Py_ssize_t i, Py_ssize_t blocks, double cost) nogil:
    cdef Py_ssize_t b, k, j
    cdef double add
    cdef bint clash
    if cost + s.neg_rest[i] > s.best:
        return
    if i == s.n:
        if cost < s.best or (cost == s.best and s.have and _cut_less(s)):
            s.best = cost
            s.have = True
            for j in range(s.n):
                s.best_label[j] = s.label[j]
        return
    for b in range(blocks + 1):
        s.label[i] = b
        clash = False
        for k in range(s.p_ptr[i], s.p_ptr[i + 1]):
            if s.label[s.p_other[k]] == b:
                clash = True
                break
        if clash:
            continue
        add = 0.0
        for k in range(s.e_ptr[i], s.e_ptr[i + 1]):
            if s.label[s.e_other[k]] != b:
                add = add + s.w[s.e_idx[k]]
        _partition_rec(s, i + 1, blocks + 1 if b == blocks else blocks, cost + add)


def min_partition(Py_ssize_t n, eu, ev, weight, pa, pb):
    if n == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    eu_a = np.ascontiguousarray(eu, dtype=np.int64)
    ev_a = np.ascontiguousarray(ev, dtype=np.int64)
    w_a = np.ascontiguousarray(weight, dtype=np.float64)
    hi = np.maximum(eu_a, ev_a)
    lo = np.minimum(eu_a, ev_a)
    order = np.argsort(hi, kind="stable")
    e_idx = np.ascontiguousarray(order, dtype=np.int64)
    e_other = np.ascontiguousarray(lo[order], dtype=np.int64)
    e_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(e_ptr, hi + 1, 1)
    e_ptr = np.cumsum(e_ptr)
    pa_a = np.asarray(pa, dtype=np.int64).reshape(-1)
    pb_a = np.asarray(pb, dtype=np.int64).reshape(-1)
    phi = np.maximum(pa_a, pb_a)
    porder = np.argsort(phi, kind="stable")
    p_other = np.ascontiguousarray(np.minimum(pa_a, pb_a)[porder], dtype=np.int64)
    p_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(p_ptr, phi + 1, 1)
    p_ptr = np.cumsum(p_ptr)
    neg = np.zeros(n + 1)
    negw = np.minimum(w_a, 0.0)
    for i in range(n - 1, -1, -1):
        neg[i] = neg[i + 1] + float(np.sum(negw[e_idx[e_ptr[i]:e_ptr[i + 1]]]))
    label = np.zeros(n, dtype=np.int64)
    best_label = np.zeros(n, dtype=np.int64)

    cdef const cnp.int64_t[::1] v_eu = eu_a
    cdef const cnp.int64_t[::1] v_ev = ev_a
    cdef const double[::1] v_w = w_a
    cdef const cnp.int64_t[::1] v_eptr = e_ptr
    cdef const cnp.int64_t[::1] v_eidx = e_idx
    cdef const cnp.int64_t[::1] v_eoth = e_other
    cdef const cnp.int64_t[::1] v_pptr = p_ptr
    cdef const cnp.int64_t[::1] v_poth = p_other
    cdef const double[::1] v_neg = neg
    cdef cnp.int64_t[::1] v_label = label
    cdef cnp.int64_t[::1] v_best = best_label
    cdef PartitionSearch s
    cdef cnp.int64_t dummy = 0
    s.n = n
    s.m = w_a.shape[0]
    s.eu = &v_eu[0] if s.m else &dummy
    s.ev = &v_ev[0] if s.m else &dummy
    s.w = &v_w[0] if s.m else <double*> NULL
    s.e_ptr = &v_eptr[0]
    s.e_idx = &v_eidx[0] if s.m else &dummy
    s.e_other = &v_eoth[0] if s.m else &dummy
    s.p_ptr = &v_pptr[0]
    s.p_other = &v_poth[0] if p_other.shape[0] else &dummy
    s.neg_rest = &v_neg[0]
    s.label = &v_label[0]
    s.best_label = &v_best[0]
    s.best = INFINITY
    s.have = False
    with nogil:
        _partition_rec(&s, 1, 1, 0.0)
    if not s.have:
        return INFINITY, None
    return s.best, best_label


cdef class _Blossom:
    """Typed state for the primal-dual blossom algorithm (see ``_pykernels``)."""

    cdef Py_ssize_t nv, ne
    cdef bint maxcard
    cdef cnp.int64_t[::1] endpoint, nb_ptr, nb_list
    cdef cnp.int64_t[::1] mate, label, labelend, inblossom, blossomparent, blossombase, bestedge
    cdef double[::1] w, dualvar
    cdef char[::1] allowedge
    cdef cnp.int64_t[::1] queue, leafbuf, stackbuf
    cdef Py_ssize_t qsize
    cdef list childs, endps, bestedges, unused

    def __init__(self, Py_ssize_t n, eu, ev, weight, bint maxcard, bint warm_start=False):
        cdef Py_ssize_t k
        self.nv = n
        self.ne = len(weight)
        self.maxcard = maxcard
        u = np.ascontiguousarray(eu, dtype=np.int64)
        v = np.ascontiguousarray(ev, dtype=np.int64)
        self.w = np.ascontiguousarray(weight, dtype=np.float64).copy()
        ep = np.empty(2 * self.ne, dtype=np.int64)
        ep[0::2] = u
        ep[1::2] = v
        self.endpoint = ep
        # vertex i lists the remote endpoints of its edges
        owner = np.concatenate([u, v])
        remote = np.concatenate([2 * np.arange(self.ne) + 1, 2 * np.arange(self.ne)]).astype(np.int64)
        order = np.argsort(owner, kind="stable")
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(ptr, owner + 1, 1)
        self.nb_ptr = np.cumsum(ptr)
        self.nb_list = np.ascontiguousarray(remote[order])
        self.mate = np.full(n, -1, dtype=np.int64)
        self.label = np.zeros(2 * n, dtype=np.int64)
        self.labelend = np.full(2 * n, -1, dtype=np.int64)
        self.inblossom = np.arange(n, dtype=np.int64)
        self.blossomparent = np.full(2 * n, -1, dtype=np.int64)
        self.blossombase = np.concatenate([np.arange(n), np.full(n, -1)]).astype(np.int64)
        self.bestedge = np.full(2 * n, -1, dtype=np.int64)
        maxw = max(0.0, float(np.max(self.w))) if self.ne else 0.0
        self.dualvar = np.concatenate([np.full(n, maxw), np.zeros(n)])
        self.allowedge = np.zeros(max(self.ne, 1), dtype=np.int8)
        self.queue = np.empty(4 * n + 4, dtype=np.int64)
        self.leafbuf = np.empty(n + 1, dtype=np.int64)
        self.stackbuf = np.empty(2 * n + 1, dtype=np.int64)
        self.qsize = 0
        self.childs = [None] * (2 * n)
        self.endps = [None] * (2 * n)
        self.bestedges = [None] * (2 * n)
        self.unused = list(range(n, 2 * n))
        if warm_start:
            self.maxcard = True
            self._warm_start()

    cdef void _warm_start(self):
        cdef Py_ssize_t v, q, k, i, j
        cdef double best
        for v in range(self.nv):
            if self.nb_ptr[v + 1] > self.nb_ptr[v]:
                best = -INFINITY
                for q in range(self.nb_ptr[v], self.nb_ptr[v + 1]):
                    if self.w[self.nb_list[q] >> 1] > best:
                        best = self.w[self.nb_list[q] >> 1]
                self.dualvar[v] = best
        order = np.argsort(-np.asarray(self.w), kind="stable")
        for k in order:
            i = self.endpoint[2 * k]
            j = self.endpoint[2 * k + 1]
            if self.mate[i] == -1 and self.mate[j] == -1 and self.slack(k) == 0.0:
                self.mate[i] = 2 * k + 1
                self.mate[j] = 2 * k

    cdef inline double slack(self, Py_ssize_t k):
        return (self.dualvar[self.endpoint[2 * k]] + self.dualvar[self.endpoint[2 * k + 1]]
                - 2.0 * self.w[k])

    cdef Py_ssize_t leaves(self, Py_ssize_t b):
        """Fill ``leafbuf`` with the vertices inside blossom ``b``; return their count."""
        cdef Py_ssize_t count = 0, top = 0, t
        if b < self.nv:
            self.leafbuf[0] = b
            return 1
        self.stackbuf[top] = b
        top += 1
        while top > 0:
            top -= 1
            t = self.stackbuf[top]
            if t < self.nv:
                self.leafbuf[count] = t
                count += 1
            else:
                for c in reversed(self.childs[t]):
                    self.stackbuf[top] = c
                    top += 1
        return count

    cdef void push(self, Py_ssize_t v):
        if self.qsize >= self.queue.shape[0]:
            grown = np.empty(2 * self.queue.shape[0], dtype=np.int64)
            grown[:self.qsize] = self.queue[:self.qsize]
            self.queue = grown
        self.queue[self.qsize] = v
        self.qsize += 1

    cdef void assign_label(self, Py_ssize_t w, int t, Py_ssize_t p):
        cdef Py_ssize_t b = self.inblossom[w], i, cnt, base
        self.label[w] = t
        self.label[b] = t
        self.labelend[w] = p
        self.labelend[b] = p
        self.bestedge[w] = -1
        self.bestedge[b] = -1
        if t == 1:
            cnt = self.leaves(b)
            for i in range(cnt):
                self.push(self.leafbuf[i])
        else:
            base = self.blossombase[b]
            self.assign_label(self.endpoint[self.mate[base]], 1, self.mate[base] ^ 1)

    cdef Py_ssize_t scan_blossom(self, Py_ssize_t v, Py_ssize_t w):
        cdef list path = []
        cdef Py_ssize_t base = -1, b, tmp
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                tmp = v
                v = w
                w = tmp
        for b in path:
            self.label[b] = 1
        return base

    cdef void add_blossom(self, Py_ssize_t base, Py_ssize_t k):
        cdef Py_ssize_t v = self.endpoint[2 * k], w = self.endpoint[2 * k + 1]
        cdef Py_ssize_t bb = self.inblossom[base], bv = self.inblossom[v], bw = self.inblossom[w]
        cdef Py_ssize_t b = self.unused.pop()
        cdef Py_ssize_t i, j, cnt, leaf, bj, kk, q, x, y
        cdef list path = [], endps = []
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        self.childs[b] = path
        self.endps[b] = endps
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = self.inblossom[w]
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dualvar[b] = 0.0
        cnt = self.leaves(b)
        for i in range(cnt):
            leaf = self.leafbuf[i]
            if self.label[self.inblossom[leaf]] == 2:
                self.push(leaf)
            self.inblossom[leaf] = b
        cdef dict bt = {}
        for sub in path:
            if self.bestedges[sub] is None:
                cnt = self.leaves(sub)
                for i in range(cnt):
                    leaf = self.leafbuf[i]
                    for q in range(self.nb_ptr[leaf], self.nb_ptr[leaf + 1]):
                        kk = self.nb_list[q] >> 1
                        self._best_to(b, kk, bt)
            else:
                for kk in self.bestedges[sub]:
                    self._best_to(b, kk, bt)
            self.bestedges[sub] = None
            self.bestedge[sub] = -1
        best = [bt[bj] for bj in sorted(bt)]
        self.bestedges[b] = best
        self.bestedge[b] = -1
        for kk in best:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    cdef inline void _best_to(self, Py_ssize_t b, Py_ssize_t kk, dict bt):
        cdef Py_ssize_t j = self.endpoint[2 * kk + 1], bj
        if self.inblossom[j] == b:
            j = self.endpoint[2 * kk]
        bj = self.inblossom[j]
        if bj != b and self.label[bj] == 1 and (bj not in bt or self.slack(kk) < self.slack(bt[bj])):
            bt[bj] = kk

    @cython.wraparound(True)  # blossom walks index child lists from the end
    cdef void expand_blossom(self, Py_ssize_t b, bint endstage):
        cdef Py_ssize_t s, i, cnt, j, jstep, endptrick, p, bv, entrychild, reached, leaf
        cdef list childs = self.childs[b]
        cdef list endps
        for s in childs:
            self.blossomparent[s] = -1
            if s < self.nv:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0.0:
                self.expand_blossom(s, endstage)
            else:
                cnt = self.leaves(s)
                for i in range(cnt):
                    self.inblossom[self.leafbuf[i]] = s
        if not endstage and self.label[b] == 2:
            endps = self.endps[b]
            entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[endps[j - endptrick] ^ endptrick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allowedge[endps[j - endptrick] >> 1] = 1
                j += jstep
                p = endps[j - endptrick] ^ endptrick
                self.allowedge[p >> 1] = 1
                j += jstep
            bv = childs[j]
            self.label[self.endpoint[p ^ 1]] = 2
            self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = p
            self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                reached = -1
                cnt = self.leaves(bv)
                for i in range(cnt):
                    leaf = self.leafbuf[i]
                    if self.label[leaf] != 0:
                        reached = leaf
                        break
                if reached >= 0:
                    self.label[reached] = 0
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(reached, 2, self.labelend[reached])
                j += jstep
        self.label[b] = -1
        self.labelend[b] = -1
        self.childs[b] = None
        self.endps[b] = None
        self.blossombase[b] = -1
        self.bestedges[b] = None
        self.bestedge[b] = -1
        self.unused.append(b)

    @cython.wraparound(True)
    cdef void augment_blossom(self, Py_ssize_t b, Py_ssize_t v):
        cdef Py_ssize_t t = v, i, j, jstep, endptrick, p
        cdef list childs, endps
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.nv:
            self.augment_blossom(t, v)
        childs = self.childs[b]
        endps = self.endps[b]
        i = childs.index(t)
        j = i
        if i & 1:
            j -= len(childs)
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= self.nv:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[j]
            if t >= self.nv:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.childs[b] = childs[i:] + childs[:i]
        self.endps[b] = endps[i:] + endps[:i]
        self.blossombase[b] = self.blossombase[self.childs[b][0]]

    cdef void augment_matching(self, Py_ssize_t k):
        cdef Py_ssize_t s, p, bs, t, bt, j, side
        for side in range(2):
            if side == 0:
                s = self.endpoint[2 * k]
                p = 2 * k + 1
            else:
                s = self.endpoint[2 * k + 1]
                p = 2 * k
            while True:
                bs = self.inblossom[s]
                if bs >= self.nv:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.nv:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    cdef void run(self):
        cdef Py_ssize_t nv = self.nv, stage, v, b, q, p, k, w, base, i, j
        cdef Py_ssize_t deltaedge, deltablossom
        cdef int deltatype, lb
        cdef bint augmented
        cdef double kslack, delta, d
        for stage in range(nv):
            self.label[:] = 0
            self.bestedge[:] = -1
            for b in range(nv, 2 * nv):
                self.bestedges[b] = None
            self.allowedge[:] = 0
            self.qsize = 0
            for v in range(nv):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.qsize > 0 and not augmented:
                    self.qsize -= 1
                    v = self.queue[self.qsize]
                    for q in range(self.nb_ptr[v], self.nb_ptr[v + 1]):
                        p = self.nb_list[q]
                        k = p >> 1
                        w = self.endpoint[p]
                        if self.inblossom[v] == self.inblossom[w]:
                            continue
                        kslack = 0.0
                        if not self.allowedge[k]:
                            kslack = self.slack(k)
                            if kslack <= 0.0:
                                self.allowedge[k] = 1
                        if self.allowedge[k]:
                            if self.label[self.inblossom[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif self.label[self.inblossom[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif self.label[w] == 0:
                                self.label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif self.label[self.inblossom[w]] == 1:
                            b = self.inblossom[v]
                            if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                                self.bestedge[b] = k
                        elif self.label[w] == 0:
                            if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                                self.bestedge[w] = k
                if augmented:
                    break

                deltatype = -1
                delta = 0.0
                deltaedge = -1
                deltablossom = -1
                if not self.maxcard:
                    deltatype = 1
                    delta = self.dualvar[0]
                    for v in range(1, nv):
                        if self.dualvar[v] < delta:
                            delta = self.dualvar[v]
                for v in range(nv):
                    if self.label[self.inblossom[v]] == 0 and self.bestedge[v] != -1:
                        d = self.slack(self.bestedge[v])
                        if deltatype == -1 or d < delta:
                            delta = d
                            deltatype = 2
                            deltaedge = self.bestedge[v]
                for b in range(2 * nv):
                    if self.blossomparent[b] == -1 and self.label[b] == 1 and self.bestedge[b] != -1:
                        d = self.slack(self.bestedge[b]) / 2.0
                        if deltatype == -1 or d < delta:
                            delta = d
                            deltatype = 3
                            deltaedge = self.bestedge[b]
                for b in range(nv, 2 * nv):
                    if (self.blossombase[b] >= 0 and self.blossomparent[b] == -1 and self.label[b] == 2
                            and (deltatype == -1 or self.dualvar[b] < delta)):
                        delta = self.dualvar[b]
                        deltatype = 4
                        deltablossom = b
                if deltatype == -1:
                    deltatype = 1
                    delta = self.dualvar[0]
                    for v in range(1, nv):
                        if self.dualvar[v] < delta:
                            delta = self.dualvar[v]
                    if delta < 0.0:
                        delta = 0.0

                for v in range(nv):
                    lb = self.label[self.inblossom[v]]
                    if lb == 1:
                        self.dualvar[v] -= delta
                    elif lb == 2:
                        self.dualvar[v] += delta
                for b in range(nv, 2 * nv):
                    if self.blossombase[b] >= 0 and self.blossomparent[b] == -1:
                        if self.label[b] == 1:
                            self.dualvar[b] += delta
                        elif self.label[b] == 2:
                            self.dualvar[b] -= delta

                if deltatype == 1:
                    break
                elif deltatype == 2:
                    self.allowedge[deltaedge] = 1
                    i = self.endpoint[2 * deltaedge]
                    if self.label[self.inblossom[i]] == 0:
                        i = self.endpoint[2 * deltaedge + 1]
                    self.push(i)
                elif deltatype == 3:
                    self.allowedge[deltaedge] = 1
                    self.push(self.endpoint[2 * deltaedge])
                else:
                    self.expand_blossom(deltablossom, False)

            if not augmented:
                break
            for b in range(nv, 2 * nv):
                if (self.blossomparent[b] == -1 and self.blossombase[b] >= 0
                        and self.label[b] == 1 and self.dualvar[b] == 0.0):
                    self.expand_blossom(b, True)


def max_weight_matching(Py_ssize_t n, eu, ev, weight, bint maxcardinality=False, bint warm_start=False):
    if len(weight) == 0:
        return np.full(n, -1, dtype=np.int64)
    cdef _Blossom state = _Blossom(n, eu, ev, weight, maxcardinality, warm_start)
    state.run()
    mate = np.asarray(state.mate).copy()
    ep = np.asarray(state.endpoint)
    matched = mate >= 0
    mate[matched] = ep[mate[matched]]
    return mate
