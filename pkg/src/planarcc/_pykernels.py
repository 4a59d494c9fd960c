"""Pure-Python graph kernels.

Reference implementations of the routines in ``_ckernels.pyx``.  Both modules
expose the same functions with the same signatures and tie-breaking rules;
``planarcc.kernels`` picks one at import time.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

INF = math.inf


def dijkstra(indptr, nbr, eid, weight, src, dst=-1, banned=-1):
    """Label-setting shortest paths from ``src`` under nonnegative ``weight``.

    Stops once ``dst`` is settled (if given).  Edge ``banned`` is ignored.
    Returns ``(dist, pred_edge)``; unreached nodes have ``inf`` and ``-1``.
    Equal tentative distances are never replaced, so the result is
    deterministic given the CSR order.
    """
    n = len(indptr) - 1
    dist = [INF] * n
    pred = [-1] * n
    done = [False] * n
    dist[src] = 0.0
    heap = [(0.0, src)]
    ip = indptr.tolist()
    nb = nbr.tolist()
    ed = eid.tolist()
    w = weight.tolist()
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == dst:
            break
        for k in range(ip[u], ip[u + 1]):
            e = ed[k]
            if e == banned:
                continue
            v = nb[k]
            nd = d + w[e]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = e
                heapq.heappush(heap, (nd, v))
    return np.array(dist), np.array(pred, dtype=np.int64)


def bottleneck_widths(indptr, nbr, eid, weight, src, dst=-1):
    """Max-min path widths from ``src``; ``src`` itself gets ``+inf``."""
    n = len(indptr) - 1
    width = [-INF] * n
    done = [False] * n
    width[src] = INF
    heap = [(-INF, src)]
    ip = indptr.tolist()
    nb = nbr.tolist()
    ed = eid.tolist()
    w = weight.tolist()
    while heap:
        negw, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == dst:
            break
        cur = -negw
        for k in range(ip[u], ip[u + 1]):
            v = nb[k]
            if done[v]:
                continue
            cand = min(cur, w[ed[k]])
            if cand > width[v]:
                width[v] = cand
                heapq.heappush(heap, (-cand, v))
    return np.array(width)


def bfs_hops(indptr, nbr, eid, allowed, src):
    """Hop distance from ``src`` using only edges with ``allowed[e]`` set; -1 if unreached."""
    n = len(indptr) - 1
    hops = [-1] * n
    hops[src] = 0
    queue = [src]
    ip = indptr.tolist()
    nb = nbr.tolist()
    ed = eid.tolist()
    ok = allowed.tolist()
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for k in range(ip[u], ip[u + 1]):
            v = nb[k]
            if hops[v] < 0 and ok[ed[k]]:
                hops[v] = hops[u] + 1
                queue.append(v)
    return np.array(hops, dtype=np.int64)


def min_bipartition(n, eu, ev, weight):
    """Exhaustive minimum of ``weight . cut`` over 2-colorings with node 0 on side 0.

    Colorings are visited in lexicographic order of the side vector and only
    a strict improvement replaces the incumbent, so ties resolve to the
    lexicographically smallest side vector.
    """
    if n == 1:
        return 0.0, np.zeros(1, dtype=np.int64)
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    weight = np.asarray(weight, dtype=np.float64)
    total = 1 << (n - 1)
    shifts = (n - 1 - np.arange(n, dtype=np.int64))  # node i <- bit (n-1-i)
    best_cost = INF
    best_mask = 0
    chunk = 1 << 14
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        side = (masks[:, None] >> shifts[None, :]) & 1
        cut = side[:, eu] != side[:, ev]
        costs = np.zeros(len(masks))
        for j in range(len(weight)):  # fixed summation order, matches the compiled kernel
            costs += np.where(cut[:, j], weight[j], 0.0)
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_cost = float(costs[i])
            best_mask = int(masks[i])
    side = (best_mask >> (n - 1 - np.arange(n))) & 1
    return best_cost, side.astype(np.int64)


def min_partition(n, eu, ev, weight, pa, pb):
    """Exhaustive minimum-cost multicut separating every pair ``(pa[i], pb[i])``.

    Partitions are enumerated as restricted growth strings.  Ties go to the
    lexicographically smallest cut indicator.  Returns ``(cost, labels)`` or
    ``(inf, None)`` when nothing is feasible.
    """
    eu = [int(x) for x in eu]
    ev = [int(x) for x in ev]
    w = [float(x) for x in weight]
    m = len(w)
    # edges and pairs become checkable once their later endpoint is labelled
    edges_at = [[] for _ in range(n)]
    for e in range(m):
        a, b = eu[e], ev[e]
        if a < b:
            a, b = b, a
        edges_at[a].append((e, b))
    pairs_at = [[] for _ in range(n)]
    for a, b in zip(pa, pb):
        a, b = int(a), int(b)
        if a < b:
            a, b = b, a
        pairs_at[a].append(b)
    # optimistic completion: every not-yet-decided negative edge gets cut
    neg_rest = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        neg_rest[i] = neg_rest[i + 1] + sum(min(0.0, w[e]) for e, _ in edges_at[i])

    label = [0] * n
    best = [INF, None, None]  # cost, labels, cut indicator

    def cut_vector():
        return [1 if label[eu[e]] != label[ev[e]] else 0 for e in range(m)]

    def rec(i, blocks, cost):
        if cost + neg_rest[i] > best[0]:
            return
        if i == n:
            if cost < best[0]:
                best[0], best[1], best[2] = cost, list(label), None
            elif cost == best[0]:
                cv = cut_vector()
                if best[2] is None:
                    best[2] = [1 if best[1][eu[e]] != best[1][ev[e]] else 0 for e in range(m)]
                if cv < best[2]:
                    best[1], best[2] = list(label), cv
            return
        for b in range(blocks + 1):
            label[i] = b
            if any(label[j] == b for j in pairs_at[i]):
                continue
            add = 0.0
            for e, j in edges_at[i]:
                if label[j] != b:
                    add += w[e]
            rec(i + 1, max(blocks, b + 1), cost + add)

    if n == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    rec(1, 1, 0.0)
    if best[1] is None:
        return INF, None
    return best[0], np.array(best[1], dtype=np.int64)


def max_weight_matching(n, eu, ev, weight, maxcardinality=False, warm_start=False):
    """Edmonds' weighted blossom algorithm, primal-dual form.

    ``n`` stages; each grows alternating trees from the free vertices until an
    augmenting path of tight edges appears, adjusting vertex and blossom duals
    when it gets stuck.  ``O(n**3)`` overall.  Returns ``mate`` as an int64
    array with -1 for unmatched vertices; at most one edge per vertex pair.

    Endpoint ``2*k`` / ``2*k + 1`` is the first / second vertex of edge ``k``.
    Integer-valued weights are processed as Python ints so that dual updates
    stay exact.

    ``warm_start`` (implies ``maxcardinality``) gives each vertex the dual of
    its heaviest edge and greedily matches tight edges first.  Unequal duals on
    free vertices are only sound when a perfect matching is sought; callers
    must reject a non-perfect result.
    """
    nvertex = int(n)
    nedge = len(weight)
    if nedge == 0:
        return np.full(nvertex, -1, dtype=np.int64)
    integral = all(float(x).is_integer() for x in weight)
    conv = int if integral else float
    edges = [(int(a), int(b), conv(x)) for a, b, x in zip(eu, ev, weight)]
    maxweight = max(0, max(w for _, _, w in edges))
    endpoint = [edges[p >> 1][p & 1] for p in range(2 * nedge)]
    neighbend: list[list[int]] = [[] for _ in range(nvertex)]
    for k, (i, j, _) in enumerate(edges):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    mate = [-1] * nvertex
    # label: 0 free, 1 outer (S), 2 inner (T); bit 4 marks visits in scan_blossom
    label = [0] * (2 * nvertex)
    labelend = [-1] * (2 * nvertex)
    inblossom = list(range(nvertex))
    blossomparent = [-1] * (2 * nvertex)
    blossomchilds: list[list[int] | None] = [None] * (2 * nvertex)
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomendps: list[list[int] | None] = [None] * (2 * nvertex)
    bestedge = [-1] * (2 * nvertex)
    blossombestedges: list[list[int] | None] = [None] * (2 * nvertex)
    unusedblossoms = list(range(nvertex, 2 * nvertex))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue: list[int] = []
    if warm_start:
        maxcardinality = True
        for v in range(nvertex):
            if neighbend[v]:
                dualvar[v] = max(edges[p >> 1][2] for p in neighbend[v])
        for k in sorted(range(nedge), key=lambda k: -edges[k][2]):
            i, j, wt = edges[k]
            if mate[i] == -1 and mate[j] == -1 and dualvar[i] + dualvar[j] - 2 * wt == 0:
                mate[i] = 2 * k + 1
                mate[j] = 2 * k

    def slack(k):
        i, j, wt = edges[k]
        return dualvar[i] + dualvar[j] - 2 * wt

    def leaves(b):
        if b < nvertex:
            yield b
        else:
            for t in blossomchilds[b]:
                if t < nvertex:
                    yield t
                else:
                    yield from leaves(t)

    def assign_label(w, t, p):
        b = inblossom[w]
        label[w] = label[b] = t
        labelend[w] = labelend[b] = p
        bestedge[w] = bestedge[b] = -1
        if t == 1:
            queue.extend(leaves(b))
        else:
            base = blossombase[b]
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1)

    def scan_blossom(v, w):
        """Trace back from ``v`` and ``w``; return the common base or -1 (augmenting path)."""
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base, k):
        v, w, _ = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        blossomchilds[b] = path
        blossomendps[b] = endps
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for v in leaves(b):
            if label[inblossom[v]] == 2:
                queue.append(v)
            inblossom[v] = b
        # least-slack edge from the new blossom to every neighbouring outer blossom
        bestedgeto: dict[int, int] = {}
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [[p >> 1 for p in neighbend[v]] for v in leaves(bv)]
            else:
                nblists = [blossombestedges[bv]]
            for nblist in nblists:
                for kk in nblist:
                    i, j, _ = edges[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and label[bj] == 1
                            and (bj not in bestedgeto or slack(kk) < slack(bestedgeto[bj]))):
                        bestedgeto[bj] = kk
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = [bestedgeto[bj] for bj in sorted(bestedgeto)]
        bestedge[b] = -1
        for kk in blossombestedges[b]:
            if bestedge[b] == -1 or slack(kk) < slack(bestedge[b]):
                bestedge[b] = kk

    def expand_blossom(b, endstage):
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for v in leaves(s):
                    inblossom[v] = s
        if not endstage and label[b] == 2:
            # relabel the even-length path through the expanded T-blossom
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            childs = blossomchilds[b]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[blossomendps[b][j - endptrick] >> 1] = True
                j += jstep
                p = blossomendps[b][j - endptrick] ^ endptrick
                allowedge[p >> 1] = True
                j += jstep
            bv = childs[j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if label[bv] == 1:
                    j += jstep
                    continue
                reached = -1
                for v in leaves(bv):
                    if label[v] != 0:
                        reached = v
                        break
                if reached >= 0:
                    label[reached] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(reached, 2, labelend[reached])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b, v):
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        childs = blossomchilds[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = blossomendps[b][j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = childs[j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = childs[i:] + childs[:i]
        blossomendps[b] = blossomendps[b][i:] + blossomendps[b][:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]

    def augment_matching(k):
        v, w, _ = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _stage in range(nvertex):
        label[:] = [0] * (2 * nvertex)
        bestedge[:] = [-1] * (2 * nvertex)
        blossombestedges[nvertex:] = [None] * nvertex
        allowedge[:] = [False] * nedge
        queue.clear()
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)

        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                for p in neighbend[v]:
                    k = p >> 1
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            # no augmenting path with tight edges: pick the dual step
            deltatype = -1
            delta = deltaedge = deltablossom = None
            if not maxcardinality:
                deltatype = 1
                delta = min(dualvar[:nvertex])
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 2, bestedge[v]
            for b in range(2 * nvertex):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    kslack = slack(bestedge[b])
                    d = kslack // 2 if integral else kslack / 2.0
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 3, bestedge[b]
            for b in range(nvertex, 2 * nvertex):
                if (blossombase[b] >= 0 and blossomparent[b] == -1 and label[b] == 2
                        and (deltatype == -1 or dualvar[b] < delta)):
                    delta, deltatype, deltablossom = dualvar[b], 4, b
            if deltatype == -1:
                # maxcardinality and nothing left to grow: final dual fix-up
                deltatype = 1
                delta = max(0, min(dualvar[:nvertex]))

            for v in range(nvertex):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nvertex, 2 * nvertex):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            if deltatype == 2:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                queue.append(i)
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break
        for b in range(nvertex, 2 * nvertex):
            if (blossomparent[b] == -1 and blossombase[b] >= 0
                    and label[b] == 1 and dualvar[b] == 0):
                expand_blossom(b, True)

    return np.array([endpoint[p] if p >= 0 else -1 for p in mate], dtype=np.int64)
