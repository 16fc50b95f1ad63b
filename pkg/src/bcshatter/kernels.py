"""Betweenness kernels: plain Brandes and attribute-aware variants.

All kernels use the ordered-pair convention: a pair (s, t) contributes its
dependency once per direction, so no halving happens here (that is a CLI
output option).  Shortest-path counts sigma are kept in float64 because they
can overflow 64-bit integers on dense graphs while the dependency ratios
stay well conditioned.

Four kernels exist because attribute-free loops are measurably faster; the
engine dispatches per component on whether any ``reach`` or ``ident`` value
differs from 1.  The variants are written so that with all attributes equal
to 1 they follow the exact same floating-point operations as ``bc_plain``
(multiplying by an integer 1 is exact), which the degeneration tests assert
bit-for-bit.

Attribute semantics on a reduced component:

* ``reach[v]``  - number of original vertices represented by v (v itself
  plus the mass folded behind it by shattering/compression).
* ``ident[v]``  - number of mutually interchangeable original vertices
  merged into v.  On shortest paths every merged copy acts as a parallel
  route, hence the sigma multiplier; as a source or endpoint it multiplies
  whole dependency trees.

Each kernel returns ``(scores, phase1_seconds, phase2_seconds)`` where
scores[v] is the per-copy contribution for v (shared by all merged copies).
"""

from __future__ import annotations

from time import perf_counter

import numpy as np

from .graph import Graph

Adjacency = list[list[int]]


def bc_plain(adj: Adjacency):
    """Brandes' algorithm. Handles disconnected inputs per source."""
    n = len(adj)
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order = [0] * n  # BFS queue; dequeue order doubles as the phase-2 stack
    t1 = 0.0
    t2 = 0.0
    for s in range(n):
        tick = perf_counter()
        order[0] = s
        size = 1
        head = 0
        dist[s] = 0
        sigma[s] = 1.0
        while head < size:
            v = order[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v]
            for w in adj[v]:
                dw = dist[w]
                if dw < 0:
                    dist[w] = dw = dv1
                    order[size] = w
                    size += 1
                if dw == dv1:
                    sigma[w] += sv
                    preds[w].append(v)
        now = perf_counter()
        t1 += now - tick
        tick = now
        for idx in range(size - 1, 0, -1):  # order[0] is the source
            w = order[idx]
            dw = delta[w]
            coef = (1.0 + dw) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coef
            bc[w] += dw
        for idx in range(size):  # reset only what this source touched
            v = order[idx]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            preds[v].clear()
        t2 += perf_counter() - tick
    return bc, t1, t2


def bc_reach(adj: Adjacency, reach: list[int]):
    """Brandes with reach attributes.

    delta starts at reach[v] - 1 (the targets hidden behind v) and every
    source counts for reach[s] original sources.  With reach = 1 everywhere
    this is exactly ``bc_plain``.
    """
    _check_positive(reach, "reach")
    n = len(adj)
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order = [0] * n
    t1 = 0.0
    t2 = 0.0
    for s in range(n):
        tick = perf_counter()
        order[0] = s
        size = 1
        head = 0
        dist[s] = 0
        sigma[s] = 1.0
        delta[s] = reach[s] - 1.0
        while head < size:
            v = order[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v]
            for w in adj[v]:
                dw = dist[w]
                if dw < 0:
                    dist[w] = dw = dv1
                    delta[w] = reach[w] - 1.0
                    order[size] = w
                    size += 1
                if dw == dv1:
                    sigma[w] += sv
                    preds[w].append(v)
        now = perf_counter()
        t1 += now - tick
        tick = now
        rs = reach[s]
        for idx in range(size - 1, 0, -1):
            w = order[idx]
            dw = delta[w]
            coef = (1.0 + dw) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coef
            bc[w] += rs * dw
        for idx in range(size):
            v = order[idx]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            preds[v].clear()
        t2 += perf_counter() - tick
    return bc, t1, t2


def bc_ident(adj: Adjacency, ident: list[int]):
    """Brandes with ident attributes (merged interchangeable vertices).

    An edge into a non-source v fans out over ident[v] parallel copies, so
    sigma forwards sigma[v] * ident[v]; back propagation scales the same way
    and each source stands for ident[s] identical shortest-path trees.
    Paths between members of one class are NOT counted here; the merge pass
    settles those separately.
    """
    _check_positive(ident, "ident")
    n = len(adj)
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order = [0] * n
    t1 = 0.0
    t2 = 0.0
    for s in range(n):
        tick = perf_counter()
        order[0] = s
        size = 1
        head = 0
        dist[s] = 0
        sigma[s] = 1.0
        while head < size:
            v = order[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v] * ident[v] if v != s else sigma[v]
            for w in adj[v]:
                dw = dist[w]
                if dw < 0:
                    dist[w] = dw = dv1
                    order[size] = w
                    size += 1
                if dw == dv1:
                    sigma[w] += sv
                    preds[w].append(v)
        now = perf_counter()
        t1 += now - tick
        tick = now
        mult_s = ident[s]
        for idx in range(size - 1, 0, -1):
            w = order[idx]
            dw = delta[w]
            coef = ident[w] * (1.0 + dw) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coef
            bc[w] += mult_s * dw
        for idx in range(size):
            v = order[idx]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            preds[v].clear()
        t2 += perf_counter() - tick
    return bc, t1, t2


def bc_reach_ident(adj: Adjacency, reach: list[int], ident: list[int]):
    """Brandes with both attributes.

    Per merged copy: delta starts at reach[v] - 1, sigma and back propagation
    carry the ident fan-out, and a source stands for reach[s] * ident[s]
    original sources.  Coincides with ``bc_reach`` when ident = 1 and with
    ``bc_ident`` when reach = 1, bit for bit.
    """
    _check_positive(reach, "reach")
    _check_positive(ident, "ident")
    n = len(adj)
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order = [0] * n
    t1 = 0.0
    t2 = 0.0
    for s in range(n):
        tick = perf_counter()
        order[0] = s
        size = 1
        head = 0
        dist[s] = 0
        sigma[s] = 1.0
        delta[s] = reach[s] - 1.0
        while head < size:
            v = order[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v] * ident[v] if v != s else sigma[v]
            for w in adj[v]:
                dw = dist[w]
                if dw < 0:
                    dist[w] = dw = dv1
                    delta[w] = reach[w] - 1.0
                    order[size] = w
                    size += 1
                if dw == dv1:
                    sigma[w] += sv
                    preds[w].append(v)
        now = perf_counter()
        t1 += now - tick
        tick = now
        mult_s = reach[s] * ident[s]
        for idx in range(size - 1, 0, -1):
            w = order[idx]
            dw = delta[w]
            coef = ident[w] * (1.0 + dw) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coef
            bc[w] += mult_s * dw
        for idx in range(size):
            v = order[idx]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            preds[v].clear()
        t2 += perf_counter() - tick
    return bc, t1, t2


def side_bfs(adj, source: int, reach, ident) -> list[tuple[int, float]]:
    """Dependency BFS from a simplicial vertex about to be removed.

    ``adj`` may be any indexable of neighbor iterables (the mutable work
    graph's sets included); state is dictionary-based so the cost is
    proportional to the component, not the whole graph.

    The returned (vertex, amount) pairs fold in both orphaned directions at
    once: ``m * delta[w]`` restores the dependencies of the sources the side
    vertex represents, and ``m * (delta[w] - (reach[w] - 1))`` the pair
    dependencies whose *target* it represents, with m = reach[s] * ident[s].
    The caller still owes the removed vertex itself its endpoint credit
    ``(reach[s] - 1) * (component mass outside s's class)``.
    """
    dist: dict[int, int] = {source: 0}
    sigma: dict[int, float] = {source: 1.0}
    preds: dict[int, list[int]] = {}
    order = [source]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        dv1 = dist[v] + 1
        sv = sigma[v] * ident[v] if v != source else sigma[v]
        for w in adj[v]:
            dw = dist.get(w)
            if dw is None:
                dist[w] = dw = dv1
                sigma[w] = 0.0
                order.append(w)
            if dw == dv1:
                sigma[w] += sv
                preds.setdefault(w, []).append(v)
    delta = {v: reach[v] - 1.0 for v in order}
    mult_s = reach[source] * ident[source]
    contributions: list[tuple[int, float]] = []
    for idx in range(len(order) - 1, 0, -1):
        w = order[idx]
        dw = delta[w]
        coef = ident[w] * (1.0 + dw) / sigma[w]
        for v in preds.get(w, ()):
            delta[v] += sigma[v] * coef
        contributions.append((w, mult_s * dw + mult_s * (dw - (reach[w] - 1.0))))
    return contributions


def betweenness(g: Graph, *, unordered: bool = False):
    """Exact betweenness of every vertex of ``g`` (plain Brandes).

    Ordered-pair convention by default; ``unordered=True`` halves the scores.
    """
    scores, _, _ = bc_plain(g.adjacency_lists())
    result = np.asarray(scores, dtype=np.float64)
    if unordered:
        result *= 0.5
    return result


def sp_counts(adj, source: int, ident=None):
    """Shortest-path counts and predecessor lists from one source.

    Test/instrumentation helper; returns (dist, sigma, preds) dicts over the
    reached vertices, with the ident fan-out applied when given.
    """
    dist = {source: 0}
    sigma = {source: 1.0}
    preds: dict[int, list[int]] = {}
    order = [source]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        dv1 = dist[v] + 1
        mult = ident[v] if ident is not None and v != source else 1
        sv = sigma[v] * mult
        for w in adj[v]:
            dw = dist.get(w)
            if dw is None:
                dist[w] = dw = dv1
                sigma[w] = 0.0
                order.append(w)
            if dw == dv1:
                sigma[w] += sv
                preds.setdefault(w, []).append(v)
    return dist, sigma, preds


def source_dependencies(adj, source: int, reach=None, ident=None) -> dict[int, float]:
    """Final per-vertex dependencies of one source (instrumentation helper)."""
    dist, sigma, preds = sp_counts(adj, source, ident)
    order = sorted(dist, key=dist.get)
    delta = {v: (reach[v] - 1.0 if reach is not None else 0.0) for v in order}
    for w in reversed(order):
        if w == source:
            continue
        mult = ident[w] if ident is not None else 1
        coef = mult * (1.0 + delta[w]) / sigma[w]
        for v in preds.get(w, ()):
            delta[v] += sigma[v] * coef
    return delta


def _check_positive(values, name: str) -> None:
    for i, value in enumerate(values):
        if value < 1:
            raise ValueError(f"{name}[{i}] = {value}; attribute counts must be >= 1")
