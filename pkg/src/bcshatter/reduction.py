"""Mutable work graph, reduction passes, preprocessing loop, reassembly.

The work graph starts as a copy of the input with unit attributes and is
shrunk by five passes:

* ``d`` cascading degree-1 removal (folds leaf mass into the neighbor),
* ``b`` bridge removal (splits components, credits both endpoints),
* ``a`` articulation shattering (one-shot biconnected decomposition with
  per-copy reach computed from block-cut-tree side sums),
* ``s`` side-vertex removal (simplicial vertices; one compensation BFS each),
* ``i`` identical-vertex merging (open or closed neighborhood equality).

Every pass writes its score corrections eagerly into a per-original-vertex
accumulator, so reassembly after the kernels is just adding each surviving
vertex's kernel total to all of its merged members.

Bookkeeping invariants (asserted in tests):

* ``reach[v] >= 1``, ``ident[v] >= 1`` for live vertices; a vertex stands
  for ``ident[v] * reach[v]`` original vertices ("mass").
* After any sequence of a/b/d passes on a connected input, every component's
  mass sums to n.  Side removals and isolated-vertex retirement move mass to
  ``retired_mass`` instead, so live mass + retired mass == n always.
* Merging requires equal reach *and* equal already-accumulated scores, which
  keeps every merged class's members on exactly equal final scores.

Vertices whose ident exceeds 1 are skipped as articulation/bridge cut points
and guarded in the degree-1/side passes: a merged class is a bundle of
interchangeable copies, and a single copy of it is never a cut vertex of the
unmerged graph, so cut-based formulas do not apply to it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .graph import Graph

TECHNIQUE_LETTERS = "odbasi"

# The seven benchmark combinations, in increasing technique order.
STANDARD_COMBINATIONS = ("o", "od", "odb", "odba", "odbas", "odbai", "odbasi")


@dataclass(frozen=True)
class Combination:
    """Ordered subset of technique letters, e.g. "odbasi"."""

    letters: str

    @classmethod
    def parse(cls, text: str) -> "Combination":
        seen = set()
        for ch in text:
            if ch not in TECHNIQUE_LETTERS:
                raise ValueError(f"unknown technique letter {ch!r}; expected a subset of {TECHNIQUE_LETTERS!r}")
            if ch in seen:
                raise ValueError(f"duplicate technique letter {ch!r} in {text!r}")
            seen.add(ch)
        return cls(text)

    @property
    def uses_ordering(self) -> bool:
        return "o" in self.letters

    def reduction_passes(self) -> str:
        """Technique letters in application order, excluding the ordering."""
        return "".join(ch for ch in self.letters if ch != "o")

    def __str__(self) -> str:
        return self.letters


@dataclass
class PassEvent:
    iteration: int
    technique: str
    changes: int
    live_vertices: int
    live_edges: int


@dataclass
class PassStats:
    """Per-pass change log plus the final component edge histogram."""

    events: list[PassEvent] = field(default_factory=list)
    iterations: int = 0
    component_edges: list[int] = field(default_factory=list)

    def record(self, iteration: int, technique: str, changes: int, vertices: int, edges: int) -> None:
        self.events.append(PassEvent(iteration, technique, changes, vertices, edges))

    def csv_rows(self) -> list[list[str]]:
        rows = [["pass", "iteration", "removals", "remaining_vertices", "remaining_edges", "component_edges"]]
        for e in self.events:
            rows.append([e.technique, str(e.iteration), str(e.changes), str(e.live_vertices), str(e.live_edges), ""])
        rows.append(["final", str(self.iterations), "", "", "", ";".join(str(x) for x in self.component_edges)])
        return rows


class WorkGraph:
    """Mutable reduced graph with per-vertex org/reach/ident attributes."""

    __slots__ = (
        "n_orig",
        "org",
        "reach",
        "ident",
        "members",
        "internal_edgeless",
        "internal_clique",
        "adj",
        "alive",
        "live_edge_count",
        "retired_mass",
    )

    def __init__(self) -> None:
        self.n_orig = 0
        self.org: list[int] = []
        self.reach: list[int] = []
        self.ident: list[int] = []
        self.members: list[list[int]] = []
        # Internal structure of a merged class: are its copies pairwise
        # adjacent (closed-neighborhood twins) or pairwise non-adjacent?
        # Singletons are vacuously both.
        self.internal_edgeless: list[bool] = []
        self.internal_clique: list[bool] = []
        self.adj: list[set[int]] = []
        self.alive: list[bool] = []
        self.live_edge_count = 0
        self.retired_mass = 0

    @classmethod
    def from_graph(cls, g: Graph) -> "WorkGraph":
        w = cls()
        w.n_orig = g.n
        w.org = list(range(g.n))
        w.reach = [1] * g.n
        w.ident = [1] * g.n
        w.members = [[v] for v in range(g.n)]
        w.internal_edgeless = [True] * g.n
        w.internal_clique = [True] * g.n
        w.adj = [set(g.neighbors_of(v).tolist()) for v in range(g.n)]
        w.alive = [True] * g.n
        w.live_edge_count = g.m
        return w

    def mass(self, v: int) -> int:
        return self.ident[v] * self.reach[v]

    def live(self):
        return (v for v in range(len(self.org)) if self.alive[v])

    def live_vertex_count(self) -> int:
        return sum(self.alive)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def add_vertex(self, org: int, reach: int = 1, ident: int = 1) -> int:
        vid = len(self.org)
        self.org.append(org)
        self.reach.append(reach)
        self.ident.append(ident)
        self.members.append([org])
        self.internal_edgeless.append(True)
        self.internal_clique.append(True)
        self.adj.append(set())
        self.alive.append(True)
        return vid

    def add_edge(self, u: int, v: int) -> None:
        if v not in self.adj[u]:
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.live_edge_count += 1

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.live_edge_count -= 1

    def delete(self, u: int) -> None:
        """Unlink and tombstone; the vertex's mass must already be accounted."""
        for x in self.adj[u]:
            self.adj[x].discard(u)
        self.live_edge_count -= len(self.adj[u])
        self.adj[u] = set()
        self.alive[u] = False

    def retire(self, u: int) -> None:
        """Delete a vertex whose remaining pair dependencies are all settled."""
        self.retired_mass += self.mass(u)
        self.delete(u)

    def components(self) -> list[list[int]]:
        """Sorted vertex lists of the live components, in first-id order."""
        seen: set[int] = set()
        comps: list[list[int]] = []
        for root in range(len(self.org)):
            if not self.alive[root] or root in seen:
                continue
            comp = [root]
            seen.add(root)
            head = 0
            while head < len(comp):
                v = comp[head]
                head += 1
                for x in self.adj[v]:
                    if x not in seen:
                        seen.add(x)
                        comp.append(x)
            comp.sort()
            comps.append(comp)
        return comps

    def component_mass_sums(self) -> list[int]:
        return [sum(self.mass(v) for v in comp) for comp in self.components()]

    def component_edge_counts(self) -> list[int]:
        return [sum(len(self.adj[v]) for v in comp) // 2 for comp in self.components()]

    def compact(self) -> None:
        """Drop tombstoned vertices and renumber; run between loop iterations
        so pass code never sees ids move mid-flight."""
        if all(self.alive):
            return
        remap: dict[int, int] = {}
        for v in range(len(self.org)):
            if self.alive[v]:
                remap[v] = len(remap)
        keep = list(remap)
        self.org = [self.org[v] for v in keep]
        self.reach = [self.reach[v] for v in keep]
        self.ident = [self.ident[v] for v in keep]
        self.members = [self.members[v] for v in keep]
        self.internal_edgeless = [self.internal_edgeless[v] for v in keep]
        self.internal_clique = [self.internal_clique[v] for v in keep]
        self.adj = [{remap[x] for x in self.adj[v]} for v in keep]
        self.alive = [True] * len(keep)


def _blocks_and_cuts(adj: list[set[int]], comp: list[int]):
    """Biconnected components (as edge lists) and articulation vertices of
    one connected component.  Iterative Hopcroft-Tarjan with an edge stack;
    each undirected edge lands in exactly one block."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[list[tuple[int, int]]] = []
    cuts: set[int] = set()
    counter = 0
    for root in comp:
        if root in disc or not adj[root]:
            continue
        disc[root] = low[root] = counter
        counter += 1
        estack: list[tuple[int, int]] = []
        root_children = 0
        stack: list[tuple[int, int, object]] = [(root, -1, iter(sorted(adj[root])))]
        while stack:
            v, parent, it = stack[-1]
            descended = False
            for u in it:
                if u == parent:
                    continue
                du = disc.get(u)
                if du is None:
                    estack.append((v, u))
                    disc[u] = low[u] = counter
                    counter += 1
                    if v == root:
                        root_children += 1
                    stack.append((u, v, iter(sorted(adj[u]))))
                    descended = True
                    break
                if du < disc[v]:  # back edge to an ancestor
                    estack.append((v, u))
                    if du < low[v]:
                        low[v] = du
            if not descended:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    if low[v] < low[pv]:
                        low[pv] = low[v]
                    if low[v] >= disc[pv]:
                        block = []
                        while True:
                            e = estack.pop()
                            block.append(e)
                            if e == (pv, v):
                                break
                        blocks.append(block)
                        if pv != root:
                            cuts.add(pv)
        if root_children >= 2:
            cuts.add(root)
    return blocks, cuts


def remove_degree1(w: WorkGraph, out: np.ndarray) -> int:
    """Cascading degree-1 removal; also retires isolated vertices.

    Folding a leaf u into its neighbor v credits u's members with the pair
    dependencies gated behind u and v's original with the pairs gated behind
    v from u's side; the leaf's mass then moves onto v.  Sums are over the
    component at pass start (folds conserve component mass, so they stay
    valid through the cascade).
    """
    comps = w.components()
    comp_of: dict[int, int] = {}
    comp_mass: list[int] = []
    for cid, comp in enumerate(comps):
        total = 0
        for v in comp:
            comp_of[v] = cid
            total += w.mass(v)
        comp_mass.append(total)
    queue = deque(v for v in w.live() if len(w.adj[v]) <= 1)
    changes = 0
    while queue:
        u = queue.popleft()
        if not w.alive[u]:
            continue
        deg = len(w.adj[u])
        if deg == 0:
            # Lone vertex: every pair involving its mass is already settled.
            w.retire(u)
            changes += 1
            continue
        if deg != 1:
            continue
        v = next(iter(w.adj[u]))
        # A class bundle hanging off a merged neighbor is not a true leaf in
        # the unmerged graph; leave those for the side pass or the kernel.
        if w.ident[v] != 1:
            continue
        if w.ident[u] != 1 and not w.internal_edgeless[u]:
            continue
        mass_u = w.mass(u)
        rest = comp_mass[comp_of[u]] - mass_u
        credit = (w.reach[u] - 1) * rest
        if credit:
            for m in w.members[u]:
                out[m] += credit
        out[w.org[v]] += mass_u * (rest - 1)
        w.reach[v] += mass_u
        w.delete(u)
        changes += 1
        if len(w.adj[v]) <= 1:
            queue.append(v)
    return changes


def remove_bridges(w: WorkGraph, out: np.ndarray) -> int:
    """Remove every bridge between unmerged endpoints in one pass.

    A bridge is a biconnected block of one edge.  Cut-side mass sums are
    order-independent, so corrections and reciprocal reach updates use the
    two sides of each bridge cut directly (computed on the forest obtained
    by contracting everything except the removed bridges).
    """
    changes = 0
    for comp in w.components():
        if len(comp) < 2:
            continue
        blocks, _ = _blocks_and_cuts(w.adj, comp)
        bridges = []
        for block in blocks:
            if len(block) == 1:
                u, v = block[0]
                if w.ident[u] == 1 and w.ident[v] == 1:
                    bridges.append((u, v))
        if not bridges:
            continue
        skip = set()
        for u, v in bridges:
            skip.add((u, v))
            skip.add((v, u))
        parent = {v: v for v in comp}

        def find(x: int) -> int:
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for u in comp:
            for v in w.adj[u]:
                if u < v and (u, v) not in skip:
                    ru, rv = find(u), find(v)
                    if ru != rv:
                        parent[ru] = rv
        node_mass: dict[int, int] = {}
        for v in comp:
            r = find(v)
            node_mass[r] = node_mass.get(r, 0) + w.mass(v)
        forest: dict[int, list[int]] = {r: [] for r in node_mass}
        for u, v in bridges:
            forest[find(u)].append(find(v))
            forest[find(v)].append(find(u))
        total = sum(node_mass.values())
        # Subtree mass sums on the bridge forest (one tree: comp is connected).
        root = find(comp[0])
        order = [root]
        tree_parent = {root: None}
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for y in forest[x]:
                if y not in tree_parent:
                    tree_parent[y] = x
                    order.append(y)
        subtree = dict(node_mass)
        for x in reversed(order[1:]):
            subtree[tree_parent[x]] += subtree[x]
        for u, v in bridges:
            ru, rv = find(u), find(v)
            if tree_parent[rv] == ru:
                side_v = subtree[rv]
            else:
                side_v = total - subtree[ru]
            side_u = total - side_v
            out[w.org[u]] += (side_u - 1) * side_v
            out[w.org[v]] += (side_v - 1) * side_u
            w.reach[u] += side_v
            w.reach[v] += side_u
            w.remove_edge(u, v)
            changes += 1
    return changes


def shatter_articulation(w: WorkGraph) -> int:
    """Split every component at its unmerged articulation vertices at once.

    Each cut vertex gets one local copy per biconnected group, with the
    copy's reach set to the whole far-side mass plus the vertex's own
    (block-cut-tree subtree sums).  No score corrections are needed; the
    reach attributes carry everything.  Returns the number of components
    created.
    """
    new_components = 0
    for comp in w.components():
        if len(comp) < 3:
            continue
        blocks, cuts = _blocks_and_cuts(w.adj, comp)
        active = sorted(c for c in cuts if w.ident[c] == 1)
        if not active:
            continue
        active_set = set(active)
        block_vertices = [sorted({x for e in b for x in e}) for b in blocks]

        # Blocks that share a merged (skipped) cut vertex stay together.
        uf = list(range(len(blocks)))

        def find(i: int) -> int:
            root = i
            while uf[root] != root:
                root = uf[root]
            while uf[i] != root:
                uf[i], i = root, uf[i]
            return root

        first_block: dict[int, int] = {}
        for bid, verts in enumerate(block_vertices):
            for v in verts:
                if v in active_set:
                    continue
                if v in first_block:
                    uf[find(bid)] = find(first_block[v])
                else:
                    first_block[v] = bid
        group_of_block = [find(b) for b in range(len(blocks))]
        group_verts: dict[int, set[int]] = {}
        for bid, verts in enumerate(block_vertices):
            group_verts.setdefault(group_of_block[bid], set()).update(verts)
        groups = sorted(group_verts)
        groups_of_cut: dict[int, list[int]] = {}
        for c in active:
            gs = sorted(g for g in groups if c in group_verts[g])
            groups_of_cut[c] = gs

        total = sum(w.mass(v) for v in comp)
        node_mass: dict[tuple[str, int], int] = {}
        tree: dict[tuple[str, int], list[tuple[str, int]]] = {}
        for g in groups:
            node = ("g", g)
            node_mass[node] = sum(w.mass(v) for v in group_verts[g] if v not in active_set)
            tree[node] = []
        for c in active:
            node = ("c", c)
            node_mass[node] = w.mass(c)
            tree[node] = []
            for g in groups_of_cut[c]:
                tree[node].append(("g", g))
                tree[("g", g)].append(node)
        root = ("g", groups[0])
        order = [root]
        tree_parent: dict[tuple[str, int], tuple[str, int] | None] = {root: None}
        head = 0
        while head < len(order):
            x = order[head]
            head += 1
            for y in tree[x]:
                if y not in tree_parent:
                    tree_parent[y] = x
                    order.append(y)
        subtree = dict(node_mass)
        for x in reversed(order[1:]):
            subtree[tree_parent[x]] += subtree[x]

        # Where each cut vertex lives per group: original id in its first
        # group, a fresh copy elsewhere; reach = far mass + own unit.
        placement: dict[tuple[int, int], int] = {}
        for c in active:
            for k, g in enumerate(groups_of_cut[c]):
                gnode, cnode = ("g", g), ("c", c)
                if tree_parent[gnode] == cnode:
                    side = subtree[gnode]
                else:
                    side = total - subtree[cnode]
                reach_here = total - side
                if k == 0:
                    placement[(c, g)] = c
                    w.reach[c] = reach_here
                else:
                    placement[(c, g)] = w.add_vertex(w.org[c], reach=reach_here)

        comp_edges = sum(len(w.adj[v]) for v in comp) // 2
        w.live_edge_count -= comp_edges
        for v in comp:
            w.adj[v] = set()
        for bid, block in enumerate(blocks):
            g = group_of_block[bid]
            for u, x in block:
                w.add_edge(placement.get((u, g), u), placement.get((x, g), x))
        new_components += len(groups) - 1
    return new_components


def _expanded_clique(w: WorkGraph, v: int) -> bool:
    """Would v's neighborhood induce a clique with all classes unfolded?"""
    if not (w.internal_edgeless[v] or w.internal_clique[v]):
        return False  # mixed class: some copies see non-adjacent siblings
    nbrs = sorted(w.adj[v])
    for x in nbrs:
        if w.ident[x] != 1 and not w.internal_clique[x]:
            return False
    for i, x in enumerate(nbrs):
        ax = w.adj[x]
        for y in nbrs[i + 1 :]:
            if y not in ax:
                return False
    return True


def remove_side_vertices(w: WorkGraph, out: np.ndarray, max_degree: int = 4) -> int:
    """Remove vertices whose unfolded neighborhood is a clique.

    Such a vertex is never interior to a shortest path, so one compensation
    BFS (:func:`kernels.side_bfs`) plus an endpoint credit settles every pair
    involving its mass, and the mass retires.  Detection is one sweep over
    vertices of degree <= max_degree; removals can expose new side vertices,
    which the next loop iteration picks up.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    comps = w.components()
    comp_of: dict[int, int] = {}
    comp_mass: dict[int, int] = {}
    for cid, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = cid
        comp_mass[cid] = sum(w.mass(v) for v in comp)
    candidates = [
        v for v in sorted(w.live()) if 1 <= len(w.adj[v]) <= max_degree and _expanded_clique(w, v)
    ]
    changes = 0
    for u in candidates:
        if not w.alive[u] or not w.adj[u]:
            continue  # earlier removals in this sweep emptied its neighborhood
        cid = comp_of[u]
        for x, amount in kernels.side_bfs(w.adj, u, w.reach, w.ident):
            if amount:
                for m in w.members[x]:
                    out[m] += amount
        mass_u = w.mass(u)
        credit = (w.reach[u] - 1) * (comp_mass[cid] - mass_u)
        if credit:
            for m in w.members[u]:
                out[m] += credit
        comp_mass[cid] -= mass_u
        w.retire(u)
        changes += 1
    return changes


def merge_identical(w: WorkGraph, out: np.ndarray) -> int:
    """Fold identical vertices into one representative per class.

    Open-neighborhood twins first, then closed-neighborhood twins.  Vertices
    are grouped by a neighborhood hash (sum of neighbor ids) and confirmed by
    explicit set comparison.  Only vertices with equal reach and equal
    already-accumulated scores merge; both restrictions only cost missed
    compression, never correctness, and they keep all members of a class on
    exactly equal final scores.
    """
    changes = _merge_sweep(w, out, closed=False)
    changes += _merge_sweep(w, out, closed=True)
    return changes


def _merge_sweep(w: WorkGraph, out: np.ndarray, closed: bool) -> int:
    buckets: dict[tuple, list[int]] = {}
    for v in sorted(w.live()):
        deg = len(w.adj[v])
        if deg == 0:
            continue
        key_sum = sum(w.adj[v]) + (v if closed else 0)
        key = (deg, key_sum, w.reach[v], float(out[w.org[v]]))
        buckets.setdefault(key, []).append(v)
    changes = 0
    for key in sorted(buckets):
        group = buckets[key]
        if len(group) < 2:
            continue
        classes: list[tuple[set[int], list[int]]] = []
        for v in group:
            sig = w.adj[v] | {v} if closed else w.adj[v]
            for csig, verts in classes:
                if csig == sig:  # hash bucket confirmed by explicit comparison
                    verts.append(v)
                    break
            else:
                classes.append((sig, [v]))
        for _, verts in classes:
            if len(verts) >= 2:
                changes += _merge_class(w, out, verts, closed)
    return changes


def _merge_class(w: WorkGraph, out: np.ndarray, verts: list[int], closed: bool) -> int:
    rep = verts[0]
    r = w.reach[rep]
    idents = [w.ident[v] for v in verts]
    total_ident = sum(idents)
    # Interior credit: each copy gates the reach mass of its new siblings'
    # copies.  (Pairs inside an already-merged class were settled when that
    # class formed, hence "new siblings" only.)
    if r > 1:
        for v, iv in zip(verts, idents):
            amount = (total_ident - iv) * r * (r - 1)
            for m in w.members[v]:
                out[m] += amount
    if not closed:
        # Open twins sit at distance 2; their cross pairs run through the
        # shared neighborhood and split evenly over its unfolded size.
        cross_pairs = total_ident * total_ident - sum(i * i for i in idents)
        shared = sum(w.ident[x] for x in w.adj[rep])
        amount = cross_pairs * r * r / shared
        for x in sorted(w.adj[rep]):
            for m in w.members[x]:
                out[m] += amount
    merged_members: list[int] = []
    edgeless = True
    clique = True
    for v in verts:
        merged_members.extend(w.members[v])
        edgeless = edgeless and w.internal_edgeless[v]
        clique = clique and w.internal_clique[v]
    w.ident[rep] = total_ident
    w.members[rep] = merged_members
    w.internal_edgeless[rep] = edgeless and not closed
    w.internal_clique[rep] = clique and closed
    for v in verts[1:]:
        w.delete(v)
    return len(verts) - 1


def run_pass(w: WorkGraph, letter: str, out: np.ndarray, max_side_degree: int = 4) -> int:
    if letter == "d":
        return remove_degree1(w, out)
    if letter == "b":
        return remove_bridges(w, out)
    if letter == "a":
        return shatter_articulation(w)
    if letter == "s":
        return remove_side_vertices(w, out, max_side_degree)
    if letter == "i":
        return merge_identical(w, out)
    raise ValueError(f"unknown reduction pass {letter!r}")


def preprocess(g: Graph, combination: Combination | str, max_side_degree: int = 4):
    """Apply the combination's passes to a fixed point.

    One iteration runs the enabled passes in the combination's letter order;
    iterations repeat while any pass reports a change (each pass can make the
    graph amenable to another).  Returns (work graph, partial score vector,
    pass statistics).
    """
    combo = Combination.parse(combination) if isinstance(combination, str) else combination
    w = WorkGraph.from_graph(g)
    out = np.zeros(g.n, dtype=np.float64)
    stats = PassStats()
    passes = combo.reduction_passes()
    iteration = 0
    if passes:
        while True:
            iteration += 1
            any_change = False
            for letter in passes:
                changes = run_pass(w, letter, out, max_side_degree)
                stats.record(iteration, letter, changes, w.live_vertex_count(), w.live_edge_count)
                any_change = any_change or changes > 0
            if not any_change:
                break
            w.compact()
    stats.iterations = iteration
    stats.component_edges = w.component_edge_counts()
    return w, out, stats


def finalize(w: WorkGraph, partial: np.ndarray, kernel_scores: dict[int, float]) -> np.ndarray:
    """Reassemble final scores: every original vertex collects its partial
    corrections plus the kernel totals of all surviving vertices that carry
    it (copies and merged members alike share one accumulator slot)."""
    final = np.array(partial, dtype=np.float64, copy=True)
    for v, amount in kernel_scores.items():
        if amount:
            for m in w.members[v]:
                final[m] += amount
    return final
