"""Rank-m MSO types computed as Ehrenfeucht-Fraisse game trees.

A type node describes one position of the game: the atomic facts that the
most recent pick (a vertex or a vertex set) satisfies with respect to the
earlier picks, plus the sets of child nodes reachable by one more vertex
pick and by one more set pick.  Nodes are hash-consed into integer ids, so
two positions have the same type exactly when their ids coincide.

For larger graphs an exact symmetry reduction kicks in: positions are
memoized under a canonical form built from the connected components, and
moves that lead to isomorphic positions are explored only once.
"""

from __future__ import annotations

import hashlib
import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import cwd
from .mso.check import SizeGuard, models
from .mso.syntax import (
    And, Arc, Bottom, ColorIs, Eq, ExistsS, ExistsV, ForallS, ForallV, Formula,
    Iff, Implies, InSet, Not, Or, Top, Unary, free_variables, rank,
)
from .structures import ColoredGraph, R2Graph, colored_union, copies, disjoint_union

TYPE_GUARD = SizeGuard(set_vertices=8, fo_vertices=4096)
SATURATION_GUARD = SizeGuard(set_vertices=40, fo_vertices=4096)
SYMMETRY_THRESHOLD = 6
_CANON_LIMIT = 6  # components up to this size get a brute-force canonical form


class TypeGuardError(RuntimeError):
    pass


class RankError(ValueError):
    pass


class SaturationError(RuntimeError):
    pass


class CompositionalityPrecondition(ValueError):
    pass


# -- intern table -------------------------------------------------------------

_LOCK = threading.Lock()
_NODES: list[tuple] = []
_IDS: dict[tuple, int] = {}
_DIGESTS: dict[int, str] = {}


def _intern(atoms, vch, sch) -> int:
    key = (atoms, frozenset(vch), frozenset(sch))
    nid = _IDS.get(key)
    if nid is None:
        with _LOCK:
            nid = _IDS.get(key)
            if nid is None:
                nid = len(_NODES)
                _NODES.append(key)
                _IDS[key] = nid
    return nid


def node(nid: int) -> tuple:
    """(atoms, vertex-move children, set-move children) of a node id."""
    return _NODES[nid]


def node_digest(nid: int) -> str:
    d = _DIGESTS.get(nid)
    if d is not None:
        return d
    atoms, vch, sch = _NODES[nid]
    h = hashlib.sha256()
    h.update(repr(atoms).encode())
    h.update(b"|v")
    for c in sorted(node_digest(x) for x in vch):
        h.update(c.encode())
    h.update(b"|s")
    for c in sorted(node_digest(x) for x in sch):
        h.update(c.encode())
    d = _DIGESTS[nid] = h.hexdigest()
    return d


@dataclass(frozen=True)
class MsoType:
    rank: int
    root: int
    signature: tuple = ()
    witness: object = field(default=None, compare=False, repr=False)

    def digest(self) -> str:
        h = hashlib.sha256(f"{self.rank}|{self.signature}|".encode())
        h.update(node_digest(self.root).encode())
        return h.hexdigest()[:16]

    def tree_size(self) -> int:
        seen = set()
        stack = [self.root]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            _, vch, sch = _NODES[x]
            stack.extend(vch)
            stack.extend(sch)
        return len(seen)


# -- per-graph data -----------------------------------------------------------

class _GraphData:
    def __init__(self, g: R2Graph | ColoredGraph):
        if isinstance(g, ColoredGraph):
            self.colors = g.coloring
            g = g.graph
        else:
            self.colors = None
        self.g = g
        self.n = n = g.n
        self.syms = g.arc_symbols
        self.out = [[0] * n for _ in self.syms]
        index = {s: i for i, s in enumerate(self.syms)}
        for s, u, v in g.arcs:
            self.out[index[s]][u] |= 1 << v
        self.unary = []
        for s in g.unary_symbols:
            m = 0
            for t, v in g.unary:
                if t == s:
                    m |= 1 << v
            self.unary.append(m)
        self.sigkey = (self.syms, g.unary_symbols, self.colors is not None)
        self._comps = None

    def vertex_atoms(self, picks, v):
        eq, mem = [], []
        outs = [[] for _ in self.syms]
        ins = [[] for _ in self.syms]
        for i, (kind, x) in enumerate(picks):
            if kind == "v":
                if x == v:
                    eq.append(i)
                for si, row in enumerate(self.out):
                    if row[v] >> x & 1:
                        outs[si].append(i)
                    if row[x] >> v & 1:
                        ins[si].append(i)
            elif x >> v & 1:
                mem.append(i)
        loops = tuple(row[v] >> v & 1 for row in self.out)
        color = self.colors[v] if self.colors is not None else None
        un = tuple(m >> v & 1 for m in self.unary)
        return ("v", tuple(eq), loops, tuple(map(tuple, outs)), tuple(map(tuple, ins)),
                tuple(mem), color, un)

    @staticmethod
    def set_atoms(picks, mask):
        return ("s", tuple(i for i, (kind, x) in enumerate(picks)
                           if kind == "v" and mask >> x & 1))

    # components, used by the symmetry reduction
    def components(self):
        if self._comps is None:
            self._comps = [_component(self, verts) for verts in weak_components(self.g)]
        return self._comps


def weak_components(g: R2Graph) -> list[list[int]]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, u, v in g.arcs:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


_SHAPES: dict = {}      # raw structure -> (shape id, canonical order offsets, auts)
_SHAPE_IDS: dict = {}


@dataclass
class _Comp:
    verts: list          # verts[local] = global vertex, in canonical local order
    shape: int
    auts: list           # automorphisms of the canonical shape, as local perms
    loc: dict            # global -> local


def _structure(gd: _GraphData, verts: Sequence[int]):
    pos = {v: i for i, v in enumerate(verts)}
    arcs = []
    for si, row in enumerate(gd.out):
        for v in verts:
            m = row[v]
            for w in verts:
                if m >> w & 1:
                    arcs.append((si, pos[v], pos[w]))
    colors = tuple(gd.colors[v] for v in verts) if gd.colors is not None else ()
    un = tuple(tuple(m >> v & 1 for v in verts) for m in gd.unary)
    return (len(verts), tuple(sorted(arcs)), colors, un)


def _permuted(struct, perm):
    """Structure relabeled so that old local index i becomes perm[i]."""
    s, arcs, colors, un = struct
    inv = [0] * s
    for i, p in enumerate(perm):
        inv[p] = i
    return (s, tuple(sorted((si, perm[a], perm[b]) for si, a, b in arcs)),
            tuple(colors[inv[j]] for j in range(s)) if colors else (),
            tuple(tuple(row[inv[j]] for j in range(s)) for row in un))


def _component(gd: _GraphData, verts: list[int]) -> _Comp:
    raw = (gd.sigkey, _structure(gd, verts))
    hit = _SHAPES.get(raw)
    if hit is None:
        struct = raw[1]
        s = len(verts)
        if s <= _CANON_LIMIT:
            best, best_perm = None, None
            for perm in itertools.permutations(range(s)):
                cand = _permuted(struct, perm)
                if best is None or cand < best:
                    best, best_perm = cand, perm
            auts = [perm for perm in itertools.permutations(range(s))
                    if _permuted(best, perm) == best]
            canon = (gd.sigkey, best)
        else:
            best_perm = tuple(range(s))
            auts = [best_perm]
            canon = ("raw",) + raw
        sid = _SHAPE_IDS.setdefault(canon, len(_SHAPE_IDS))
        hit = _SHAPES[raw] = (sid, best_perm, auts)
    sid, perm, auts = hit
    ordered = [0] * len(verts)
    for i, p in enumerate(perm):
        ordered[p] = verts[i]
    return _Comp(ordered, sid, auts, {v: i for i, v in enumerate(ordered)})


_MARK_CANON: dict = {}


def _apply_aut(perm, marks, kinds):
    out = []
    for kind, x in zip(kinds, marks):
        if kind == "v":
            out.append(perm[x] if x >= 0 else -1)
        else:
            m = 0
            for i, p in enumerate(perm):
                if x >> i & 1:
                    m |= 1 << p
            out.append(m)
    return tuple(out)


def _canon_marks(comp: _Comp, kinds: str, marks: tuple) -> tuple:
    key = (comp.shape, kinds, marks)
    hit = _MARK_CANON.get(key)
    if hit is None:
        if len(comp.auts) == 1:
            hit = marks
        else:
            hit = min(_apply_aut(p, marks, kinds) for p in comp.auts)
        _MARK_CANON[key] = hit
    return hit


# -- the game-tree computation --------------------------------------------------

_STATE_MEMO: dict = {}


class _Engine:
    def __init__(self, gd: _GraphData, symmetric: bool):
        self.gd = gd
        self.symmetric = symmetric
        if symmetric:
            self.comps = gd.components()
            self.owner = {}
            for ci, c in enumerate(self.comps):
                for v in c.verts:
                    self.owner[v] = ci

    def root(self, m: int) -> int:
        if self.symmetric:
            marks = tuple(() for _ in self.comps)
            return self._sym(m, (), "", marks, None)
        return self._plain((), m, ())

    # plain exhaustive search
    def _plain(self, picks, r, atoms):
        gd = self.gd
        if r == 0:
            return _intern(atoms, (), ())
        if r == 1:
            return self._last_level(picks, atoms)
        vch = {self._plain(picks + (("v", v),), r - 1, gd.vertex_atoms(picks, v))
               for v in range(gd.n)}
        sch = {self._plain(picks + (("s", m),), r - 1, gd.set_atoms(picks, m))
               for m in range(1 << gd.n)}
        return _intern(atoms, vch, sch)

    def _last_level(self, picks, atoms):
        gd = self.gd
        vch = {_intern(gd.vertex_atoms(picks, v), (), ()) for v in range(gd.n)}
        distinct: dict[int, list[int]] = {}
        for i, (kind, x) in enumerate(picks):
            if kind == "v":
                distinct.setdefault(x, []).append(i)
        groups = list(distinct.values())
        sch = set()
        for chosen in itertools.product((False, True), repeat=len(groups)):
            inside = sorted(i for grp, c in zip(groups, chosen) if c for i in grp)
            sch.add(_intern(("s", tuple(inside)), (), ()))
        return _intern(atoms, vch, sch)

    # symmetry-reduced search
    def _key(self, r, kinds, marks):
        items = sorted((c.shape, _canon_marks(c, kinds, mk))
                       for c, mk in zip(self.comps, marks))
        return (self.gd.sigkey, r, kinds, tuple(items))

    def _sym(self, r, picks, kinds, marks, atoms):
        key = self._key(r, kinds, marks)
        hit = _STATE_MEMO.get(key)
        if hit is not None:
            return hit
        gd = self.gd
        atoms = () if atoms is None else atoms
        if r == 0:
            nid = _intern(atoms, (), ())
        elif r == 1:
            nid = self._last_level(picks, atoms)
        else:
            vch, sch = set(), set()
            for v in self._vertex_reps(kinds, marks):
                new_marks = tuple(mk + (c.loc[v] if self.owner[v] == ci else -1,)
                                  for ci, (c, mk) in enumerate(zip(self.comps, marks)))
                vch.add(self._sym(r - 1, picks + (("v", v),), kinds + "v", new_marks,
                                  gd.vertex_atoms(picks, v)))
            for mask, new_marks in self._set_reps(kinds, marks):
                sch.add(self._sym(r - 1, picks + (("s", mask),), kinds + "s", new_marks,
                                  gd.set_atoms(picks, mask)))
            nid = _intern(atoms, vch, sch)
        _STATE_MEMO[key] = nid
        return nid

    def _classes(self, kinds, marks):
        classes: dict = {}
        for ci, (c, mk) in enumerate(zip(self.comps, marks)):
            classes.setdefault((c.shape, _canon_marks(c, kinds, mk)), []).append(ci)
        return list(classes.values())

    def _vertex_reps(self, kinds, marks):
        out = []
        nk = kinds + "v"
        for members in self._classes(kinds, marks):
            ci = members[0]
            c, mk = self.comps[ci], marks[ci]
            seen = set()
            for local, v in enumerate(c.verts):
                k = _canon_marks(c, nk, mk + (local,))
                if k not in seen:
                    seen.add(k)
                    out.append(v)
        return out

    def _set_reps(self, kinds, marks):
        nk = kinds + "s"
        per_class = []
        for members in self._classes(kinds, marks):
            # outcome key -> local mask, for every member (their markings differ)
            options = []
            for ci in members:
                c, mk = self.comps[ci], marks[ci]
                table = {}
                for local_mask in range(1 << len(c.verts)):
                    table.setdefault(_canon_marks(c, nk, mk + (local_mask,)), local_mask)
                options.append(table)
            outcomes = sorted(options[0])
            choices = []
            for combo in itertools.combinations_with_replacement(range(len(outcomes)),
                                                                 len(members)):
                choices.append([(ci, options[j][outcomes[o]])
                                for j, (ci, o) in enumerate(zip(members, combo))])
            per_class.append(choices)
        for pick in itertools.product(*per_class):
            local = {}
            for assignment in pick:
                for ci, lm in assignment:
                    local[ci] = lm
            mask = 0
            new_marks = []
            for ci, (c, mk) in enumerate(zip(self.comps, marks)):
                lm = local[ci]
                for i, v in enumerate(c.verts):
                    if lm >> i & 1:
                        mask |= 1 << v
                new_marks.append(mk + (lm,))
            yield mask, tuple(new_marks)


# -- public API ---------------------------------------------------------------

_TYPE_CACHE: dict = {}
_WITNESS: dict = {}


def _graph_key(g):
    if isinstance(g, ColoredGraph):
        return ("c", g.graph.key(), g.coloring)
    return ("g", g.key())


def type_of(g: R2Graph | ColoredGraph, m: int, guard: SizeGuard = TYPE_GUARD,
            symmetry: bool | None = None) -> MsoType:
    """Canonical rank-m type of g (colors count as atoms for a ColoredGraph)."""
    if m < 0:
        raise RankError("rank must be non-negative")
    n = g.n
    limit = guard.set_vertices if m >= 2 else guard.fo_vertices
    if n > limit:
        raise TypeGuardError(f"type_of: {n} vertices exceeds guard {limit} at rank {m}")
    key = (_graph_key(g), m, symmetry)
    hit = _TYPE_CACHE.get(key)
    if hit is None:
        gd = _GraphData(g)
        sym = (n >= SYMMETRY_THRESHOLD) if symmetry is None else symmetry
        root = _Engine(gd, sym).root(m)
        hit = MsoType(m, root, gd.sigkey)
        _TYPE_CACHE[key] = hit
    wkey = (hit.rank, hit.root, hit.signature)
    best = _WITNESS.get(wkey)
    if best is None or g.n < best.n:
        _WITNESS[wkey] = best = g
    return MsoType(hit.rank, hit.root, hit.signature, best)


def clear_caches():
    """Drop memoized types (node ids stay valid)."""
    _TYPE_CACHE.clear()
    _STATE_MEMO.clear()


def type_models(t: MsoType, f: Formula) -> bool:
    """Decide a closed formula of rank <= t.rank from the type tree alone."""
    if free_variables(f):
        raise ValueError("type_models needs a closed formula")
    if rank(f) > t.rank:
        raise RankError(f"formula rank {rank(f)} exceeds type rank {t.rank}")
    return _tm(f, t.root, [], {}, t.signature)


def _tm(f, nid, path, env, sig) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not _tm(f.body, nid, path, env, sig)
    if isinstance(f, And):
        return _tm(f.left, nid, path, env, sig) and _tm(f.right, nid, path, env, sig)
    if isinstance(f, Or):
        return _tm(f.left, nid, path, env, sig) or _tm(f.right, nid, path, env, sig)
    if isinstance(f, Implies):
        return (not _tm(f.left, nid, path, env, sig)) or _tm(f.right, nid, path, env, sig)
    if isinstance(f, Iff):
        return _tm(f.left, nid, path, env, sig) == _tm(f.right, nid, path, env, sig)
    if isinstance(f, (ExistsV, ForallV, ExistsS, ForallS)):
        _, vch, sch = _NODES[nid]
        kids = vch if isinstance(f, (ExistsV, ForallV)) else sch
        want = isinstance(f, (ExistsV, ExistsS))
        env2 = {**env, f.var: len(path)}
        for child in kids:
            path.append(_NODES[child][0])
            try:
                val = _tm(f.body, child, path, env2, sig)
            finally:
                path.pop()
            if val == want:
                return want
        return not want
    if isinstance(f, Eq):
        a, b = env[f.x], env[f.y]
        if a == b:
            return True
        lo, hi = min(a, b), max(a, b)
        return lo in path[hi][1]
    if isinstance(f, Arc):
        a, b = env[f.x], env[f.y]
        si = sig[0].index(f.sym)
        if a == b:
            return bool(path[a][2][si])
        if a < b:
            return a in path[b][4][si]
        return b in path[a][3][si]
    if isinstance(f, InSet):
        a, b = env[f.x], env[f.X]
        if a < b:
            return a in path[b][1]
        return b in path[a][5]
    if isinstance(f, ColorIs):
        return path[env[f.x]][6] == f.color
    if isinstance(f, Unary):
        return bool(path[env[f.x]][7][sig[1].index(f.sym)])
    raise TypeError(f"not a formula: {f!r}")


def _union(a, b):
    if isinstance(a, ColoredGraph) or isinstance(b, ColoredGraph):
        return colored_union(a, b)
    return disjoint_union(a, b)


def union_type(t1: MsoType, t2: MsoType, guard: SizeGuard = TYPE_GUARD) -> MsoType:
    if t1.rank != t2.rank:
        raise RankError("union_type needs equal ranks")
    return type_of(_union(t1.witness, t2.witness), t1.rank, guard)


def stabilization_count(g: R2Graph | ColoredGraph, m: int,
                        guard: SizeGuard = TYPE_GUARD) -> int:
    """Least N with t_m(N copies of g) = t_m(N+1 copies)."""
    if g.n == 0:
        return 1
    prev = type_of(_copies(g, 1), m, guard)
    N = 1
    while True:
        try:
            nxt = type_of(_copies(g, N + 1), m, guard)
        except TypeGuardError as exc:
            raise TypeGuardError(f"no stabilization up to {N} copies: {exc}") from None
        if nxt == prev:
            return N
        prev = nxt
        N += 1


def _copies(g, count):
    if isinstance(g, ColoredGraph):
        out = g
        for _ in range(count - 1):
            out = colored_union(out, g)
        return out
    return copies(g, count)


@dataclass
class Saturation:
    omega: R2Graph
    representatives: list
    counts: list
    chi_holds: bool | None
    universe_size: int


def build_saturation(universe: Iterable, m: int, chi: Formula | None = None,
                     guard: SizeGuard = SATURATION_GUARD,
                     check_guard: SizeGuard | None = None) -> Saturation:
    """Union of stabilized copies of one representative per realized type.

    The saturation property is checked against every universe member and a
    failure raises :class:`SaturationError`.  Colors are ignored.
    """
    members = [g.graph if isinstance(g, ColoredGraph) else g for g in universe]
    if not members:
        raise SaturationError("saturating_graph needs a non-empty universe")
    if chi is not None:
        for g in members:
            if not models(g, chi, check_guard or SizeGuard(16, 4096)):
                raise SaturationError("a universe member violates the restriction")
    reps: dict = {}
    for g in members:
        t = type_of(g, m, guard)
        if t not in reps or g.n < reps[t].n:
            reps[t] = g
    ordered = sorted(reps.values(), key=lambda h: (h.n, sorted(h.arcs)))
    counts = [stabilization_count(h, m, guard) for h in ordered]
    omega = copies(ordered[0], 0)
    for h, N in zip(ordered, counts):
        omega = disjoint_union(omega, copies(h, N))
    t_omega = type_of(omega, m, guard)
    for g in members:
        if type_of(disjoint_union(g, omega), m, guard) != t_omega:
            raise SaturationError("adjoining a universe member changed the type of Omega")
    chi_holds = None
    if chi is not None:
        chi_holds = models(omega, chi, check_guard or SizeGuard(64, 4096))
    return Saturation(omega, ordered, counts, chi_holds, len(members))


def saturating_graph(universe: Iterable, m: int, chi: Formula | None = None,
                     guard: SizeGuard = SATURATION_GUARD) -> R2Graph:
    return build_saturation(universe, m, chi, guard).omega


def annotate_types(c, m: int, k: int | None = None, symbols=None,
                   guard: SizeGuard = TYPE_GUARD) -> dict:
    """Map from node path to the colored type of every unmarked subtree."""
    k = cwd.num_colors(c) if k is None else k
    symbols = tuple(symbols) if symbols else tuple(sorted(cwd.arc_symbols(c))) or ("->",)
    out = {}
    stack = [(c, ())]
    while stack:
        nd, path = stack.pop()
        if cwd.marked_count(nd) == 0:
            out[path] = type_of(cwd.eval_decomposition(nd, symbols, k), m, guard)
        for i, ch in enumerate(cwd.children(nd)):
            stack.append((ch, path + (i,)))
    return out


def check_compositionality(c1, c2, c2p, m: int, k: int | None = None, symbols=None,
                           guard: SizeGuard = TYPE_GUARD) -> bool:
    """Whether gluing type-equal c2 and c2p into c1 yields equal types."""
    if not cwd.is_marked(c1):
        raise CompositionalityPrecondition("c1 must be marked")
    k = k or max(cwd.num_colors(x) for x in (c1, c2, c2p))
    symbols = tuple(symbols) if symbols else tuple(
        sorted(cwd.arc_symbols(c1) | cwd.arc_symbols(c2) | cwd.arc_symbols(c2p))) or ("->",)
    t2 = type_of(cwd.eval_decomposition(c2, symbols, k), m, guard)
    t2p = type_of(cwd.eval_decomposition(c2p, symbols, k), m, guard)
    if t2 != t2p:
        raise CompositionalityPrecondition("c2 and c2p have different types")
    g = cwd.eval_decomposition(cwd.glue(c1, c2), symbols, k)
    gp = cwd.eval_decomposition(cwd.glue(c1, c2p), symbols, k)
    return type_of(g, m, guard) == type_of(gp, m, guard)
