"""Gluing word-faces along a pairing and classifying the resulting surface.

:func:`glue` is the reference classifier: union-find over slots for the
vertex count, a face graph for components, and a two-colouring of faces
for orientability.

:func:`search_pairings` is a pruned enumerator that only visits pairings
whose surface stays within a topological budget.  It glues one pair at a
time and keeps the boundary cycles of the partial surface.  Each step
changes ``2 - chi`` summed over components by a fixed amount:

* two edges of one boundary cycle, opposite traversal: the cycle splits (+0)
* two edges of one boundary cycle, same traversal: a crosscap (+1)
* two boundary cycles of one component: a handle (+2)
* two components: they merge (+0)

The running total only grows and ends at ``sum(2 g_o + g_no)``, so a branch
can be cut as soon as it exceeds the budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import ConsistencyError
from .pairings import DecoratedPairing, Glue, Layout
from .words import is_balanced

DEFAULT_SEARCH_MAX_LENGTH = 64


@dataclass(frozen=True)
class SurfaceComponent:
    faces: frozenset
    V: int
    E: int
    F: int
    euler: int
    orientable: bool
    genus: int

    @property
    def is_sphere(self) -> bool:
        return self.euler == 2

    @property
    def is_projective_plane(self) -> bool:
        return not self.orientable and self.genus == 1


@dataclass(frozen=True)
class GluedSurface:
    components: tuple[SurfaceComponent, ...]
    V: int
    m: int
    k: int
    slot_classes: tuple[int, ...]  # class representative per global slot

    @property
    def exponent(self) -> int:
        """Power of ``N`` carried by the pairing, ``V - m/2``."""
        return self.V - self.m // 2

    @property
    def topological_exponent(self) -> int:
        """``2c - k - 2 g_o - g_no`` from the classified components."""
        total = 2 * len(self.components) - self.k
        for comp in self.components:
            total -= 2 * comp.genus if comp.orientable else comp.genus
        return total

    @property
    def is_sphere(self) -> bool:
        return len(self.components) == 1 and self.components[0].is_sphere

    @property
    def is_bi_atomic(self) -> bool:
        return all(c.is_sphere and c.F == 2 for c in self.components)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def glue_raw(layout: Layout, chosen: Sequence[tuple[int, int, Glue]]) -> GluedSurface:
    """Classify the surface of a resolved pairing (see :meth:`Layout.resolve`)."""
    m, k = layout.m, layout.k
    parent = list(range(m))
    for _, _, g in chosen:
        for a, b in g.merges:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                parent[ra] = rb
    roots = [_find(parent, s) for s in range(m)]

    # faces: components and orientation classes
    fparent = list(range(k))
    adj: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    face_of = layout.face_of
    for e, f, g in chosen:
        a, b = face_of[e], face_of[f]
        adj[a].append((b, g.parity))
        adj[b].append((a, g.parity))
        ra, rb = _find(fparent, a), _find(fparent, b)
        if ra != rb:
            fparent[ra] = rb
    colour = [-1] * k
    comp_orientable: dict[int, bool] = {}
    for start in range(k):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        ok = True
        stack = [start]
        while stack:
            u = stack.pop()
            for v, parity in adj[u]:
                want = colour[u] ^ parity
                if colour[v] < 0:
                    colour[v] = want
                    stack.append(v)
                elif colour[v] != want:
                    ok = False
        comp_orientable[_find(fparent, start)] = ok

    faces_of: dict[int, set] = {}
    for fc in range(k):
        faces_of.setdefault(_find(fparent, fc), set()).add(fc)
    verts: dict[int, set] = {}
    for s in range(m):
        verts.setdefault(_find(fparent, face_of[s]), set()).add(roots[s])
    edges: dict[int, int] = {}
    for e, _, _ in chosen:
        r = _find(fparent, face_of[e])
        edges[r] = edges.get(r, 0) + 1

    comps = []
    for r in sorted(faces_of, key=lambda r: min(faces_of[r])):
        V, E, F = len(verts[r]), edges.get(r, 0), len(faces_of[r])
        chi = V - E + F
        orientable = comp_orientable[r]
        if orientable:
            if chi % 2:
                raise ConsistencyError(f"orientable component with odd Euler characteristic {chi}")
            genus = (2 - chi) // 2
        else:
            genus = 2 - chi
            if genus < 1:
                raise ConsistencyError("non-orientable component with Euler characteristic 2")
        comps.append(SurfaceComponent(frozenset(faces_of[r]), V, E, F, chi, orientable, genus))
    surface = GluedSurface(tuple(comps), len(set(roots)), m, k, tuple(roots))
    if surface.exponent != surface.topological_exponent:
        raise ConsistencyError(
            f"V - m/2 = {surface.exponent} but 2c - k - 2g_o - g_no = {surface.topological_exponent}"
        )
    return surface


def glue(words: Sequence, phi: DecoratedPairing) -> GluedSurface:
    """Glue the faces of ``words`` along ``phi``.

    Raises :class:`InvalidPairingError` if ``phi`` is not an admissible
    decorated pairing of ``words``.
    """
    layout = words if isinstance(words, Layout) else Layout(words)
    return glue_raw(layout, layout.resolve(phi))


# ---------------------------------------------------------------------------
# pruned search


class _State:
    __slots__ = ("cycles", "cycle_comp", "where", "comps", "penalty", "vertices")

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.cycles = dict(self.cycles)
        s.cycle_comp = dict(self.cycle_comp)
        s.where = list(self.where)
        s.comps = dict(self.comps)
        s.penalty = self.penalty
        s.vertices = self.vertices
        return s


def _rotate(cycle: list, e: int) -> list:
    for i, (edge, _) in enumerate(cycle):
        if edge == e:
            return cycle[i:] + cycle[:i]
    raise KeyError(e)


def _flip(cycle: list) -> list:
    return [(edge, -d) for edge, d in reversed(cycle)]


def search_pairings(
    layout: Layout,
    max_penalty: int,
    component_faces: int | None = None,
    max_length: int | None = DEFAULT_SEARCH_MAX_LENGTH,
) -> Iterator[list[tuple[int, int, Glue]]]:
    """Pairings whose surface has ``sum(2 g_o + g_no) <= max_penalty``.

    With ``component_faces`` set, every component of the final surface must
    contain exactly that many faces.  Yields reused lists of
    ``(e, f, glue)`` triples like :func:`pairings.iter_raw`.
    """
    layout.check_size(max_length)
    m, k = layout.m, layout.k
    if m % 2 or not layout.balanced:
        return
    if component_faces is not None and k % component_faces:
        return
    letters = layout.letters

    st = _State()
    st.cycles = {}
    st.cycle_comp = {}
    st.where = [0] * m
    st.comps = {}
    for f in range(k):
        off, n = layout.offsets[f], layout.lengths[f]
        st.cycles[f] = [(off + p, 1) for p in range(n)]
        st.cycle_comp[f] = f
        st.comps[f] = (1, True)
        for p in range(n):
            st.where[off + p] = f
    st.penalty = 0
    st.vertices = 0
    next_id = [k]
    paired = [False] * m
    chosen: list[tuple[int, int, Glue]] = []

    def new_cycle(s: _State, comp: int, cyc: list) -> None:
        if not cyc:
            s.vertices += 1
            return
        cid = next_id[0]
        next_id[0] += 1
        s.cycles[cid] = cyc
        s.cycle_comp[cid] = comp
        for edge, _ in cyc:
            s.where[edge] = cid

    def close_ok(s: _State, comp: int) -> bool:
        # a component with no open cycles is final
        if any(c == comp for c in s.cycle_comp.values()):
            return True
        faces = s.comps[comp][0]
        return component_faces is None or faces == component_faces

    def apply(s: _State, e: int, f: int, parity: int) -> _State | None:
        ce, cf = s.where[e], s.where[f]
        comp_e, comp_f = s.cycle_comp[ce], s.cycle_comp[cf]
        s = s.copy()
        if ce == cf:
            cyc = _rotate(s.cycles.pop(ce), e)
            del s.cycle_comp[ce]
            j = next(i for i, (edge, _) in enumerate(cyc) if edge == f)
            eff = parity ^ (cyc[0][1] != cyc[j][1])
            x, y = cyc[1:j], cyc[j + 1:]
            if eff == 0:
                new_cycle(s, comp_e, x)
                new_cycle(s, comp_e, y)
            else:
                s.penalty += 1
                faces, _ = s.comps[comp_e]
                s.comps[comp_e] = (faces, False)
                new_cycle(s, comp_e, x + _flip(y))
            if not close_ok(s, comp_e):
                return None
            return s
        if comp_e == comp_f:
            ce_cyc = _rotate(s.cycles.pop(ce), e)
            cf_cyc = _rotate(s.cycles.pop(cf), f)
            del s.cycle_comp[ce], s.cycle_comp[cf]
            eff = parity ^ (ce_cyc[0][1] != cf_cyc[0][1])
            s.penalty += 2
            if eff == 0:
                merged = ce_cyc[1:] + cf_cyc[1:]
            else:
                faces, _ = s.comps[comp_e]
                s.comps[comp_e] = (faces, False)
                merged = ce_cyc[1:] + _flip(cf_cyc[1:])
            new_cycle(s, comp_e, merged)
            if not close_ok(s, comp_e):
                return None
            return s
        # two components merge into comp_e
        faces_e, or_e = s.comps.pop(comp_e)
        faces_f, or_f = s.comps.pop(comp_f)
        if component_faces is not None and faces_e + faces_f > component_faces:
            return None
        dir_e = s.cycles[ce][_pos(s.cycles[ce], e)][1]
        dir_f = s.cycles[cf][_pos(s.cycles[cf], f)][1]
        eff = parity ^ (dir_e != dir_f)
        for cid, comp in list(s.cycle_comp.items()):
            if comp == comp_f:
                s.cycle_comp[cid] = comp_e
                if eff:
                    s.cycles[cid] = _flip(s.cycles[cid])
        s.comps[comp_e] = (faces_e + faces_f, or_e and or_f)
        ce_cyc = _rotate(s.cycles.pop(ce), e)
        cf_cyc = _rotate(s.cycles.pop(cf), f)
        del s.cycle_comp[ce], s.cycle_comp[cf]
        new_cycle(s, comp_e, ce_cyc[1:] + cf_cyc[1:])
        if not close_ok(s, comp_e):
            return None
        return s

    def feasible(s: _State) -> bool:
        if s.penalty > max_penalty:
            return False
        if s.penalty < max_penalty:
            return True
        # No budget left: a cycle can only split, or join a cycle of another
        # component when the two components merge.  A component of F faces
        # still has at most (target - F) merges ahead, and each merge rescues
        # one unbalanced cycle of it.
        open_comps = set(s.cycle_comp.values())
        unbalanced: dict[int, int] = {}
        for cid, cyc in s.cycles.items():
            if not is_balanced(letters[edge] for edge, _ in cyc):
                comp = s.cycle_comp[cid]
                unbalanced[comp] = unbalanced.get(comp, 0) + 1
        if len(open_comps) == 1:
            return not unbalanced
        if component_faces is None:
            return True
        for comp, n in unbalanced.items():
            if n > component_faces - s.comps[comp][0]:
                return False
        return True

    def rec(s: _State, e: int):
        while e < m and paired[e]:
            e += 1
        if e == m:
            yield chosen
            return
        paired[e] = True
        for f in layout.partners[e]:
            if paired[f]:
                continue
            for g in layout.options[(e, f)]:
                s2 = apply(s, e, f, g.parity)
                if s2 is None or not feasible(s2):
                    continue
                paired[f] = True
                chosen.append((e, f, g))
                yield from rec(s2, e + 1)
                chosen.pop()
                paired[f] = False
        paired[e] = False

    if feasible(st):
        yield from rec(st, 0)


def _pos(cycle: list, e: int) -> int:
    for i, (edge, _) in enumerate(cycle):
        if edge == e:
            return i
    raise KeyError(e)


def count_matching(
    layout: Layout,
    max_penalty: int,
    component_faces: int | None,
    accept: Callable[[GluedSurface], bool],
    max_length: int | None = DEFAULT_SEARCH_MAX_LENGTH,
) -> int:
    """Count pairings from :func:`search_pairings` that ``accept`` approves after gluing."""
    total = 0
    for chosen in search_pairings(layout, max_penalty, component_faces, max_length):
        if accept(glue_raw(layout, chosen)):
            total += 1
    return total
