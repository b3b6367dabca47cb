"""Subdividing-and-pasting square complex.

The complex starts from a unit square that is split once into six
quadrilateral tiles around a Y-shaped interior wall.  Growth alternates two
global passes:

* subdivide: every leaf tile splits into six children (UL, UR, MID, LL,
  LR, BOT) by halving its sides and adding three interior vertices A, B, C
  joined by eight new wall segments;
* paste: every eligible 4-edge path X1-X2-Y-Z2-Z1 receives a new square
  sheet glued along the path, subdivided once at birth.

Everything is combinatorial.  Coordinates are synthesized only for drawing.
"""

from __future__ import annotations

import json
from collections import deque
from fractions import Fraction

POSITIONS = ("UL", "UR", "MID", "LL", "LR", "BOT")

# Child corner frames, each (NW, NE, SE, SW) in parent-local names.
# Parent names: corners NW NE SE SW, side mids U L R D, interior A B C.
CHILD_FRAMES = {
    "UL": ("NW", "U", "A", "L"),
    "UR": ("NE", "R", "B", "U"),
    "MID": ("A", "U", "B", "C"),
    "LL": ("SW", "L", "A", "C"),
    "LR": ("SE", "C", "B", "R"),
    "BOT": ("SE", "D", "SW", "C"),
}

# Child sides in order (top, right, bottom, left).  ("half", i, h) is half h
# of the parent's side i (halves counted along the side path); ("seg", k) is
# interior wall segment k of the subdivision.
CHILD_SIDES = {
    "UL": (("half", 0, 0), ("seg", 1), ("seg", 3), ("half", 3, 1)),
    "UR": (("half", 1, 0), ("seg", 6), ("seg", 2), ("half", 0, 1)),
    "MID": (("seg", 1), ("seg", 2), ("seg", 5), ("seg", 4)),
    "LL": (("half", 3, 0), ("seg", 3), ("seg", 4), ("seg", 7)),
    "LR": (("seg", 8), ("seg", 5), ("seg", 6), ("half", 1, 1)),
    "BOT": (("half", 2, 0), ("half", 2, 1), ("seg", 7), ("seg", 8)),
}

# Wall segment endpoints in parent-local names, ordered so that walking
# start -> end keeps the segment's A-side flank on the right.
SEG_ENDS = {
    1: ("U", "A"),
    2: ("B", "U"),
    3: ("A", "L"),
    4: ("A", "C"),
    5: ("C", "B"),
    6: ("R", "B"),
    7: ("C", "SW"),
    8: ("SE", "C"),
}

# (A-side child, B-side child) for each wall segment.
SEG_FLANKS = {
    1: ("UL", "MID"),
    2: ("UR", "MID"),
    3: ("UL", "LL"),
    4: ("LL", "MID"),
    5: ("LR", "MID"),
    6: ("UR", "LR"),
    7: ("LL", "BOT"),
    8: ("LR", "BOT"),
}

# For parent side i, the two children covering its halves, with the side
# index the half occupies inside the child.
HALF_FLANKS = {
    0: (("UL", 0), ("UR", 3)),
    1: (("UR", 0), ("LR", 3)),
    2: (("BOT", 0), ("BOT", 1)),
    3: (("LL", 0), ("UL", 3)),
}

SIDE_ROLES = ("U", "R", "D", "L")
BORDER_TYPES = ("top", "right", "bottom", "left")

SIDE_KINDS = frozenset({"side", "pasted-side"})
INNER_KINDS = frozenset({"inner", "pasted-inner"})
CORNER_KINDS = frozenset({"corner", "pasted-corner"})

HALF = Fraction(1, 2)

# Unit-square drawing coordinates of parent-local names (y grows upward).
LOCAL_COORDS = {
    "NW": (Fraction(0), Fraction(1)), "NE": (Fraction(1), Fraction(1)),
    "SE": (Fraction(1), Fraction(0)), "SW": (Fraction(0), Fraction(0)),
    "U": (HALF, Fraction(1)), "L": (Fraction(0), HALF),
    "R": (Fraction(1), HALF), "D": (HALF, Fraction(0)),
    "A": (Fraction(1, 4), HALF), "B": (Fraction(3, 4), HALF),
    "C": (HALF, Fraction(1, 4)),
}


class BudgetExhausted(RuntimeError):
    """Raised when a build exceeds its vertex budget."""


class Vertex:
    __slots__ = ("id", "kind", "level", "born_pass", "op", "sheet", "seg",
                 "pos", "owner_tile", "inner_name", "name")

    def __init__(self, vid, kind, level, born_pass, op, sheet, seg=None,
                 pos=None, owner_tile=None, inner_name=None, name=None):
        self.id = vid
        self.kind = kind
        self.level = level
        self.born_pass = born_pass
        self.op = op
        self.sheet = sheet
        self.seg = seg
        self.pos = pos
        self.owner_tile = owner_tile
        self.inner_name = inner_name
        self.name = name


class Edge:
    __slots__ = ("id", "a", "b", "seg", "sheet", "parent", "children", "mid",
                 "born_pass", "lo", "hi")

    def __init__(self, eid, a, b, seg, sheet, born_pass, lo, hi, parent=None):
        self.id = eid
        self.a = a
        self.b = b
        self.seg = seg
        self.sheet = sheet
        self.parent = parent
        self.children = None
        self.mid = None
        self.born_pass = born_pass
        self.lo = lo
        self.hi = hi

    @property
    def alive(self):
        return self.children is None

    def other(self, vid):
        return self.b if vid == self.a else self.a


class Segment:
    __slots__ = ("id", "stype", "sheet", "owner_tile", "roots", "start",
                 "end", "center", "born_pass")

    def __init__(self, sid, stype, sheet, owner_tile, start, end, born_pass):
        self.id = sid
        self.stype = stype
        self.sheet = sheet
        self.owner_tile = owner_tile
        self.roots = ()
        self.start = start
        self.end = end
        self.center = None
        self.born_pass = born_pass

    @property
    def is_border(self):
        return self.stype in BORDER_TYPES


class Tile:
    __slots__ = ("id", "frame", "sides", "position", "parent", "sheet",
                 "born_k", "birth_level", "children", "pending", "core",
                 "site")

    def __init__(self, tid, frame, sides, position, parent, sheet, born_k,
                 birth_level):
        self.id = tid
        self.frame = frame
        self.sides = sides
        self.position = position
        self.parent = parent
        self.sheet = sheet
        self.born_k = born_k
        self.birth_level = birth_level
        self.children = None
        self.pending = False
        self.core = None
        self.site = None

    @property
    def is_leaf(self):
        return self.children is None


class Sheet:
    __slots__ = ("id", "root_tile", "host", "core", "born_pass")

    def __init__(self, sid, root_tile, host, core, born_pass):
        self.id = sid
        self.root_tile = root_tile
        self.host = host
        self.core = core
        self.born_pass = born_pass


class PastingSite:
    """Eligible glue path X1-X2-Y-Z2-Z1 found after a subdivision pass."""

    __slots__ = ("x1", "x2", "y", "z2", "z1", "k", "edges")

    def __init__(self, x1, x2, y, z2, z1, k, edges):
        self.x1 = x1
        self.x2 = x2
        self.y = y
        self.z2 = z2
        self.z1 = z1
        self.k = k
        # (Y-X2, X2-X1, Y-Z2, Z2-Z1) edge ids
        self.edges = edges

    def path(self):
        return (self.x1, self.x2, self.y, self.z2, self.z1)

    def sort_key(self):
        ids = self.path()
        return (min(ids), ids)

    def __repr__(self):
        return "PastingSite(%d-%d-%d-%d-%d, k=%d)" % (*self.path(), self.k)


class Complex:
    """Mutable subdividing-and-pasting complex."""

    def __init__(self, vertex_cap=10_000_000):
        self.vertices: dict[int, Vertex] = {}
        self.edges: dict[int, Edge] = {}
        self.segments: dict[int, Segment] = {}
        self.tiles: dict[int, Tile] = {}
        self.sheets: dict[int, Sheet] = {}
        self.adj: dict[int, list[int]] = {}
        self.names: dict[str, int] = {}
        self.level_index: dict[int, list[int]] = {}
        self.corner_tiles: dict[int, list[int]] = {}
        self.degree_history: dict[int, list[tuple[int, int]]] = {}
        self.passes: list[tuple[str, int]] = []
        self.subdiv_count = 0
        self.paste_count = 0
        self.vertex_cap = vertex_cap
        self.root_tile = None
        self._next_vertex = 0
        self._next_edge = 0
        self._next_seg = 0
        self._next_tile = 0
        self._next_sheet = 0
        self._dirty_degrees: set[int] = set()
        self._pending_walls: dict[int, dict[int, int]] = {}

    # ------------------------------------------------------------------
    # low-level constructors

    @property
    def pass_index(self):
        return len(self.passes) - 1

    def _new_vertex(self, kind, level, op, sheet, seg=None, pos=None,
                    owner_tile=None, inner_name=None, name=None):
        if len(self.vertices) >= self.vertex_cap:
            raise BudgetExhausted(
                "vertex budget %d exhausted" % self.vertex_cap)
        vid = self._next_vertex
        self._next_vertex += 1
        v = Vertex(vid, kind, level, self.pass_index, op, sheet, seg, pos,
                   owner_tile, inner_name, name)
        self.vertices[vid] = v
        self.adj[vid] = []
        self.level_index.setdefault(level, []).append(vid)
        if name is not None:
            self.names[name] = vid
        return v

    def _new_edge(self, a, b, seg, sheet, lo, hi, parent=None):
        eid = self._next_edge
        self._next_edge += 1
        e = Edge(eid, a, b, seg, sheet, self.pass_index, lo, hi, parent)
        self.edges[eid] = e
        self.adj[a].append(eid)
        self.adj[b].append(eid)
        self._dirty_degrees.add(a)
        self._dirty_degrees.add(b)
        return e

    def _new_segment(self, stype, sheet, owner_tile, start, end):
        sid = self._next_seg
        self._next_seg += 1
        s = Segment(sid, stype, sheet, owner_tile, start, end,
                    self.pass_index)
        self.segments[sid] = s
        return s

    def _new_tile(self, frame, sides, position, parent, sheet, birth_level):
        tid = self._next_tile
        self._next_tile += 1
        t = Tile(tid, frame, sides, position, parent, sheet,
                 self.subdiv_count, birth_level)
        self.tiles[tid] = t
        for vid in frame:
            self.corner_tiles.setdefault(vid, []).append(tid)
        return t

    def _flush_degrees(self):
        idx = self.pass_index
        for vid in self._dirty_degrees:
            deg = len(self.adj[vid])
            hist = self.degree_history.setdefault(vid, [])
            if hist and hist[-1][0] == idx:
                hist[-1] = (idx, deg)
            elif not hist or hist[-1][1] != deg:
                hist.append((idx, deg))
        self._dirty_degrees.clear()

    # ------------------------------------------------------------------
    # basic queries

    def degree(self, vid):
        return len(self.adj[vid])

    def alive_edges_at(self, vid):
        return [self.edges[e] for e in self.adj[vid]]

    def tile_level(self, tile):
        if isinstance(tile, int):
            tile = self.tiles[tile]
        return self.subdiv_count - tile.born_k + tile.birth_level

    def leaves(self):
        return [t for t in self.tiles.values() if t.children is None]

    def expand_edge(self, edge, from_v):
        """Alive descendants of edge in path order starting at from_v.

        Yields (edge, far_vertex) pairs; the walk ends at the opposite
        original endpoint.
        """
        if edge.children is None:
            yield edge, edge.other(from_v)
            return
        c1, c2 = (self.edges[i] for i in edge.children)
        first, second = (c1, c2) if from_v in (c1.a, c1.b) else (c2, c1)
        last = from_v
        for pair in self.expand_edge(first, from_v):
            last = pair[1]
            yield pair
        yield from self.expand_edge(second, last)

    def side_edges(self, tile, i):
        """Alive edges along side i of tile, in path order."""
        cur = tile.frame[i]
        out = []
        for root_id in tile.sides[i][2]:
            root = self.edges[root_id]
            for e, far in self.expand_edge(root, cur):
                out.append((e, far))
                cur = far
        return out

    def side_vertices(self, tile, i):
        """Vertices along side i of tile, endpoints included, path order."""
        verts = [tile.frame[i]]
        for _e, far in self.side_edges(tile, i):
            verts.append(far)
        return verts

    def side_center(self, tile, i):
        verts = self.side_vertices(tile, i)
        if len(verts) % 2 == 0:
            raise ValueError("side %d of tile %d has no center" % (i, tile.id))
        return verts[len(verts) // 2]

    def child(self, tile, position):
        if tile.children is None:
            raise ValueError("tile %d not subdivided" % tile.id)
        return self.tiles[tile.children[POSITIONS.index(position)]]

    def division_points(self, tile):
        """role -> vertex id for the seven division vertices of a
        subdivided tile (U R D L A B C)."""
        if tile.children is None:
            raise ValueError("tile %d not subdivided" % tile.id)
        ul = self.tiles[tile.children[0]]
        ur = self.tiles[tile.children[1]]
        mid = self.tiles[tile.children[2]]
        if len(tile.children) == 6:
            d = self.tiles[tile.children[5]].frame[1]
        else:
            d = self.side_center(tile, 2)
        return {"U": ul.frame[1], "A": ul.frame[2], "L": ul.frame[3],
                "R": ur.frame[1], "B": mid.frame[2], "C": mid.frame[3],
                "D": d}

    def mid_vertex(self, tile, role):
        return self.division_points(tile)[role]

    def segment_vertices(self, seg):
        """Vertices along a segment from start to end, endpoints included."""
        verts = [seg.start]
        cur = seg.start
        for root_id in seg.roots:
            root = self.edges[root_id]
            for _e, far in self.expand_edge(root, cur):
                verts.append(far)
                cur = far
        return verts

    def shortest_path_len(self, u, v):
        """Edge count of a shortest path in the alive 1-skeleton."""
        if u == v:
            return 0
        dist = {u: 0}
        q = deque([u])
        while q:
            cur = q.popleft()
            d = dist[cur]
            for eid in self.adj[cur]:
                nxt = self.edges[eid].other(cur)
                if nxt not in dist:
                    if nxt == v:
                        return d + 1
                    dist[nxt] = d + 1
                    q.append(nxt)
        raise ValueError("vertices %d and %d are not connected" % (u, v))

    def vertex_degree_history(self, vid):
        """(pass_index, degree) checkpoints, recorded when the degree moved."""
        return list(self.degree_history.get(vid, ()))

    # ------------------------------------------------------------------
    # subdivision

    def _split_edge(self, edge, pass_level):
        """Split an alive edge, reusing the midpoint if already split."""
        if edge.children is not None:
            return self.vertices[edge.mid]
        seg = self.segments[edge.seg]
        kind = "side" if seg.sheet == 0 else "pasted-side"
        mid_pos = (edge.lo + edge.hi) / 2
        v = self._new_vertex(kind, pass_level, "subdivision", seg.sheet,
                             seg=edge.seg, pos=mid_pos)
        ca = self._new_edge(edge.a, v.id, edge.seg, edge.sheet, edge.lo,
                            mid_pos, parent=edge.id)
        cb = self._new_edge(v.id, edge.b, edge.seg, edge.sheet, mid_pos,
                            edge.hi, parent=edge.id)
        edge.children = (ca.id, cb.id)
        edge.mid = v.id
        self.adj[edge.a].remove(edge.id)
        self.adj[edge.b].remove(edge.id)
        self._dirty_degrees.add(edge.a)
        self._dirty_degrees.add(edge.b)
        if seg.center is None and edge.parent is None and len(seg.roots) == 1:
            seg.center = v.id
        return v

    def _subdivide_tile(self, tile, pass_level):
        """Split one leaf tile into its six children."""
        sheet = tile.sheet
        inner_kind = "inner" if sheet == 0 else "pasted-inner"

        # halve the four sides (idempotent across neighbours)
        side_halves = []
        mids = []
        for i in range(4):
            edges = self.side_edges(tile, i)
            if len(edges) == 1:
                e = edges[0][0]
                mid = self._split_edge(e, pass_level)
                halves = e.children if e.a == tile.frame[i] else \
                    (e.children[1], e.children[0])
            elif len(edges) == 2:
                mid = self.vertices[edges[0][1]]
                halves = (edges[0][0].id, edges[1][0].id)
            else:
                raise AssertionError(
                    "tile %d side %d has %d edges" % (tile.id, i, len(edges)))
            side_halves.append(halves)
            mids.append(mid)

        local = {
            "NW": tile.frame[0], "NE": tile.frame[1],
            "SE": tile.frame[2], "SW": tile.frame[3],
            "U": mids[0].id, "R": mids[1].id, "D": mids[2].id,
            "L": mids[3].id,
        }
        for nm in ("A", "B", "C"):
            v = self._new_vertex(inner_kind, pass_level, "subdivision", sheet,
                                 owner_tile=tile.id, inner_name=nm)
            local[nm] = v.id

        segs = {}
        for k, (s_nm, e_nm) in SEG_ENDS.items():
            seg = self._new_segment(str(k), sheet, tile.id,
                                    local[s_nm], local[e_nm])
            e = self._new_edge(local[s_nm], local[e_nm], seg.id, sheet,
                               Fraction(0), Fraction(1))
            seg.roots = (e.id,)
            segs[k] = seg

        children = []
        for pos in POSITIONS:
            frame = tuple(local[nm] for nm in CHILD_FRAMES[pos])
            sides = []
            for i, spec in enumerate(CHILD_SIDES[pos]):
                if spec[0] == "seg":
                    k = spec[1]
                    letter = "A" if SEG_FLANKS[k][0] == pos else "B"
                    sides.append((segs[k].id, letter, segs[k].roots))
                else:
                    _, pi, h = spec
                    parent_side = tile.sides[pi]
                    sides.append((parent_side[0], parent_side[1],
                                  (side_halves[pi][h],)))
            children.append(self._new_tile(frame, tuple(sides), pos, tile.id,
                                           sheet, 1))
        tile.children = tuple(ch.id for ch in children)

    def _repair_pending(self):
        """Finish sheets pasted last pass: add the missing eighth wall and
        register their LR and BOT children."""
        for tid, walls in sorted(self._pending_walls.items()):
            tile = self.tiles[tid]
            sheet = self.tiles[tile.children[0]].sheet
            pts = self.division_points(tile)
            local = {"NW": tile.frame[0], "NE": tile.frame[1],
                     "SE": tile.frame[2], "SW": tile.frame[3], **pts}

            seg8 = self._new_segment("8", sheet, tile.id, local["SE"],
                                     local["C"])
            e8 = self._new_edge(local["SE"], local["C"], seg8.id, sheet,
                                Fraction(0), Fraction(1))
            seg8.roots = (e8.id,)
            wall_segs = {k: self.segments[s] for k, s in walls.items()}
            wall_segs[8] = seg8

            new_children = {}
            for pos in ("LR", "BOT"):
                frame = tuple(local[nm] for nm in CHILD_FRAMES[pos])
                sides = []
                for i, spec in enumerate(CHILD_SIDES[pos]):
                    if spec[0] == "seg":
                        k = spec[1]
                        seg = wall_segs[k]
                        letter = "A" if SEG_FLANKS[k][0] == pos else "B"
                        sides.append((seg.id, letter, seg.roots))
                    else:
                        _, pi, h = spec
                        parent_side = tile.sides[pi]
                        sides.append((parent_side[0], parent_side[1],
                                      (parent_side[2][h],)))
                child = self._new_tile(frame, tuple(sides), pos, tile.id,
                                       sheet, 1)
                child.born_k = tile.born_k
                new_children[pos] = child.id
            tile.children = (tile.children[0], tile.children[1],
                             tile.children[2], tile.children[3],
                             new_children["LR"], new_children["BOT"])
            tile.pending = False
        self._pending_walls.clear()

    def subdivide(self):
        """Run one global subdivision pass over every leaf tile."""
        self.passes.append(("subdivide", self.subdiv_count + 1))
        self.subdiv_count += 1
        self._repair_pending()
        for tile in [t for t in self.tiles.values() if t.children is None]:
            self._subdivide_tile(tile, self.subdiv_count)
        self._flush_degrees()

    # ------------------------------------------------------------------
    # pasting

    def _branches_at(self, y, k):
        """Straight 2-edge rays y -> w -> x eligible as half glue paths."""
        out = []
        for eid in self.adj[y.id]:
            e = self.edges[eid]
            w = self.vertices[e.other(y.id)]
            if w.level != k or w.op != "subdivision":
                continue
            nxt = None
            for eid2 in self.adj[w.id]:
                if eid2 == eid:
                    continue
                e2 = self.edges[eid2]
                if e2.seg == e.seg:
                    nxt = e2
                    break
            if nxt is None:
                continue
            x = self.vertices[nxt.other(w.id)]
            if x.level != k - 1 or x.kind not in SIDE_KINDS:
                continue
            positive = (e.a == y.id)
            out.append((e, w, nxt, x, positive))
        return out

    def find_pasting_sites(self):
        """Enumerate glue paths eligible after the last subdivision pass.

        A path X1-X2-Y-Z2-Z1 qualifies when X2, Z2 are midpoints made by the
        last subdivision, X1, Z1 are one level older side vertices, Y is two
        levels older, and no tile already has X1, Y, Z1 among its corners.
        """
        k = self.subdiv_count
        if k < 2:
            return []
        sites = []
        for yid in self.level_index.get(k - 2, ()):
            y = self.vertices[yid]
            branches = self._branches_at(y, k)
            n = len(branches)
            for i in range(n):
                for j in range(i + 1, n):
                    b1, b2 = branches[i], branches[j]
                    if b1[3].id == b2[3].id or b1[1].id == b2[1].id:
                        continue
                    if self._corner_blocked(b1[3].id, yid, b2[3].id):
                        continue
                    xb, zb = self._orient(b1, b2)
                    sites.append(PastingSite(
                        xb[3].id, xb[1].id, yid, zb[1].id, zb[3].id, k,
                        (xb[0].id, xb[2].id, zb[0].id, zb[2].id)))
        sites.sort(key=PastingSite.sort_key)
        return sites

    def _corner_blocked(self, a, y, b):
        ta = self.corner_tiles.get(a)
        tb = self.corner_tiles.get(b)
        ty = self.corner_tiles.get(y)
        if not ta or not tb or not ty:
            return False
        common = set(ta).intersection(tb)
        if not common:
            return False
        return not common.isdisjoint(ty)

    def _orient(self, b1, b2):
        """Pick the X branch: the one leaving Y against its wall's grain.

        When both branches leave with the same sign the tie is broken by
        (wall type, segment id, midpoint id), smallest first.
        """
        s1, s2 = b1[4], b2[4]
        if s1 != s2:
            return (b1, b2) if not s1 else (b2, b1)

        def key(br):
            seg = self.segments[br[0].seg]
            return (seg.stype, seg.id, br[1].id)

        return (b1, b2) if key(b1) <= key(b2) else (b2, b1)

    def paste(self, site):
        """Glue a once-subdivided square sheet along a glue path.

        Adds six vertices and eleven edges.  The sheet's LR and BOT children
        (and its eighth interior wall) are registered at the start of the
        next subdivision pass, which keeps the sheet level-synchronized.
        """
        k = site.k
        host = self.vertices[site.y].sheet
        self._next_sheet += 1
        sheet_id = self._next_sheet

        t1 = self._new_vertex("pasted-corner", k - 1, "pasting", sheet_id)
        root = self._new_tile((site.y, site.x1, t1.id, site.z1), None,
                              "SHEET", None, host, 2)
        root.born_k = k
        root.core = site.y
        root.site = site
        self.sheets[sheet_id] = Sheet(sheet_id, root.id, host, site.y,
                                      self.pass_index)

        top = self._new_segment("top", sheet_id, root.id, site.y, site.x1)
        left = self._new_segment("left", sheet_id, root.id, site.z1, site.y)
        right = self._new_segment("right", sheet_id, root.id, site.x1, t1.id)
        bottom = self._new_segment("bottom", sheet_id, root.id, t1.id,
                                   site.z1)
        e_yx2, e_x2x1, e_yz2, e_z2z1 = site.edges
        top.roots = (e_yx2, e_x2x1)
        top.center = site.x2
        left.roots = (e_z2z1, e_yz2)
        left.center = site.z2

        t2 = self._new_vertex("pasted-side", k, "pasting", sheet_id,
                              seg=right.id, pos=HALF)
        t3 = self._new_vertex("pasted-side", k, "pasting", sheet_id,
                              seg=bottom.id, pos=HALF)
        ta = self._new_vertex("pasted-inner", k, "pasting", sheet_id,
                              owner_tile=root.id, inner_name="A")
        tb = self._new_vertex("pasted-inner", k, "pasting", sheet_id,
                              owner_tile=root.id, inner_name="B")
        tc = self._new_vertex("pasted-inner", k, "pasting", sheet_id,
                              owner_tile=root.id, inner_name="C")

        er1 = self._new_edge(site.x1, t2.id, right.id, sheet_id,
                             Fraction(0), HALF)
        er2 = self._new_edge(t2.id, t1.id, right.id, sheet_id,
                             HALF, Fraction(1))
        right.roots = (er1.id, er2.id)
        right.center = t2.id
        eb1 = self._new_edge(t1.id, t3.id, bottom.id, sheet_id,
                             Fraction(0), HALF)
        eb2 = self._new_edge(t3.id, site.z1, bottom.id, sheet_id,
                             HALF, Fraction(1))
        bottom.roots = (eb1.id, eb2.id)
        bottom.center = t3.id

        segs = {}
        wall_data = {
            1: (site.x2, ta.id), 2: (tb.id, site.x2), 3: (ta.id, site.z2),
            4: (ta.id, tc.id), 5: (tc.id, tb.id), 6: (t2.id, tb.id),
            7: (tc.id, site.z1),
        }
        for wk, (s_v, e_v) in wall_data.items():
            seg = self._new_segment(str(wk), sheet_id, root.id, s_v, e_v)
            e = self._new_edge(s_v, e_v, seg.id, sheet_id, Fraction(0),
                               Fraction(1))
            seg.roots = (e.id,)
            segs[wk] = seg

        local = {
            "NW": site.y, "NE": site.x1, "SE": t1.id, "SW": site.z1,
            "U": site.x2, "L": site.z2, "R": t2.id, "D": t3.id,
            "A": ta.id, "B": tb.id, "C": tc.id,
        }
        border_sides = (
            (top.id, None, top.roots),
            (right.id, None, right.roots),
            (bottom.id, None, bottom.roots),
            (left.id, None, left.roots),
        )
        root.sides = border_sides
        children = []
        for pos in ("UL", "UR", "MID", "LL"):
            frame = tuple(local[nm] for nm in CHILD_FRAMES[pos])
            sides = []
            for i, spec in enumerate(CHILD_SIDES[pos]):
                if spec[0] == "seg":
                    wk = spec[1]
                    letter = "A" if SEG_FLANKS[wk][0] == pos else "B"
                    sides.append((segs[wk].id, letter, segs[wk].roots))
                else:
                    _, pi, h = spec
                    parent_side = border_sides[pi]
                    sides.append((parent_side[0], None,
                                  (parent_side[2][h],)))
            children.append(self._new_tile(frame, tuple(sides), pos, root.id,
                                           sheet_id, 1))
        for ch in children:
            ch.born_k = k
        root.children = tuple(ch.id for ch in children)
        root.pending = True
        self._pending_walls[root.id] = {wk: s.id for wk, s in segs.items()}
        self.paste_count += 1
        return root

    def run_paste_pass(self):
        """Find and paste every eligible site, in deterministic order."""
        sites = self.find_pasting_sites()
        if not sites:
            return []
        self.passes.append(("paste", self.subdiv_count))
        pasted = [self.paste(site) for site in sites]
        self._flush_degrees()
        return pasted

    # ------------------------------------------------------------------
    # flank descent: locating the tiles a side vertex separates

    _INIT_FLIP = None

    @classmethod
    def _init_flip_table(cls):
        if cls._INIT_FLIP is None:
            table = {}
            for k, (a_child, b_child) in SEG_FLANKS.items():
                for letter, child in (("A", a_child), ("B", b_child)):
                    for i, spec in enumerate(CHILD_SIDES[child]):
                        if spec == ("seg", k):
                            frm = CHILD_FRAMES[child][i]
                            to = CHILD_FRAMES[child][(i + 1) % 4]
                            table[(k, letter)] = (
                                child, i, (frm, to) != SEG_ENDS[k])
            cls._INIT_FLIP = table
        return cls._INIT_FLIP

    def side_flank(self, seg, letter, pos):
        """Descend to the tile of which pos on seg is a side midpoint.

        Returns (tile, role) with role in U R D L: the vertex at pos is the
        midpoint of that side of the returned tile.  letter picks the flank
        for wall segments and is ignored for borders (single flank).
        """
        if seg.is_border:
            tile = (self.tiles[seg.owner_tile] if seg.owner_tile is not None
                    else self.root_tile)
            i = BORDER_TYPES.index(seg.stype)
            flipped = False
        else:
            child_pos, i, flipped = self._init_flip_table()[
                (int(seg.stype), letter)]
            owner = self.tiles[seg.owner_tile]
            tile = self.child(owner, child_pos)
        lo, hi = Fraction(0), Fraction(1)
        while True:
            mid = (lo + hi) / 2
            if pos == mid:
                return tile, SIDE_ROLES[i]
            h_path = 0 if (pos < mid) != flipped else 1
            child_pos, i = HALF_FLANKS[i][h_path]
            tile = self.child(tile, child_pos)
            if pos < mid:
                hi = mid
            else:
                lo = mid

    def flanks(self, vid):
        """For a side vertex: ((tileA, roleA), (tileB, roleB)).

        A border vertex has a single flank; the second entry is None.
        """
        v = self.vertices[vid]
        if v.kind not in SIDE_KINDS:
            raise ValueError("vertex %d is not a side vertex" % vid)
        seg = self.segments[v.seg]
        if seg.is_border:
            return (self.side_flank(seg, None, v.pos), None)
        return (self.side_flank(seg, "A", v.pos),
                self.side_flank(seg, "B", v.pos))

    # ------------------------------------------------------------------
    # flip certificates

    # For the route through corner frame[i] of a subdivided tile (traversed
    # frame[i-1] -> frame[i+1]), the child transforms rewriting it into the
    # route through frame[i+2]: (child position, child via, offset in units
    # of the child's half side).  Tables for i = 0, 1; i + 2 by inversion.
    _ROUTE_STEPS = {
        1: (("UR", 0, 1), ("LR", 3, 2), ("MID", 2, 1), ("UL", 1, 0),
            ("LL", 2, 1), ("BOT", 3, 2)),
        0: (("UL", 0, 1), ("LL", 1, 0), ("MID", 0, 1), ("UR", 3, 2),
            ("LR", 2, 1), ("BOT", 3, 0)),
    }

    @staticmethod
    def dead_leaf_crossing(tile, via):
        """True when crossing this leaf via the given corner has no
        elementary swap: the two crossings joining a division's dead
        diagonal (A-B on MID, C-D on BOT) are not rewritable."""
        return ((tile.position == "MID" and via % 2 == 1)
                or (tile.position == "BOT" and via % 2 == 0))

    def _transform(self, tile, via, offset, anti, out):
        """Emit elementary swaps turning the route via frame[via] of tile
        into the route via the opposite corner.  offset indexes the route's
        first vertex inside the ambient path; anti means the ambient path
        traverses the route from frame[via+1] to frame[via-1]."""
        if tile.children is None:
            assert not self.dead_leaf_crossing(tile, via), \
                "dead crossing requested on %s leaf" % tile.position
            out.append((offset + 1, tile.id, tile.frame[via],
                        tile.frame[(via + 2) % 4]))
            return
        half = 2 ** (self.tile_level(tile) - 2)
        entries = self._ROUTE_STEPS[via % 2]
        if via >= 2:
            entries = [(pos, (v + 2) % 4, off)
                       for pos, v, off in reversed(entries)]
        mirror = (via >= 2) ^ anti
        for pos, child_via, off in entries:
            use = (2 - off) if mirror else off
            self._transform(self.child(tile, pos), child_via,
                            offset + use * half, anti, out)

    def route_path(self, tile, via):
        """Vertex path along the two sides of tile meeting at frame[via]."""
        first = self.side_vertices(tile, (via - 1) % 4)
        second = self.side_vertices(tile, via)
        return first + second[1:]

    def flip_two_sides(self, tile, via=1):
        """Certificate rewriting one half-perimeter into the other.

        Returns a dict with the before/after vertex paths and the elementary
        swap steps (path_index, leaf_tile, old_mid, new_mid): each step
        crosses one leaf tile the other way around.
        """
        if isinstance(tile, int):
            tile = self.tiles[tile]
        if tile.pending:
            raise ValueError("tile %d awaits its repair pass" % tile.id)
        if tile.children is None and self.dead_leaf_crossing(tile, via):
            raise ValueError(
                "leaf %s tile crossed via its dead diagonal" % tile.position)
        before = self.route_path(tile, via)
        steps = []
        self._transform(tile, via, 0, False, steps)
        after = list(before)
        for idx, leaf, old, new in steps:
            if after[idx] != old:
                raise AssertionError("certificate misaligned at %d" % idx)
            corners = set(self.tiles[leaf].frame)
            if not {after[idx - 1], old, after[idx + 1], new} <= corners:
                raise AssertionError("swap not supported by leaf %d" % leaf)
            after[idx] = new
        expect = self.route_path(tile, (via + 2) % 4)
        expect.reverse()
        if after != expect:
            raise AssertionError("certificate does not reach target route")
        return {"before": before, "after": after, "steps": steps,
                "tile": tile.id, "via": via}

    # ------------------------------------------------------------------
    # layout and export

    def layout(self, root=None):
        """Unit-square drawing coordinates for one sheet's vertex set."""
        if root is None:
            root = self.root_tile
        elif isinstance(root, int):
            root = self.tiles[root]
        pos = {}
        for vid, nm in zip(root.frame, ("NW", "NE", "SE", "SW")):
            pos[vid] = LOCAL_COORDS[nm]
        stack = [root]
        while stack:
            tile = stack.pop()
            if tile.children is None:
                continue
            (nwx, nwy), (nex, ney) = pos[tile.frame[0]], pos[tile.frame[1]]
            (sex, sey), (swx, swy) = pos[tile.frame[2]], pos[tile.frame[3]]

            def bil(x, y):
                return (nwx * (1 - x) * y + nex * x * y + sex * x * (1 - y)
                        + swx * (1 - x) * (1 - y),
                        nwy * (1 - x) * y + ney * x * y + sey * x * (1 - y)
                        + swy * (1 - x) * (1 - y))

            for nm, vid in self.division_points(tile).items():
                if vid not in pos:
                    pos[vid] = bil(*LOCAL_COORDS[nm])
            for cid in tile.children:
                stack.append(self.tiles[cid])
        return pos

    def stats(self):
        return {
            "vertices": len(self.vertices),
            "edges_alive": sum(1 for e in self.edges.values() if e.alive),
            "edges_total": len(self.edges),
            "segments": len(self.segments),
            "tiles_total": len(self.tiles),
            "tiles_leaf": sum(1 for t in self.tiles.values()
                              if t.children is None),
            "sheets": len(self.sheets),
            "subdivisions": self.subdiv_count,
            "pastings": self.paste_count,
        }

    def to_json(self):
        verts = [{
            "id": v.id, "kind": v.kind, "level": v.level, "sheet": v.sheet,
            "name": v.name, "segment": v.seg,
            "pos": None if v.pos is None else str(v.pos),
        } for v in self.vertices.values()]
        edges = [{
            "id": e.id, "a": e.a, "b": e.b, "segment": e.seg,
            "sheet": e.sheet, "alive": e.alive, "parent": e.parent,
        } for e in self.edges.values()]
        tiles = [{
            "id": t.id, "frame": list(t.frame), "position": t.position,
            "parent": t.parent, "sheet": t.sheet,
            "leaf": t.children is None, "level": self.tile_level(t),
        } for t in self.tiles.values()]
        segments = [{
            "id": s.id, "type": s.stype, "sheet": s.sheet,
            "owner": s.owner_tile, "start": s.start, "end": s.end,
            "center": s.center,
        } for s in self.segments.values()]
        return json.dumps({
            "stats": self.stats(), "vertices": verts, "edges": edges,
            "tiles": tiles, "segments": segments,
        }, indent=1)

    def to_dot(self):
        lines = ["graph complex {", "  node [shape=point];"]
        for v in self.vertices.values():
            extra = ' xlabel="%s"' % v.name if v.name else ""
            lines.append("  v%d [width=0.05%s];" % (v.id, extra))
        for e in self.edges.values():
            if e.alive:
                lines.append("  v%d -- v%d;" % (e.a, e.b))
        lines.append("}")
        return "\n".join(lines)

    def _sheet_layouts(self):
        """(label, layout dict) for the base square and every sheet."""
        out = [("base", self.layout(self.root_tile))]
        for sid in sorted(self.sheets):
            sheet = self.sheets[sid]
            out.append(("sheet %d" % sid,
                        self.layout(self.tiles[sheet.root_tile])))
        return out

    def to_svg(self, cell=360, columns=4, max_sheets=None):
        """Base square plus pasted sheets drawn as a gallery of insets."""
        layouts = self._sheet_layouts()
        if max_sheets is not None:
            layouts = layouts[:max_sheets + 1]
        n = len(layouts)
        cols = min(columns, n)
        rows = (n + cols - 1) // cols
        pad = cell // 8
        w = cols * (cell + pad) + pad
        h = rows * (cell + pad) + pad
        out = ["<svg xmlns='http://www.w3.org/2000/svg' width='%d' "
               "height='%d' viewBox='0 0 %d %d'>" % (w, h, w, h),
               "<rect width='100%' height='100%' fill='white'/>"]
        for idx, (label, pos) in enumerate(layouts):
            ox = pad + (idx % cols) * (cell + pad)
            oy = pad + (idx // cols) * (cell + pad)

            def pt(vid):
                x, y = pos[vid]
                return (ox + float(x) * cell, oy + (1 - float(y)) * cell)

            drawn = set()
            for vid in pos:
                for eid in self.adj[vid]:
                    if eid in drawn:
                        continue
                    e = self.edges[eid]
                    if e.a in pos and e.b in pos:
                        drawn.add(eid)
                        (ax, ay), (bx, by) = pt(e.a), pt(e.b)
                        seg = self.segments[e.seg]
                        color = "#999" if seg.is_border else "#2a7"
                        out.append(
                            "<line x1='%.1f' y1='%.1f' x2='%.1f' y2='%.1f'"
                            " stroke='%s' stroke-width='0.7'/>"
                            % (ax, ay, bx, by, color))
            for vid in pos:
                x, y = pt(vid)
                out.append("<circle cx='%.1f' cy='%.1f' r='1.4' "
                           "fill='#333'/>" % (x, y))
                name = self.vertices[vid].name
                if name:
                    out.append("<text x='%.1f' y='%.1f' font-size='11'>%s"
                               "</text>" % (x + 3, y - 3, name))
            out.append("<text x='%d' y='%d' font-size='12' fill='#555'>%s"
                       "</text>" % (ox, oy - 3, label))
        out.append("</svg>")
        return "\n".join(out)


# ----------------------------------------------------------------------
# construction

def seed_complex(vertex_cap=10_000_000):
    """The once-subdivided unit square: 11 vertices, 16 edges, 6 tiles."""
    c = Complex(vertex_cap=vertex_cap)
    c.passes.append(("seed", 0))

    corners = {}
    for nm in ("NW", "NE", "SE", "SW"):
        corners[nm] = c._new_vertex("corner", 0, "seed", 0, name=nm).id

    border_ends = {
        "top": ("NW", "NE"), "right": ("NE", "SE"),
        "bottom": ("SE", "SW"), "left": ("SW", "NW"),
    }
    sides = []
    for stype in BORDER_TYPES:
        s_nm, e_nm = border_ends[stype]
        seg = c._new_segment(stype, 0, None, corners[s_nm], corners[e_nm])
        e = c._new_edge(corners[s_nm], corners[e_nm], seg.id, 0,
                        Fraction(0), Fraction(1))
        seg.roots = (e.id,)
        sides.append((seg.id, None, seg.roots))

    root = c._new_tile((corners["NW"], corners["NE"], corners["SE"],
                        corners["SW"]), tuple(sides), "ROOT", None, 0, 2)
    c.root_tile = root
    c._subdivide_tile(root, 0)

    for role, vid in c.division_points(root).items():
        c.vertices[vid].name = role
        c.names[role] = vid
    c._flush_degrees()
    return c


def build(n, vertex_cap=10_000_000, paste=True):
    """Level-n complex: the seed grown by n - 1 subdivide-then-paste rounds."""
    if n < 1:
        raise ValueError("build level must be >= 1")
    c = seed_complex(vertex_cap=vertex_cap)
    for _ in range(n - 1):
        c.subdivide()
        if paste:
            c.run_paste_pass()
    return c
