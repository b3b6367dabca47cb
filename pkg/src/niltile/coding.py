"""Finite codes for the vertices and edges of a grown complex.

A complex that has been subdivided a few times looks locally the same
almost everywhere.  Every vertex can therefore be described by a small
record: its node type, a capped depth class, the environments of the
tiles around it, and a short reference to the senior vertices that
control its neighbourhood.  Vertices that sit on a division artery of
some ancestor tile additionally carry a chain record with a pointer
saying which ray of the artery they occupy.  These records, together
with names for the edges leaving each vertex, form the finite alphabet
that the relation and rewriting layers work over.

Pasted sheets run their own copy of the machinery.  A vertex on the
entry border of a sheet gets one extra code per sheet naming its role
there, and the edges leading into the sheet are written with a hat.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .core import BORDER_TYPES, CORNER_KINDS, INNER_KINDS, SIDE_KINDS, build

__all__ = [
    "Chain",
    "Information",
    "VertexCode",
    "InapplicableArgument",
    "EDGE_TYPE_TAGS",
    "classify_edge",
    "classify_vertex",
    "tile_environment",
    "environment_of",
    "env_object_of",
    "raw_level_of",
    "level_class_of",
    "build_chain",
    "chain_of",
    "information_of",
    "edge_name_at",
    "edge_letter",
    "pasting_code_of",
    "sheet_roles",
    "harvest_node_tables",
    "default_node_tables",
    "node_fn",
    "vertex_code",
    "vertex_codes",
    "code_census",
    "code_digest",
    "code_table_json",
    "alphabet_sets",
    "observed_tile_environments",
]

# all sixteen wall tags plus the four border names
EDGE_TYPE_TAGS = tuple(
    "%d%s" % (k, f) for k in range(1, 9) for f in ("A", "B")
) + BORDER_TYPES

_CORNER_ENV = ("left", "top", "right", "bottom")
_GLOBAL_CORNERS = {"NW": "CUL", "NE": "CUR", "SE": "CDR", "SW": "CDL"}

# ray names at an inner vertex for the three arteries it starts
_MAIN_RAYS = {
    "A": {1: "1", 4: "2", 3: "3"},
    "B": {2: "1", 6: "2", 5: "3"},
    "C": {4: "1", 5: "2", 8: "3", 7: "4"},
}

# type 7 and 8 walls end on a corner of their owner tile; the ray name
# seen from that corner depends only on where the owner sits
_POS7 = {"UL": "l2", "LL": "ld1", "MID": "m1", "UR": "u3", "LR": "r2",
         "BOT": "d1", "ROOT": "w7", "SHEET": "w7"}
_POS8 = {"UL": "lu", "LL": "ld", "MID": "m", "UR": "ru", "LR": "rd",
         "ROOT": "w8", "SHEET": "w8"}
_POS8_BOT = {"UL": "l3", "LL": "ld2", "MID": "m2", "UR": "u4", "LR": "r3",
             "BOT": "d2", "ROOT": "w8", "SHEET": "w8"}

# walls of type 1, 2, 3, 6 end on the middle of a side of their owner
_FLANK_SEG_RAYS = {1: "u2", 2: "u1", 3: "l1", 6: "r1"}

# walls can end on the top or on the left entry border; rotation means
# both borders carry tiles in either orientation, so the two side roles
# accept the same ray families
_ENTRY_RAYS = ("u1", "u2", "u3", "u4", "l1", "l2", "l3")
_HATTABLE = {
    "CUR": {"1": "r^"},
    "CDL": {"2": "d^", "w7": "d2^", "w8": "d3^"},
    "U": {n: n + "^" for n in _ENTRY_RAYS},
    "L": {n: n + "^" for n in _ENTRY_RAYS},
}


class InapplicableArgument(ValueError):
    """A node function has no value for the given argument."""


@dataclass(frozen=True)
class Chain:
    """One artery level around a vertex, with its member nodes."""

    center: int
    plane: int
    level: int
    members: tuple  # ((vertex id, pointer), ...) clockwise from ray 1
    env: tuple      # ((pointer, member environment), ...), same order


@dataclass(frozen=True)
class Information:
    """References to the senior vertices controlling a neighbourhood."""

    first: tuple
    second: tuple | None = None
    third: tuple | None = None
    corner_type: str | None = None

    def as_tuple(self):
        return (self.first, self.second, self.third, self.corner_type)


@dataclass(frozen=True)
class VertexCode:
    """The full bounded description of one vertex."""

    node_type: str
    level_class: int | None
    environment: tuple
    information: Information | None
    pasting: tuple = ()  # ((sheet id, pasting code), ...) sorted by sheet

    def key(self):
        """Canonical form: pasting roles kept, sheet identities dropped."""
        info = self.information.as_tuple() if self.information else None
        extra = tuple(sorted((code for _sid, code in self.pasting), key=repr))
        return (self.node_type, self.level_class, self.environment, info, extra)


# ----------------------------------------------------------------------
# shared per-complex cache

def _cache(c):
    stamp = (c.subdiv_count, c.paste_count, len(c.vertices), len(c.edges))
    cached = getattr(c, "_coding_cache", None)
    if cached is None or cached["stamp"] != stamp:
        cached = {"stamp": stamp, "layout": {}, "chains": {}, "tile_env": {},
                  "seg_pos": {}, "roles": None, "sheet_of_root": None}
        c._coding_cache = cached
    return cached


def _plane_root(c, plane):
    if plane == 0:
        return c.root_tile
    return c.tiles[c.sheets[plane].root_tile]


def _tile_plane(c, tile):
    """Plane a tile's own fabric belongs to (a sheet root is in its sheet)."""
    if tile.position != "SHEET":
        return tile.sheet
    cache = _cache(c)
    if cache["sheet_of_root"] is None:
        cache["sheet_of_root"] = {s.root_tile: sid for sid, s in c.sheets.items()}
    return cache["sheet_of_root"][tile.id]


def _layout(c, plane):
    cache = _cache(c)["layout"]
    got = cache.get(plane)
    if got is None:
        got = c.layout(_plane_root(c, plane))
        cache[plane] = got
    return got


def _seg_pos_map(c, seg):
    cache = _cache(c)["seg_pos"]
    got = cache.get(seg.id)
    if got is None:
        path = c.segment_vertices(seg)
        n = len(path) - 1
        got = {vid: Fraction(i, n) for i, vid in enumerate(path)}
        cache[seg.id] = got
    return got


def _seg_pos(c, seg, vid):
    v = c.vertices[vid]
    if v.seg == seg.id:
        return v.pos
    try:
        return _seg_pos_map(c, seg)[vid]
    except KeyError:
        raise ValueError("vertex %d is not on segment %d" % (vid, seg.id)) from None


def _sheet_border_seg(c, plane, vid):
    """Top or left border segment of a sheet carrying a borrowed vertex."""
    if plane == 0:
        return None
    root = _plane_root(c, plane)
    for i in (0, 3):
        seg = c.segments[root.sides[i][0]]
        if vid in _seg_pos_map(c, seg):
            return seg
    return None


# ----------------------------------------------------------------------
# edge and vertex types

def _side_tag(c, tile, i):
    sid, letter, _roots = tile.sides[i]
    seg = c.segments[sid]
    if seg.is_border:
        return seg.stype
    return "%s%s" % (seg.stype, letter)


def tile_environment(c, tile):
    """Side type tags of a tile, read (left, top, right, bottom)."""
    if isinstance(tile, int):
        tile = c.tiles[tile]
    cache = _cache(c)["tile_env"]
    got = cache.get(tile.id)
    if got is None:
        got = (_side_tag(c, tile, 3), _side_tag(c, tile, 0),
               _side_tag(c, tile, 1), _side_tag(c, tile, 2))
        cache[tile.id] = got
    return got


def observed_tile_environments(c):
    """Environments of every divided tile in the complex."""
    return {tile_environment(c, t) for t in c.tiles.values()
            if t.children is not None}


def classify_edge(c, edge, tile=None):
    """Type tag of an edge; wall edges are typed relative to a reading tile."""
    e = c.edges[edge] if isinstance(edge, int) else edge
    seg = c.segments[e.seg]
    if seg.is_border:
        return seg.stype
    if tile is None:
        raise ValueError("wall edge %d needs a reading tile for its letter" % e.id)
    if isinstance(tile, int):
        tile = c.tiles[tile]
    for sid, letter, roots in tile.sides:
        if sid != seg.id:
            continue
        lo = min(c.edges[r].lo for r in roots)
        hi = max(c.edges[r].hi for r in roots)
        if lo <= e.lo and e.hi <= hi:
            return "%s%s" % (seg.stype, letter)
    raise ValueError("edge %d is not on a side of tile %d" % (e.id, tile.id))


def classify_vertex(c, vid, plane=None):
    """Node type tag, optionally as seen from a sheet the vertex borders."""
    v = c.vertices[vid]
    if plane is not None and plane != v.sheet:
        root = _plane_root(c, plane)
        if vid in root.frame:
            return ("CUL", "CUR", "CDR", "CDL")[root.frame.index(vid)]
        seg = _sheet_border_seg(c, plane, vid)
        if seg is None:
            raise ValueError("vertex %d is not on plane %d" % (vid, plane))
        return c.side_flank(seg, None, _seg_pos(c, seg, vid))[1]
    if v.kind == "pasted-corner":
        return "CDR"
    if v.kind in CORNER_KINDS:
        return _GLOBAL_CORNERS[v.name]
    if v.kind in INNER_KINDS:
        return v.inner_name
    a, b = c.flanks(vid)
    if b is None:
        return a[1]
    return a[1] + b[1]


def raw_level_of(c, vid, plane=None):
    """Uncapped depth of a side vertex: its flank sits one level above it."""
    v = c.vertices[vid]
    if plane is None or plane == v.sheet:
        if v.kind not in SIDE_KINDS:
            return None
        return c.tile_level(c.flanks(vid)[0][0]) - 1
    root = _plane_root(c, plane)
    if vid in root.frame:
        return None
    seg = _sheet_border_seg(c, plane, vid)
    if seg is None:
        raise ValueError("vertex %d is not on plane %d" % (vid, plane))
    tile, _role = c.side_flank(seg, None, _seg_pos(c, seg, vid))
    return c.tile_level(tile) - 1


def level_class_of(c, vid, plane=None):
    lvl = raw_level_of(c, vid, plane)
    return None if lvl is None else min(lvl, 3)


# ----------------------------------------------------------------------
# environments

def _env_in_plane(c, vid, plane):
    v = c.vertices[vid]
    if plane != v.sheet:
        root = _plane_root(c, plane)
        if vid in root.frame:
            return _CORNER_ENV
        seg = _sheet_border_seg(c, plane, vid)
        if seg is None:
            raise ValueError("vertex %d is not on plane %d" % (vid, plane))
        tile, _role = c.side_flank(seg, None, _seg_pos(c, seg, vid))
        return tile_environment(c, tile)
    if v.kind in CORNER_KINDS:
        return _CORNER_ENV
    if v.kind in INNER_KINDS:
        return tile_environment(c, c.tiles[v.owner_tile])
    a, b = c.flanks(vid)
    if b is None:
        return tile_environment(c, a[0])
    return (tile_environment(c, a[0]), tile_environment(c, b[0]))


def environment_of(c, vid, plane=None):
    """Plain environment: tile environments of the flanks around a vertex."""
    v = c.vertices[vid]
    return _env_in_plane(c, vid, v.sheet if plane is None else plane)


def env_object_of(c, vid, plane=None):
    """Environment as carried in codes: a chain record when one applies."""
    got = chain_of(c, vid, plane)
    if got is not None:
        chain, pointer = got
        return ("chain", chain.env, pointer)
    return ("env", environment_of(c, vid, plane))


# ----------------------------------------------------------------------
# rays and chains

def _ray_name(c, center, seg, at):
    """Name of the ray leaving `center` along `seg`.

    `at` is any position of `seg` strictly on the departing side; it is
    only consulted when the center itself lies inside the segment.
    """
    v = c.vertices[center]
    if v.seg == seg.id:
        return "1" if at > v.pos else "2"
    if seg.is_border:
        if seg.start == center:
            return "1"
        if seg.end == center:
            return "2"
        here = _seg_pos(c, seg, center)
        return "1" if at > here else "2"
    stype = int(seg.stype)
    if v.kind in INNER_KINDS and v.owner_tile == seg.owner_tile:
        return _MAIN_RAYS[v.inner_name][stype]
    owner = c.tiles[seg.owner_tile]
    if stype == 7:
        return _POS7[owner.position]
    if stype == 8:
        if owner.position == "BOT":
            return _POS8_BOT[c.tiles[owner.parent].position]
        return _POS8[owner.position]
    if stype in _FLANK_SEG_RAYS:
        return _FLANK_SEG_RAYS[stype]
    raise ValueError("segment %d starts no named ray at vertex %d"
                     % (seg.id, center))


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _main_direction(c, center, plane, pos):
    """Direction of ray 1 at a chain center, in layout coordinates."""
    v = c.vertices[center]
    root = _plane_root(c, plane)
    if v.kind in CORNER_KINDS or (plane != v.sheet and center in root.frame):
        for i in range(4):
            seg = c.segments[root.sides[i][0]]
            if seg.start == center:
                return _sub(pos[seg.end], pos[center])
        raise ValueError("corner %d starts no border of plane %d" % (center, plane))
    if v.kind in INNER_KINDS:
        target = {"A": "U", "B": "U", "C": "A"}[v.inner_name]
        point = c.division_points(c.tiles[v.owner_tile])[target]
        return _sub(pos[point], pos[center])
    if plane != v.sheet:
        seg = _sheet_border_seg(c, plane, center)
    else:
        seg = c.segments[v.seg]
    return _sub(pos[seg.end], pos[seg.start])


def _clockwise_order(items, d0):
    """Sort (dx, dy, key) triples clockwise starting from direction d0."""
    x0, y0 = d0

    def bucket(dx, dy):
        cr = x0 * dy - y0 * dx
        if cr == 0:
            return 0 if x0 * dx + y0 * dy > 0 else 2
        return 1 if cr < 0 else 3

    def cmp(a, b):
        ba, bb = bucket(a[0], a[1]), bucket(b[0], b[1])
        if ba != bb:
            return -1 if ba < bb else 1
        cr = a[0] * b[1] - a[1] * b[0]
        if cr:
            return -1 if cr < 0 else 1
        la, lb = a[0] * a[0] + a[1] * a[1], b[0] * b[0] + b[1] * b[1]
        return (la > lb) - (la < lb)

    return sorted(items, key=cmp_to_key(cmp))


def home_level(c, vid, plane):
    """Tile level a vertex is anchored at when it acts as a chain center."""
    v = c.vertices[vid]
    root = _plane_root(c, plane)
    if v.kind in CORNER_KINDS:
        return c.tile_level(root)
    if plane != v.sheet:
        if vid in root.frame:
            return c.tile_level(root)
        seg = _sheet_border_seg(c, plane, vid)
        if seg is None:
            raise ValueError("vertex %d is not on plane %d" % (vid, plane))
        tile, _role = c.side_flank(seg, None, _seg_pos(c, seg, vid))
        return c.tile_level(tile)
    if v.kind in INNER_KINDS:
        return c.tile_level(c.tiles[v.owner_tile])
    return c.tile_level(c.flanks(vid)[0][0])


def build_chain(c, center, level, plane):
    """Chain of the given level around a vertex, members in clockwise order."""
    cache = _cache(c)["chains"]
    key = (center, level, plane)
    got = cache.get(key)
    if got is not None:
        return got
    target = home_level(c, center, plane) - level - 1
    if level < 0 or target < 1:
        raise ValueError("no level %d chain around vertex %d" % (level, center))
    tiles = []
    for tid in c.corner_tiles.get(center, ()):
        t = c.tiles[tid]
        if (t.frame[0] != center or t.position in ("ROOT", "SHEET")
                or t.sheet != plane or c.tile_level(t) != target):
            continue
        tiles.append(t)
    found = {}
    for w in tiles:
        if w.children is None:
            continue
        for side_i in (0, 3):
            m = c.side_center(w, side_i)
            seg = c.segments[w.sides[side_i][0]]
            ptr = _ray_name(c, center, seg, _seg_pos(c, seg, m))
            prev = found.get(m)
            if prev is not None and prev != ptr:
                raise ValueError("member %d of chain %r has two pointers" % (m, key))
            found[m] = ptr
    if found:
        pos = _layout(c, plane)
        d0 = _main_direction(c, center, plane, pos)
        cx, cy = pos[center]
        items = [(pos[m][0] - cx, pos[m][1] - cy, m) for m in found]
        ordered = [m for _dx, _dy, m in _clockwise_order(items, d0)]
    else:
        ordered = []
    members = tuple((m, found[m]) for m in ordered)
    env = tuple((found[m], _env_in_plane(c, m, plane)) for m in ordered)
    chain = Chain(center, plane, level, members, env)
    cache[key] = chain
    return chain


def chain_of(c, vid, plane=None):
    """(chain, pointer) when the vertex is carried by an artery, else None."""
    v = c.vertices[vid]
    if plane is None:
        plane = v.sheet
    if plane == v.sheet:
        if v.kind not in SIDE_KINDS:
            return None
        flank_list = [f for f in c.flanks(vid) if f is not None]
    else:
        root = _plane_root(c, plane)
        if vid in root.frame:
            return None
        seg = _sheet_border_seg(c, plane, vid)
        if seg is None:
            raise ValueError("vertex %d is not on plane %d" % (vid, plane))
        flank_list = [c.side_flank(seg, None, _seg_pos(c, seg, vid))]
    hits = []
    for tile, role in flank_list:
        if role not in ("U", "L") or tile.position in ("ROOT", "SHEET"):
            continue
        center = tile.frame[0]
        level = home_level(c, center, plane) - c.tile_level(tile) - 1
        chain = build_chain(c, center, level, plane)
        pointer = dict(chain.members).get(vid)
        if pointer is None:
            raise ValueError("vertex %d missing from its own chain" % vid)
        hits.append((chain, pointer))
    if not hits:
        return None
    if len(hits) == 2 and hits[0] != hits[1]:
        raise ValueError("flanks of vertex %d disagree about its chain" % vid)
    return hits[0]


# ----------------------------------------------------------------------
# information

def information_of(c, vid):
    """Senior vertex references for a regular vertex.

    The minimal tile strictly enclosing the vertex contributes the node
    at the middle of its top side; vertices on its type 7 or 8 walls
    also reference its two bottom corners, and vertices on type 2, 5,
    or 6 walls reference the type of its bottom right corner (and the
    edge that corner lies on) instead.
    """
    v = c.vertices[vid]
    if v.kind in CORNER_KINDS:
        raise ValueError("corner vertex %d carries no information" % vid)
    if v.kind in INNER_KINDS:
        tile, stype = c.tiles[v.owner_tile], None
    else:
        seg = c.segments[v.seg]
        if seg.is_border:
            raise ValueError("border vertex %d carries no information" % vid)
        tile, stype = c.tiles[seg.owner_tile], int(seg.stype)
    # senior references live in the owning tile's plane: on a pasted
    # sheet the mid-top may be an identified host vertex, but what the
    # reference must pin down is the sheet-side context
    plane = _tile_plane(c, tile)
    first = env_object_of(c, c.side_center(tile, 0), plane)
    if stype in (7, 8):
        return Information(first,
                           env_object_of(c, tile.frame[3], plane),
                           env_object_of(c, tile.frame[2], plane))
    if stype in (2, 5, 6):
        return Information(first,
                           corner_type=_type_and_edge(c, tile.frame[2],
                                                      plane))
    return Information(first)


# ----------------------------------------------------------------------
# edge letters and pasting codes

def edge_name_at(c, vid, edge):
    """(ray name, foreign sheet id or None) for an edge at one endpoint."""
    e = c.edges[edge] if isinstance(edge, int) else edge
    if vid not in (e.a, e.b):
        raise ValueError("vertex %d is not an endpoint of edge %d" % (vid, e.id))
    seg = c.segments[e.seg]
    name = _ray_name(c, vid, seg, (e.lo + e.hi) / 2)
    foreign = seg.sheet if seg.sheet != c.vertices[vid].sheet else None
    return name, foreign


def sheet_roles(c):
    """Role of every vertex on every sheet entry border: vid -> {sheet: role}."""
    cache = _cache(c)
    if cache["roles"] is None:
        roles = {}
        for sid in c.sheets:
            root = _plane_root(c, sid)
            top = c.segment_vertices(c.segments[root.sides[0][0]])
            left = c.segment_vertices(c.segments[root.sides[3][0]])
            for vid in top[1:-1]:
                roles.setdefault(vid, {})[sid] = "U"
            for vid in left[1:-1]:
                roles.setdefault(vid, {})[sid] = "L"
            roles.setdefault(top[0], {})[sid] = "CUL"
            roles.setdefault(top[-1], {})[sid] = "CUR"
            roles.setdefault(left[0], {})[sid] = "CDL"
        cache["roles"] = roles
    return cache["roles"]


def edge_letter(c, vid, edge):
    """Alphabet letter for an edge at one endpoint, hatted when it leads
    into a pasted sheet the vertex only borders."""
    name, foreign = edge_name_at(c, vid, edge)
    if foreign is None:
        return name
    role = sheet_roles(c).get(vid, {}).get(foreign)
    if role is None:
        raise ValueError("vertex %d has a foreign edge but no sheet role" % vid)
    try:
        return _HATTABLE[role][name]
    except KeyError:
        raise ValueError("no hatted letter for ray %r at a %s vertex"
                         % (name, role)) from None


def pasting_code_of(c, vid, sheet):
    """Role of a vertex on the entry border of one sheet.

    Corners report their corner tag; side vertices report their depth
    class and environment as seen from inside the sheet.
    """
    role = sheet_roles(c).get(vid, {}).get(sheet)
    if role is None:
        raise ValueError("vertex %d is not on the entry border of sheet %r"
                         % (vid, sheet))
    if role in ("CUL", "CUR", "CDL"):
        return (role, None, None)
    return (role, level_class_of(c, vid, plane=sheet),
            env_object_of(c, vid, plane=sheet))


# ----------------------------------------------------------------------
# node functions

def _type_and_edge(c, vid, plane):
    tag = classify_vertex(c, vid, plane)
    v = c.vertices[vid]
    if plane != v.sheet:
        if vid in _plane_root(c, plane).frame:
            return (tag, None)
        return (tag, _sheet_border_seg(c, plane, vid).stype)
    if v.kind in SIDE_KINDS:
        seg = c.segments[v.seg]
        return (tag, seg.stype if seg.is_border else int(seg.stype))
    return (tag, None)


def _corner_arg(c, vid, plane):
    """Admissible argument for the corner-entry functions.

    The vertex must either sit in a ring or be an interior wall point,
    whose environment is a pair of tile environments.  A lone
    environment (inner or border vertex) does not pin down the
    neighbourhood, so those are rejected.
    """
    obj = env_object_of(c, vid, plane)
    if obj[0] == "chain":
        return obj
    v = c.vertices[vid]
    if (v.sheet == plane and v.kind in SIDE_KINDS
            and not c.segments[v.seg].is_border):
        return obj
    return None


def _inner_zero_ring(c, vid, plane):
    """A zero-level ring around an inner point does not fix the corner
    above it: that takes the centre's own environment, which functions
    without an information argument never see."""
    got = chain_of(c, vid, plane)
    if got is None:
        return False
    ch, _ptr = got
    return ch.level == 0 and c.vertices[ch.center].kind in INNER_KINDS


def _ev_top_from_corner(c, t, plane):
    x = _corner_arg(c, t.frame[3], plane)
    if x is None or _inner_zero_ring(c, t.frame[3], plane):
        return None
    args = (x, _side_tag(c, t, 2))
    return args, env_object_of(c, c.side_center(t, 0), plane)


def _ev_right_corner(c, t, plane):
    x = _corner_arg(c, t.frame[3], plane)
    if x is None or _inner_zero_ring(c, t.frame[3], plane):
        return None
    args = (x, _side_tag(c, t, 2))
    return args, env_object_of(c, t.frame[2], plane)


def _ev_top_right_type(c, t, plane):
    u = c.side_center(t, 0)
    if _inner_zero_ring(c, u, plane):
        return None
    args = (env_object_of(c, u, plane),)
    return args, _type_and_edge(c, t.frame[1], plane)


def _ev_bottom_left_type(c, t, plane):
    args = (env_object_of(c, c.side_center(t, 0), plane),)
    return args, _type_and_edge(c, t.frame[3], plane)


def _ev_level_plus(c, t, plane):
    u = c.side_center(t, 0)
    obj = env_object_of(c, u, plane)
    if obj[0] != "chain":
        return None
    chain, _ptr = chain_of(c, u, plane)
    deeper = build_chain(c, chain.center, chain.level + 1, chain.plane)
    if not deeper.members:
        return None
    return (obj,), deeper.env


def _ev_bottom_right_from_right(c, t, plane):
    r = c.side_center(t, 1)
    r_obj = _corner_arg(c, r, plane)
    if r_obj is None:
        return None
    args = (r_obj, information_of(c, r))
    return args, _type_and_edge(c, t.frame[2], plane)


def _ev_top_from_right(c, t, plane):
    r = c.side_center(t, 1)
    r_obj = _corner_arg(c, r, plane)
    if r_obj is None:
        return None
    info = information_of(c, r)
    if (t.position == "UR" and info.first[0] == "chain"
            and _inner_zero_ring(c, c.side_center(c.tiles[t.parent], 0),
                                 plane)):
        # in the upper-right position the answer wraps the parent's
        # upper-right corner, which a zero-level first boss leaves open
        return None
    args = (r_obj, info)
    return args, env_object_of(c, c.side_center(t, 0), plane)


def _ev_bottom_right_from_top(c, t, plane):
    u = c.side_center(t, 0)
    args = (env_object_of(c, u, plane), information_of(c, u))
    return args, _type_and_edge(c, t.frame[2], plane)


# Only these eight are genuine functions of codes; helpers that later
# tables mention in passing (reading a tile from its corner, or the
# right side from the B node) depend on more than the argument's code
# and stay geometric.
_EVALUATORS = {
    "TopFromCorner": _ev_top_from_corner,
    "RightCorner": _ev_right_corner,
    "TopRightType": _ev_top_right_type,
    "BottomLeftType": _ev_bottom_left_type,
    "LevelPlus": _ev_level_plus,
    "BottomRightTypeFromRight": _ev_bottom_right_from_right,
    "TopFromRight": _ev_top_from_right,
    "BottomRightTypeFromTop": _ev_bottom_right_from_top,
}


def harvest_node_tables(c):
    """Evaluate every node function on every divided tile.

    Raises if two tiles produce the same argument with different
    values; the tables are only usable because that never happens.
    """
    tables = {name: {} for name in _EVALUATORS}
    for t in c.tiles.values():
        if t.children is None:
            continue
        plane = _tile_plane(c, t)
        for name, ev in _EVALUATORS.items():
            try:
                got = ev(c, t, plane)
            except ValueError:
                continue
            if got is None:
                continue
            args, value = got
            prev = tables[name].get(args)
            if prev is not None and prev != value:
                raise ValueError("node function %s is inconsistent at tile %d"
                                 % (name, t.id))
            tables[name][args] = value
    return tables


_DEFAULT_TABLES = None


def default_node_tables():
    global _DEFAULT_TABLES
    if _DEFAULT_TABLES is None:
        _DEFAULT_TABLES = harvest_node_tables(build(4))
    return _DEFAULT_TABLES


def _chain_step(obj, step):
    if not (isinstance(obj, tuple) and len(obj) == 3 and obj[0] == "chain"):
        raise InapplicableArgument("Next and Prev expect a chain environment")
    _tag, env, pointer = obj
    order = [p for p, _e in env]
    if pointer not in order:
        raise InapplicableArgument("pointer %r is not in the chain" % (pointer,))
    i = order.index(pointer)
    return ("chain", env, order[(i + step) % len(order)])


def node_fn(name, args, tables=None):
    """Apply a node function to an argument tuple."""
    args = tuple(args)
    if name == "Next":
        return _chain_step(args[0], 1)
    if name == "Prev":
        return _chain_step(args[0], -1)
    if tables is None:
        tables = default_node_tables()
    table = tables.get(name)
    if table is None:
        raise InapplicableArgument("unknown node function %r" % name)
    try:
        return table[args]
    except KeyError:
        raise InapplicableArgument("%s has no value for this argument" % name) from None


# ----------------------------------------------------------------------
# vertex codes and the alphabet

def vertex_code(c, vid):
    """Assemble the full code of one vertex."""
    try:
        info = information_of(c, vid)
    except ValueError:
        info = None
    roles = sheet_roles(c).get(vid, {})
    pasting = tuple(sorted((sid, pasting_code_of(c, vid, sid)) for sid in roles))
    return VertexCode(classify_vertex(c, vid), level_class_of(c, vid),
                      env_object_of(c, vid), info, pasting)


def vertex_codes(c):
    return {vid: vertex_code(c, vid) for vid in c.vertices}


def code_census(c):
    """How often each canonical code occurs."""
    return Counter(code.key() for code in vertex_codes(c).values())


def code_digest(c):
    """Digest of the set of distinct canonical codes."""
    blob = "\n".join(sorted(repr(k) for k in code_census(c)))
    return hashlib.sha256(blob.encode()).hexdigest()


def _jsonable(obj):
    if isinstance(obj, tuple):
        return [_jsonable(x) for x in obj]
    return obj


def code_table_json(c, path=None):
    """JSON export of every vertex code plus the census digest."""
    codes = vertex_codes(c)
    doc = {
        "vertices": {str(vid): _jsonable(code.key()) for vid, code in codes.items()},
        "distinct": len({code.key() for code in codes.values()}),
        "digest": code_digest(c),
    }
    text = json.dumps(doc, indent=1, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def alphabet_sets(c):
    """Entry letters, node letters, and exit letters with stable ids."""
    letters = set()
    for e in c.edges.values():
        if e.children is not None:
            continue
        for vid in (e.a, e.b):
            letters.add(edge_letter(c, vid, e))
    codes = sorted({repr(code.key()) for code in vertex_codes(c).values()})
    xs = sorted(letters)
    return {
        "X": {name: i for i, name in enumerate(xs)},
        "Y": {key: i for i, key in enumerate(codes)},
        "Z": {name: i for i, name in enumerate(xs)},
    }
