"""Core complex geometry against an independent coordinate oracle."""

import random
from fractions import Fraction

import pytest

from niltile.core import (
    BORDER_TYPES, CHILD_FRAMES, LOCAL_COORDS, POSITIONS, SIDE_KINDS,
    build, seed_complex,
)

F = Fraction
HALF = F(1, 2)


# ----------------------------------------------------------------------
# independent oracle: the subdivided unit square built from coordinates
# alone, no shared code with the complex

def _bilinear(quad, x, y):
    (nwx, nwy), (nex, ney), (sex, sey), (swx, swy) = quad
    return (nwx * (1 - x) * y + nex * x * y + sex * x * (1 - y)
            + swx * (1 - x) * (1 - y),
            nwy * (1 - x) * y + ney * x * y + sey * x * (1 - y)
            + swy * (1 - x) * (1 - y))


def _subdivide_quad(quad):
    pt = {nm: _bilinear(quad, *LOCAL_COORDS[nm]) for nm in LOCAL_COORDS}
    pt["NW"], pt["NE"], pt["SE"], pt["SW"] = quad
    return [tuple(pt[nm] for nm in CHILD_FRAMES[pos]) for pos in POSITIONS]


def oracle_grid(total_passes):
    """(vertex coords, edge coord pairs, leaf count) of the unit square
    after total_passes six-way subdivision passes."""
    unit = ((F(0), F(1)), (F(1), F(1)), (F(1), F(0)), (F(0), F(0)))
    leaves = [unit]
    for _ in range(total_passes):
        leaves = [child for q in leaves for child in _subdivide_quad(q)]
    verts = set()
    edges = set()
    for q in leaves:
        for i in range(4):
            verts.add(q[i])
            edges.add(frozenset((q[i], q[(i + 1) % 4])))
    return verts, edges, len(leaves)


def test_seed_counts():
    c = seed_complex()
    s = c.stats()
    assert s["vertices"] == 11
    assert s["edges_alive"] == 16
    assert s["segments"] == 12
    assert s["tiles_leaf"] == 6
    assert s["tiles_total"] == 7
    assert sorted(c.names) == sorted(
        ["NW", "NE", "SE", "SW", "U", "R", "D", "L", "A", "B", "C"])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_subdivision_matches_coordinate_oracle(n):
    c = build(n, paste=False)
    verts, edges, leaf_count = oracle_grid(n)
    lay = c.layout()
    assert len(lay) == len(c.vertices)
    assert set(lay.values()) == verts
    real_edges = {
        frozenset((lay[e.a], lay[e.b]))
        for e in c.edges.values() if e.alive
    }
    assert real_edges == edges
    assert len(c.leaves()) == leaf_count


def test_build2_counts():
    s = build(2).stats()
    assert s["vertices"] == 45
    assert s["edges_alive"] == 80
    assert s["tiles_leaf"] == 36
    assert s["pastings"] == 0


def euler(c):
    s = c.stats()
    return s["vertices"] - s["edges_alive"] + s["tiles_leaf"]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_euler_characteristic(n):
    # each still-pending sheet is short one wall edge and two faces
    c = build(n)
    pending = sum(1 for t in c.tiles.values() if t.pending)
    assert euler(c) == 1 - pending
    if pending:
        c.subdivide()
        pending2 = sum(1 for t in c.tiles.values() if t.pending)
        assert pending2 == 0
        assert euler(c) == 1


# ----------------------------------------------------------------------
# pasting

# glue site census on the twice-subdivided square, derived by hand from the
# corner-blocking rule: a site dies iff one tile holds all three of its
# outer path vertices
K2_SITES_BY_HOST = {"SE": 1, "SW": 2, "U": 4, "R": 2, "L": 2,
                    "A": 2, "B": 3, "C": 5}


def test_k2_site_census():
    c = build(3, paste=False)
    sites = c.find_pasting_sites()
    assert len(sites) == 21
    by_host = {}
    for s in sites:
        nm = c.vertices[s.y].name
        by_host[nm] = by_host.get(nm, 0) + 1
    assert by_host == K2_SITES_BY_HOST


def test_k2_sites_match_collinearity_oracle():
    # independent re-enumeration on the base square from exact coordinates:
    # two straight equal-length two-edge rays from a common tail, midpoints
    # fresh, tips one level older side vertices, not all three outer
    # vertices cornering one tile
    c = build(3, paste=False)
    lay = c.layout()
    k = c.subdiv_count

    def rays(y):
        out = []
        for eid in c.adj[y.id]:
            e = c.edges[eid]
            w = c.vertices[e.other(y.id)]
            if w.level != k or w.op != "subdivision":
                continue
            for eid2 in c.adj[w.id]:
                if eid2 == eid:
                    continue
                x = c.vertices[c.edges[eid2].other(w.id)]
                py, pw, px = lay[y.id], lay[w.id], lay[x.id]
                straight = (pw[0] - py[0] == px[0] - pw[0]
                            and pw[1] - py[1] == px[1] - pw[1])
                if not straight:
                    continue
                if x.level == k - 1 and x.kind in SIDE_KINDS:
                    out.append((w.id, x.id))
        return out

    frames = [set(t.frame) for t in c.tiles.values()]
    expected = set()
    for y in list(c.vertices.values()):
        if y.level != k - 2:
            continue
        rs = rays(y)
        for i in range(len(rs)):
            for j in range(i + 1, len(rs)):
                (w1, x1), (w2, x2) = rs[i], rs[j]
                if w1 == w2 or x1 == x2:
                    continue
                if any({x1, y.id, x2} <= fr for fr in frames):
                    continue
                expected.add((y.id, frozenset((x1, x2))))

    got = {(s.y, frozenset((s.x1, s.z1))) for s in c.find_pasting_sites()}
    assert got == expected


@pytest.mark.parametrize("n", [3, 4])
def test_each_paste_adds_six_vertices_eleven_edges(n):
    c = build(n)
    for sid, sheet in c.sheets.items():
        new_v = [v for v in c.vertices.values()
                 if v.sheet == sid and v.op == "pasting"]
        assert len(new_v) == 6
        kinds = sorted(v.kind for v in new_v)
        assert kinds == ["pasted-corner"] + ["pasted-inner"] * 3 + \
            ["pasted-side"] * 2
        new_e = [e for e in c.edges.values()
                 if e.sheet == sid and e.born_pass == sheet.born_pass]
        assert len(new_e) == 11


def test_sheet_repair_synchronizes_levels():
    c = build(4)
    for sheet in c.sheets.values():
        root = c.tiles[sheet.root_tile]
        if root.pending:
            assert len(root.children) == 4
            continue
        assert len(root.children) == 6
        levels = {c.tile_level(ch) for ch in root.children}
        assert len(levels) == 1
        assert c.tile_level(root) == levels.pop() + 1


def test_sheet_border_walks():
    c = build(3)
    for sheet in c.sheets.values():
        root = c.tiles[sheet.root_tile]
        for i, stype in enumerate(BORDER_TYPES):
            seg = c.segments[root.sides[i][0]]
            assert seg.stype == stype
            verts = c.segment_vertices(seg)
            assert verts[0] == seg.start and verts[-1] == seg.end
            assert verts[len(verts) // 2] == seg.center
        # border corners trace the frame clockwise
        tops = c.segment_vertices(c.segments[root.sides[0][0]])
        rights = c.segment_vertices(c.segments[root.sides[1][0]])
        assert tops[0] == root.frame[0] and tops[-1] == root.frame[1]
        assert rights[0] == root.frame[1] and rights[-1] == root.frame[2]


def test_segment_walks_all():
    c = build(4)
    for s in c.segments.values():
        verts = c.segment_vertices(s)
        assert verts[0] == s.start and verts[-1] == s.end
        assert len(verts) == len(set(verts))
        if s.center is not None:
            assert verts[len(verts) // 2] == s.center


# ----------------------------------------------------------------------
# flank descent

def test_flanks_locate_side_midpoints():
    c = build(4)
    rng = random.Random(7)
    side_ids = [v.id for v in c.vertices.values() if v.kind in SIDE_KINDS]
    role_to_idx = {"U": 0, "R": 1, "D": 2, "L": 3}
    for vid in rng.sample(side_ids, 300):
        fa, fb = c.flanks(vid)
        seg = c.segments[c.vertices[vid].seg]
        assert (fb is None) == seg.is_border
        tiles = set()
        for fl in (fa, fb):
            if fl is None:
                continue
            tile, role = fl
            tiles.add(tile.id)
            assert c.side_center(tile, role_to_idx[role]) == vid
        if fb is not None:
            assert len(tiles) == 2


# ----------------------------------------------------------------------
# flip certificates

def _independent_replay(c, cert):
    path = list(cert["before"])
    for idx, leaf_id, old, new in cert["steps"]:
        leaf = c.tiles[leaf_id]
        assert leaf.children is None
        assert path[idx] == old
        assert {path[idx - 1], old, path[idx + 1], new} == set(leaf.frame)
        path[idx] = new
    assert path == cert["after"]
    # both endpoints fixed, every hop an alive edge
    assert path[0] == cert["before"][0] and path[-1] == cert["before"][-1]
    for a, b in zip(path, path[1:]):
        assert any(c.edges[eid].other(a) == b for eid in c.adj[a])


def test_flip_certificates_build3_all_tiles():
    c = build(3, paste=False)
    for t in c.tiles.values():
        if t.pending:
            continue
        for via in range(4):
            if t.children is None and c.dead_leaf_crossing(t, via):
                with pytest.raises(ValueError):
                    c.flip_two_sides(t, via)
                continue
            cert = c.flip_two_sides(t, via)
            level = c.tile_level(t)
            assert len(cert["steps"]) == 6 ** (level - 1)
            _independent_replay(c, cert)


def test_flip_certificates_on_sheets():
    c = build(4)
    done = 0
    for sheet in c.sheets.values():
        root = c.tiles[sheet.root_tile]
        if root.pending:
            continue
        cert = c.flip_two_sides(root, 1)
        _independent_replay(c, cert)
        done += 1
        if done == 10:
            break
    assert done == 10


def test_flip_certificate_root_build4():
    c = build(4, paste=False)
    cert = c.flip_two_sides(c.root_tile, 1)
    assert len(cert["steps"]) == 6 ** 4
    _independent_replay(c, cert)


# ----------------------------------------------------------------------
# degrees and levels

def test_degrees_stabilize():
    c = build(5)
    worst = 0
    for vid, hist in c.degree_history.items():
        born = c.vertices[vid].born_pass
        for pidx, _deg in hist[1:]:
            worst = max(worst, pidx - born)
    assert worst <= 4


def test_tile_levels():
    c = build(3)
    assert c.tile_level(c.root_tile) == 4
    for cid in c.root_tile.children:
        assert c.tile_level(cid) == 3
    # a freshly pasted sheet root sits two levels up from its leaves
    sheet = c.sheets[1]
    root = c.tiles[sheet.root_tile]
    assert c.tile_level(root) == 2
    for ch in root.children:
        assert c.tile_level(ch) == 1


def test_vertex_budget():
    from niltile.core import BudgetExhausted
    with pytest.raises(BudgetExhausted):
        build(4, vertex_cap=100)


def test_exports():
    c = build(2)
    js = c.to_json()
    assert '"vertices"' in js
    dot = c.to_dot()
    assert dot.startswith("graph complex {")
    svg = build(3).to_svg(max_sheets=2)
    assert svg.startswith("<svg") and svg.endswith("</svg>")
