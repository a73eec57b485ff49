"""Finite double groupoids as explicit tables.

A box ``A`` has a frame of four edges::

                top(A)            (an arrow of the horizontal edge groupoid)
        left(A)  [A]  right(A)    (arrows of the vertical edge groupoid)
               bottom(A)

Horizontal edges x run ``l(x) -> r(x)`` and vertical edges g run
``t(g) -> b(g)``, both on the common point set.  ``vcomp(A, B)`` stacks A on
top of B and is defined when ``bottom(A) == top(B)``; ``hcomp(A, B)`` pastes
A left of B and is defined when ``right(A) == left(B)``.  ``vid(x)`` is the
identity box for stacking on the edge x, ``hid(g)`` the identity box for
horizontal pasting on g.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (InternalConsistencyError, Report, StructureError,
                     VacancyError)
from .groupoids import UNDEF, Groupoid, validate_groupoid


class DoubleGroupoid:
    """Explicit box/edge/point tables with both compositions.

    Construction checks shapes and ranges only; :func:`validate_double_groupoid`
    checks the axioms.  Instances are immutable by convention; derived caches
    (inverse tables, identity flags) are computed lazily.
    """

    __slots__ = ("horiz", "vert", "n_points", "n_boxes",
                 "top", "bottom", "left", "right", "vid", "hid",
                 "vcomp", "hcomp", "_inv", "_hash", "_pairs", "_squares")

    def __init__(self, horiz: Groupoid, vert: Groupoid, top, bottom, left, right,
                 vid, hid, vcomp, hcomp):
        if horiz.n_objects != vert.n_objects:
            raise StructureError("edge groupoids must share the point set")
        self.horiz = horiz
        self.vert = vert
        self.n_points = horiz.n_objects
        top = tuple(top)
        bottom = tuple(bottom)
        left = tuple(left)
        right = tuple(right)
        n = len(top)
        if not (len(bottom) == len(left) == len(right) == n):
            raise StructureError("frame tables differ in length")
        self.n_boxes = n
        for name, table, bound in (("top", top, horiz.n_arrows),
                                   ("bottom", bottom, horiz.n_arrows),
                                   ("left", left, vert.n_arrows),
                                   ("right", right, vert.n_arrows)):
            for i, v in enumerate(table):
                if not 0 <= v < bound:
                    raise StructureError(f"{name}[{i}] = {v} out of range")
        vid = tuple(vid)
        hid = tuple(hid)
        if len(vid) != horiz.n_arrows or len(hid) != vert.n_arrows:
            raise StructureError("identity-box tables have wrong length")
        for name, table in (("vid", vid), ("hid", hid)):
            for i, v in enumerate(table):
                if not 0 <= v < n:
                    raise StructureError(f"{name}[{i}] = {v} out of range")
        vcomp = tuple(tuple(row) for row in vcomp)
        hcomp = tuple(tuple(row) for row in hcomp)
        for name, table in (("vcomp", vcomp), ("hcomp", hcomp)):
            if len(table) != n or any(len(row) != n for row in table):
                raise StructureError(f"{name} must be n_boxes x n_boxes")
            for row in table:
                for v in row:
                    if v != UNDEF and not 0 <= v < n:
                        raise StructureError(f"{name} entry out of range")
        self.top, self.bottom, self.left, self.right = top, bottom, left, right
        self.vid, self.hid = vid, hid
        self.vcomp, self.hcomp = vcomp, hcomp
        self._inv = None
        self._hash = None
        self._pairs = None
        self._squares = None

    # -- the two box groupoids, reusing all Groupoid machinery -----------

    def vertical_groupoid(self) -> Groupoid:
        """Boxes over horizontal edges: source = top, target = bottom."""
        return Groupoid(self.horiz.n_arrows, self.top, self.bottom,
                        self.vid, self.vcomp)

    def horizontal_groupoid(self) -> Groupoid:
        """Boxes over vertical edges: source = left, target = right."""
        return Groupoid(self.vert.n_arrows, self.left, self.right,
                        self.hid, self.hcomp)

    # -- queries ---------------------------------------------------------

    def boxes(self):
        return range(self.n_boxes)

    def frame(self, a: int) -> tuple[int, int, int, int]:
        return (self.top[a], self.bottom[a], self.left[a], self.right[a])

    def is_vid(self, a: int) -> bool:
        return self.vid[self.top[a]] == a

    def is_hid(self, a: int) -> bool:
        return self.hid[self.left[a]] == a

    def is_theta(self, a: int) -> bool:
        return self.is_vid(a) and self.is_hid(a)

    def vmul(self, a: int, b: int) -> int:
        c = self.vcomp[a][b]
        if c == UNDEF:
            raise StructureError(f"boxes {a}, {b} are not vertically composable")
        return c

    def hmul(self, a: int, b: int) -> int:
        c = self.hcomp[a][b]
        if c == UNDEF:
            raise StructureError(f"boxes {a}, {b} are not horizontally composable")
        return c

    def vpairs(self):
        for a in range(self.n_boxes):
            for b in range(self.n_boxes):
                if self.bottom[a] == self.top[b]:
                    yield a, b

    def hpairs(self):
        for a in range(self.n_boxes):
            for b in range(self.n_boxes):
                if self.right[a] == self.left[b]:
                    yield a, b

    def squares(self):
        """All 2x2 composable arrangements (a, b, c, d):  a|b over c|d."""
        if self._squares is None:
            by_left = {}
            by_top = {}
            for a in range(self.n_boxes):
                by_left.setdefault(self.left[a], []).append(a)
                by_top.setdefault(self.top[a], []).append(a)
            out = []
            for a in range(self.n_boxes):
                for b in by_left.get(self.right[a], ()):
                    for c in by_top.get(self.bottom[a], ()):
                        for d in by_left.get(self.right[c], ()):
                            if self.bottom[b] == self.top[d]:
                                out.append((a, b, c, d))
            self._squares = out
        return iter(self._squares)

    @property
    def inverses(self) -> "BoxInverseTable":
        if self._inv is None:
            self._inv = compute_inverses(self)
        return self._inv

    def tables(self):
        return (self.horiz.tables(), self.vert.tables(), self.top, self.bottom,
                self.left, self.right, self.vid, self.hid, self.vcomp, self.hcomp)

    def __eq__(self, other):
        return isinstance(other, DoubleGroupoid) and self.tables() == other.tables()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.tables())
        return self._hash

    def pair_domains(self):
        """Sorted vertically/horizontally composable pair lists with their
        index maps; the canonical index sets for cocycle tables."""
        if self._pairs is None:
            vp = sorted(self.vpairs())
            hp = sorted(self.hpairs())
            self._pairs = (vp, hp,
                           {pq: i for i, pq in enumerate(vp)},
                           {pq: i for i, pq in enumerate(hp)})
        return self._pairs

    def __repr__(self):
        return (f"DoubleGroupoid(points={self.n_points}, hedges={self.horiz.n_arrows}, "
                f"vedges={self.vert.n_arrows}, boxes={self.n_boxes})")


@dataclass(frozen=True)
class BoxInverseTable:
    """Horizontal, vertical and full inverses of every box."""

    h_inv: tuple[int, ...]
    v_inv: tuple[int, ...]
    full_inv: tuple[int, ...]


def validate_double_groupoid(t: DoubleGroupoid) -> Report:
    """Exhaustive check of the double-groupoid axioms, keyed by axiom number.

    ``axiom0.*`` covers the four component categories being groupoids (for the
    box categories this subsumes the invertibility of every box in both
    directions); the remaining keys follow the axiom numbering 1..6.
    """
    rep = Report("double groupoid")
    pieces = (("axiom0.horizontal-edges", t.horiz),
              ("axiom0.vertical-edges", t.vert),
              ("axiom0.vertical-boxes", t.vertical_groupoid()),
              ("axiom0.horizontal-boxes", t.horizontal_groupoid()))
    for key, gpd in pieces:
        sub = validate_groupoid(gpd)
        for f in sub.failures:
            rep.add(f"{key}.{f.rule}", f.witness, f.message)
    hz, vt = t.horiz, t.vert
    for a in t.boxes():
        if vt.source[t.right[a]] != hz.target[t.top[a]]:
            rep.add("axiom1", (a, "tr=rt"))
        if vt.source[t.left[a]] != hz.source[t.top[a]]:
            rep.add("axiom1", (a, "tl=lt"))
        if vt.target[t.left[a]] != hz.source[t.bottom[a]]:
            rep.add("axiom1", (a, "bl=lb"))
        if vt.target[t.right[a]] != hz.target[t.bottom[a]]:
            rep.add("axiom1", (a, "br=rb"))
    if not rep.ok:
        # frame bookkeeping is broken; composite checks would be noise
        return rep
    for a, b in t.hpairs():
        c = t.hcomp[a][b]
        if c == UNDEF:
            continue
        if (t.top[c] != hz.compose[t.top[a]][t.top[b]]
                or t.bottom[c] != hz.compose[t.bottom[a]][t.bottom[b]]
                or t.left[c] != t.left[a] or t.right[c] != t.right[b]):
            rep.add("axiom2", (a, b, c), "horizontal composite frame")
    for a, b in t.vpairs():
        c = t.vcomp[a][b]
        if c == UNDEF:
            continue
        if (t.left[c] != vt.compose[t.left[a]][t.left[b]]
                or t.right[c] != vt.compose[t.right[a]][t.right[b]]
                or t.top[c] != t.top[a] or t.bottom[c] != t.bottom[b]):
            rep.add("axiom2", (a, b, c), "vertical composite frame")
    for a, b, c, d in t.squares():
        top_row, bot_row = t.hcomp[a][b], t.hcomp[c][d]
        ac, bd = t.vcomp[a][c], t.vcomp[b][d]
        if UNDEF in (top_row, bot_row, ac, bd):
            rep.add("axiom3", (a, b, c, d), "square not closed under composition")
            continue
        rows_then_cols = t.vcomp[top_row][bot_row]
        cols_then_rows = t.hcomp[ac][bd]
        if rows_then_cols == UNDEF or rows_then_cols != cols_then_rows:
            rep.add("axiom3", (a, b, c, d))
    for x in range(hz.n_arrows):
        a = t.vid[x]
        if (t.top[a] != x or t.bottom[a] != x
                or t.left[a] != vt.identity[hz.source[x]]
                or t.right[a] != vt.identity[hz.target[x]]):
            rep.add("axiom4", (x, a), "vid frame")
    for g in range(vt.n_arrows):
        a = t.hid[g]
        if (t.left[a] != g or t.right[a] != g
                or t.top[a] != hz.identity[vt.source[g]]
                or t.bottom[a] != hz.identity[vt.target[g]]):
            rep.add("axiom4", (g, a), "hid frame")
    for p in range(t.n_points):
        if t.vid[hz.identity[p]] != t.hid[vt.identity[p]]:
            rep.add("axiom5", (p,))
    for g, h in vt.composable_pairs():
        if t.vcomp[t.hid[g]][t.hid[h]] != t.hid[vt.compose[g][h]]:
            rep.add("axiom6", (g, h), "hid functoriality")
    for x, y in hz.composable_pairs():
        if t.hcomp[t.vid[x]][t.vid[y]] != t.vid[hz.compose[x][y]]:
            rep.add("axiom6", (x, y), "vid functoriality")
    return rep


def compute_inverses(t: DoubleGroupoid) -> BoxInverseTable:
    """Horizontal/vertical/full inverse of every box, with the frame of the
    full inverse (b^-1, t^-1, r^-1, l^-1) verified."""
    h_inv = t.horizontal_groupoid().inverse
    v_inv = t.vertical_groupoid().inverse
    full = tuple(v_inv[h_inv[a]] for a in t.boxes())
    other = tuple(h_inv[v_inv[a]] for a in t.boxes())
    if full != other:
        raise InternalConsistencyError("(A^h)^v and (A^v)^h disagree")
    hz_inv, vt_inv = t.horiz.inverse, t.vert.inverse
    for a in t.boxes():
        fa = full[a]
        expect = (hz_inv[t.bottom[a]], hz_inv[t.top[a]],
                  vt_inv[t.right[a]], vt_inv[t.left[a]])
        if t.frame(fa) != expect:
            raise InternalConsistencyError(f"frame of full inverse wrong at box {a}")
    return BoxInverseTable(h_inv, v_inv, full)


# -- vacancy ----------------------------------------------------------------


@dataclass
class VacancyReport:
    vacant: bool
    witness: tuple | None   # (condition, edge pair, filler list) when non-vacant

    def __bool__(self):
        return self.vacant


def is_vacant(t: DoubleGroupoid) -> VacancyReport:
    """Decide vacancy: every (top, right) corner has exactly one filler.

    The three other corner conditions (left+bottom, top+left, right+bottom)
    are cross-checked; any disagreement between the four verdicts is an
    internal-consistency failure, never a quiet answer.
    """
    hz, vt = t.horiz, t.vert
    corner_sets = {
        "top-right": [((x, g), t.top, x, t.right, g)
                      for x in range(hz.n_arrows) for g in range(vt.n_arrows)
                      if hz.target[x] == vt.source[g]],
        "left-bottom": [((f, y), t.left, f, t.bottom, y)
                        for f in range(vt.n_arrows) for y in range(hz.n_arrows)
                        if vt.target[f] == hz.source[y]],
        "top-left": [((x, f), t.top, x, t.left, f)
                     for x in range(hz.n_arrows) for f in range(vt.n_arrows)
                     if hz.source[x] == vt.source[f]],
        "right-bottom": [((g, y), t.right, g, t.bottom, y)
                         for g in range(vt.n_arrows) for y in range(hz.n_arrows)
                         if vt.target[g] == hz.target[y]],
    }
    verdicts = {}
    witnesses = {}
    for name, corners in corner_sets.items():
        bad = None
        for key, tab1, v1, tab2, v2 in corners:
            found = [a for a in t.boxes() if tab1[a] == v1 and tab2[a] == v2]
            if len(found) != 1:
                bad = (name, key, tuple(found))
                break
        verdicts[name] = bad is None
        witnesses[name] = bad
    if len(set(verdicts.values())) != 1:
        raise InternalConsistencyError(
            f"vacancy conditions disagree: {verdicts}")
    if verdicts["top-right"]:
        return VacancyReport(True, None)
    return VacancyReport(False, witnesses["top-right"])


def require_vacant(t: DoubleGroupoid) -> None:
    rep = is_vacant(t)
    if not rep.vacant:
        raise VacancyError(
            f"double groupoid is not vacant; corner {rep.witness[1]} has "
            f"{len(rep.witness[2])} fillers")


def filler(t: DoubleGroupoid, x: int, g: int) -> int:
    """The unique box with top x and right g of a vacant double groupoid."""
    found = [a for a in t.boxes() if t.top[a] == x and t.right[a] == g]
    if len(found) != 1:
        raise VacancyError(f"corner ({x}, {g}) has {len(found)} fillers")
    return found[0]


# -- transpose and constructions --------------------------------------------


def transpose(t: DoubleGroupoid) -> DoubleGroupoid:
    """Swap the horizontal and vertical structures; an involution."""
    return DoubleGroupoid(t.vert, t.horiz, t.left, t.right, t.top, t.bottom,
                          t.hid, t.vid, t.hcomp, t.vcomp)


@dataclass(frozen=True)
class DoubleRelation:
    """Two equivalence relations on a common finite base, given as class
    labels (label = least member of the class)."""

    n_points: int
    rel_h: tuple[int, ...]
    rel_v: tuple[int, ...]

    def __post_init__(self):
        for name, rel in (("rel_h", self.rel_h), ("rel_v", self.rel_v)):
            if len(rel) != self.n_points:
                raise StructureError(f"{name} must label every point")
            for p, c in enumerate(rel):
                if not 0 <= c < self.n_points or rel[c] != c or c > p:
                    raise StructureError(f"{name} labels are not canonical at {p}")


def equivalence_from_pairs(n: int, pairs) -> tuple[int, ...]:
    """Class labels from an explicit pair list, rejected unless the list is
    reflexive, symmetric and transitive."""
    have = set(map(tuple, pairs))
    for (p, q) in have:
        if not (0 <= p < n and 0 <= q < n):
            raise StructureError(f"relation pair {(p, q)} out of range")
    for p in range(n):
        if (p, p) not in have:
            raise StructureError(f"relation is not reflexive at {p}")
    for (p, q) in have:
        if (q, p) not in have:
            raise StructureError(f"relation is not symmetric at {(p, q)}")
    for (p, q) in have:
        for (q2, r) in have:
            if q2 == q and (p, r) not in have:
                raise StructureError(f"relation is not transitive at {(p, q, r)}")
    return tuple(min(q for q in range(n) if (p, q) in have) for p in range(n))


def relation_groupoid(labels: tuple[int, ...]) -> Groupoid:
    """The groupoid of an equivalence relation: one arrow per related ordered
    pair, arrows sorted lexicographically."""
    n = len(labels)
    pairs = [(p, q) for p in range(n) for q in range(n) if labels[p] == labels[q]]
    index = {pq: i for i, pq in enumerate(pairs)}
    source = [p for p, _ in pairs]
    target = [q for _, q in pairs]
    identity = [index[(p, p)] for p in range(n)]
    compose = [[UNDEF] * len(pairs) for _ in pairs]
    for (p, q), i in index.items():
        for (q2, v), j in index.items():
            if q2 == q and labels[p] == labels[v]:
                compose[i][j] = index[(p, v)]
    return Groupoid(n, source, target, identity, compose)


def from_double_relation(rel: DoubleRelation) -> DoubleGroupoid:
    """Boxes are the compatible corner quadruples (P Q / R S); compositions
    paste matrices along shared edges."""
    n = rel.n_points
    horiz = relation_groupoid(rel.rel_h)
    vert = relation_groupoid(rel.rel_v)
    hindex = {(horiz.source[f], horiz.target[f]): f for f in horiz.arrows()}
    vindex = {(vert.source[f], vert.target[f]): f for f in vert.arrows()}
    quads = [(p, q, r, s)
             for p in range(n) for q in range(n) for r in range(n) for s in range(n)
             if rel.rel_h[p] == rel.rel_h[q] and rel.rel_v[p] == rel.rel_v[r]
             and rel.rel_h[r] == rel.rel_h[s] and rel.rel_v[q] == rel.rel_v[s]]
    bindex = {b: i for i, b in enumerate(quads)}
    top = [hindex[(p, q)] for (p, q, r, s) in quads]
    bottom = [hindex[(r, s)] for (p, q, r, s) in quads]
    left = [vindex[(p, r)] for (p, q, r, s) in quads]
    right = [vindex[(q, s)] for (p, q, r, s) in quads]
    vid = [bindex[(horiz.source[x], horiz.target[x],
                   horiz.source[x], horiz.target[x])] for x in horiz.arrows()]
    hid = [bindex[(vert.source[g], vert.source[g],
                   vert.target[g], vert.target[g])] for g in vert.arrows()]
    m = len(quads)
    vcomp = [[UNDEF] * m for _ in range(m)]
    hcomp = [[UNDEF] * m for _ in range(m)]
    for (p, q, r, s), i in bindex.items():
        for (p2, q2, r2, s2), j in bindex.items():
            if (r, s) == (p2, q2):
                vcomp[i][j] = bindex[(p, q, r2, s2)]
            if (q, s) == (p2, r2):
                hcomp[i][j] = bindex[(p, q2, r, s2)]
    return DoubleGroupoid(horiz, vert, top, bottom, left, right, vid, hid,
                          vcomp, hcomp)


def build_Xrs(r: int, s: int) -> DoubleGroupoid:
    """The grid double relation on {0..r-1} x {0..s-1}: rows are one relation,
    columns the other.  Point (i, j) has index i*s + j."""
    if r < 1 or s < 1:
        raise StructureError("grid dimensions must be positive")
    n = r * s
    rel_h = tuple((p // s) * s for p in range(n))        # same row
    rel_v = tuple(p % s for p in range(n))               # same column
    return from_double_relation(DoubleRelation(n, rel_h, rel_v))


def _point_relations(t: DoubleGroupoid) -> tuple[list[list[int]], list[list[int]]]:
    return t.horiz.object_components(), t.vert.object_components()


def is_double_relation(t: DoubleGroupoid) -> bool:
    """True when both edge groupoids are principal (at most one arrow between
    any ordered pair of points) and boxes are determined by their frames."""
    for gpd in (t.horiz, t.vert):
        seen = set()
        for f in gpd.arrows():
            key = (gpd.source[f], gpd.target[f])
            if key in seen:
                return False
            seen.add(key)
    frames = {t.frame(a) for a in t.boxes()}
    return len(frames) == t.n_boxes


def classify_vacant_relation(t: DoubleGroupoid):
    """Identify a connected vacant double relation with the r x s grid.

    Returns ``(r, s, point_map)`` where ``point_map[p] = (i, j)`` is the
    verified base bijection onto the grid of :func:`build_Xrs`.  The column
    of p is read off the unique point of the base row that shares p's
    vertical class, mirroring the phi_i bijections of the classification.
    """
    if not is_double_relation(t):
        raise StructureError("not a double relation: boxes or edges are not "
                             "determined by points")
    rep = is_vacant(t)
    if not rep.vacant:
        raise VacancyError(
            "a double relation is classifiable only when vacant: the diagonal "
            f"relation fails at corner {rep.witness[1]}")
    h_classes, v_classes = _point_relations(t)
    if len(diagonal_components(t)) != 1:
        raise StructureError("double relation is not connected; classify "
                             "components separately")
    r, s = len(h_classes), len(v_classes)
    v_label = {}
    for cls in v_classes:
        for p in cls:
            v_label[p] = cls[0]
    base_row = h_classes[0]
    col_of = {v_label[p]: j for j, p in enumerate(sorted(base_row))}
    if len(col_of) != len(base_row):
        raise InternalConsistencyError(
            "two base-row points share a vertical class despite vacancy")
    point_map = {}
    for i, cls in enumerate(h_classes):
        for p in cls:
            if v_label[p] not in col_of:
                raise InternalConsistencyError(
                    "vertical class misses the base row; relation cannot be a grid")
            point_map[p] = (i, col_of[v_label[p]])
    if sorted(point_map.values()) != sorted(
            (i, j) for i in range(r) for j in range(s)):
        raise InternalConsistencyError("grid coordinates are not a bijection")
    _check_grid_iso(t, r, s, point_map)
    return r, s, point_map


def _check_grid_iso(t: DoubleGroupoid, r: int, s: int, point_map: dict) -> None:
    """Exhaustively verify that point_map carries t onto build_Xrs(r, s)."""
    grid = build_Xrs(r, s)
    to_grid_point = {p: i * s + j for p, (i, j) in point_map.items()}
    hmap = {}
    for x in t.horiz.arrows():
        cands = grid.horiz.arrows_between(to_grid_point[t.horiz.source[x]],
                                          to_grid_point[t.horiz.target[x]])
        if len(cands) != 1:
            raise InternalConsistencyError("horizontal edge does not transport")
        hmap[x] = cands[0]
    vmap = {}
    for g in t.vert.arrows():
        cands = grid.vert.arrows_between(to_grid_point[t.vert.source[g]],
                                         to_grid_point[t.vert.target[g]])
        if len(cands) != 1:
            raise InternalConsistencyError("vertical edge does not transport")
        vmap[g] = cands[0]
    bmap = {}
    for a in t.boxes():
        cands = [b for b in grid.boxes()
                 if grid.top[b] == hmap[t.top[a]] and grid.right[b] == vmap[t.right[a]]
                 and grid.bottom[b] == hmap[t.bottom[a]] and grid.left[b] == vmap[t.left[a]]]
        if len(cands) != 1:
            raise InternalConsistencyError("box does not transport")
        bmap[a] = cands[0]
    if sorted(bmap.values()) != list(range(grid.n_boxes)):
        raise InternalConsistencyError("box map is not a bijection")
    for a, b in t.vpairs():
        if grid.vcomp[bmap[a]][bmap[b]] != bmap[t.vcomp[a][b]]:
            raise InternalConsistencyError("vertical composition not preserved")
    for a, b in t.hpairs():
        if grid.hcomp[bmap[a]][bmap[b]] != bmap[t.hcomp[a][b]]:
            raise InternalConsistencyError("horizontal composition not preserved")


def double_disjoint_union(t1: DoubleGroupoid, t2: DoubleGroupoid) -> DoubleGroupoid:
    from .groupoids import disjoint_union as gu
    horiz = gu(t1.horiz, t2.horiz)
    vert = gu(t1.vert, t2.vert)
    oh, ov, ob = t1.horiz.n_arrows, t1.vert.n_arrows, t1.n_boxes
    top = list(t1.top) + [x + oh for x in t2.top]
    bottom = list(t1.bottom) + [x + oh for x in t2.bottom]
    left = list(t1.left) + [x + ov for x in t2.left]
    right = list(t1.right) + [x + ov for x in t2.right]
    vid = list(t1.vid) + [a + ob for a in t2.vid]
    hid = list(t1.hid) + [a + ob for a in t2.hid]
    n = ob + t2.n_boxes
    vcomp = [[UNDEF] * n for _ in range(n)]
    hcomp = [[UNDEF] * n for _ in range(n)]
    for (tt, off) in ((t1, 0), (t2, ob)):
        for a in tt.boxes():
            for b in tt.boxes():
                c = tt.vcomp[a][b]
                if c != UNDEF:
                    vcomp[a + off][b + off] = c + off
                c = tt.hcomp[a][b]
                if c != UNDEF:
                    hcomp[a + off][b + off] = c + off
    return DoubleGroupoid(horiz, vert, top, bottom, left, right, vid, hid,
                          vcomp, hcomp)


def double_direct_product(t1: DoubleGroupoid, t2: DoubleGroupoid) -> DoubleGroupoid:
    from .groupoids import direct_product as gp
    horiz = gp(t1.horiz, t2.horiz)
    vert = gp(t1.vert, t2.vert)
    mh2, mv2, mb2 = t2.horiz.n_arrows, t2.vert.n_arrows, t2.n_boxes
    n = t1.n_boxes * mb2
    def bidx(a1, a2):
        return a1 * mb2 + a2
    top = [t1.top[a1] * mh2 + t2.top[a2]
           for a1 in t1.boxes() for a2 in t2.boxes()]
    bottom = [t1.bottom[a1] * mh2 + t2.bottom[a2]
              for a1 in t1.boxes() for a2 in t2.boxes()]
    left = [t1.left[a1] * mv2 + t2.left[a2]
            for a1 in t1.boxes() for a2 in t2.boxes()]
    right = [t1.right[a1] * mv2 + t2.right[a2]
             for a1 in t1.boxes() for a2 in t2.boxes()]
    vid = [bidx(t1.vid[x1], t2.vid[x2])
           for x1 in t1.horiz.arrows() for x2 in t2.horiz.arrows()]
    hid = [bidx(t1.hid[g1], t2.hid[g2])
           for g1 in t1.vert.arrows() for g2 in t2.vert.arrows()]
    vcomp = [[UNDEF] * n for _ in range(n)]
    hcomp = [[UNDEF] * n for _ in range(n)]
    for a1 in t1.boxes():
        for a2 in t2.boxes():
            i = bidx(a1, a2)
            for b1 in t1.boxes():
                cv1, ch1 = t1.vcomp[a1][b1], t1.hcomp[a1][b1]
                for b2 in t2.boxes():
                    j = bidx(b1, b2)
                    if cv1 != UNDEF and t2.vcomp[a2][b2] != UNDEF:
                        vcomp[i][j] = bidx(cv1, t2.vcomp[a2][b2])
                    if ch1 != UNDEF and t2.hcomp[a2][b2] != UNDEF:
                        hcomp[i][j] = bidx(ch1, t2.hcomp[a2][b2])
    return DoubleGroupoid(horiz, vert, top, bottom, left, right, vid, hid,
                          vcomp, hcomp)


def diagonal_components(t: DoubleGroupoid) -> list[list[int]]:
    """Partition of the points under P ~ Q iff some R has P ~h R and R ~v Q.

    For a non-vacant input the relation can fail to be an equivalence; the
    failure is raised with the offending pair or triple.
    """
    h_lab = _component_labels(t.horiz)
    v_lab = _component_labels(t.vert)
    n = t.n_points
    rel = {(p, q)
           for p in range(n) for q in range(n)
           if any(h_lab[p] == h_lab[r] and v_lab[r] == v_lab[q] for r in range(n))}
    for (p, q) in sorted(rel):
        if (q, p) not in rel:
            raise StructureError(f"diagonal relation is not symmetric at {(p, q)}")
    for (p, q) in sorted(rel):
        for r in range(n):
            if (q, r) in rel and (p, r) not in rel:
                raise StructureError(
                    f"diagonal relation is not transitive at {(p, q, r)}")
    classes: dict[int, list[int]] = {}
    for p in range(n):
        root = min(q for q in range(n) if (p, q) in rel)
        classes.setdefault(root, []).append(p)
    return [classes[k] for k in sorted(classes)]


def _component_labels(g: Groupoid) -> list[int]:
    labels = [0] * g.n_objects
    for comp in g.object_components():
        for p in comp:
            labels[p] = comp[0]
    return labels
