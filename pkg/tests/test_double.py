import pytest

from dgq.double import (DoubleGroupoid, DoubleRelation, build_Xrs,
                        classify_vacant_relation, compute_inverses,
                        diagonal_components, double_direct_product,
                        double_disjoint_union, equivalence_from_pairs, filler,
                        from_double_relation, is_vacant, transpose,
                        validate_double_groupoid)
from dgq.errors import StructureError, VacancyError
from dgq.groupoids import UNDEF
from dgq.samples import commuting_squares_z2


def brute_fillers(t, x, g):
    return [a for a in t.boxes() if t.top[a] == x and t.right[a] == g]


# -- validation ---------------------------------------------------------------


def test_s3_double_valid(s3_T):
    assert validate_double_groupoid(s3_T).ok


def test_x22_valid_and_box_count():
    t = build_Xrs(2, 2)
    assert t.n_boxes == 16
    assert validate_double_groupoid(t).ok


def test_corrupt_vcomp_detected():
    t = build_Xrs(2, 2)
    vcomp = [list(r) for r in t.vcomp]
    a, b = next(iter(t.vpairs()))
    old = vcomp[a][b]
    vcomp[a][b] = (old + 1) % t.n_boxes
    bad = DoubleGroupoid(t.horiz, t.vert, t.top, t.bottom, t.left, t.right,
                         t.vid, t.hid, vcomp, t.hcomp)
    rep = validate_double_groupoid(bad)
    assert not rep.ok
    assert all(f.rule.startswith(("axiom0", "axiom2", "axiom3", "axiom6"))
               for f in rep.failures)
    assert rep.failures[0].witness


# -- inverses -----------------------------------------------------------------


def test_vid_of_inverse_edge(s3_T):
    inv = compute_inverses(s3_T)
    hz = s3_T.horiz
    for x in hz.arrows():
        assert inv.h_inv[s3_T.vid[x]] == s3_T.vid[hz.inv(x)]


def test_theta_inverses_fixed(s3_T):
    inv = compute_inverses(s3_T)
    for p in range(s3_T.n_points):
        theta = s3_T.vid[s3_T.horiz.identity[p]]
        assert inv.h_inv[theta] == theta
        assert inv.v_inv[theta] == theta
        assert inv.full_inv[theta] == theta


def test_vertical_inverse_formula_on_matched_pair_boxes(s3_T):
    # the vertical inverse of the box with corner (x, g) has corner
    # (bottom, g^-1): top moves to the acted edge, right edge inverts
    inv = compute_inverses(s3_T)
    vt = s3_T.vert
    for a in s3_T.boxes():
        expected = filler(s3_T, s3_T.bottom[a], vt.inv(s3_T.right[a]))
        assert inv.v_inv[a] == expected


def test_full_inverse_frame(s3_T):
    inv = compute_inverses(s3_T)
    hz, vt = s3_T.horiz, s3_T.vert
    for a in s3_T.boxes():
        fa = inv.full_inv[a]
        assert s3_T.top[fa] == hz.inv(s3_T.bottom[a])
        assert s3_T.bottom[fa] == hz.inv(s3_T.top[a])
        assert s3_T.left[fa] == vt.inv(s3_T.right[a])
        assert s3_T.right[fa] == vt.inv(s3_T.left[a])


# -- vacancy -----------------------------------------------------------------


def test_s3_vacant(s3_T):
    assert is_vacant(s3_T).vacant


def test_commuting_squares_not_vacant():
    rep = is_vacant(commuting_squares_z2())
    assert not rep.vacant
    _, corner, fillers = rep.witness
    assert len(fillers) != 1


def test_x22_every_corner_has_one_filler():
    t = build_Xrs(2, 2)
    assert is_vacant(t).vacant
    corners = [(x, g) for x in t.horiz.arrows() for g in t.vert.arrows()
               if t.horiz.target[x] == t.vert.source[g]]
    assert len(corners) == 16
    for x, g in corners:
        assert len(brute_fillers(t, x, g)) == 1


def test_vacancy_conditions_consistent_on_corpus(corpus):
    # is_vacant raises InternalConsistencyError if the four corner
    # conditions ever disagree; running it is the check
    for name, t in corpus.items():
        is_vacant(t)


# -- transpose ----------------------------------------------------------------


def test_transpose_involution(corpus):
    for t in corpus.values():
        assert transpose(transpose(t)) == t


def test_transpose_frame(s3_T):
    tt = transpose(s3_T)
    for a in s3_T.boxes():
        assert tt.top[a] == s3_T.left[a]
        assert tt.bottom[a] == s3_T.right[a]
        assert tt.left[a] == s3_T.top[a]
        assert tt.right[a] == s3_T.bottom[a]


def test_transpose_of_grid_classifies_swapped():
    t = transpose(build_Xrs(2, 3))
    assert validate_double_groupoid(t).ok
    r, s, _ = classify_vacant_relation(t)
    assert (r, s) == (3, 2)


# -- double relations ----------------------------------------------------------


def test_equality_relations_give_theta_boxes():
    rel = DoubleRelation(3, (0, 1, 2), (0, 1, 2))
    t = from_double_relation(rel)
    assert t.n_boxes == 3
    assert all(t.is_vid(a) and t.is_hid(a) for a in t.boxes())
    assert validate_double_groupoid(t).ok


def test_x22_from_relations_counts():
    t = build_Xrs(2, 2)
    assert t.n_boxes == 2 * 2 * 2 * 2
    assert t.n_points == 4


def test_total_relations_on_two_points_not_vacant():
    rel = DoubleRelation(2, (0, 0), (0, 0))
    t = from_double_relation(rel)
    assert validate_double_groupoid(t).ok
    rep = is_vacant(t)
    assert not rep.vacant


def test_equivalence_from_pairs_validation():
    pairs = [(0, 0), (1, 1), (0, 1)]
    with pytest.raises(StructureError, match="symmetric"):
        equivalence_from_pairs(2, pairs)
    pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]
    with pytest.raises(StructureError, match="transitive"):
        equivalence_from_pairs(3, pairs)
    full = [(p, q) for p in range(2) for q in range(2)]
    assert equivalence_from_pairs(2, full) == (0, 0)


def test_build_x11_single_box_and_classify():
    t = build_Xrs(1, 1)
    assert t.n_boxes == 1 and t.n_points == 1
    assert classify_vacant_relation(t)[:2] == (1, 1)


def test_build_x23_classify_with_witness():
    t = build_Xrs(2, 3)
    assert t.n_points == 6 and t.n_boxes == 36
    r, s, point_map = classify_vacant_relation(t)
    assert (r, s) == (2, 3)
    assert sorted(point_map.values()) == sorted(
        (i, j) for i in range(2) for j in range(3))


def test_classify_rejects_non_vacant_relation():
    rel = DoubleRelation(2, (0, 0), (0, 0))
    with pytest.raises(VacancyError):
        classify_vacant_relation(from_double_relation(rel))


def test_classify_rejects_non_relation(s3_T):
    with pytest.raises(StructureError):
        classify_vacant_relation(s3_T)


# -- unions, products, diagonal components -------------------------------------


def test_diagonal_components_of_grid():
    assert diagonal_components(build_Xrs(2, 2)) == [[0, 1, 2, 3]]


def test_diagonal_components_of_union(s3_T):
    t = double_disjoint_union(build_Xrs(2, 2), s3_T)
    comps = diagonal_components(t)
    assert comps == [[0, 1, 2, 3], [4]]


def test_diagonal_relation_failure_exposed():
    # horizontal classes {0,1},{2}; vertical classes {0},{1,2}: then
    # 0 ~ 2 through 1 but not back, so the diagonal relation is asymmetric
    rel = DoubleRelation(3, (0, 0, 2), (0, 1, 1))
    t = from_double_relation(rel)
    assert validate_double_groupoid(t).ok
    with pytest.raises(StructureError, match="symmetric|transitive"):
        diagonal_components(t)


def test_union_and_product_of_vacant_are_vacant(s3_T):
    u = double_disjoint_union(s3_T, build_Xrs(2, 2))
    p = double_direct_product(s3_T, build_Xrs(2, 1))
    for t in (u, p):
        assert validate_double_groupoid(t).ok
        assert is_vacant(t).vacant


def test_product_filler_counts():
    p = double_direct_product(build_Xrs(1, 1), build_Xrs(2, 2))
    for x in p.horiz.arrows():
        for g in p.vert.arrows():
            if p.horiz.target[x] == p.vert.source[g]:
                assert len(brute_fillers(p, x, g)) == 1


# -- lemma-level properties ------------------------------------------------------


def test_stacked_horizontal_inverse(corpus):
    # {X over R}^h = {X^h over R^h} whenever X over R is defined
    for t in corpus.values():
        inv = compute_inverses(t)
        for x, r in t.vpairs():
            c = t.vcomp[x][r]
            if c == UNDEF:
                continue
            other = t.vcomp[inv.h_inv[x]][inv.h_inv[r]]
            assert other == inv.h_inv[c]


def _unit_triples(t):
    """Horizontally composable triples whose product is a vertical identity."""
    for a, b in t.hpairs():
        ab = t.hcomp[a][b]
        for c in t.boxes():
            if t.right[ab] != t.left[c]:
                continue
            abc = t.hcomp[ab][c]
            if t.is_vid(abc):
                yield a, b, c


def test_unit_factorization_unique(s3_T):
    """For A|B|C with ABC a vertical identity there are unique U, V with
    U over V = B, AU and VC vertical identities, in the displayed layout."""
    t = s3_T
    count_triples = 0
    for a, b, c in _unit_triples(t):
        count_triples += 1
        found = []
        for u in t.boxes():
            if t.hcomp[a][u] == UNDEF or not t.is_vid(t.hcomp[a][u]):
                continue
            for v in t.boxes():
                if t.vcomp[u][v] != b:
                    continue
                if t.hcomp[v][c] == UNDEF or not t.is_vid(t.hcomp[v][c]):
                    continue
                found.append((u, v))
        assert len(found) == 1, (a, b, c, found)
        u, v = found[0]
        # displayed 2x3 grid: A U vid(t C) / vid(b A) V C
        assert t.hcomp[u][t.vid[t.top[c]]] != UNDEF
        assert t.hcomp[t.vid[t.bottom[a]]][v] != UNDEF
    assert count_triples > 0


def test_counit_factorization_unique_via_transpose(s3_T):
    t = transpose(s3_T)
    for a, b, c in _unit_triples(t):
        found = []
        for u in t.boxes():
            if t.hcomp[a][u] == UNDEF or not t.is_vid(t.hcomp[a][u]):
                continue
            for v in t.boxes():
                if t.vcomp[u][v] != b:
                    continue
                if t.hcomp[v][c] == UNDEF or not t.is_vid(t.hcomp[v][c]):
                    continue
                found.append((u, v))
        assert len(found) == 1


def triple_inverse_solutions(t, a):
    """Brute-force solutions (X, Y, Z) of the three-box identity used by the
    antipode-composite axiom: the cross layout with X Y Z = A and the
    stacked X^-1 / Y / Z^-1 = A^-1."""
    inv = compute_inverses(t)
    out = []
    for x in t.boxes():
        xi = inv.full_inv[x]
        for y in t.boxes():
            if t.hcomp[x][y] == UNDEF or t.vcomp[xi][y] == UNDEF:
                continue
            xy = t.hcomp[x][y]
            for z in t.boxes():
                zi = inv.full_inv[z]
                if (t.hcomp[y][z] == UNDEF or t.hcomp[xy][z] != a
                        or t.vcomp[y][zi] == UNDEF):
                    continue
                stacked = t.vcomp[t.vcomp[xi][y]][zi]
                if stacked == inv.full_inv[a]:
                    out.append((x, y, z))
    return out


@pytest.mark.parametrize("name", ["s3_matched_pair", "x22"])
def test_triple_inverse_unique_on_vacant(name, vacant_corpus):
    t = vacant_corpus[name]
    inv = compute_inverses(t)
    for a in t.boxes():
        sols = triple_inverse_solutions(t, a)
        assert sols == [(a, inv.h_inv[a], a)]


def test_triple_inverse_equivalence_non_vacant():
    # in any double groupoid the two conditions are equivalent: every
    # solution of X Y Z = A in the cross layout also satisfies the stacked
    # identity, even without vacancy
    t = commuting_squares_z2()
    inv = compute_inverses(t)
    for a in t.boxes():
        for x in t.boxes():
            xi = inv.full_inv[x]
            for y in t.boxes():
                if t.hcomp[x][y] == UNDEF or t.vcomp[xi][y] == UNDEF:
                    continue
                for z in t.boxes():
                    zi = inv.full_inv[z]
                    if (t.hcomp[y][z] == UNDEF
                            or t.vcomp[y][zi] == UNDEF
                            or t.hcomp[t.hcomp[x][y]][z] != a):
                        continue
                    stacked = t.vcomp[t.vcomp[xi][y]][zi]
                    assert stacked == inv.full_inv[a]


# -- corner-solution formulas on vacant instances ---------------------------------


def test_identity_side_forces_identity_box(vacant_corpus):
    for t in vacant_corpus.values():
        for a in t.boxes():
            if (t.horiz.is_identity(t.top[a]) or t.horiz.is_identity(t.bottom[a])):
                assert t.is_hid(a)
            if (t.vert.is_identity(t.left[a]) or t.vert.is_identity(t.right[a])):
                assert t.is_vid(a)


def _theta(t, p):
    return t.vid[t.horiz.identity[p]]


def test_counital_pair_sets(s3_T):
    """The two corner-solution sets behind the target counital map: empty
    unless C is a horizontal identity, else indexed by edges at a point."""
    t = s3_T
    for c in t.boxes():
        found = []
        for a in t.boxes():
            if t.vcomp[a][c] == UNDEF:
                continue
            ac = t.vcomp[a][c]
            if not t.is_hid(ac):
                continue
            for b in t.boxes():
                if t.hcomp[a][b] == UNDEF:
                    continue
                if t.is_vid(t.hcomp[a][b]):
                    found.append((a, b))
        if not t.is_hid(c):
            assert found == []
        else:
            g = t.left[c]
            p = t.vert.source[g]
            expected = sorted((_theta(t, p), t.vid[x])
                              for x in t.horiz.arrows()
                              if t.horiz.source[x] == p)
            assert sorted(found) == expected


def test_fold_pair_sets(s3_T):
    """Solutions of A|B with B^-1 under A and AB = C exist only for C a
    horizontal identity and are indexed by edges out of its top point."""
    t = s3_T
    inv = compute_inverses(t)
    for c in t.boxes():
        found = []
        for a in t.boxes():
            for b in t.boxes():
                if t.hcomp[a][b] != c:
                    continue
                if t.vcomp[a][inv.full_inv[b]] == UNDEF:
                    continue
                found.append((a, b))
        if not t.is_hid(c):
            assert found == []
        else:
            g = t.left[c]
            p = t.vert.source[g]
            zs = [z for z in t.horiz.arrows() if t.horiz.source[z] == p]
            assert len(found) == len(zs)
            for a, b in found:
                z = t.top[a]
                assert t.left[a] == g and t.top[b] == t.horiz.inv(z)
                assert t.right[b] == g
