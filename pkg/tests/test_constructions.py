import random
from fractions import Fraction

import pytest

from freeorbits import Action, InvalidInput, Scalar, Word, enumerate_words, iter_realized, realize, rotation
from freeorbits.constructions import (
    DEFAULT_PINGPONG_ARCS,
    PingPongCertificate,
    Section32Params,
    build_section32,
    check_pingpong,
    default_section32,
    glue_interval_actions,
    lift_section,
    make_pingpong_pair,
    pingpong_transcript,
    stabilizer_certificate,
)
from freeorbits.fixedsets import INTERVAL, ArcInterval
from freeorbits.theorem import free_region, interior_fixer, verify_faithful_up_to

from helpers import bump, bump_pair_action

ALPHA = Scalar.parse("-1+sqrt2")


def q(p, r=1):
    return Scalar(Fraction(p, r))


@pytest.fixture(scope="module")
def pingpong():
    return make_pingpong_pair()


@pytest.fixture(scope="module")
def psi():
    return default_section32()


# ping-pong ----------------------------------------------------------------------


def test_pingpong_certificate_verified(pingpong):
    A, C = pingpong
    assert check_pingpong(A, C)
    assert A.certificates["pingpong"]["inclusions"] == {"a": True, "A": True, "b": True, "B": True}


def test_pingpong_rejects_overlapping_arcs():
    arcs = list(DEFAULT_PINGPONG_ARCS)
    arcs[1] = ArcInterval(q(1, 10), q(1, 4), INTERVAL)
    with pytest.raises(InvalidInput):
        make_pingpong_pair(arcs)


def test_pingpong_with_wrapping_arc():
    arcs = [("9/10", "1/20"), ("1/10", "1/5"), ("3/10", "2/5"), ("1/2", "3/5")]
    A, C = make_pingpong_pair([(q(Fraction(a)), q(Fraction(b))) for a, b in arcs])
    assert check_pingpong(A, C)


def test_pingpong_rejects_bumps_and_rotations(pingpong):
    _, C = pingpong
    assert not check_pingpong(bump_pair_action(), C)
    R = Action(("a", "b"), (rotation(q(1, 4)), rotation(q(1, 3))))
    ok, transcript = pingpong_transcript(R, C)
    assert not ok and not any(transcript.values())


def test_pingpong_faithful(pingpong):
    A, _ = pingpong
    assert verify_faithful_up_to(A, 6) == []


def test_pingpong_inclusions_certify_freeness(pingpong):
    A, C = pingpong
    base = q(1, 4)  # outside all four arcs
    assert not any(arc.contains(base) for arc in C.arcs)
    for w, m in iter_realized(A, 6):
        assert C.target_arc(w[0]).contains(m.image(base)), w


# line lifts --------------------------------------------------------------------------


def test_lift_section_examples(pingpong):
    R = Action(("a",), (rotation(q(1, 3)),))
    L = lift_section(R, [0])
    assert L.maps[0].evaluate(q(7)) == q(22, 3)
    assert L.certificates["min_displacement"]["a"] == "1/3"
    A, _ = pingpong
    L1 = lift_section(A, [1, 1])
    assert all(m.min_displacement() > 0 for m in L1.maps)
    B = bump_pair_action()
    assert lift_section(B, [0, 0]).maps[0].min_displacement() == 0


# the glued line action ---------------------------------------------------------------


def test_default_build(psi):
    fa, fb = (m.fixed_set() for m in psi.maps)
    assert fa.intervals() == [(None, q(0))]
    assert fb.is_empty
    assert not fa.intersects(fb)
    assert psi.maps[0].evaluate(q(-5)) == q(-5)
    assert psi.maps[0].evaluate(q(2)) == q(2) + ALPHA
    assert psi.maps[1].evaluate(q(2)) == q(5, 2)
    assert psi.maps[1].evaluate(q(-3)) == q(-3) + ALPHA
    assert psi.certificates["section32"]["fixed_sets"]["disjoint"] is True


def test_unit_variant():
    psi = default_section32(Section32Params(g_below_zero="unit"))
    assert psi.maps[1].evaluate(q(-3)) == q(-2)
    assert psi.maps[1].fixed_set().is_empty


@pytest.mark.parametrize("kwargs", [
    {"alpha": q(1, 2), "beta": q(1, 2)},
    {"alpha": ALPHA, "beta": q(3, 2)},
    {"alpha": q(0)},
    {"p": q(4)},
])
def test_bad_params(kwargs):
    with pytest.raises(InvalidInput):
        default_section32(Section32Params(**kwargs))


def test_tail_condition_checked(pingpong):
    A, _ = pingpong
    tails = lift_section(A, [0, 0])
    with pytest.raises(InvalidInput):
        build_section32(Section32Params(p=q(41, 10)), lift_section(Action(("a", "b"), (rotation(q(1, 100)), rotation(q(1, 100)))), [0, 0]))
    assert build_section32(Section32Params(), tails).n_gens == 2


def _apply(action, w, x):
    for c in reversed(w):
        x = action.letter_maps[c].evaluate(x)
    return x


def test_stabilizer_examples(psi):
    assert stabilizer_certificate(psi, q(-3)) == Word("a")
    w = stabilizer_certificate(psi, q(2))
    k = (len(w) - 1) // 2
    assert w == Word("b") ** k * Word("a") * Word("b") ** -k and k > 0
    # oracle: iterate the exact inverse of b until the point drops below 0
    y, kk = q(2), 0
    while y >= 0:
        y = psi.letter_maps[3].evaluate(y)
        kk += 1
    assert kk == k
    assert realize(psi, w).evaluate(q(2)) == q(2)
    w100 = stabilizer_certificate(psi, q(100))
    assert len(w100) > len(w) and _apply(psi, w100, q(100)) == q(100)


def test_stabilizer_irrational_points(psi):
    for x in (ALPHA * 7, q(13, 3) - ALPHA, -ALPHA):
        w = stabilizer_certificate(psi, x)
        assert _apply(psi, w, x) == x


def test_psi_faithful_short_words(psi):
    assert verify_faithful_up_to(psi, 4) == []


# gluing --------------------------------------------------------------------------


def test_glue_identity():
    from freeorbits import identity

    ident = Action(("a", "b"), (identity(), identity()))
    G = glue_interval_actions([ident], [q(0)])
    assert all(m.is_identity for m in G.maps)


def test_glue_two_bump_pairs():
    B = bump_pair_action()
    anchors = [q(0), q(1, 2)]
    G = glue_interval_actions([B, B], anchors)
    for x in anchors:
        assert all(m.evaluate(x) == x for m in G.maps)
    fr = free_region(G, 2)
    # each gap carries a covering pair, so nothing is free and every point has a fixer
    assert fr.non_kernel_region == [] and fr.fixed_union.is_full
    for i in range(200):
        x = q(2 * i + 1, 400)
        assert not fr.moved_by_all_nontrivial(x)
        assert interior_fixer(G, 2, x) is not None


def test_glue_matches_rescaled_parts():
    B = bump_pair_action()
    anchors = [q(1, 10), q(1, 2)]
    G = glue_interval_actions([B, B], anchors)
    ends = anchors + [anchors[0] + 1]
    for w in enumerate_words(3):
        gm, pm = realize(G, w), realize(B, w)
        for i in range(2):
            lo, width = ends[i], ends[i + 1] - ends[i]
            for t in (q(1, 7), q(1, 2), q(5, 6), q(3, 5), q(9, 10)):
                assert gm.image(lo + width * t) == (lo + width * pm.image(t)).frac()


def test_glue_kernel_on_one_gap_only():
    B = bump_pair_action()
    P = Action(("a", "b"), (rotation(0), B.maps[1]))  # a acts trivially on this part
    G = glue_interval_actions([B, P], [q(0), q(1, 2)])
    ga = realize(G, Word("a"))
    assert not ga.is_identity
    assert ga.fixed_set().contains(q(3, 4)) and ga.fixed_set().contains(q(9, 10))


def test_glue_arity_mismatch():
    B = bump_pair_action()
    with pytest.raises(InvalidInput):
        glue_interval_actions([B], [q(0), q(1, 2)])
