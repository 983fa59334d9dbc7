import pickle
import random

import pytest

from freeorbits import Action, InvalidInput, Word, compose, count_words, enumerate_words, iter_realized, realize, reduce_word
from freeorbits.words import shortlex_key

from helpers import bump_pair_action, random_circle_map


def test_reduce_examples():
    assert reduce_word("abBA") == Word("")
    assert reduce_word("aab").text == "aab"
    assert reduce_word("aBba").text == "aa"
    assert str(Word("")) == "e"


def test_inverse_and_powers():
    w = Word("abA")
    assert w.inverse().text == "aBA"
    assert (w * w.inverse()) == Word("")
    assert (Word("b") ** 3 * Word("a") * Word("b") ** -3).pretty() == "b^3 a b^-3"


@pytest.mark.parametrize("k,total", [(1, 4), (2, 16), (3, 52), (10, 118096)])
def test_counts(k, total):
    assert count_words(k) == total
    if k <= 6:
        assert sum(1 for _ in enumerate_words(k)) == total


def test_enumeration_is_shortlex():
    words = list(enumerate_words(4))
    assert [w.text for w in words[:4]] == ["a", "A", "b", "B"]
    assert words[4].text == "aa" and words[5].text == "ab"
    assert words == sorted(words, key=shortlex_key)
    assert len(set(words)) == len(words)
    assert all(Word(w) == w for w in words)


def test_enumerate_slices_partition():
    full = list(enumerate_words(5))
    parts = [list(enumerate_words(5, start=i, stop=i + 50)) for i in range(0, len(full), 50)]
    assert [w for p in parts for w in p] == full


def test_realize_convention_left_to_right():
    A = bump_pair_action()
    a, b = A.maps
    assert realize(A, Word("ab")) == compose(a, b)
    assert realize(A, Word("")).is_identity
    assert realize(A, Word("aA")).is_identity
    assert realize(A, Word("abAB")).is_identity


def test_realize_homomorphism_random():
    rng = random.Random(8)
    A = Action(("a", "b"), (random_circle_map(rng), random_circle_map(rng)))
    words = list(enumerate_words(3))
    for _ in range(60):
        u, v = rng.choice(words), rng.choice(words)
        assert realize(A, u * v) == compose(realize(A, u), realize(A, v))


def test_iter_realized_matches_realize():
    rng = random.Random(12)
    A = Action(("a", "b"), (random_circle_map(rng), random_circle_map(rng)))
    pairs = list(iter_realized(A, 4))
    assert [w for w, _ in pairs] == list(enumerate_words(4))
    for w, m in pairs[::7]:
        assert m == realize(A, w)
    firsts = [w for w, _ in iter_realized(A, 4, [2])]
    assert firsts == [w for w in enumerate_words(4) if w[0] == 2]


def test_action_json_and_pickle():
    A = bump_pair_action()
    A.note_kernel(Word("abAB"))
    B = Action.from_json(A.to_json())
    assert B.maps == A.maps and B.kernel_notes == [Word("abAB")]
    C = pickle.loads(pickle.dumps(A))
    assert C.letter_maps == A.letter_maps


def test_action_rejects_mixed_domains():
    from freeorbits import identity

    with pytest.raises(InvalidInput):
        Action(("a", "b"), (identity("circle"), identity("line")))
    with pytest.raises(InvalidInput):
        bump_pair_action().word("abc")
