"""Random test data described by plain integers so oracles can avoid the library."""
from fractions import Fraction

from freeorbits import Action, Scalar, circle_map


def composition(rng, total, parts):
    """Random composition of ``total`` into ``parts`` positive integers."""
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    edges = [0] + cuts + [total]
    return [b - a for a, b in zip(edges, edges[1:])]


def random_grid_knots(rng, G=60, max_knots=6):
    """Knots ``(X, Y)`` (units of 1/G) of a strictly increasing degree-one lift.

    About half the maps get a forced fixed point, some a whole diagonal piece.
    """
    n = rng.randint(2, max_knots)
    X = sorted(rng.sample(range(G), n))
    DX = [X[i + 1] - X[i] for i in range(n - 1)] + [X[0] + G - X[-1]]
    mode = rng.random()
    if mode < 0.35:
        i = rng.randrange(n)
        rest = composition(rng, G - DX[i], n - 1) if n > 1 else []
        DY = rest[:i] + [DX[i]] + rest[i:]
        Y0 = X[i] - sum(DY[:i])
    else:
        DY = composition(rng, G, n)
        if mode < 0.7:
            i = rng.randrange(n)
            Y0 = X[i] - sum(DY[:i])
        else:
            Y0 = X[0] + rng.randint(-G, G)
    Y = [Y0 + sum(DY[:i]) for i in range(n)]
    return list(zip(X, Y))


def grid_map(knots, G=60):
    return circle_map([(Scalar(Fraction(x, G)), Scalar(Fraction(y, G))) for x, y in knots])


def random_circle_map(rng, G=60, max_knots=6):
    return grid_map(random_grid_knots(rng, G, max_knots), G)


def frac_scalar(p, q=1):
    return Scalar(Fraction(p, q))


def bump(lo, mid, val, hi):
    """Bump supported on ``(lo, hi)`` with one interior knot ``mid -> val`` (strings or rationals)."""
    return circle_map([(lo, lo), (mid, val), (hi, hi)])


def bump_pair_action():
    """Bumps with supports (3/5, 9/10) and (1/10, 1/2)."""
    a = bump(Scalar("3/5"), Scalar("3/4"), Scalar("4/5"), Scalar("9/10"))
    b = bump(Scalar("1/10"), Scalar("1/4"), Scalar("2/5"), Scalar("1/2"))
    return Action(("a", "b"), (a, b))


def three_bump_action():
    """Three bumps with pairwise disjoint supports, so every pair of fixed sets covers."""
    a = bump(Scalar("0"), Scalar("1/10"), Scalar("1/5"), Scalar("1/4"))
    b = bump(Scalar("1/3"), Scalar("2/5"), Scalar("1/2"), Scalar("7/12"))
    c = bump(Scalar("2/3"), Scalar("3/4"), Scalar("4/5"), Scalar("9/10"))
    return Action(("a", "b", "c"), (a, b, c))


def random_bump_pair(rng, G=120):
    """Two bumps with disjoint grid supports (a nontrivial covering pair)."""
    pts = sorted(rng.sample(range(G), 4))
    while any(b - a < 3 for a, b in zip(pts, pts[1:])) or pts[0] + G - pts[-1] < 3:
        pts = sorted(rng.sample(range(G), 4))
    shift = rng.randrange(G)

    def one(lo, hi):
        mid = rng.randint(lo + 1, hi - 1)
        val = rng.randint(lo + 1, hi - 1)
        while val == mid:
            val = rng.randint(lo + 1, hi - 1)
        return grid_map([(lo + shift, lo + shift), (mid + shift, val + shift), (hi + shift, hi + shift)], G)

    return one(pts[0], pts[1]), one(pts[2], pts[3])
