"""Exact arithmetic for groups of PL homeomorphisms of the circle and the line."""
from .errors import BreakpointBudgetExceeded, BudgetExhausted, FreeOrbitsError, InvalidInput, VerificationFailure
from .numeric import ONE, SQRT2, ZERO, Scalar, parse_scalar
from .fixedsets import ArcInterval, FixedSet, LineFixedSet
from .plmaps import (
    CircleMap,
    Lift,
    LineMap,
    breakpoint_cap,
    circle_map,
    compose,
    evaluate,
    fixed_set,
    identity,
    invert,
    line_map,
    map_from_json,
    map_to_json,
    rotation,
)
from .words import Action, Word, count_words, enumerate_words, iter_realized, realize, reduce_word
from .dynamics import orbit_density, orbit_points, periodic_points, rotation_number
from .theorem import (
    abelian_rank_witness,
    census,
    free_region,
    h_truncated,
    interior_fixer,
    verify_faithful_up_to,
    verify_z2_witness,
    z2_witness_scan,
)
from .constructions import (
    PingPongCertificate,
    Section32Params,
    build_section32,
    check_pingpong,
    default_section32,
    glue_interval_actions,
    lift_section,
    make_pingpong_pair,
    stabilizer_certificate,
)

__version__ = "0.1.0"
