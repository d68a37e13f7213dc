"""Iterant algebra, eigenforms and a noncommutative discrete calculus."""
from .algebra import (
    IterantElement,
    IterantView,
    Matrix2,
    NotInvertibleError,
    eta,
    from_complex,
    from_matrix,
    identity,
    iterant_i,
    mul,
    real,
    to_matrix,
    view_product,
    view_swap,
)
from .forms import (
    Box,
    Empty,
    Reentry,
    box,
    detect_orbit,
    iterate_boxes,
    reentry_eigenform,
    unfold,
)
from .nexus import (
    FourPoint,
    PhysicalConstants,
    PlaneWaveParams,
    check_wave_derivative,
    derive_heisenberg,
    euclidean_q,
    nexus_substitute,
    plane_wave,
    verify_eigenpair,
)
from .scalar import EXACT, FLOAT, BackendMismatchError
from .skew import (
    SkewElement,
    TemporalFunction,
    TimeGrid,
    brownian_path,
    commutator,
    discrete_derivative,
    shift,
    skew_mul,
    verify_commutator_identity,
)

__version__ = "0.1.0"
