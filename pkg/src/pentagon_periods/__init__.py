"""Periodic billiards in the regular pentagon via the golden L and its Hecke-5 orbit."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ArithmeticOverflow,
    CacheFormatError,
    CalibrationError,
    CheckFailure,
    DomainError,
    FamilyIdentityError,
    GeometryError,
    IdentityFailure,
    InvariantViolation,
    LemmaViolation,
    ReciprocityViolation,
    ResourceLimitError,
    TheoremCheckError,
)
from .golden import GoldenInt, GoldenRat, ResidueElem, conj_norm, reduce_mod, sign  # noqa: F401
from .hecke import GMat, trilinear_bottom_row, verify_paper_identities  # noqa: F401
from .orbit import OrbitCensus, orbit_enumerate, read_census, write_census  # noqa: F401
from .spectrum import classify_period, family_generate_verify, missing_evens, spectrum_scan  # noqa: F401
