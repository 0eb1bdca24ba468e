"""silverline: exact arithmetic for silver numbers, their integers and tilings."""
from .errors import (
    CannotCertifyError,
    IncompatibleFieldError,
    InvalidDegreeError,
    InvalidRuleError,
    NoDecompositionError,
    NotFoundError,
    PreconditionError,
    ReducibleModulusError,
    SilverlineError,
    SingularError,
    UnsupportedDegreeError,
)
from .polynomials import IntPolynomial, SilverPolynomial, enumerate_silver_polynomials, factor, is_irreducible
from .reals import AlgebraicReal, silver_number
from .numfield import FieldElement, field_compare, field_sign
from .pisot import PisotResult, is_pisot
from .matrices import CompanionForm, IntMatrix, NonNegIntMatrix, companion, perron
from .integers import NormalForm, SigmaIntRep, compare, successor, to_normal_form, value_of
from .tiling import IndicatorString, Prototile, SubstitutionRule, detect_convergence, limit_prefix, silver_rule
from .dichotomy import DichotomyCertificate, build_certificate, verify_certificate
from .config import RunConfig

__version__ = "0.1.0"
