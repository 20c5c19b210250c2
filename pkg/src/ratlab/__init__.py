"""Certified continued fractions and the first-return dynamics of the Gauss natural extension."""

from .errors import (DomainViolation, IndexBeyondCertified, InsufficientSamples,
                     IntegerYBoundary, NoIntersectingDiscWithinCap, NotReduced,
                     PrecisionExhausted, RatlabError, ReturnNotFound, StraddlesThreshold)
from .interval import BigRational, RationalInterval
from .cf import (CertifiedReal, CFExpansion, ThetaSequence, cf_expand, cylinder_interval,
                 fig1_constant, from_decimal, golden_ratio, sample_irrational,
                 tail_and_reversal, theta_seq)
from .natext import (INF, MobiusMap, NEPoint, inverse_step, measure_rectangle,
                     mobius_of_prefix, mu_omega_alpha, norm, step, step_from_infinity)
from .first_return import (NoReturnWithinCap, Region, Returned, ThetaBarSequence,
                           classify_region, return_map, return_ratio, tau, theta_bar)

__version__ = "0.1.0"
