"""Exact unimodular-row toolkit: rings, elementary words, orbit censuses
and degree reduction over graded subalgebras of R[t]."""
from .errors import *  # noqa: F401,F403
from .rings import (Excision, Integers, IntegersMod, Poly, Quotient, Rationals,  # noqa: F401
                    RingElement, ring_arith)
from .graded import Graded, GradedAlgebra, degree_semigroup, graded_component, swan_weibel  # noqa: F401
from .grammar import format_descriptor, format_element, parse_descriptor, parse_element  # noqa: F401
from .ideals import IdealHandle, excision_maps, gamma_ideal, ideal_membership  # noqa: F401
from .rows import UnimodularRow, apply_word, make_row, power_row  # noqa: F401
from .words import Conj, EquivalenceCertificate, Gen, Word, parse_word  # noqa: F401
from .rowops import nil_reduce, pthick, scale_last_by_unit_square  # noqa: F401
from .witt import (AlternatingMatrix, perp, pfaffian, psi, suslin_complete3,  # noqa: F401
                   vaserstein_V, witt_verify)
from .orbits import certificate_path, enumerate_um, orbit_bfs, read_census, write_census  # noqa: F401
from .vdk import (OrbitClassRep, common_shape, goodness_experiment, square_product,  # noqa: F401
                  vdk_product)
from .experiments import lemma_experiment  # noqa: F401
from .reduction import (ReductionTrace, make_a_monic, roitman_machine,  # noqa: F401
                        rt0_reduce)
from .artinrees import artin_rees_exponent, subintegral_extend, theta_map  # noqa: F401
