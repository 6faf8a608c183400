"""Spectra and L2 mixing of exclusion and interchange processes on the complete graph."""
from .errors import CapacityError, ExclusionError, ParameterError
from .evolution import SimConfig, empirical_tv, heat_kernel_row, l2_distance, simulate, tv_distance
from .generator import (build_cayley_adjacency, build_generator, build_lep_generator,
                        build_uep_generator, relate_cayley_to_lep)
from .kernels import BACKEND
from .lifts import lift_lep, lift_uep, verify_lift_lemmas
from .mixing import (asymptotic_profile, l2_curve, sandwich_check, tau2, uep_l2_exact,
                     verify_coefficient_lemma)
from .spectral import (SpectrumSummary, brute_force_spectrum, cayley_spectrum, eigenbasis,
                       envelope, multiplicity_checks, symmetric_core, uep_spectrum_closed_form)
from .state_index import (Kind, ProcessParams, SubsetState, TupleState, enumerate_subsets,
                          enumerate_tuples, lep_neighbors, rank_subset, rank_tuple,
                          state_count, uep_neighbors, unrank_subset, unrank_tuple)

__version__ = "0.1.0"
