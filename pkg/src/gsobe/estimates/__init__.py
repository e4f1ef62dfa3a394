"""Lattice norms, resonance identities, multilinear functionals and integral bounds."""
from .lemmas import (LemmaReport, cubic_scaling, lemma1_check, lemma23_check, polynomial_check,
                     two_centre_check)
from .multilinear import FunctionalSpec, multilinear_bruteforce, multilinear_functional
from .norms import xsb_lattice_norm
from .resonance import L_value, SignRegion, resonance_closed_form, resonance_from_L
from .sweeps import PRESETS, EstimateReport, constant_sweep, preset_sweep
