"""Uniformly convex paranormed spaces over finite weighted measure spaces.

Builds the functional p(x) = phi^-1(sum_i a_i phi(|x_i|)) from a generator
bijection phi, audits the generator conditions the theory needs, computes
moduli of convexity by every available method, and verifies them against
brute-force search.
"""

__version__ = "0.1.0"

from .conditions import (Certificate, ConditionReport, Grid2, audit_all,
                         certify, default_grid)
from .generator import (Generator, GeneratorError, cubic_rational,
                        exp_minus_one, from_expression, make_generator,
                        parse_family_spec, power, power_times_exp)
from .measure import CaseFlags, MeasureSpace, classify, parse_weights
from .modulus import (DeltaQuery, ModulusTable, build_table, clarkson_delta,
                      delta0, delta_eA, delta_eF, delta_psi_transform,
                      delta_thm5, in_delta, in_delta_phi_exp,
                      psi_transform_table, x_r_eps)
from .oracle import (OracleResult, arc_max_exp, check_lower_bound,
                     empirical_modulus)
from .paranorm import (ParanormContext, audit_axioms, ball_boundary, pnorm,
                       pnorm_array, radial_scale, radial_scale_array)

__all__ = [
    "__version__",
    "Certificate", "ConditionReport", "Grid2", "audit_all", "certify",
    "default_grid",
    "Generator", "GeneratorError", "cubic_rational", "exp_minus_one",
    "from_expression", "make_generator", "parse_family_spec", "power",
    "power_times_exp",
    "CaseFlags", "MeasureSpace", "classify", "parse_weights",
    "DeltaQuery", "ModulusTable", "build_table", "clarkson_delta", "delta0",
    "delta_eA", "delta_eF", "delta_psi_transform", "delta_thm5", "in_delta",
    "in_delta_phi_exp", "psi_transform_table", "x_r_eps",
    "OracleResult", "arc_max_exp", "check_lower_bound", "empirical_modulus",
    "ParanormContext", "audit_axioms", "ball_boundary", "pnorm",
    "pnorm_array", "radial_scale", "radial_scale_array",
]
