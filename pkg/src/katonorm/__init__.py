"""Exact canonical perturbation theory for polynomial Hamiltonians.

Coefficients live in Q(i, sqrt 2) and every result is exact.  The main entry
point is :func:`normalize`; the Kato operator words, Deprit exponents and
identity checks are available from their modules.
"""
from .field import FieldElement
from .kato import (
    ZTable,
    apply_perturbed_D,
    apply_perturbed_P,
    apply_perturbed_S,
    apply_projector_derivative,
    apply_sr,
    brute_force_word_sum,
    enumerate_weak_compositions,
    square_generator,
    z_apply,
)
from .lie import (
    Direction,
    GeneratorSeries,
    Style,
    deprit_apply,
    deprit_normalize,
    dragt_finn_apply,
    dragt_finn_normalize,
)
from .liouville import BirkhoffContext, center_basis, eigenvalue, liouville, project_P0, solve_S0
from .normalform import (
    DegenerateIntegralError,
    Method,
    NormalFormResult,
    StyleReport,
    compare_styles,
    gustavson_center_integrals,
    gustavson_from_result,
    gustavson_integral,
    gustavson_integral_series,
    normalize,
    normalized_hamiltonian_direct,
)
from .problem import ProblemSpec, SpecError, emit_spec, parse_spec
from .series import Chart, ChartMismatchError, Monomial, PSeries, poisson_bracket, to_chart

__version__ = "0.1.0"
