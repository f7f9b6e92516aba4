"""Duality transforms for convex profiles and the associated volume ratios."""

from .extremal import (
    BracketFailure,
    BracketInvalid,
    LambdaEstimate,
    OneRootCase,
    RootTriple,
    StationarityFailure,
    TentParams,
    ZeroProfile,
    a_bracket,
    big_f,
    big_g,
    ck_coefficients,
    m_sign,
    roots_of_m,
    solve_lambda,
    t_map,
    tent_profile,
)
from .gammafn import RegularizedGamma, reg_gamma
from .measures import (
    VolumePair,
    delta,
    integrate_line,
    log_kappa,
    log_s_j_n,
    s_j_n,
    symmetrization_gap,
    vol_mu,
    vol_nu,
    vol_nu_direct,
    volume_pair,
)
from .profile import (
    ConstantTail,
    ConvexProfile,
    LineConvexFunction,
    LinearTail,
    RadiusFunction,
    check_j_factorization,
    evaluation_grid,
    from_radius,
    j_transform,
    legendre,
    polarity,
    profile_from_dict,
    profile_to_dict,
    scale,
    symmetrize_line,
    to_radius,
)
from .verify import (
    ProfileSampler,
    SuiteReport,
    UnknownSuite,
    brute_force_lambda,
    run_suite,
)

__all__ = [
    "BracketFailure",
    "BracketInvalid",
    "ConstantTail",
    "ConvexProfile",
    "LambdaEstimate",
    "LineConvexFunction",
    "LinearTail",
    "OneRootCase",
    "ProfileSampler",
    "RadiusFunction",
    "RegularizedGamma",
    "RootTriple",
    "StationarityFailure",
    "SuiteReport",
    "TentParams",
    "UnknownSuite",
    "VolumePair",
    "ZeroProfile",
    "a_bracket",
    "big_f",
    "big_g",
    "brute_force_lambda",
    "check_j_factorization",
    "ck_coefficients",
    "delta",
    "evaluation_grid",
    "from_radius",
    "integrate_line",
    "j_transform",
    "legendre",
    "log_kappa",
    "log_s_j_n",
    "m_sign",
    "polarity",
    "profile_from_dict",
    "profile_to_dict",
    "reg_gamma",
    "roots_of_m",
    "run_suite",
    "s_j_n",
    "scale",
    "solve_lambda",
    "symmetrization_gap",
    "symmetrize_line",
    "t_map",
    "tent_profile",
    "to_radius",
    "vol_mu",
    "vol_nu",
    "vol_nu_direct",
    "volume_pair",
]
