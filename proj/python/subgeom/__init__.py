from ._subgeom import (
    ChainSpec,
    CertifyError,
    PhiSpec,
    YoungPair,
    big_h,
    big_h_inv,
    certify,
    check_young,
    delta_k,
    eval_phi,
    h_k,
    load_chain_spec,
    make_pair,
    parse_chain_spec,
    phi_prime,
    poly_corollary_const,
    poly_min_const,
    rate_r,
    simulate,
    theorem_constants,
    verify,
)

__all__ = [
    "ChainSpec",
    "CertifyError",
    "PhiSpec",
    "YoungPair",
    "big_h",
    "big_h_inv",
    "certify",
    "check_young",
    "delta_k",
    "eval_phi",
    "h_k",
    "load_chain_spec",
    "make_pair",
    "parse_chain_spec",
    "phi_prime",
    "poly_corollary_const",
    "poly_min_const",
    "rate_r",
    "simulate",
    "theorem_constants",
    "verify",
]
