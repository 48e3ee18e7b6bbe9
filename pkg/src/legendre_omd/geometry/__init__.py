from .spec import (ENTROPY, EUCLIDEAN, FRACPOW, GEOMETRY_KEYS, HELLINGER,
                   SQRT, TSALLIS, GeometrySpec, divergence, eval_h,
                   get_geometry, grad_h, prox)
from .legendre import (DEFAULT_RADII, LegendreExponent, RegistryCase,
                       estimate_legendre_exponent, legendre_exponent,
                       registry_cases)

__all__ = [
    "ENTROPY", "EUCLIDEAN", "FRACPOW", "GEOMETRY_KEYS", "HELLINGER", "SQRT",
    "TSALLIS", "GeometrySpec", "divergence", "eval_h", "get_geometry",
    "grad_h", "prox", "DEFAULT_RADII", "LegendreExponent", "RegistryCase",
    "estimate_legendre_exponent", "legendre_exponent", "registry_cases",
]
