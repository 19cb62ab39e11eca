"""Application pipelines built on the encoder, simulator, and graph library."""

from photonperm.apps.boosting import (
    BoostScanResult,
    boost_epsilon,
    boost_row_scan,
    recover_permanent_from_epsilon,
)
from photonperm.apps.densest import SubgraphRanking, dense_subgraph_complete
from photonperm.apps.isomorphism import gi_exhaustive_check
from photonperm.apps.matchings import perfect_matchings
from photonperm.apps.polynomials import (
    DISTINGUISHED,
    UNDISTINGUISHED,
    DistinguishResult,
    PolynomialResult,
    permanental_polynomial,
    poly_distinguish,
)

__all__ = [
    "BoostScanResult",
    "DISTINGUISHED",
    "UNDISTINGUISHED",
    "DistinguishResult",
    "PolynomialResult",
    "SubgraphRanking",
    "boost_epsilon",
    "boost_row_scan",
    "dense_subgraph_complete",
    "gi_exhaustive_check",
    "perfect_matchings",
    "permanental_polynomial",
    "poly_distinguish",
    "recover_permanent_from_epsilon",
]
