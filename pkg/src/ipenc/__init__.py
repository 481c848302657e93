"""Inner product encodings of predicates over Z_q.

A predicate ``P`` on ``X x Y`` has an encoding of length ``l`` modulo ``q``
when there are vectors ``vx, vy`` in ``Z_q^l`` with ``P(x, y) = 1`` exactly
when ``<vx, vy> = 0 mod q``. The package builds such encodings, verifies them
exhaustively, and certifies lower bounds on their length.
"""

from .bounds import Certificate, builtin_bound, check, min_rank_oracle
from .encoders import Encoding, build_encoding, verify
from .errors import IpencError
from .modmath import Modulus, factorize
from .predicates import Predicate, builtin_reduction, zero_pattern
from .zqlinalg import ZqMatrix, factor_rank, rank_mod_p

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Encoding", "IpencError", "Modulus", "Predicate", "ZqMatrix",
    "build_encoding", "builtin_bound", "builtin_reduction", "check", "factor_rank",
    "factorize", "min_rank_oracle", "rank_mod_p", "verify", "zero_pattern",
]
