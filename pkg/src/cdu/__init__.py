"""c-differential uniformity toolkit for small finite fields.

Three independent routes to the c-Difference Distribution Table of a
function on GF(p^n) -- brute-force counting, the generic character-sum
formula, and closed forms for the Gold function perturbed by a linearized
polynomial -- plus the machinery to cross-verify them.
"""

from .field import Field, FieldError, Felt, gcd_lemma, make_field, parse_field

__all__ = [
    "Field",
    "FieldError",
    "Felt",
    "gcd_lemma",
    "make_field",
    "parse_field",
]

__version__ = "0.1.0"
