"""Exact-arithmetic rigidity certificates for abelian coverings
branched over the ten lines of the degree-5 del Pezzo surface.

All lattice and cohomology bookkeeping is done over the integers; no
floating point enters any verdict.
"""

__version__ = "0.1.0"
