"""Algebraic and combinatorial machinery for equivariant instanton
Floer homology of rational homology spheres: exact linear algebra,
stratified-chain calculus, flow categories with suspensions and
wall-crossing, equivariant homology over R[U], cohomological reducible
bookkeeping for cobordisms, and the instanton Casson-Walker invariant.
"""

__version__ = "0.1.0"
