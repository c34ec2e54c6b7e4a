"""
ddbar - exact ddbar-lemma computations
Bicomplexes, complex bigraded algebras, minimal models, toric varieties and Cartan models
over Q(i, lambda), with every verdict backed by a certificate.
"""

__version__ = "1.0.0"
