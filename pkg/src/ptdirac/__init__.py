"""PT-symmetric Dirac-Weyl models with hyperbolic magnetic fields."""
__version__ = "0.1.0"
