"""Crystal bases, Nakashima-Zelevinsky polytopes and convex-geometric Demazure operators."""

__version__ = "0.1.0"
