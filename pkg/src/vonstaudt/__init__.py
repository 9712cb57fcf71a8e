"""Von Staudt constructions: noncommutative systems, matroids and block representations."""

__version__ = "0.1.0"
