"""stefan-kit - similarity solutions of the two-phase Stefan problem."""

__version__ = "0.1.0"
