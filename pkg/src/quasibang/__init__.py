"""Bang norms, Bang degree and Remez-type bounds for quasianalytic classes."""

__version__ = "0.1.0"
