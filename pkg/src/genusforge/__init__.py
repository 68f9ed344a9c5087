"""Universal expansion groups, governing tensors and graded Lie algebras over GF(2)."""

__version__ = "0.1.0"
