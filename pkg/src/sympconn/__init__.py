"""Special symplectic Lie algebra data, formal curvature spaces and contact flows."""

__version__ = "0.1.0"
