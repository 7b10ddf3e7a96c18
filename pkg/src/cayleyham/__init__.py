"""Certificate-producing verification of hamiltonicity for Cayley graphs of order kp."""

__version__ = "0.1.0"
