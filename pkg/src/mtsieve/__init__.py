"""Maynard-Tao sieve laboratory over Z, F_q[t] and real quadratic rings."""

__version__ = "0.1.0"
