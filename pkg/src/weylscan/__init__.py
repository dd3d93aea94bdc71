"""weylscan: exact root-system verification and Monte Carlo convergence
scans for powers of orbital-measure Fourier transforms."""

__version__ = "0.1.0"
