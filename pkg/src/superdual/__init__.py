"""Exact Gaudin spectra and super duality checks for small classical Lie superalgebras."""

__version__ = "0.1.0"
