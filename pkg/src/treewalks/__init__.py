"""Tree walks, their generating functions, and the spectra of sparse random graphs."""

__version__ = "0.1.0"
