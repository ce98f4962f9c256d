"""zpdehn: exact cusp-shape rank classification, lattice constructions,
Weil heights, and truncated Neumann-Zagier Dehn-filling computation."""

__version__ = "0.1.0"
