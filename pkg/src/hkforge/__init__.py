"""hkforge: O(2j) multiplet calculus, elliptic machinery and Swann-bundle potentials."""

__version__ = "0.1.0"
