"""Noise-tolerant wrapper induction: enumerate the wrappers inducible from subsets of
noisy labels and rank them by annotation likelihood times list-structure prior."""

__version__ = "0.1.0"
