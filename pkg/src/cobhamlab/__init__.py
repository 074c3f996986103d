"""Substitutions, spectra, return words, numeration systems and digit automata."""
