"""Dirac scalar potentials, exceptional orthogonal polynomials and their numerical verification."""
