"""Numerical core: Fock-space engine, closed forms, detection and optimisation."""
