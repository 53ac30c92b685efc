#!/usr/bin/env python3
"""
Numerics package: Hermite expansions, Ornstein-Uhlenbeck spectral calculus, Riesz
transforms on the spectral and kernel routes, quadrature and atoms
"""
