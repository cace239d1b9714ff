"""Ratios of L-functions: random-matrix averages, arithmetic factors and
numerical checks of the conjectured main terms.

Submodules
----------
special       zeta, Hurwitz zeta, chi and g factors, incomplete gamma, zeros
arithmetic    primes, discriminants, Kronecker symbols, E11 coefficients
rmt           Haar samplers and exact averages over classical groups
euler         Y factors and the arithmetic Euler products
conjectures   conjectured main terms for each family
lhs           numerical family averages
harness, cli  experiment configs, reports and the command line
"""

__version__ = "0.1.0"
