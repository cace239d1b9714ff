"""Random-matrix side: Haar samplers, exact averages and their oracles."""

from .contour import contour_rhs, eps_sum_contour, xi_sum_contour
from .exact import sign_vectors, theorem_rhs, xi_permutations, y_o, y_s, y_u
from .groups import (EigenphaseSet, GroupSpec, haar_eigenvalues, haar_matrices,
                     haar_sample, mc_average, ratio_statistic,
                     ratio_statistic_batch)
from .weyl import weyl_density, weyl_oracle

__all__ = [
    "GroupSpec", "EigenphaseSet", "haar_sample", "haar_matrices",
    "haar_eigenvalues", "ratio_statistic", "ratio_statistic_batch",
    "mc_average", "theorem_rhs", "xi_permutations", "sign_vectors", "y_u",
    "y_s", "y_o", "weyl_density", "weyl_oracle", "contour_rhs",
    "xi_sum_contour", "eps_sum_contour",
]
