from .algebra import (LieAlgebra, ad_matrix, bracket, centralizer, jacobi_audit,
                      jacobi_witness, killing, killing_ratio)
from .chevalley import chevalley_algebra
from .linalg import BudgetExceeded, Subspace, kernel, rank
from .scalars import GaussianRational
