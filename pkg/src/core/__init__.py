# Numerical core: matrix primitives, Greville oracle, inverse Cholesky factor, block updates
