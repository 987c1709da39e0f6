"""Exact computer algebra for charged-free-boson tau functions.

Library layout:

* ``kernel``  -- exact rationals, truncated q-series, graded sparse polynomials
* ``schur``   -- elementary/general Schur polynomials and the S*-series
* ``fock``    -- the charged-boson Fock space, currents, Hirota operator
* ``fms``     -- bosonization: field actions, embedding, closed-form taus
* ``hirota``  -- bilinear residue, Schur-expanded checker, derived PDEs
* ``qdim``    -- partition generating functions and q-dimension identities
* ``detperm`` -- exact determinants/permanents, Cauchy and Borchardt checks
* ``cli``     -- batch verification driver (``btau`` command)
"""

__version__ = "1.0.0"
