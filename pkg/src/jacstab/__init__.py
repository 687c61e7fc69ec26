"""Stability assignments for compactified Jacobians, at the level of dual graphs.

Submodules: ``graphs`` and ``families`` (multigraphs with genus labels and
legs), ``chipfiring`` (twister groups and Jacobians), ``assignments`` (the two
stability conditions, closures, lifts, compatibility), ``polarizations``
(numerical stability), ``universal`` (stable-graph categories), ``io`` and
``cli`` (JSON documents and the ``jacstab`` command).
"""

__version__ = "0.1.0"
