import numpy as np

from grasswig.projections import project_from_frame


def span_projection(*vectors):
    """Projection onto the span of explicit orthonormal vectors."""
    return project_from_frame(np.column_stack([np.asarray(v, dtype=complex) for v in vectors]))


def basis_vector(d, j):
    e = np.zeros(d, complex)
    e[j] = 1
    return e
