"""Test maps on rank-n projections: Wigner-type maps and a non-preserving control."""

import enum
from dataclasses import dataclass

import numpy as np

from .projections import haar_unitary, projection_onto

__all__ = ["GeneratorKind", "MapGenerator", "make_generator"]


class GeneratorKind(enum.Enum):
    UNITARY = "Unitary"
    ANTIUNITARY = "Antiunitary"
    COMPLEMENT_UNITARY = "ComplementUnitary"
    COMPLEMENT_ANTIUNITARY = "ComplementAntiunitary"
    DISTORTION = "NonPreservingDistortion"

    @property
    def is_complement(self):
        return self in (GeneratorKind.COMPLEMENT_UNITARY, GeneratorKind.COMPLEMENT_ANTIUNITARY)

    @property
    def is_antilinear(self):
        return self in (GeneratorKind.ANTIUNITARY, GeneratorKind.COMPLEMENT_ANTIUNITARY)


@dataclass(frozen=True, eq=False)
class MapGenerator:
    """Callable map ``P -> phi(P)`` with its ground-truth operator.

    For Wigner kinds ``operator`` is the unitary U; for the distortion it is
    the invertible non-unitary T with ``im phi(P) = T(im P)``.
    """

    kind: GeneratorKind
    operator: np.ndarray

    def __call__(self, P):
        U = self.operator
        if self.kind is GeneratorKind.DISTORTION:
            return projection_onto(U @ P.frame.matrix)
        m = P.matrix.conj() if self.kind.is_antilinear else P.matrix
        out = U @ m @ U.conj().T
        if self.kind.is_complement:
            out = np.eye(U.shape[0]) - out
        return 0.5 * (out + out.conj().T)


def make_generator(kind, d, n, seed=None):
    """Draw a generator of the given kind on C^d.

    Complement kinds need ``d == 2n``; otherwise they do not preserve tr PQ.
    """
    kind = GeneratorKind(kind)
    if kind.is_complement and d != 2 * n:
        raise ValueError(f"{kind.value} requires d = 2n, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    if kind is GeneratorKind.DISTORTION:
        T = np.eye(d) + 0.75 * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        return MapGenerator(kind, T)
    return MapGenerator(kind, haar_unitary(d, rng))
