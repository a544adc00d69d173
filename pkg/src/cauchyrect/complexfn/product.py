"""The assembled integrand ``f1(z) * f2(z)`` of a half-plane problem."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import SeriesEnvelope
from .rational import RationalFn


@dataclass(frozen=True, eq=False)
class EnvelopeProduct:
    """``f1(z) * f2(z)`` with ``f1 = g(e^{ibz})`` and ``f2`` rational.

    Callable on complex arrays; exposes the poles of ``f2`` so contour
    routines can refuse paths that pass through them.
    """

    f1: SeriesEnvelope
    f2: RationalFn

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.f1(z) * self.f2(z)

    def pole_locations(self) -> tuple[complex, ...]:
        return self.f2.pole_locations()
