"""Exact scalar arithmetic: the rationals or a prime field, never floats.

A :class:`FieldSpec` also designates, when a twist modulus m > 1 is in play,
an element zeta of exact multiplicative order m, so that additive cocycle
values k in Z/m embed as zeta**k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import StructureError, UnembeddableError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """char 0 (rationals, scalars are Fractions) or char p (ints mod p).

    ``modulus`` is the order of the designated root of unity ``zeta``;
    untwisted constructions use modulus 1 with zeta = 1.
    """

    characteristic: int
    modulus: int = 1
    zeta: object = None

    def __post_init__(self):
        p, m = self.characteristic, self.modulus
        if p != 0 and not _is_prime(p):
            raise StructureError(f"characteristic {p} is neither 0 nor prime")
        if m < 1:
            raise StructureError("modulus must be >= 1")
        zeta = self.zeta
        if zeta is None:
            zeta = Fraction(1) if p == 0 else 1 % p
            object.__setattr__(self, "zeta", zeta)
        if p == 0:
            zeta = Fraction(zeta)
            object.__setattr__(self, "zeta", zeta)
            if m > 2:
                raise UnembeddableError(
                    f"the rationals have no element of order {m}")
            if zeta ** m != 1 or any(zeta ** d == 1 for d in range(1, m)):
                raise UnembeddableError(
                    f"zeta = {zeta} does not have exact order {m} in Q")
        else:
            if not isinstance(zeta, int) or not 0 <= zeta < p:
                raise StructureError("zeta must be a residue mod p")
            if m > 1 and (p - 1) % m != 0:
                raise UnembeddableError(
                    f"modulus {m} does not divide p - 1 = {p - 1}")
            if pow(zeta, m, p) != 1 or any(pow(zeta, d, p) == 1 for d in range(1, m)):
                raise UnembeddableError(
                    f"zeta = {zeta} does not have exact order {m} mod {p}")

    # -- arithmetic ------------------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def add(self, a, b):
        if self.characteristic == 0:
            return a + b
        return (a + b) % self.characteristic

    def sub(self, a, b):
        if self.characteristic == 0:
            return a - b
        return (a - b) % self.characteristic

    def neg(self, a):
        if self.characteristic == 0:
            return -a
        return (-a) % self.characteristic

    def mul(self, a, b):
        if self.characteristic == 0:
            return a * b
        return (a * b) % self.characteristic

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverting zero")
        if self.characteristic == 0:
            return 1 / Fraction(a)
        return pow(a, self.characteristic - 2, self.characteristic)

    def embed_exponent(self, k: int):
        """zeta ** k for an additive value k in Z/m."""
        k %= self.modulus
        if self.characteristic == 0:
            return self.zeta ** k
        return pow(self.zeta, k, self.characteristic)


RATIONALS = FieldSpec(0)
