"""Homology of the two-element group acting on an abelian group by an involution."""

from __future__ import annotations

from dataclasses import dataclass

from .abgroup import FgAbGroup, GroupHom, cokernel, factor_through, kernel


@dataclass(frozen=True)
class InvolutiveModule:
    carrier: FgAbGroup
    sigma: GroupHom

    def __post_init__(self):
        if self.sigma.dom != self.carrier or self.sigma.cod != self.carrier:
            raise ValueError("sigma must be an endomorphism of the carrier")
        if self.sigma @ self.sigma != GroupHom.identity(self.carrier):
            raise ValueError("sigma does not square to the identity")

    @classmethod
    def trivial(cls, carrier: FgAbGroup) -> "InvolutiveModule":
        return cls(carrier, GroupHom.identity(carrier))

    @classmethod
    def sign(cls, carrier: FgAbGroup) -> "InvolutiveModule":
        return cls(carrier, -GroupHom.identity(carrier))

    @property
    def difference(self) -> GroupHom:
        return self.sigma - GroupHom.identity(self.carrier)

    @property
    def norm(self) -> GroupHom:
        return self.sigma + GroupHom.identity(self.carrier)


def coinvariants(m: InvolutiveModule) -> tuple[FgAbGroup, GroupHom]:
    """``M / (sigma - 1)M`` with the projection."""
    return cokernel(m.difference)


def invariants(m: InvolutiveModule) -> tuple[FgAbGroup, GroupHom]:
    """The fixed subgroup ``ker(sigma - 1)`` with its inclusion."""
    return kernel(m.difference)


def h1(m: InvolutiveModule) -> FgAbGroup:
    """First homology: invariants modulo the image of the norm ``1 + sigma``."""
    return h1_with_projection(m)[0]


def h1_with_projection(m: InvolutiveModule) -> tuple[FgAbGroup, GroupHom, GroupHom]:
    """``(H1, inclusion of invariants, projection from invariants onto H1)``."""
    _, incl = invariants(m)
    norm_into_inv = factor_through(m.norm, incl)
    group, proj = cokernel(norm_into_inv)
    return group, incl, proj
