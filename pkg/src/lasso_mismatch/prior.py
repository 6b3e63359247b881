"""Finite discrete signal priors and their shrinkage expectations.

The marginal distribution of one signal entry is a finite list of atoms.
A sparse Bernoulli signal with sparsity kappa has mass kappa at 1 and
1 - kappa at 0; the atom at zero is the off-support mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import GaussMoment, gauss_expect_e, gauss_expect_eta

__all__ = [
    "Prior",
    "sparse_bernoulli",
    "prior_expect_e",
    "prior_expect_eta_x0",
    "sample_on_support",
]

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class Prior:
    """Finite discrete marginal distribution: atoms of (value, probability).

    Atoms are stored sorted by value; values must be distinct and finite,
    probabilities in (0, 1] and summing to one within 1e-12.
    """

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("prior needs at least one atom")
        atoms = tuple(sorted((float(v), float(p)) for v, p in self.atoms))
        total = 0.0
        prev = None
        for v, p in atoms:
            if not math.isfinite(v):
                raise ValueError(f"atom value must be finite, got {v!r}")
            if not (0.0 < p <= 1.0):
                raise ValueError(f"atom probability must be in (0, 1], got {p}")
            if prev is not None and v == prev:
                raise ValueError(f"duplicate atom value {v}")
            prev = v
            total += p
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1 within {_PROB_TOL}")
        object.__setattr__(self, "atoms", atoms)

    def second_moment(self) -> float:
        """E[X^2] of the marginal."""
        return sum(p * v * v for v, p in self.atoms)

    def zero_mass(self) -> float:
        """Probability of the atom at exactly zero (0.0 if absent)."""
        return sum(p for v, p in self.atoms if v == 0.0)

    def nonzero_atoms(self) -> tuple[tuple[float, float], ...]:
        """Atoms conditioned on being nonzero, probabilities renormalized."""
        nz = [(v, p) for v, p in self.atoms if v != 0.0]
        if not nz:
            raise ValueError("prior has no nonzero atoms")
        mass = sum(p for _, p in nz)
        return tuple((v, p / mass) for v, p in nz)


def sparse_bernoulli(kappa: float) -> Prior:
    """Prior with mass kappa at 1 and 1 - kappa at 0, for kappa in (0, 1)."""
    kappa = float(kappa)
    if not (0.0 < kappa < 1.0):
        raise ValueError(f"kappa must be in (0, 1), got {kappa}")
    return Prior(atoms=((0.0, 1.0 - kappa), (1.0, kappa)))


def _check_args(gamma: float, tau: float, chi: float) -> None:
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    if tau <= 0.0 or not math.isfinite(tau):
        raise ValueError(f"tau must be positive and finite, got {tau}")
    if chi <= 0.0 or not math.isfinite(chi):
        raise ValueError(f"chi must be positive and finite, got {chi}")


def prior_expect_e(p: Prior, gamma: float, tau: float, chi: float) -> float:
    """E[e(gamma*X + tau*H; chi)] with X from the prior, H standard normal.

    Expands to the probability-weighted sum of per-atom Gaussian expectations.
    """
    _check_args(gamma, tau, chi)
    return sum(
        prob * gauss_expect_e(GaussMoment(gamma * v, tau, chi)) for v, prob in p.atoms
    )


def prior_expect_eta_x0(p: Prior, gamma: float, tau: float, chi: float) -> float:
    """E[eta(gamma*X + tau*H; chi) * X]; the zero atom contributes nothing."""
    _check_args(gamma, tau, chi)
    return sum(
        prob * v * gauss_expect_eta(GaussMoment(gamma * v, tau, chi))
        for v, prob in p.atoms
        if v != 0.0
    )


def sample_on_support(p: Prior, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw `count` iid values from the prior conditioned on being nonzero."""
    if count <= 0:
        raise ValueError(f"count must be positive, got {count}")
    nz = p.nonzero_atoms()
    values = np.array([v for v, _ in nz])
    probs = np.array([w for _, w in nz])
    idx = rng.choice(len(values), size=count, p=probs)
    return values[idx]
