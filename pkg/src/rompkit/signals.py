"""Test-signal generators, additive Gaussian noise, and m-term truncation."""

from dataclasses import dataclass

import numpy as np

from .rng import substream

__all__ = [
    "FLAT_SPARSE",
    "GAUSSIAN_SPARSE",
    "POWER_LAW",
    "SIGNAL_KINDS",
    "NOISE_TARGETS",
    "SignalSpec",
    "NoiseSpec",
    "generate_signal",
    "best_m_term",
    "add_noise",
]

FLAT_SPARSE = "flat-sparse"
GAUSSIAN_SPARSE = "gaussian-sparse"
POWER_LAW = "power-law"
SIGNAL_KINDS = (FLAT_SPARSE, GAUSSIAN_SPARSE, POWER_LAW)

NOISE_TARGETS = ("measurement", "signal")


@dataclass(frozen=True)
class SignalSpec:
    """Description of one test signal.

    Sparse kinds use ``sparsity`` (number of nonzeros); the power-law kind
    uses ``exponent`` p > 1 and ``scale`` so the k-th largest magnitude is
    scale * k**-p.
    """

    kind: str
    dim: int
    sparsity: int | None = None
    exponent: float | None = None
    scale: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.kind in (FLAT_SPARSE, GAUSSIAN_SPARSE):
            if self.sparsity is None or not 1 <= self.sparsity <= self.dim:
                raise ValueError(f"sparsity must be in [1, {self.dim}] for {self.kind} signals")
        else:
            if self.exponent is None or self.exponent <= 1.0:
                raise ValueError("power-law exponent must exceed 1")
            if self.scale is None or self.scale <= 0.0:
                raise ValueError("power-law scale must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive i.i.d. Gaussian noise: target vector kind and per-entry sigma."""

    target: str
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.target not in NOISE_TARGETS:
            raise ValueError(f"noise target must be one of {NOISE_TARGETS}, got {self.target!r}")
        if self.sigma < 0.0:
            raise ValueError("sigma must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def generate_signal(spec):
    """Realize ``spec`` into a vector and its support index set.

    flat-sparse     : ``sparsity`` uniformly chosen positions set to one
    gaussian-sparse : ``sparsity`` positions filled with standard normals
    power-law       : k-th largest magnitude is scale * k**-p, signs and
                      coordinate placement random; every entry is nonzero,
                      so the support is the whole index range
    """
    rng = substream(spec.seed)
    signal = np.zeros(spec.dim)
    if spec.kind == FLAT_SPARSE:
        support = np.sort(rng.choice(spec.dim, size=spec.sparsity, replace=False))
        signal[support] = 1.0
        return signal, support.astype(np.int64)
    if spec.kind == GAUSSIAN_SPARSE:
        support = np.sort(rng.choice(spec.dim, size=spec.sparsity, replace=False))
        signal[support] = rng.standard_normal(spec.sparsity)
        return signal, support.astype(np.int64)
    placement = rng.permutation(spec.dim)
    signs = rng.integers(0, 2, size=spec.dim) * 2 - 1
    magnitudes = spec.scale * np.arange(1, spec.dim + 1, dtype=np.float64) ** (-spec.exponent)
    signal[placement] = signs * magnitudes
    return signal, np.arange(spec.dim, dtype=np.int64)


def best_m_term(vec, m):
    """Keep the ``m`` largest-magnitude entries of ``vec``, zero the rest.

    Ties are broken toward lower indices.  ``m = 0`` gives the zero vector;
    ``m >= len(vec)`` returns a copy of ``vec``.
    """
    w = np.asarray(vec, dtype=np.float64)
    if m < 0:
        raise ValueError("m must be non-negative")
    if m >= w.shape[0]:
        return w.copy()
    out = np.zeros_like(w)
    if m == 0:
        return out
    keep = np.argsort(-np.abs(w), kind="stable")[:m]
    out[keep] = w[keep]
    return out


def add_noise(target, spec):
    """Add i.i.d. normal(0, sigma^2) noise to ``target``.

    Returns ``(perturbed, noise)`` so callers can report the realized noise
    norm.  Deterministic given ``spec.seed``.
    """
    base = np.asarray(target, dtype=np.float64)
    rng = substream(spec.seed)
    noise = spec.sigma * rng.standard_normal(base.shape[0])
    return base + noise, noise
