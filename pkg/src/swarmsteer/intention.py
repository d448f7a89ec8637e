"""Two-layer shared control: intention fusion and policy blending.

Each robot carries a shared-intention vector v_s that it relaxes toward a
mix of its own target attraction, its neighbors' intentions (through a
dead zone that ignores small disagreements), and - on the single operator-
influenced robot - the drawn-path guidance.  The lower layer turns v_s
into a constant-speed heading and blends it with the formation field by a
ratio weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class FusionWeights:
    w0: float = 0.05  # leak
    w1: float = 0.30  # own target
    w2: float = 0.10  # neighbor consensus
    w3: float = 0.35  # human guidance
    eps: float = 0.01  # dead-zone radius
    C: float = 40.0  # commanded speed
    ks: float = 100.0  # blending gain on |v_s|
    kf: float = 1.0  # blending gain on |v_f|

    def validate(self, max_degree: int) -> None:
        for name in ("w0", "w1", "w2", "w3", "C", "ks", "kf"):
            if getattr(self, name) <= 0:
                raise ValueError(f"weight {name} must be strictly positive")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        budget = self.w0 + self.w1 + self.w3 + self.w2 * max_degree
        if budget >= 1.0:
            raise ValueError(
                f"weights violate the stability budget: "
                f"w0+w1+w3+w2*deg_max = {budget:.3f} must be < 1"
            )


def dead_zone(x: np.ndarray, eps: float) -> np.ndarray:
    """Shrink x by eps in norm; vectors inside the dead zone vanish."""
    n = math.hypot(x[0], x[1])
    if n <= eps:
        return np.zeros(2)
    return (n - eps) * x / n


def update_intention(
    v_s: np.ndarray,
    v_t: np.ndarray,
    v_h: np.ndarray,
    psi: int,
    neighbor_vs,
    w: FusionWeights,
) -> np.ndarray:
    """One synchronous step of the intention relaxation (unit step size).

    All neighbor values are the previous step's; the stability budget in
    FusionWeights.validate keeps the update contractive.
    """
    rhs = -w.w0 * v_s + w.w1 * (v_t - v_s)
    for v_j in neighbor_vs:
        rhs = rhs + w.w2 * dead_zone(v_j - v_s, w.eps)
    if psi:
        rhs = rhs + w.w3 * (v_h - v_s)
    return v_s + rhs


def normalize_intention(v_s: np.ndarray, C: float) -> np.ndarray:
    """Rescale the shared intention to the commanded speed C; the zero
    vector stays zero (the blend then degenerates to pure formation)."""
    n = math.hypot(v_s[0], v_s[1])
    if n == 0.0:
        return np.zeros(2)
    return C * v_s / n


def blend_ratio(vs_norm: float, vf_norm: float, ks: float, kf: float) -> float:
    denom = ks * vs_norm + kf * vf_norm
    if denom == 0.0:
        return 0.0
    return ks * vs_norm / denom


def blend(v_hat_s: np.ndarray, v_f: np.ndarray, vs_norm: float, ks: float, kf: float) -> np.ndarray:
    lam = blend_ratio(vs_norm, float(math.hypot(v_f[0], v_f[1])), ks, kf)
    return lam * v_hat_s + (1.0 - lam) * v_f
