"""Two-qubit state of the free photon pair.

Releasing one quasiphoton of each kind onto the free-photon vacuum and
truncating to the one-photon-per-mode sector leaves a 4-vector of
amplitudes over the computational basis |00>, |01>, |10>, |11> (first slot:
photon 1 polarization, second: photon 2),

    upsilon(lam, lam') = u_{1 lam, 1 lam1} u_{2 lam', 2 lam2}
                       + u_{2 lam', 1 lam1} u_{1 lam, 2 lam2},

for the chosen quasiphoton polarizations (lam1, lam2). The truncation sheds
a little norm; the vector is renormalized and the raw norm kept, because the
deficit itself (oscillator-mode and same-mode leakage) is the physically
interesting signal at O(eps). All gap quantities (1 minus something near 1)
are assembled from the chi/xi column deviations, never by subtracting
collapsed floats.
"""
from dataclasses import dataclass

import numpy as np

from .bogoliubov import INDEX_ORDER, BogoliubovBlock, _phase
from .dispersion import ModeRoots
from .errors import UnsupportedConfig, ZeroNorm
from .params import ModelParams

_CODE_TO_LAMBDA = {"u": 1, "d": 2}
_LAMBDA_TO_CODE = {1: "u", 2: "d"}


@dataclass(frozen=True)
class PolarizationConfig:
    """Quasiphoton polarization pair; 1 = up (along the field), 2 = down."""

    lambda1: int
    lambda2: int

    def __post_init__(self):
        if self.lambda1 not in (1, 2) or self.lambda2 not in (1, 2):
            raise ValueError(f"polarizations must be 1 or 2, got "
                             f"({self.lambda1}, {self.lambda2})")

    @classmethod
    def from_code(cls, code: str) -> "PolarizationConfig":
        """Two-letter code, first letter photon 1: 'du' -> (2, 1)."""
        code = code.strip().lower()
        if len(code) != 2 or any(c not in _CODE_TO_LAMBDA for c in code):
            raise ValueError(f"polarization code must be two of u/d, got {code!r}")
        return cls(_CODE_TO_LAMBDA[code[0]], _CODE_TO_LAMBDA[code[1]])

    @property
    def code(self) -> str:
        return _LAMBDA_TO_CODE[self.lambda1] + _LAMBDA_TO_CODE[self.lambda2]

    @property
    def parallel(self) -> bool:
        return self.lambda1 == self.lambda2


@dataclass(frozen=True)
class TwoQubitAmplitudes:
    """Normalized amplitude 4-vector plus the exact truncation diagnostics.

    vec is unit-normalized (normalized flag records that). raw_norm_sq is
    the pre-normalization norm squared, stored as 1 - norm_gap with norm_gap
    computed deviation-first. b_self and a_cross are the two real amplitude
    building blocks (own-mode and crossed-mode u products); self_gap is
    1 - 4 b_self^2. y_gap is 1 minus the spectral gap of the
    pre-normalization reduced density matrix.
    """

    vec: np.ndarray
    config: PolarizationConfig
    normalized: bool
    raw_norm_sq: float
    norm_gap: float
    y_gap: float
    b_self: float
    a_cross: float
    self_gap: float

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as the 2x2 matrix M[lam-1][lam'-1]."""
        return self.vec.reshape(2, 2)


def _row_index(s, lam):
    return INDEX_ORDER.index((s, lam))


def _pattern_vector(b_self, a_cross, config):
    """The 4-vector P*b + Q*a with the row/column phase products."""
    lam1, lam2 = config.lambda1, config.lambda2
    vec = np.empty(4, dtype=complex)
    for lam in (1, 2):
        for lam_p in (1, 2):
            p = _phase(lam, lam1) * _phase(lam_p, lam2)
            q = _phase(lam_p, lam1) * _phase(lam, lam2)
            vec[2 * (lam - 1) + (lam_p - 1)] = p * b_self + q * a_cross
    return vec


def amplitudes(block: BogoliubovBlock, config: PolarizationConfig) -> TwoQubitAmplitudes:
    """Two-qubit amplitudes for one quasiphoton polarization configuration."""
    if block.columns is not None:
        return _amplitudes_from_columns(block, config)
    return _amplitudes_from_matrix(block, config)


def _amplitudes_from_columns(block, config):
    cols = {(c.k, c.lam): c for c in block.columns}
    c1 = cols[(1, config.lambda1)]
    c2 = cols[(2, config.lambda2)]
    b_self = c1.m_self * c2.m_self
    a_cross = c1.m_cross * c2.m_cross
    # 1 - 4 b^2 without forming 4 b^2: with b^2 =
    # (1+xi1)(1+xi2) / (4 (1+chi1)(1+chi2)) the gap reduces to a ratio of
    # sums of the small deviations.
    num = (c1.chi + c2.chi + c1.chi * c2.chi
           - c1.xi - c2.xi - c1.xi * c2.xi)
    den = (1.0 + c1.chi) * (1.0 + c2.chi)
    self_gap = num / den
    four_a_sq = 4.0 * a_cross * a_cross
    if config.parallel:
        # All the weight sits in one product state; the spectral gap of the
        # raw density matrix equals its trace.
        y_gap = self_gap - 8.0 * a_cross * b_self - four_a_sq
        norm_gap = y_gap
    else:
        y_gap = self_gap + four_a_sq
        norm_gap = self_gap - four_a_sq
    raw_norm_sq = 1.0 - norm_gap
    vec = _pattern_vector(b_self, a_cross, config)
    return _normalize(vec, config, raw_norm_sq, norm_gap, y_gap,
                      b_self, a_cross, self_gap)


def _amplitudes_from_matrix(block, config):
    # Fallback for hand-built blocks: direct u-entry products. Gap values are
    # formed by subtraction here, so they carry ordinary float error; the
    # deviation-first path needs the column factors.
    u = block.u
    lam1, lam2 = config.lambda1, config.lambda2
    vec = np.empty(4, dtype=complex)
    for lam in (1, 2):
        for lam_p in (1, 2):
            vec[2 * (lam - 1) + (lam_p - 1)] = (
                u[_row_index(1, lam)][_row_index(1, lam1)]
                * u[_row_index(2, lam_p)][_row_index(2, lam2)]
                + u[_row_index(2, lam_p)][_row_index(1, lam1)]
                * u[_row_index(1, lam)][_row_index(2, lam2)])
    raw_norm_sq = float(np.sum(np.abs(vec) ** 2))
    m = vec.reshape(2, 2)
    rho = m @ m.conj().T
    y_raw = float(np.sqrt((rho[0, 0].real - rho[1, 1].real) ** 2
                          + 4.0 * abs(rho[0, 1]) ** 2))
    return _normalize(vec, config, raw_norm_sq, 1.0 - raw_norm_sq,
                      1.0 - y_raw, float("nan"), float("nan"), float("nan"))


def _normalize(vec, config, raw_norm_sq, norm_gap, y_gap,
               b_self, a_cross, self_gap):
    if raw_norm_sq <= 0.0 or not np.any(vec):
        raise ZeroNorm("all four amplitudes vanish; block is not a valid "
                       "photon-sector transformation")
    return TwoQubitAmplitudes(
        vec=vec / np.sqrt(raw_norm_sq), config=config, normalized=True,
        raw_norm_sq=raw_norm_sq, norm_gap=norm_gap, y_gap=y_gap,
        b_self=b_self, a_cross=a_cross, self_gap=self_gap)


def closed_form_ab(roots: ModeRoots, params: ModelParams,
                   config: PolarizationConfig):
    """The (a, b) amplitude pair in its explicit form.

    a is the crossed-mode product, b the own-mode product; the pipeline
    amplitude vector equals the phase pattern over (b, a). Available for
    configs (2,1) and (1,1) only. The own-mode factor of b must carry the
    own-mode pole differences (r_{1,lam1}^2 - kappa1^2)(r_{2,lam2}^2 -
    kappa2^2); pairing b's numerator with the crossed poles would leave
    4(a^2 + b^2) far from 1.

    Pole differences are evaluated from the stored root offsets; feed
    first-order roots to get the literal leading-order values.
    """
    if (config.lambda1, config.lambda2) not in ((2, 1), (1, 1)):
        raise UnsupportedConfig(
            f"no closed form for config {config.code}; "
            "use the pipeline amplitudes")
    import math

    k1, k2 = roots.kappas

    def pieces(k, lam):
        kappa_k = roots.kappas[k - 1]
        kappa_o = roots.kappas[2 - k]
        d = roots.offset(k, lam)
        r = kappa_k + d
        a_self = d * (d + 2.0 * kappa_k)
        a_cross = (kappa_k - kappa_o + d) * (kappa_k + kappa_o + d)
        field_sign = -1.0 if lam == 1 else 1.0
        rad = (field_sign * params.omega / (r ** 3 * params.eps)
               + 2.0 / (a_self * a_self) + 2.0 / (a_cross * a_cross))
        inv_q = math.sqrt(rad)
        num_self = (r + kappa_k) / math.sqrt(r * kappa_k)
        num_cross = (r + kappa_o) / math.sqrt(r * kappa_o)
        return r, a_self, a_cross, inv_q, num_self, num_cross

    r1, self1, cross1, invq1, ns1, nc1 = pieces(1, config.lambda1)
    r2, self2, cross2, invq2, ns2, nc2 = pieces(2, config.lambda2)
    a = nc1 * nc2 / (4.0 * cross1 * cross2 * invq1 * invq2)
    b = ns1 * ns2 / (4.0 * self1 * self2 * invq1 * invq2)
    return a, b
