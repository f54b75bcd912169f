"""Quasiphoton frequencies r_{k,lambda}.

The four frequencies (k labels the nearby photon mode, lambda the
polarization branch) are the positive roots of

    eps/(r^2 - kappa1^2) + eps/(r^2 - kappa2^2) = 1 + (-1)^(lambda-1) * omega/r

nearest each kappa_k. In the regime of interest every root sits a distance
d = O(eps) above its pole, so all internal arithmetic works with the offset
d = r - kappa_k rather than with r itself: the residual terms become
d*(d + 2*kappa_k) and (kappa_k - kappa_o + d)*(kappa_k + kappa_o + d), which
keeps full precision where forming r^2 - kappa^2 from a collapsed r would
lose everything below the ulp of kappa (~5e-13 here, larger than the
root corrections we must resolve).
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    BracketFailure,
    NonConvergence,
    NonPositive,
    PoleEvaluation,
    SingularDenominator,
)
from .params import ModelParams

DEFAULT_REL_TOL = 1e-12
# Relative half-width of the band around each pole where the residual is
# considered unevaluable.
POLE_GUARD_REL = 1e-13
# First-order denominator must exceed this fraction of kappa_k^3.
DENOMINATOR_FLOOR_REL = 1e-9

_BISECT_MAX = 120
_POLISH_MAX = 40


def _branch_sign(lam):
    # (-1)^(lambda-1): +1 on branch 1, -1 on branch 2
    if lam not in (1, 2):
        raise ValueError(f"lambda must be 1 or 2, got {lam!r}")
    return 1.0 if lam == 1 else -1.0


@dataclass(frozen=True)
class ModeRoots:
    """Roots stored as offsets from their photon frequencies.

    offsets[k-1][lam-1] = r_{k,lam} - kappa_k. Offsets are the authoritative
    representation; r reconstructs the absolute frequencies. residuals holds
    the achieved dispersion residual per root (None entries for the
    first-order method, which does not solve).
    """

    kappas: tuple
    offsets: tuple          # ((d11, d12), (d21, d22))
    method: str             # "exact" or "perturbative"
    tol: float | None = None
    residuals: tuple | None = None

    def offset(self, k, lam):
        return self.offsets[k - 1][lam - 1]

    def root(self, k, lam):
        return self.kappas[k - 1] + self.offsets[k - 1][lam - 1]

    @property
    def r(self):
        """2x2 array of absolute frequencies, rows k, columns lambda."""
        return np.array([[self.kappas[k] + self.offsets[k][i] for i in range(2)]
                         for k in range(2)])

    def __post_init__(self):
        for k in (1, 2):
            for lam in (1, 2):
                if not (self.root(k, lam) > 0.0):
                    raise NonPositive(
                        f"root r[{k}][{lam}] = {self.root(k, lam)} not positive")


def residual(r, params: ModelParams, lam) -> float:
    """Dispersion residual at absolute frequency r on branch lam.

    Zero exactly at the quasiphoton frequencies. Refuses to evaluate inside
    the guard band around the poles r = kappa_s.
    """
    k1, k2 = params.kappa1, params.kappa2
    if r <= 0.0:
        raise PoleEvaluation(f"residual needs r > 0, got {r}")
    for ks in (k1, k2):
        if abs(r - ks) <= POLE_GUARD_REL * ks:
            raise PoleEvaluation(
                f"r = {r!r} within the guard band of the pole at {ks!r}")
    sgn = _branch_sign(lam)
    return (params.eps / ((r - k1) * (r + k1))
            + params.eps / ((r - k2) * (r + k2))
            - 1.0 - sgn * params.omega / r)


def _residual_offset(d, kappa, kappa_other, params, sgn):
    # residual at r = kappa + d with the pole differences kept factored
    r = kappa + d
    self_pole = d * (d + 2.0 * kappa)
    cross_pole = (kappa - kappa_other + d) * (kappa + kappa_other + d)
    return (params.eps / self_pole + params.eps / cross_pole
            - 1.0 - sgn * params.omega / r)


def _residual_offset_deriv(d, kappa, kappa_other, params, sgn):
    r = kappa + d
    self_pole = d * (d + 2.0 * kappa)
    cross_pole = (kappa - kappa_other + d) * (kappa + kappa_other + d)
    return (-2.0 * r * params.eps / self_pole ** 2
            - 2.0 * r * params.eps / cross_pole ** 2
            + sgn * params.omega / (r * r))


def _first_order_offset(kappa_k, params, lam):
    k1, k2 = params.kappa1, params.kappa2
    s_sq = k1 * k1 + k2 * k2
    num = params.eps * (2.0 * kappa_k * kappa_k - s_sq)
    den = (_branch_sign(lam) * 2.0 * params.omega * (2.0 * kappa_k * kappa_k - s_sq)
           + kappa_k * (5.0 * kappa_k * kappa_k - 3.0 * s_sq)
           + (k1 * k2) ** 2 / kappa_k)
    if abs(den) <= DENOMINATOR_FLOOR_REL * kappa_k ** 3:
        raise SingularDenominator(
            f"first-order denominator {den!r} below floor for "
            f"mode at kappa={kappa_k}, lambda={lam}")
    return num / den


def perturbative_roots(params: ModelParams) -> ModeRoots:
    """First-order root offsets, exact in the eps -> 0 limit."""
    offsets = tuple(
        tuple(_first_order_offset(kappa_k, params, lam) for lam in (1, 2))
        for kappa_k in (params.kappa1, params.kappa2))
    return ModeRoots(kappas=(params.kappa1, params.kappa2), offsets=offsets,
                     method="perturbative")


def _solve_offset(kappa_k, kappa_other, params, lam):
    """One root offset by bracketed bisection plus damped derivative polish."""
    sgn = _branch_sign(lam)
    g = lambda d: _residual_offset(d, kappa_k, kappa_other, params, sgn)

    # Largest admissible offset: half the distance to the nearest other pole
    # (the other photon frequency, or the origin).
    cap = 0.5 * min(kappa_k, abs(kappa_other - kappa_k))
    guess = _first_order_offset(kappa_k, params, lam)

    lo = hi = None
    if 0.0 < guess < cap / 8.0:
        lo_try, hi_try = guess / 8.0, 8.0 * guess
        if g(lo_try) > 0.0 > g(hi_try):
            lo, hi = lo_try, hi_try
    if lo is None:
        # Geometric scan upward from the pole guard band.
        scan_lo = max(POLE_GUARD_REL * kappa_k, 1e-3 * abs(guess))
        d_prev, g_prev = scan_lo, g(scan_lo)
        d_cur = scan_lo
        while g_prev > 0.0 and d_cur < cap:
            d_cur = min(2.0 * d_cur, cap)
            g_cur = g(d_cur)
            if g_cur <= 0.0:
                lo, hi = d_prev, d_cur
                break
            d_prev, g_prev = d_cur, g_cur
        if lo is None:
            raise BracketFailure(
                f"no sign change in ({kappa_k + scan_lo!r}, {kappa_k + cap!r}) "
                f"for mode at kappa={kappa_k}, lambda={lam}")

    for _ in range(_BISECT_MAX):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-6 * hi:
            break
    d = 0.5 * (lo + hi)

    g_cur = g(d)
    for _ in range(_POLISH_MAX):
        if g_cur == 0.0:
            break
        step = g_cur / _residual_offset_deriv(d, kappa_k, kappa_other, params, sgn)
        # Damp: shrink the step until the residual actually decreases and the
        # iterate stays inside the bracket.
        accepted = False
        for _damp in range(8):
            d_new = d - step
            if lo * 0.5 < d_new < hi * 2.0:
                g_new = g(d_new)
                if abs(g_new) <= abs(g_cur):
                    d, g_cur = d_new, g_new
                    accepted = True
                    break
            step *= 0.5
        if not accepted or abs(step) <= 1e-17 * abs(d):
            break
    return d, g_cur


def exact_roots(params: ModelParams, tol: float = DEFAULT_REL_TOL) -> ModeRoots:
    """Solve the dispersion relation for all four (k, lambda) roots.

    tol is relative: the returned roots satisfy
    |residual| <= tol * kappa_k, re-checked after the solve. Rejects eps = 0,
    where the roots merge into the poles (use perturbative_roots for the
    limit).
    """
    if not (params.eps > 0.0):
        raise NonPositive("exact solver requires eps > 0; the eps = 0 "
                          "equation has no bracketed root")
    kappas = (params.kappa1, params.kappa2)
    offsets = []
    residuals = []
    for k in (1, 2):
        kappa_k = kappas[k - 1]
        kappa_other = kappas[2 - k]
        row_d = []
        row_g = []
        for lam in (1, 2):
            d, g_final = _solve_offset(kappa_k, kappa_other, params, lam)
            if abs(g_final) > tol * kappa_k:
                raise NonConvergence(
                    f"residual {g_final!r} above {tol!r}*kappa for "
                    f"k={k}, lambda={lam}")
            row_d.append(d)
            row_g.append(g_final)
        offsets.append(tuple(row_d))
        residuals.append(tuple(row_g))
    return ModeRoots(kappas=kappas, offsets=tuple(offsets), method="exact",
                     tol=tol, residuals=tuple(residuals))
