"""The psi profile built from an admissible eta, and its H / N / F-bar calculus.

A profile psi is spliced from the quadratic (u^2 - u)/2 below the splice
point a and from eta''(u)/eta''(a) above it:

    psi''(u) = eta''(u)/eta''(a)  for u >= a,   psi''(u) = 1 otherwise,
    psi'(u)  = int_{1/2}^u psi'',   psi(u) = int_1^u psi',

which makes psi(1) = 0 and psi <= 0 on [0, 1] by construction.  The
integrals above a have the closed form

    psi(u) = psi(a) + (a - 1/2)(u - a) + [eta(u) - eta(a) - eta'(a)(u - a)] / eta''(a),

so profiles built from an eta with analytic derivatives are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from .errors import (
    BadSplice,
    HCollapse,
    InadmissibleEta,
    NonPositiveTau,
    NotPinskerAdmissible,
    ZeroFunction,
)
from ._numerics import cumtrapz0, invert_increasing

_PROBE_LO, _PROBE_HI, _PROBE_N = 1e-6, 1e8, 2000


def _probe_grid(lo=_PROBE_LO, hi=_PROBE_HI, n=_PROBE_N) -> np.ndarray:
    return np.geomspace(lo, hi, n)


@dataclass(frozen=True)
class EtaProfile:
    """An eta that is convex at infinity with eta(u)/u -> infinity.

    The admissibility flags are verified numerically on a log-spaced probe
    grid up to u = 1e8:

    * superlinear: eta(u)/u increasing towards a large value,
    * second_deriv_positive_beyond_b and non-increasing beyond b,
    * eta non-decreasing beyond b.
    """

    eta: Callable[[np.ndarray], np.ndarray]
    eta_prime: Callable[[np.ndarray], np.ndarray]
    eta_second: Callable[[np.ndarray], np.ndarray]
    b: float = 0.0
    name: str = "eta"

    def admissibility_flags(self) -> dict:
        u = _probe_grid(max(self.b, _PROBE_LO) + 1e-9, _PROBE_HI)
        ratio = self.eta(u) / u
        d2 = self.eta_second(u)
        d1 = self.eta_prime(u)
        # superlinear: the ratio eta(u)/u must keep growing through the last
        # decades of the probe (a plateau means eta is at most linear)
        mid = ratio[int(0.75 * len(ratio))]
        superlinear = bool(np.all(np.diff(ratio) > -1e-12 * np.abs(ratio[:-1]))
                           and ratio[-1] >= 1.2 * max(mid, 1e-12))
        return {
            "superlinear": superlinear,
            "second_deriv_positive_beyond_b": bool(np.all(d2 > 0)),
            "nondecreasing_beyond_b": bool(np.all(d1 >= -1e-12)),
            "second_deriv_nonincreasing_beyond_b": bool(
                np.all(np.diff(d2) <= 1e-12 * np.abs(d2[:-1]) + 1e-300)),
        }

    def is_admissible(self) -> bool:
        return all(self.admissibility_flags().values())


# -- standard eta families ------------------------------------------------------

def eta_quadratic() -> EtaProfile:
    """eta(u) = u^2 (the Poincare / variance regime)."""
    return EtaProfile(eta=lambda u: np.asarray(u, float) ** 2,
                      eta_prime=lambda u: 2.0 * np.asarray(u, float),
                      eta_second=lambda u: np.full_like(np.asarray(u, float), 2.0),
                      b=0.0, name="quadratic")


def eta_power(p: float) -> EtaProfile:
    """eta(u) = u^p for 1 < p <= 2 (eta'' must be non-increasing)."""
    if not (1.0 < p <= 2.0):
        raise InadmissibleEta("eta_power needs 1 < p <= 2")
    return EtaProfile(
        eta=lambda u: np.asarray(u, float) ** p,
        eta_prime=lambda u: p * np.asarray(u, float) ** (p - 1.0),
        eta_second=lambda u: p * (p - 1.0) * np.asarray(u, float) ** (p - 2.0),
        b=0.0, name=f"power({p:g})")


def eta_entropy() -> EtaProfile:
    """eta(u) = u log(2 + u), an entropy-type profile (b ~ 0.5)."""
    def e(u):
        u = np.asarray(u, float)
        return u * np.log(2.0 + u)

    def e1(u):
        u = np.asarray(u, float)
        return np.log(2.0 + u) + u / (2.0 + u)

    def e2(u):
        u = np.asarray(u, float)
        return (4.0 + u) / (2.0 + u) ** 2

    return EtaProfile(eta=e, eta_prime=e1, eta_second=e2, b=0.5, name="entropy")


def eta_slowlog() -> EtaProfile:
    """eta with eta''(u) = 1/log(e + u); used for the slowly-varying checks."""
    grid = np.concatenate([[0.0], _probe_grid(1e-8, 1e9, 4000)])
    d2 = 1.0 / np.log(np.e + grid)
    d1 = cumtrapz0(d2, grid)
    e = cumtrapz0(d1, grid)
    p1 = PchipInterpolator(grid, d1, extrapolate=True)
    p0 = PchipInterpolator(grid, e, extrapolate=True)
    return EtaProfile(
        eta=lambda u: p0(np.asarray(u, float)),
        eta_prime=lambda u: p1(np.asarray(u, float)),
        eta_second=lambda u: 1.0 / np.log(np.e + np.asarray(u, float)),
        b=0.0, name="slowlog")


def eta_fsobolev(alpha: float, u0: float = math.e**2) -> EtaProfile:
    """eta(u) = u log^m(u) exp(log^kappa u), m = 2(1-1/alpha), kappa = 2/alpha - 1.

    Defined for u >= u0 with a C^1 quadratic continuation below; this is the
    profile matched to the |x|^alpha potential family for 1 < alpha < 2.
    """
    m = 2.0 * (1.0 - 1.0 / alpha)
    kap = 2.0 / alpha - 1.0

    def big_eta(u):
        L = np.log(u)
        return u * L**m * np.exp(L**kap)

    def big_eta1(u):
        L = np.log(u)
        return np.exp(L**kap) * L**(m - 1.0) * (L + m + kap * L**kap)

    def big_eta2(u):
        L = np.log(u)
        P = L**m + m * L**(m - 1.0) + kap * L**(m + kap - 1.0)
        P1 = (m * L**(m - 1.0) + m * (m - 1.0) * L**(m - 2.0)
              + kap * (m + kap - 1.0) * L**(m + kap - 2.0))
        return (1.0 / u) * np.exp(L**kap) * (kap * L**(kap - 1.0) * P + P1)

    d2_0 = float(big_eta2(u0))
    d1_0 = float(big_eta1(u0))
    e_0 = float(big_eta(u0))

    def e(u):
        u = np.asarray(u, float)
        below = e_0 + d1_0 * (u - u0) + 0.5 * d2_0 * (u - u0) ** 2
        return np.where(u >= u0, big_eta(np.maximum(u, u0)), below)

    def e1(u):
        u = np.asarray(u, float)
        below = d1_0 + d2_0 * (u - u0)
        return np.where(u >= u0, big_eta1(np.maximum(u, u0)), below)

    def e2(u):
        u = np.asarray(u, float)
        return np.where(u >= u0, big_eta2(np.maximum(u, u0)), d2_0)

    return EtaProfile(eta=e, eta_prime=e1, eta_second=e2, b=u0,
                      name=f"fsobolev({alpha:g})")


# -- psi profile -----------------------------------------------------------------

@dataclass(frozen=True)
class PsiProfile:
    """psi with derivatives, the H integral and its monotone inverse.

    psi(1) = 0 exactly; psi''(u) = 1 below the splice point a, so
    psi(u) = (u^2 - u)/2 there.  H(u) = int_0^u sqrt(psi'') and H_inverse is
    a monotone piecewise-cubic interpolant with linear tail extrapolation.
    """

    a: float
    psi: Callable[[np.ndarray], np.ndarray]
    psi_prime: Callable[[np.ndarray], np.ndarray]
    psi_second: Callable[[np.ndarray], np.ndarray]
    H: Callable[[np.ndarray], np.ndarray]
    H_inverse: Callable[[np.ndarray], np.ndarray]
    c_pinsker: float = field(default=float("nan"))
    name: str = "psi"

    def with_pinsker_constant(self) -> "PsiProfile":
        c = pinsker_constant(self)
        return PsiProfile(a=self.a, psi=self.psi, psi_prime=self.psi_prime,
                          psi_second=self.psi_second, H=self.H,
                          H_inverse=self.H_inverse, c_pinsker=c, name=self.name)


def _tabulate_H(psi_second, hi: float = 1e9):
    """H(u) = int_0^u sqrt(psi'') tabulated on a log grid, plus inverse.

    An integrable singularity of psi'' at 0 (e.g. psi'' ~ 1/u) is handled by
    a power-law head estimate over the first segment.
    """
    gp = np.geomspace(1e-10, hi, 6000)
    g = np.sqrt(np.maximum(np.asarray(psi_second(gp), float), 0.0))
    if not np.all(np.isfinite(g)):
        raise HCollapse("sqrt(psi'') is not finite on the probe grid")
    p = (np.log(g[0]) - np.log(max(g[1], 1e-300))) / (np.log(gp[1]) - np.log(gp[0]))
    head = g[0] * gp[0] / (1.0 - p) if p < 0.999 else g[0] * gp[0] * 1e3
    grid = np.concatenate([[0.0], gp])
    hv = np.concatenate([[0.0], head + cumtrapz0(g, gp)])
    if hv[-1] <= hv[len(hv) // 2] * (1.0 + 1e-12):
        raise HCollapse("H is bounded on the probe grid")
    h_interp = PchipInterpolator(grid, hv, extrapolate=False)
    inv_interp = PchipInterpolator(hv, grid, extrapolate=False)
    last_slope = (grid[-1] - grid[-2]) / max(hv[-1] - hv[-2], 1e-300)
    fwd_slope = (hv[-1] - hv[-2]) / max(grid[-1] - grid[-2], 1e-300)

    def H(u):
        u = np.asarray(u, float)
        out = np.where(u <= grid[-1], h_interp(np.clip(u, 0.0, grid[-1])),
                       hv[-1] + (u - grid[-1]) * fwd_slope)
        return out

    def H_inv(y):
        y = np.asarray(y, float)
        out = np.where(y <= hv[-1], inv_interp(np.clip(y, 0.0, hv[-1])),
                       grid[-1] + (y - hv[-1]) * last_slope)
        return out

    return H, H_inv


def build_psi_from_eta(eta: EtaProfile, a: Optional[float] = None) -> PsiProfile:
    """Splice psi from eta at a > max(2, b); default a = max(2.1, b + 0.1)."""
    flags = eta.admissibility_flags()
    if not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise InadmissibleEta(f"eta {eta.name!r} fails flags: {bad}")
    if a is None:
        a = max(2.1, eta.b + 0.1)
    if a <= max(2.0, eta.b):
        raise BadSplice(f"a = {a:g} must exceed max(2, b) = {max(2.0, eta.b):g}")
    a = float(a)
    d2a = float(eta.eta_second(a))
    d1a = float(eta.eta_prime(a))
    ea = float(eta.eta(a))
    psi_a = 0.5 * (a * a - a)

    def psi_second(u):
        u = np.asarray(u, float)
        return np.where(u >= a, eta.eta_second(np.maximum(u, a)) / d2a, 1.0)

    def psi_prime(u):
        u = np.asarray(u, float)
        above = (a - 0.5) + (eta.eta_prime(np.maximum(u, a)) - d1a) / d2a
        return np.where(u >= a, above, u - 0.5)

    def psi(u):
        u = np.asarray(u, float)
        uc = np.maximum(u, a)
        above = (psi_a + (a - 0.5) * (uc - a)
                 + (eta.eta(uc) - ea - d1a * (uc - a)) / d2a)
        return np.where(u >= a, above, 0.5 * (u * u - u))

    H, H_inv = _tabulate_H(psi_second)
    prof = PsiProfile(a=a, psi=psi, psi_prime=psi_prime, psi_second=psi_second,
                      H=H, H_inverse=H_inv, name=f"psi[{eta.name}]")
    return prof.with_pinsker_constant()


def psi_from_functions(psi, psi_prime, psi_second, name="psi[custom]",
                       a: float = 2.1, compute_pinsker: bool = True) -> PsiProfile:
    """Wrap user-supplied callables; admissibility is only probed numerically."""
    H, H_inv = _tabulate_H(psi_second)
    prof = PsiProfile(a=a, psi=psi, psi_prime=psi_prime, psi_second=psi_second,
                      H=H, H_inverse=H_inv, name=name)
    return prof.with_pinsker_constant() if compute_pinsker else prof


def psi_quadratic_centered() -> PsiProfile:
    """psi(u) = (u - 1)^2, the classical variance profile (c_psi = sqrt 2)."""
    return psi_from_functions(
        lambda u: (np.asarray(u, float) - 1.0) ** 2,
        lambda u: 2.0 * (np.asarray(u, float) - 1.0),
        lambda u: np.full_like(np.asarray(u, float), 2.0),
        name="psi[(u-1)^2]")


def psi_entropy_classical() -> PsiProfile:
    """psi(u) = u log u, the Kullback-Leibler profile."""
    def p(u):
        u = np.asarray(u, float)
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = u[pos] * np.log(u[pos])
        return out

    return psi_from_functions(
        p,
        lambda u: np.log(np.maximum(np.asarray(u, float), 1e-300)) + 1.0,
        lambda u: 1.0 / np.maximum(np.asarray(u, float), 1e-300),
        name="psi[ulogu]")


def psi_almost_linear() -> PsiProfile:
    """psi(u) = u - 3/2 + 1/(u+1), the almost-linear profile of the
    liminf variant (psi(u)/u -> 1 with positive drift d = 1/4)."""
    return psi_from_functions(
        lambda u: np.asarray(u, float) - 1.5 + 1.0 / (np.asarray(u, float) + 1.0),
        lambda u: 1.0 - (np.asarray(u, float) + 1.0) ** -2,
        lambda u: 2.0 * (np.asarray(u, float) + 1.0) ** -3,
        name="psi[almost-linear]")


# -- Pinsker constant ------------------------------------------------------------

def _pinsker_ratio(psi: PsiProfile):
    p1 = float(psi.psi_prime(1.0))

    def ratio(u):
        u = float(u)
        if abs(u - 1.0) < 1e-7:
            return 1.0 / float(psi.psi_second(1.0))
        den = (1.0 + u) * (float(psi.psi(u)) - p1 * (u - 1.0))
        if den <= 0:
            return float("inf")
        return (u - 1.0) ** 2 / den

    return ratio, p1


def pinsker_constant(psi: PsiProfile) -> float:
    """c_psi = sqrt(2c), c the sup of (u-1)^2 / [(1+u)(psi(u) - psi'(1)(u-1))].

    The sup is taken over a log-spaced probe grid on [0, 1e8] with the
    analytic limit 1/psi''(1) at u = 1 and a liminf-based tail limit; local
    golden refinement around the grid argmax makes the sup effectively exact.
    """
    ratio, p1 = _pinsker_ratio(psi)
    hi = _PROBE_HI
    us = np.sort(np.concatenate([[0.0], np.geomspace(1e-8, hi, _PROBE_N), [1.0]]))
    vals = np.array([ratio(u) for u in us])
    if not np.all(np.isfinite(vals[us < 1e6])):
        raise NotPinskerAdmissible("Pinsker ratio is not finite on the probe grid")
    # tail admissibility: either superlinear or liminf (psi(u)/u - psi'(1)) > 0
    tail_u = np.geomspace(1e6, hi, 50)
    drift = np.asarray(psi.psi(tail_u), float) / tail_u - p1
    if drift[-1] <= 0:
        raise NotPinskerAdmissible(
            "psi(u)/u - psi'(1) is not positive at infinity; sup would diverge")
    tail_limit = 1.0 / float(drift[-1])
    i = int(np.argmax(vals))
    c = float(vals[i])
    lo_b = us[i - 1] if i >= 1 and us[i - 1] > 0 else 1e-10
    hi_b = us[i + 1] if i + 1 < len(us) else hi
    if hi_b > lo_b:
        res = minimize_scalar(lambda u: -ratio(u), bounds=(lo_b, hi_b),
                              method="bounded",
                              options={"xatol": 1e-12 * max(1.0, lo_b)})
        c = max(c, float(-res.fun))
    c = max(c, tail_limit)
    if not np.isfinite(c):
        raise NotPinskerAdmissible("Pinsker ratio sup diverges")
    return math.sqrt(2.0 * c * (1.0 + 1e-9))


# -- Orlicz gauge and the F-bar calculus ------------------------------------------

def orlicz_gauge_N(f, mu, psi: PsiProfile) -> float:
    """The gauge N(f) = inf{ lambda > 0 : int H^{-1}(f/lambda) dmu <= 1 }.

    Solved by bisection on lambda; the residual |int H^{-1}(f/lambda) - 1|
    is driven below 1e-8 (or the bracket below 1e-10 relative).
    """
    from .measures import integrate  # local import to avoid a cycle

    f = np.asarray(f, dtype=float)
    if f.min() < 0:
        raise ZeroFunction("gauge input must be non-negative")
    fmax = float(f.max())
    if fmax == 0.0:
        raise ZeroFunction("gauge of the zero function is undefined")

    def G(lam):
        return integrate(mu, psi.H_inverse(f / lam))

    lam = invert_increasing(lambda t: G(1.0 / t), 1.0, 1e-12 / fmax, 1e12 / fmax,
                            rel_tol=1e-10, resid_tol=1e-8)
    return 1.0 / lam


def f_bar(psi: PsiProfile, probe_lo: float = 4.0, probe_hi: float = 1e8):
    """F-bar(u) = psi(u)/H(u)^2, with the convexity-theorem hypothesis flags.

    Returns (fbar_callable, checks) where checks reports, on the probe grid:
    nondecreasing, the doubling condition F(lam u) <= lam F(u)/4 for some
    lam > 4, F(u)/u non-increasing, the lower-bound ratio against
    psi/(u^2 psi'') and the asymptotic H(u) ~ u sqrt(psi''(u)) diagnostic.
    """
    if float(psi.H(probe_hi)) < 10.0 * float(psi.H(probe_lo)):
        raise HCollapse("H grows too slowly; psi/H^2 is degenerate")

    def fbar(u):
        u = np.asarray(u, float)
        return np.asarray(psi.psi(u), float) / np.asarray(psi.H(u), float) ** 2

    u = np.geomspace(probe_lo, probe_hi, 400)
    fb = fbar(u)
    nondecr = bool(np.all(np.diff(fb) >= -1e-9 * np.abs(fb[:-1])))
    lam_ok = None
    for lam in (4.5, 6.0, 8.0, 16.0, 64.0):
        sub = u[u * lam <= probe_hi]
        if len(sub) < 10:
            continue
        if np.all(fbar(lam * sub) <= lam * fbar(sub) / 4.0 + 1e-12):
            lam_ok = lam
            break
    ratio_over_u = fb / u
    over_u_nonincr = bool(np.all(np.diff(ratio_over_u) <= 1e-9 * ratio_over_u[:-1]))
    denom = u**2 * np.asarray(psi.psi_second(u), float)
    lower_c = float(np.min(fb * denom / np.maximum(np.asarray(psi.psi(u), float), 1e-300)))
    # third derivative of psi by central differences of psi'' (step u * 1e-4)
    hstep = u * 1e-4
    p3 = (np.asarray(psi.psi_second(u + hstep), float)
          - np.asarray(psi.psi_second(u - hstep), float)) / (2.0 * hstep)
    p2 = np.asarray(psi.psi_second(u), float)
    dieudonne_arg = u * p3 / p2
    h_ratio = np.asarray(psi.H(u), float) / (u * np.sqrt(p2))
    checks = {
        "nondecreasing": nondecr,
        "doubling_lambda": lam_ok,
        "fbar_over_u_nonincreasing": over_u_nonincr,
        "lower_bound_c": lower_c,
        "u_psi3_over_psi2_tail": float(dieudonne_arg[-1]),
        "h_over_u_sqrt_psi2_tail": float(h_ratio[-1]),
    }
    return fbar, checks


# -- almost-linear eta from a prescribed F ----------------------------------------

def build_almost_linear_eta(F: Callable[[np.ndarray], np.ndarray], a: float,
                            tau_inv_at_a: Optional[float] = None,
                            u_max: float = 1e8) -> dict:
    """Construct theta with theta' = -1/tau from tau'/tau^2 = 1/(u F(u)).

    1/tau(u) = 1/tau(a) - int_a^u ds/(s F(s)).  When the Wang integral
    int_a^inf du/(u F(u)) converges the seed 1/tau(a) defaults to the tail
    integral itself (so theta' -> 0 cleanly); for a divergent integral the
    seed defaults to 1.25x the integral over the working domain so that tau
    stays positive up to u_max.

    Returns a dict with theta, eta (= u + theta), theta_prime,
    wang_integral (value over the working domain) and wang_finite flag;
    a finite Wang integral is the paper's ultracontractivity regime and is
    surfaced as a warning flag rather than an error.
    """
    grid = np.geomspace(a, max(u_max, 1e12), 8000)
    Fv = np.asarray(F(grid), dtype=float)
    if np.any(Fv <= 0):
        raise NonPositiveTau("F must be positive beyond a")
    if np.any(np.diff(Fv) < -1e-9 * np.abs(Fv[:-1]) - 1e-300):
        raise NonPositiveTau("F must be non-decreasing beyond a")
    integrand = 1.0 / (grid * Fv)
    cum = cumtrapz0(integrand, grid)
    total = float(cum[-1])
    # convergence: slope of log integrand-in-log-variable; alpha > 1.02 converges
    v = np.log(grid)
    gtilde = 1.0 / Fv
    tail = v > v[-1] - 3.0
    alpha = -float(np.polyfit(np.log(v[tail]), np.log(gtilde[tail]), 1)[0])
    wang_finite = bool(alpha > 1.02)
    if tau_inv_at_a is None:
        if wang_finite:
            # add the estimated tail beyond the working domain so that
            # 1/tau(u) = int_u^inf ds/(s F(s)) and theta' -> 0 cleanly
            tail_mass = gtilde[-1] * v[-1] / max(alpha - 1.0, 1e-6)
            tau_inv_at_a = total + tail_mass
        else:
            tau_inv_at_a = 1.25 * total
    inv_tau = tau_inv_at_a - cum
    if np.any(inv_tau <= 0):
        raise NonPositiveTau("1/tau hits zero before the domain end")
    theta_vals = -cumtrapz0(inv_tau, grid)
    th = PchipInterpolator(grid, theta_vals, extrapolate=True)
    th1 = PchipInterpolator(grid, -inv_tau, extrapolate=True)

    def theta(u):
        return th(np.asarray(u, float))

    def theta_prime(u):
        return th1(np.asarray(u, float))

    def eta(u):
        u = np.asarray(u, float)
        return u + th(u)

    return {
        "theta": theta,
        "theta_prime": theta_prime,
        "eta": eta,
        "wang_integral": total,
        "wang_finite": wang_finite,
        "tau_inv_at_a": float(tau_inv_at_a),
    }
