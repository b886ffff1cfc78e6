"""Mean-square synchronization condition, margin, and optimal coupling gains.

Everything here reduces to scalar arithmetic on (a, delta, g) and the spectral
extremes (lambda2, lambdaN, tau, cod): the network enters only through those
numbers. The one matrix-valued operation is riccati_oracle, a small-N fixed
point used to validate the scalar reduction.

Conventions: a0 = a - 1/delta, lhs = (1 - 1/delta)^2. The sufficient condition
is lhs > alpha0_sq; the margin rho_SM is defined only while
hat_a^2 < lhs and consumers must branch on the feasibility flag, never on the
raw number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import LaplacianSplit
from .spectral import OrthonormalComplement, SpectralSummary

RICCATI_MAX_ITER = 10_000
RICCATI_TOL = 1e-10
RICCATI_SHIFT = 1e-4
RICCATI_MAX_NODES = 30


@dataclass(frozen=True)
class DynamicsParams:
    """Scalar agent dynamics: linear rate a, sector parameter delta,
    coupling gain g, additive noise variance omega2."""

    a: float
    delta: float
    g: float
    omega2: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"linear rate a must be > 0, got {self.a}")
        if not self.delta > 1:
            raise ValueError(f"sector parameter delta must be > 1, got {self.delta}")
        if not self.g > 0:
            raise ValueError(f"coupling gain g must be > 0, got {self.g}")
        if self.omega2 < 0:
            raise ValueError(f"noise variance omega2 must be >= 0, got {self.omega2}")

    @property
    def a0(self) -> float:
        return self.a - 1.0 / self.delta


@dataclass(frozen=True)
class MarginReport:
    """Outcome of the mean-square synchronization check at one parameter point.

    rho_SM is None when hat_a^2 >= lhs (the margin expression has a
    non-positive denominator there); a negative rho_SM is reported raw but
    carries no quantitative meaning beyond infeasibility.
    """

    a0: float
    lambda_sup: float
    alpha0_sq: float
    lhs: float
    rho_SM: float | None
    feasible: bool
    hat_a: float
    sigma_eff_sq: float


def lambda_sup(summary: SpectralSummary, params: DynamicsParams, cod: float) -> float:
    """Binding extreme eigenvalue: whichever of lambda2, lambdaN lies farther
    from the quadratic minimizer a0/g - cod*tau. Ties go to lambdaN."""
    center = params.a0 / params.g - cod * summary.tau
    if abs(summary.lambdaN - center) >= abs(summary.lambda2 - center):
        return summary.lambdaN
    return summary.lambda2


def alpha0_sq(lam: float, params: DynamicsParams, cod: float, tau: float) -> float:
    """(a0 - lam*g)^2 + 2*cod*tau*lam*g^2, the gain of one error mode.

    Quadratic and convex in lam, minimized at lam = a0/g - cod*tau.
    """
    hat = params.a0 - lam * params.g
    return hat * hat + (2.0 * cod * tau * lam) * params.g**2


def check_mss(summary: SpectralSummary, params: DynamicsParams, cod: float) -> MarginReport:
    """Evaluate the sufficient condition for mean-square synchronization.

    Feasible iff (1 - 1/delta)^2 exceeds the binding mode gain alpha0_sq.
    Infeasibility is data, not an error.
    """
    lam = lambda_sup(summary, params, cod)
    hat = params.a0 - lam * params.g
    sig_sq = 2.0 * cod * summary.tau * lam
    alpha = hat * hat + sig_sq * params.g**2
    lhs = (1.0 - 1.0 / params.delta) ** 2
    feasible = lhs > alpha
    rho = None
    if hat * hat < lhs:
        rho = 1.0 - sig_sq * params.g**2 / (lhs - hat * hat)
    return MarginReport(
        a0=params.a0,
        lambda_sup=lam,
        alpha0_sq=alpha,
        lhs=lhs,
        rho_SM=rho,
        feasible=feasible,
        hat_a=hat,
        sigma_eff_sq=sig_sq,
    )


def check_mss_all_eigs(summary: SpectralSummary, params: DynamicsParams, cod: float) -> bool:
    """Exhaustive variant of check_mss: test every nonzero eigenvalue.

    By convexity of alpha0_sq in lambda the interior spectrum cannot fail
    where the extremes pass, so this must always agree with check_mss; a
    disagreement is an internal bug and raises.
    """
    lhs = (1.0 - 1.0 / params.delta) ** 2
    ok = all(
        lhs > alpha0_sq(float(lam), params, cod, summary.tau)
        for lam in summary.eigenvalues[1:]
    )
    if ok != check_mss(summary, params, cod).feasible:
        raise RuntimeError(
            "per-eigenvalue scan disagrees with the binding-eigenvalue verdict; "
            "convexity argument violated"
        )
    return ok


def _golden_max(f, lo: float, hi: float, tol: float = 1e-13) -> float:
    """Golden-section maximizer of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(300):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def existence_p_condition(alpha0_sq: float, delta: float) -> tuple[bool, float | None]:
    """Does a positive p < delta satisfy (p - 1/delta)(1/p - 1/delta) > alpha0_sq?

    The product is unimodal on (0, delta) with maximum (1 - 1/delta)^2 at
    p = 1, so the search is a golden-section maximization; the returned
    witness p (None when unsatisfiable) strictly beats alpha0_sq.
    """
    if not delta > 1:
        raise ValueError(f"delta must be > 1, got {delta}")

    def f(p: float) -> float:
        return (p - 1.0 / delta) * (1.0 / p - 1.0 / delta)

    p_hat = _golden_max(f, 1e-6, delta * (1.0 - 1e-9))
    if f(p_hat) > alpha0_sq:
        return True, p_hat
    return False, None


def critical_eigenvalues(params: DynamicsParams) -> tuple[float, float]:
    """Zero-dispersion critical connectivity window (lambda2_star, lambdaN_star).

    Below lambda2_star = (a-1)/g, or above
    lambdaN_star = (a+1)/g - 2/(g*delta), synchronization is not guaranteed.
    The width lambdaN_star - lambda2_star = (2/g)(1 - 1/delta) is
    independent of a.
    """
    lambda2_star = (params.a - 1.0) / params.g
    lambdaN_star = (params.a + 1.0) / params.g - 2.0 / (params.g * params.delta)
    return lambda2_star, lambdaN_star


def optimal_gain(
    summary: SpectralSummary, a: float, delta: float, cod: float
) -> tuple[float, float | None]:
    """Coupling gain equalizing the worst-case mode gain, and its margin.

    g_star = 2*a0 / (max(lambdaN, lambda2 + 2*cod*tau) + lambda2 + 2*cod*tau).
    The margin at g_star is evaluated with the binding eigenvalue taken as
    lambda2 (at g_star the two extremes are balanced and lambda2 binds);
    None when even g_star is infeasible.
    """
    a0 = a - 1.0 / delta
    if a0 <= 0:
        raise ValueError(f"optimal gain needs a - 1/delta > 0, got {a0}")
    gt = cod * summary.tau
    chi = max(summary.lambdaN, summary.lambda2 + 2.0 * gt)
    g_star = 2.0 * a0 / (chi + summary.lambda2 + 2.0 * gt)
    lhs = (1.0 - 1.0 / delta) ** 2
    hat = a0 - summary.lambda2 * g_star
    sig_sq = 2.0 * cod * summary.tau * summary.lambda2
    alpha = hat * hat + sig_sq * g_star**2
    if lhs > alpha and hat * hat < lhs:
        rho = 1.0 - sig_sq * g_star**2 / (lhs - hat * hat)
        return g_star, rho
    return g_star, None


def saddle_gain(
    summary: SpectralSummary, a: float, delta: float, cod: float
) -> tuple[float, float]:
    """Gain at which both extreme eigenvalues see the same mode gain.

    Returns (g_e, common alpha0_sq value). Undefined for lambda2 = lambdaN;
    the single-eigenvalue case is covered by optimal_gain.
    """
    if summary.lambdaN == summary.lambda2:
        raise ValueError("saddle gain undefined when lambda2 equals lambdaN")
    a0 = a - 1.0 / delta
    gt = cod * summary.tau
    lam_bar = 0.5 * (summary.lambda2 + summary.lambdaN)
    g_e = a0 / (lam_bar + gt)
    denom = summary.lambdaN + summary.lambda2 + 2.0 * gt
    alpha_common = a0 * a0 - 4.0 * summary.lambda2 * summary.lambdaN * a0 * a0 / denom**2
    return g_e, alpha_common


def _uncertain_modes(split: LaplacianSplit, U: np.ndarray, cod: float):
    """Per-stochastic-edge reduced incidence rows and variances from L_U."""
    iu, ju = np.nonzero(np.triu(split.L_U, k=1))
    mus = -split.L_U[iu, ju]
    lhat = U[iu, :] - U[ju, :]
    return lhat, cod * mus


def riccati_oracle(
    split: LaplacianSplit,
    U: OrthonormalComplement,
    params: DynamicsParams,
    cod: float,
) -> tuple[bool, np.ndarray | None]:
    """Matrix fixed point certifying mean-square stability of the error modes.

    Iterates, from P = I,

        P <- E[A0' M A0] + R_P + (1/delta) I,   M = P + P (delta I - P)^-1 P,

    where A0 = a0 I - g U'(L + L_R)U and the expectation over the stochastic
    edge perturbations is evaluated in closed form. R_P is fixed to 1e-4 I.
    Stochastic edge variances are recovered from L_U as cod times the edge
    weight.

    Returns (True, P) when successive iterates settle below 1e-10 in max
    norm with delta*I - P positive definite throughout; (False, None) when
    positive definiteness is lost or the iteration budget runs out. Small
    problems only (at most 30 nodes).
    """
    n = split.L.shape[0]
    if n > RICCATI_MAX_NODES:
        raise ValueError(f"fixed-point oracle limited to {RICCATI_MAX_NODES} nodes, got {n}")
    Um = U.U
    if Um.shape != (n, n - 1):
        raise ValueError(f"complement basis shape {Um.shape} does not match {n} nodes")
    m = n - 1
    eye = np.eye(m)
    a0 = params.a0
    g = params.g
    A0b = a0 * eye - g * (Um.T @ split.L @ Um)
    lhat, sig2 = _uncertain_modes(split, Um, cod)
    shift = RICCATI_SHIFT * eye + (1.0 / params.delta) * eye

    P = np.eye(m)
    for _ in range(RICCATI_MAX_ITER):
        W = params.delta * eye - P
        try:
            np.linalg.cholesky(W)
        except np.linalg.LinAlgError:
            return False, None
        M = P + P @ np.linalg.solve(W, P)
        M = 0.5 * (M + M.T)
        S = A0b.T @ M @ A0b
        if len(sig2):
            quad = np.einsum("ei,ij,ej->e", lhat, M, lhat)
            S = S + g**2 * (lhat.T * (sig2 * quad)) @ lhat
        P_next = 0.5 * (S + S.T) + shift
        step = np.abs(P_next - P).max()
        P = P_next
        if step < RICCATI_TOL:
            W = params.delta * eye - P
            try:
                np.linalg.cholesky(W)
            except np.linalg.LinAlgError:
                return False, None
            return True, P
    return False, None
