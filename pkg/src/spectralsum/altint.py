"""The alternating spectral integral and its convergence driver.

For Hermitian A, B with eigenprojectors P^A, P^B,

    F_N(f) = sum f((1/N) sum_j (a lam_j + b mu_j)) P^A_lam1 P^B_mu1 ... P^A_lamN P^B_muN,

the sum running over all 2N-tuples of eigenvalues.  Four evaluation routes
compute the same operator:

``enumeration``
    Direct sum over every tuple.  Exponential in N; the reference oracle.
``sumdp``
    The weight depends on the tuple only through s = sum_j v_j with
    v = a lam + b mu.  When every v sits on a common rational lattice the
    operators G_m(s) = sum over tuples with that partial sum obey
    G_m(s) = sum_k G_{m-1}(s - v_k) S_k, which is exact and cheap.
``fourier``
    With f(x) = integral exp(i t x) d nu(t), F_N(f) equals
    integral (exp(i t a A/N) exp(i t b B/N))^N d nu(t); evaluated by a
    quadrature rule for nu.
``moments``
    For polynomial weights the moments sum_tuples s^r prod S_k follow a
    binomial recursion; exact for any spectrum.

The ``order`` argument selects ``"AB"`` (P^A before P^B inside each pair,
the default) or ``"BA"``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy.special import comb

from ._util import enumeration_budget, opnorm, tree_sum
from .errors import BudgetExceeded, DimensionMismatch, NotLatticeRepresentable
from .fourier import FourierFunction, QuadConfig
from .linalg import SpectralData, apply_function, eig_hermitian, unitary_exp, _evaluate

__all__ = [
    "ROUTES",
    "AlternatingIntegral",
    "ConvergenceReport",
    "alt_integral_bruteforce",
    "alt_integral_sumdp",
    "alt_integral_fourier",
    "alt_integral_moments",
    "alt_integral",
    "lattice_distributions",
    "converge_study",
    "trotter_product",
    "empirical_order",
    "doubling_schedule",
]

ROUTES = ("enumeration", "sumdp", "fourier", "moments", "auto")
LATTICE_TOL = 1e-9
LATTICE_MAX_DEN = 10 ** 6
LATTICE_MAX_SPAN = 4096
SUFFIX_BLOCK = 4096


def _snap(v: float, tol: float = LATTICE_TOL, max_den: int = LATTICE_MAX_DEN):
    """Smallest-denominator continued-fraction convergent within tol of v."""
    frac = Fraction(v)
    h0, h1, k0, k1 = 0, 1, 1, 0
    x = frac
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return None
        approx = Fraction(h1, k1)
        if abs(float(approx) - v) <= tol * max(1.0, abs(v)):
            return approx
        rem = x - a
        if rem == 0:
            return None
        x = 1 / rem


def doubling_schedule(n_max: int) -> list[int]:
    """1, 2, 4, ..., n_max."""
    out, n = [], 1
    while n <= n_max:
        out.append(n)
        n *= 2
    return out


def empirical_order(schedule: Sequence[int], errors: Sequence[float]) -> float:
    """Negated least-squares slope of log(error) against log(N) on the last half."""
    n = len(schedule)
    k = max(2, (n + 1) // 2)
    Ns = np.asarray(schedule[-k:], dtype=float)
    errs = np.asarray(errors[-k:], dtype=float)
    if len(Ns) < 2 or np.any(errs <= 0) or not np.all(np.isfinite(errs)):
        return float("nan")
    slope = np.polyfit(np.log(Ns), np.log(errs), 1)[0]
    return float(-slope)


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Outcome of a limit-taking driver.

    Attributes
    ----------
    schedule : tuple of int
        Strictly increasing N values.
    errors : ndarray
        Operator-norm distance of F_N to ``reference`` for each N.
    route : str
        Evaluation route actually used.
    empirical_order : float
        Fitted decay exponent (error ~ N^-order) on the last half.
    reference : ndarray
        The limit matrix.
    estimates : tuple of ndarray
        F_N for each N.
    error_bounds : ndarray
        Route-reported numerical error for each F_N (zero for exact routes).
    """

    schedule: tuple
    errors: np.ndarray
    route: str
    empirical_order: float
    reference: np.ndarray
    estimates: tuple = field(default=(), repr=False)
    error_bounds: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        s = list(self.schedule)
        if not s or any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError(f"schedule must be nonempty and strictly increasing: {s}")
        errs = np.asarray(self.errors, dtype=float)
        if not np.all(np.isfinite(errs)) or np.any(errs < 0):
            raise ValueError("errors must be finite and non-negative")

    @property
    def final(self) -> np.ndarray:
        return self.estimates[-1]

    def rows(self):
        for n, e in zip(self.schedule, self.errors):
            yield n, float(e)


class AlternatingIntegral:
    """F_N(f; A, B, a, b) for one operator pair, shared across f and N.

    The lattice recursion state is memoised, so evaluating many weights
    or a doubling schedule of N costs a single pass.

    Parameters
    ----------
    specA, specB : SpectralData
        Spectral decompositions of A and B.
    a, b : float
        Coefficients of the linear combination aA + bB.
    order : {"AB", "BA"}
        Factor order inside each alternating pair.
    """

    def __init__(self, specA: SpectralData, specB: SpectralData, a: float = 1.0,
                 b: float = 1.0, order: str = "AB"):
        if specA.dim != specB.dim:
            raise DimensionMismatch(f"A is {specA.dim}-dimensional, B is {specB.dim}-dimensional")
        if order not in ("AB", "BA"):
            raise ValueError(f"order must be 'AB' or 'BA', got {order!r}")
        self.specA, self.specB = specA, specB
        self.a, self.b = float(a), float(b)
        self.order = order
        self.dim = specA.dim
        lam = specA.eigenvalues
        mu = specB.eigenvalues
        vals, mats = [], []
        for i, j in itertools.product(range(len(lam)), range(len(mu))):
            vals.append(self.a * lam[i] + self.b * mu[j])
            if order == "AB":
                mats.append(specA.projectors[i] @ specB.projectors[j])
            else:
                mats.append(specB.projectors[j] @ specA.projectors[i])
        self.values = np.array(vals)
        self.steps = np.array(mats)
        self._lattice = None
        self._dp_state = None
        self._dp_cache: dict = {}

    # -- helpers ------------------------------------------------------------
    @property
    def radius(self) -> float:
        """Largest |s/N| that any tuple can produce."""
        return float(np.max(np.abs(self.values)))

    @property
    def target(self) -> np.ndarray:
        return self.a * self.specA.matrix + self.b * self.specB.matrix

    def reference(self, f) -> np.ndarray:
        """f(aA + bB) by direct spectral calculus."""
        return apply_function(eig_hermitian(self.target), f)

    def _f(self, f, x):
        return _evaluate(f, np.asarray(x, dtype=float))

    # -- enumeration --------------------------------------------------------
    def bruteforce(self, f, N: int, budget: int | None = None) -> np.ndarray:
        n = len(self.values)
        budget = enumeration_budget(budget)
        if n ** N > budget:
            raise BudgetExceeded(f"{n}^{N} = {n ** N} tuples exceed budget {budget}")
        k = 0
        while k < N and n ** (k + 1) <= SUFFIX_BLOCK:
            k += 1
        # every suffix of length k, lexicographic, with its partial sum
        suffix = np.eye(self.dim, dtype=complex)[None]
        ssum = np.zeros(1)
        for _ in range(k):
            suffix = np.einsum("aij,bjk->abik", suffix, self.steps).reshape(-1, self.dim, self.dim)
            ssum = (ssum[:, None] + self.values[None, :]).reshape(-1)
        blocks = []
        eye = np.eye(self.dim, dtype=complex)
        for prefix in itertools.product(range(n), repeat=N - k):
            pmat = reduce(np.matmul, (self.steps[i] for i in prefix), eye)
            psum = float(sum(self.values[i] for i in prefix))
            w = self._f(f, (psum + ssum) / N)
            blocks.append(pmat @ tree_sum(w[:, None, None] * suffix))
        return tree_sum(np.array(blocks))

    # -- lattice recursion --------------------------------------------------
    def lattice(self):
        """(offsets, base, unit) with values = base + unit * offsets, or raise."""
        if self._lattice is None:
            snapped = [_snap(float(v)) for v in self.values]
            if any(s is None for s in snapped):
                bad = self.values[[s is None for s in snapped]][0]
                raise NotLatticeRepresentable(
                    f"step value {bad!r} is not within {LATTICE_TOL:g} of a rational "
                    f"with denominator <= {LATTICE_MAX_DEN}")
            lo = min(snapped)
            diffs = [s - lo for s in snapped]
            den = reduce(math.lcm, (d.denominator for d in diffs), 1)
            ints = [int(d * den) for d in diffs]
            g = reduce(math.gcd, ints, 0) or 1
            offsets = np.array([i // g for i in ints])
            span = int(offsets.max())
            if span > LATTICE_MAX_SPAN:
                raise NotLatticeRepresentable(
                    f"lattice span {span} per step exceeds {LATTICE_MAX_SPAN}; spectrum too fine")
            self._lattice = (offsets, lo, Fraction(g, den))
        return self._lattice

    def distribution(self, N: int):
        """(averages s/N, G_N(s)) on the lattice, via the memoised recursion."""
        if N in self._dp_cache:
            return self._dp_cache[N]
        offsets, lo, unit = self.lattice()
        span = int(offsets.max())
        if self._dp_state is None or self._dp_state[0] > N:
            self._dp_state = (0, np.eye(self.dim, dtype=complex)[None])
        m, G = self._dp_state
        while m < N:
            Gn = np.zeros((G.shape[0] + span, self.dim, self.dim), dtype=complex)
            for o, S in zip(offsets, self.steps):
                Gn[o:o + G.shape[0]] += G @ S
            G, m = Gn, m + 1
        self._dp_state = (m, G)
        idx = np.arange(G.shape[0])
        avgs = (float(lo) * N + float(unit) * idx) / N
        self._dp_cache[N] = (avgs, G)
        return avgs, G

    def sumdp(self, f, N: int) -> np.ndarray:
        avgs, G = self.distribution(N)
        w = self._f(f, avgs)
        return tree_sum(w[:, None, None] * G)

    # -- Fourier quadrature -------------------------------------------------
    def fourier(self, f: FourierFunction, N: int, quad: QuadConfig | None = None,
                full_output: bool = False):
        if not isinstance(f, FourierFunction):
            raise TypeError("the fourier route needs a FourierFunction")
        rule = f.quadrature(self.radius, quad)
        t = rule.nodes
        ea = np.exp(1j * np.outer(t, self.a * self.specA.eigenvalues / N))
        eb = np.exp(1j * np.outer(t, self.b * self.specB.eigenvalues / N))
        UA = np.einsum("kl,lij->kij", ea, self.specA.projectors)
        UB = np.einsum("kl,lij->kij", eb, self.specB.projectors)
        U = UA @ UB if self.order == "AB" else UB @ UA
        UN = np.linalg.matrix_power(U, N)
        out = tree_sum(rule.weights[:, None, None] * UN)
        if not full_output:
            return out
        roundoff = 1e-15 * (1 + math.log2(N)) * float(np.abs(rule.weights).sum()) * self.dim
        return out, {"error": rule.error + roundoff, "nodes": len(rule), "quad_error": rule.error}

    # -- polynomial moments -------------------------------------------------
    def moments_applicable(self, f) -> bool:
        poly = f.polynomial() if isinstance(f, FourierFunction) else None
        return poly is not None and self.radius <= poly[1]

    def moments(self, f: FourierFunction, N: int) -> np.ndarray:
        poly = f.polynomial() if isinstance(f, FourierFunction) else None
        if poly is None:
            raise TypeError("the moments route needs a windowed polynomial")
        coeffs, radius = poly
        if self.radius > radius * (1 + 1e-12):
            raise ValueError(
                f"window radius {radius} does not cover the reachable range {self.radius}")
        deg = len(coeffs) - 1
        scaled = self.values / N
        T = np.array([np.einsum("k,kij->ij", scaled ** p, self.steps) for p in range(deg + 1)])
        binom = [[comb(r, q, exact=True) for q in range(r + 1)] for r in range(deg + 1)]
        M = np.zeros((deg + 1, self.dim, self.dim), dtype=complex)
        M[0] = np.eye(self.dim)
        for _ in range(N):
            M = np.array([sum(binom[r][q] * (M[q] @ T[r - q]) for q in range(r + 1))
                          for r in range(deg + 1)])
        return np.einsum("r,rij->ij", coeffs, M)

    # -- dispatch -----------------------------------------------------------
    def resolve_route(self, f, route: str = "auto") -> str:
        if route not in ROUTES:
            raise ValueError(f"unknown route {route!r}; choose from {ROUTES}")
        if route != "auto":
            return route
        if self.moments_applicable(f):
            return "moments"
        try:
            self.lattice()
            return "sumdp"
        except NotLatticeRepresentable:
            return "fourier"

    def evaluate(self, f, N: int, route: str = "auto", quad: QuadConfig | None = None,
                 budget: int | None = None) -> np.ndarray:
        if N < 1:
            raise ValueError(f"N must be a positive integer, got {N}")
        route = self.resolve_route(f, route)
        if route == "enumeration":
            return self.bruteforce(f, N, budget)
        if route == "sumdp":
            return self.sumdp(f, N)
        if route == "moments":
            return self.moments(f, N)
        return self.fourier(f, N, quad)


def _pair(specA, specB):
    return (specA if isinstance(specA, SpectralData) else eig_hermitian(specA),
            specB if isinstance(specB, SpectralData) else eig_hermitian(specB))


def alt_integral_bruteforce(specA, specB, a, b, f, N, order="AB", budget=None):
    """Enumerate every tuple; lexicographic order with pairwise reduction."""
    return AlternatingIntegral(*_pair(specA, specB), a, b, order).bruteforce(f, N, budget)


def alt_integral_sumdp(specA, specB, a, b, f, N, order="AB"):
    """Exact lattice recursion; raises NotLatticeRepresentable off-lattice."""
    return AlternatingIntegral(*_pair(specA, specB), a, b, order).sumdp(f, N)


def alt_integral_fourier(specA, specB, a, b, f, N, quad=None, order="AB", full_output=False):
    """Quadrature of the Trotter-product integral against nu_f.

    With ``full_output=True`` also returns a dict whose ``error`` entry
    bounds the deviation from F_N(f).
    """
    return AlternatingIntegral(*_pair(specA, specB), a, b, order).fourier(
        f, N, quad, full_output=full_output)


def alt_integral_moments(specA, specB, a, b, f, N, order="AB"):
    """Binomial moment recursion for windowed polynomials."""
    return AlternatingIntegral(*_pair(specA, specB), a, b, order).moments(f, N)


def alt_integral(specA, specB, a, b, f, N, route="auto", quad=None, order="AB", budget=None):
    return AlternatingIntegral(*_pair(specA, specB), a, b, order).evaluate(
        f, N, route, quad, budget)


def lattice_distributions(specA, specB, a, b, schedule, order="AB"):
    """{N: (averages, G_N)} for every N in the schedule, in one recursion pass."""
    ai = AlternatingIntegral(*_pair(specA, specB), a, b, order)
    return {N: ai.distribution(N) for N in sorted(schedule)}


def converge_study(specA, specB, a, b, f, schedule, route="auto", quad=None,
                   order="AB", reference=None, engine: AlternatingIntegral | None = None,
                   budget=None) -> ConvergenceReport:
    """Distance of F_N(f) to f(aA+bB) along a schedule of N.

    Parameters
    ----------
    reference : ndarray, optional
        Overrides the limit matrix (default f evaluated on aA + bB).
    engine : AlternatingIntegral, optional
        Reuse memoised recursion state across calls.
    """
    schedule = [int(n) for n in schedule]
    if not schedule:
        raise ValueError("schedule must be nonempty")
    ai = engine or AlternatingIntegral(*_pair(specA, specB), a, b, order)
    route = ai.resolve_route(f, route)
    ref = ai.reference(f) if reference is None else np.asarray(reference)
    estimates, bounds = [], []
    for N in schedule:
        if route == "fourier":
            M, info = ai.fourier(f, N, quad, full_output=True)
            bounds.append(info["error"])
        else:
            M = ai.evaluate(f, N, route, quad, budget)
            bounds.append(0.0)
        estimates.append(M)
    errors = np.array([opnorm(M - ref) for M in estimates])
    return ConvergenceReport(
        schedule=tuple(schedule), errors=errors, route=route,
        empirical_order=empirical_order(schedule, errors), reference=ref,
        estimates=tuple(estimates), error_bounds=np.array(bounds),
    )


def trotter_product(specA, specB, a, b, t, N) -> np.ndarray:
    """(exp(i t a A / N) exp(i t b B / N))^N."""
    specA, specB = _pair(specA, specB)
    U = unitary_exp(specA, t * a / N) @ unitary_exp(specB, t * b / N)
    return np.linalg.matrix_power(U, int(N))
