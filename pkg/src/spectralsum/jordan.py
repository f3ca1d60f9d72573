"""Jordan product and symmetrized polynomials of A and B from their spectral data.

A monomial x^p y^q is rewritten as a signed combination of powers of linear
forms, x^p y^q = sum_k c_k (a_k x + b_k y)^m with m = p + q.  Each power of
a linear form is a one-variable polynomial of a x + b y, so its operator
version is an alternating integral with weight s^m, which converges to the
symmetrized product of p copies of A and q copies of B.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from ._util import opnorm
from .altint import AlternatingIntegral, _pair
from .errors import BudgetExceeded, DimensionMismatch, IllConditioned
from .fourier import window_extend
from .linalg import HermitianMatrix

__all__ = [
    "SylvesterDecomposition",
    "sylvester_decompose",
    "symmetrized_direct",
    "decomposition_operator",
    "jordan_limit",
    "poly_limit",
    "poly_direct",
    "parse_coeffs",
    "MAX_SYLVESTER_DEGREE",
    "MAX_POLY_DEGREE",
]

MAX_SYLVESTER_DEGREE = 12
MAX_POLY_DEGREE = 6
MAX_WORDS = 10 ** 4
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class SylvesterDecomposition:
    """x^p y^q = sum_k c_k (a_k x + b_k y)^m, stored as terms (c_k, a_k, b_k)."""

    p: int
    q: int
    terms: tuple

    @property
    def m(self) -> int:
        return self.p + self.q

    def expansion(self) -> np.ndarray:
        """Coefficients of x^(m-j) y^j, j = 0..m, of the expanded sum."""
        m = self.m
        out = np.zeros(m + 1)
        for c, a, b in self.terms:
            for j in range(m + 1):
                out[j] += c * comb(m, j) * a ** (m - j) * b ** j
        return out

    def residual(self) -> float:
        target = np.zeros(self.m + 1)
        target[self.q] = 1.0
        return float(np.max(np.abs(self.expansion() - target)))


def _lagrange_coeff(nodes, k, q):
    """Coefficient of x^q in prod_{i != k} (x - t_i) / (t_k - t_i)."""
    poly = [Fraction(1)]
    denom = Fraction(1)
    for i, ti in enumerate(nodes):
        if i == k:
            continue
        poly = [Fraction(0)] + poly  # multiply by x
        for j in range(len(poly) - 1):
            poly[j] -= ti * poly[j + 1]
        denom *= nodes[k] - ti
    return poly[q] / denom


@lru_cache(maxsize=None)
def sylvester_decompose(p: int, q: int) -> SylvesterDecomposition:
    """Signed decomposition of x^p y^q into (m+1) powers of linear forms.

    Nodes t_k = k - m/2 give forms x + t_k y; the weights solve the
    Vandermonde system sum_k c_k t_k^j = delta_{jq} / binom(m, q).  The
    solve is done in exact rationals: c_k is the x^q coefficient of the
    k-th Lagrange basis polynomial, scaled by 1 / binom(m, q).
    Monomials in a single variable are returned as one term.
    """
    p, q = int(p), int(q)
    m = p + q
    if p < 0 or q < 0 or m < 1 or m > MAX_SYLVESTER_DEGREE:
        raise ValueError(f"need p, q >= 0 and 1 <= p+q <= {MAX_SYLVESTER_DEGREE}, got ({p}, {q})")
    if q == 0:
        return SylvesterDecomposition(p, q, ((1.0, 1.0, 0.0),))
    if p == 0:
        return SylvesterDecomposition(p, q, ((1.0, 0.0, 1.0),))
    nodes = [Fraction(2 * k - m, 2) for k in range(m + 1)]
    c = [Fraction(1, comb(m, q)) * _lagrange_coeff(nodes, k, q) for k in range(m + 1)]
    t = np.array([float(x) for x in nodes])
    c = np.array([float(x) for x in c])
    V = np.vander(t, m + 1, increasing=True).T  # V[j, k] = t_k^j
    rhs = np.zeros(m + 1)
    rhs[q] = 1.0 / comb(m, q)
    resid = float(np.max(np.abs(V @ c - rhs)))
    dec = SylvesterDecomposition(p, q, tuple((float(ck), 1.0, float(tk)) for ck, tk in zip(c, t)))
    resid = max(resid, dec.residual())
    if resid > RESIDUAL_TOL:
        raise IllConditioned(f"Vandermonde residual {resid:.2e} for (p, q) = ({p}, {q})")
    return dec


def _matrices(A, B):
    A = np.asarray(HermitianMatrix.coerce(A).entries if not hasattr(A, "matrix") else A.matrix)
    B = np.asarray(HermitianMatrix.coerce(B).entries if not hasattr(B, "matrix") else B.matrix)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    return A, B


def symmetrized_direct(A, B, p: int, q: int) -> np.ndarray:
    """Average of all distinct words with p letters A and q letters B.

    Uses the recursion W(p, q) = A W(p-1, q) + B W(p, q-1) for the word sum.
    """
    A, B = _matrices(A, B)
    n_words = comb(p + q, q)
    if n_words > MAX_WORDS:
        raise BudgetExceeded(f"{n_words} words exceed budget {MAX_WORDS}")
    eye = np.eye(A.shape[0], dtype=complex)
    W = {(0, 0): eye}
    for i in range(p + 1):
        for j in range(q + 1):
            if i == j == 0:
                continue
            acc = np.zeros_like(eye)
            if i:
                acc = acc + A @ W[i - 1, j]
            if j:
                acc = acc + B @ W[i, j - 1]
            W[i, j] = acc
    return W[p, q] / n_words


def decomposition_operator(A, B, p: int, q: int) -> np.ndarray:
    """sum_k c_k (a_k A + b_k B)^m, the operator form of the decomposition."""
    A, B = _matrices(A, B)
    dec = sylvester_decompose(p, q)
    return sum(c * np.linalg.matrix_power(a * A + b * B, dec.m) for c, a, b in dec.terms)


def _power_weight(m: int, R: float):
    coeffs = np.zeros(m + 1)
    coeffs[m] = 1.0
    return window_extend(coeffs, 1.25 * R if R > 0 else 1.0)


def _linear_form_integral(specA, specB, a, b, m, N, route, quad, order):
    ai = AlternatingIntegral(specA, specB, a, b, order)
    return ai.evaluate(_power_weight(m, ai.radius), N, route, quad)


def jordan_limit(specA, specB, N: int, route: str = "auto", quad=None, order="AB") -> np.ndarray:
    """F_N with product weight via xy = (x+y)^2/2 - x^2/2 - y^2/2; tends to (AB+BA)/2."""
    specA, specB = _pair(specA, specB)
    parts = [(0.5, 1.0, 1.0), (-0.5, 1.0, 0.0), (-0.5, 0.0, 1.0)]
    return sum(c * _linear_form_integral(specA, specB, a, b, 2, N, route, quad, order)
               for c, a, b in parts)


def parse_coeffs(text: str) -> dict:
    """Parse "p,q,c;p,q,c;..." into {(p, q): c}."""
    out: dict = {}
    for chunk in filter(None, (s.strip() for s in text.split(";"))):
        parts = [s.strip() for s in chunk.split(",")]
        if len(parts) != 3:
            raise ValueError(f"coefficient entry {chunk!r} is not 'p,q,c'")
        p, q, c = int(parts[0]), int(parts[1]), float(parts[2])
        out[(p, q)] = out.get((p, q), 0.0) + c
    return out


def _check_coeffs(coeffs: dict):
    for (p, q) in coeffs:
        if p < 0 or q < 0:
            raise ValueError(f"negative exponent in ({p}, {q})")
        if p + q > MAX_POLY_DEGREE:
            raise ValueError(f"total degree {p + q} exceeds {MAX_POLY_DEGREE}")


def poly_limit(specA, specB, coeffs: dict, N: int, route: str = "auto", quad=None,
               order="AB") -> np.ndarray:
    """sum c_{p,q} F_N((sum lam/N)^p (sum mu/N)^q) through Sylvester decompositions."""
    _check_coeffs(coeffs)
    specA, specB = _pair(specA, specB)
    out = np.zeros((specA.dim, specA.dim), dtype=complex)
    for (p, q), cpq in sorted(coeffs.items()):
        if cpq == 0:
            continue
        if p + q == 0:
            out += cpq * np.eye(specA.dim)
            continue
        dec = sylvester_decompose(p, q)
        for c, a, b in dec.terms:
            if c == 0:
                continue
            out += cpq * c * _linear_form_integral(specA, specB, a, b, dec.m, N, route, quad, order)
    return out


def poly_direct(A, B, coeffs: dict) -> np.ndarray:
    """sum c_{p,q} S(A^p B^q), the limit of :func:`poly_limit`."""
    _check_coeffs(coeffs)
    A, B = _matrices(A, B)
    out = np.zeros(A.shape, dtype=complex)
    for (p, q), c in sorted(coeffs.items()):
        out += c * symmetrized_direct(A, B, p, q)
    return out
