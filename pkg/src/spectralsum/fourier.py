"""Functions given as Fourier transforms of finite complex measures.

A :class:`FourierFunction` bundles a scalar function ``f`` with a
representation of the measure ``nu_f`` satisfying
``f(x) = integral of exp(i t x) d nu_f(t)`` and with ``fnorm``, the total
variation of ``nu_f``.

Two representations exist.

* Closed form: a unit point mass, or a Gaussian density
  ``(w / sqrt(2 pi)) exp(-w^2 (t - omega)^2 / 2 - i (t - omega) c)``, which transforms
  to ``exp(i omega x) exp(-(x - c)^2 / (2 w^2))``.
* Sampled: ``f`` is sampled on a uniform x-grid covering its effective
  support; the DFT yields a discrete measure on a uniform t-grid whose
  transform interpolates ``f`` at every sample point.  The grid is refined
  until the measure mass near the Nyquist frequency is negligible, then
  truncated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np
from scipy.special import erfc, erfcinv

from .errors import QuadratureBudgetExceeded, TailTooHeavy

__all__ = [
    "FourierFunction",
    "QuadConfig",
    "QuadRule",
    "fourier_measure",
    "window_extend",
    "gaussian",
    "unit",
    "combine",
    "plateau",
    "smooth_step",
    "mollifier_eval",
    "atom_mollifier_eval",
    "parse_function_spec",
    "KIND_ALIASES",
]

CLOSED_TAIL_TOL = 1e-12
SAMPLED_TAIL_TOL = 1e-10
MAX_SAMPLES = 2 ** 22
PLATEAU_RATIO = 1.25


# ---------------------------------------------------------------------------
# scalar building blocks


def _e(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, monotone in between."""
    a = _e(u)
    b = _e(1.0 - np.asarray(u, dtype=float))
    return a / (a + b)


def plateau(x, radius):
    """Smooth cutoff equal to 1 on [-radius, radius] and 0 beyond 1.25 radius."""
    x = np.abs(np.asarray(x, dtype=float))
    width = (PLATEAU_RATIO - 1.0) * radius
    return smooth_step((PLATEAU_RATIO * radius - x) / width)


def mollifier_eval(alpha, beta, eps, x):
    """Smoothed window indicator of [alpha, beta).

    ``exp(-eps/(x-beta)^2 - eps/(x-alpha)^2) 1_(alpha,beta)(x) + exp(-(x-alpha)^2/eps)``.
    Values lie in [0, 2]; the value at ``x = alpha`` is exactly 1.
    """
    x0 = np.asarray(x, dtype=float)
    x = np.atleast_1d(x0)
    out = np.exp(-((x - alpha) ** 2) / eps)
    inside = (x > alpha) & (x < beta)
    if np.any(inside):
        xi = x[inside]
        with np.errstate(over="ignore", divide="ignore"):
            out[inside] += np.exp(-eps / (xi - beta) ** 2 - eps / (xi - alpha) ** 2)
    return out.reshape(x0.shape) if x0.ndim else float(out[0])


def atom_mollifier_eval(alpha, eps, x):
    """Gaussian bump ``exp(-(x-alpha)^2/eps)`` concentrating on the point alpha."""
    out = np.exp(-((np.asarray(x, dtype=float) - alpha) ** 2) / eps)
    return out if out.ndim else float(out)


def _bump_eval(x, alpha, beta, margin):
    """Rises from 0 at alpha-margin to 1 at alpha, falls from 1 at beta-margin to 0 at beta."""
    x = np.asarray(x, dtype=float)
    return smooth_step((x - (alpha - margin)) / margin) * smooth_step((beta - x) / margin)


def _poly_eval(x, coeffs, radius):
    x = np.asarray(x, dtype=float)
    # numpy's polyval wants descending order
    return np.polyval(np.asarray(coeffs)[::-1], x) * plateau(x, radius)


def _gauss_eval(x, center, width, freq):
    x = np.asarray(x, dtype=float)
    val = np.exp(-((x - center) ** 2) / (2.0 * width ** 2))
    if freq:
        val = val * np.exp(1j * freq * x)
    return val


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class QuadConfig:
    """Controls for turning a measure into a finite quadrature rule.

    Attributes
    ----------
    tail_tol : float or None
        Allowed |nu| mass outside the truncation, relative to fnorm.
        ``None`` keeps the function's own default.
    alias_tol : float
        Allowed aliasing contribution for trapezoid rules on closed-form
        densities.
    spacing_scale : float
        Multiplies the node spacing; 0.5 halves it.
    max_nodes : int
        Raise :class:`QuadratureBudgetExceeded` above this many nodes.
    """

    tail_tol: float | None = None
    alias_tol: float = 1e-13
    spacing_scale: float = 1.0
    max_nodes: int = 2 ** 16


@dataclass(frozen=True)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    error: float

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class PointMass:
    t: float = 0.0


@dataclass(frozen=True)
class GaussianDensity:
    """Density ``(w/sqrt(2 pi)) exp(-w^2 (t-freq)^2/2 - i (t-freq) center)``."""

    center: float
    width: float
    freq: float = 0.0


@dataclass(frozen=True, eq=False)
class SampledDensity:
    """Discrete measure on a uniform t-grid interpolating f on [lo, hi]."""

    nodes: np.ndarray
    weights: np.ndarray
    spacing: float
    lo: float
    hi: float
    samples: int
    error: float

    @property
    def half_width(self) -> float:
        return float(np.max(np.abs(self.nodes))) if len(self.nodes) else 0.0


@dataclass(frozen=True, eq=False)
class SumRep:
    terms: tuple  # ((coef, FourierFunction), ...)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FourierFunction:
    """A function f in the Fourier algebra, with its measure and norm.

    Call the instance to evaluate f pointwise.  Use :meth:`quadrature` to
    obtain nodes and weights for integrals against the measure.
    """

    kind: str
    params: Mapping = field(default_factory=dict)
    fnorm: float = 0.0
    rep: object = None
    conjugated: bool = False
    tail_tol: float = CLOSED_TAIL_TOL

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x):
        val = _evaluate_kind(self, x)
        if self.conjugated:
            val = np.conj(val)
        return val

    def inverse(self, x, config: QuadConfig | None = None):
        """Evaluate ``integral exp(i t x) d nu(t)`` using the stored measure."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        rule = self.quadrature(float(np.max(np.abs(x))), config)
        return np.exp(1j * np.outer(x, rule.nodes)) @ rule.weights

    @property
    def is_real(self) -> bool:
        if self.kind in ("unitary_phase",):
            return self.params["t"] == 0.0
        if self.kind in ("gaussian", "atom_mollifier"):
            return self.params.get("freq", 0.0) == 0.0
        if self.kind == "sum":
            return all(np.isreal(c) and f.is_real for c, f in self.rep.terms)
        if self.kind == "windowed_polynomial":
            return bool(np.all(np.isreal(self.params["coeffs"])))
        return True

    def polynomial(self):
        """(coefficients, radius) when f is a windowed polynomial, else None."""
        if self.kind != "windowed_polynomial":
            return None
        c = np.asarray(self.params["coeffs"], dtype=complex)
        if self.conjugated:
            c = c.conj()
        return c, float(self.params["radius"])

    # -- algebra ------------------------------------------------------------
    def conj(self) -> "FourierFunction":
        """The complex conjugate function; its measure is t -> -t, conjugated."""
        return replace(self, conjugated=not self.conjugated)

    def __mul__(self, c):
        return combine([(c, self)])

    __rmul__ = __mul__

    def __add__(self, other):
        return combine([(1.0, self), (1.0, other)])

    def __neg__(self):
        return combine([(-1.0, self)])

    def __sub__(self, other):
        return combine([(1.0, self), (-1.0, other)])

    # -- quadrature ---------------------------------------------------------
    def covers(self, R: float) -> bool:
        """True when the measure reproduces f on [-R, R]."""
        if isinstance(self.rep, SampledDensity):
            return self.rep.lo <= -R and self.rep.hi >= R
        if isinstance(self.rep, SumRep):
            return all(f.covers(R) for _, f in self.rep.terms)
        return True

    def with_cover(self, R: float) -> "FourierFunction":
        """Rebuild sampled representations so that they cover [-R, R]."""
        if self.covers(R):
            return self
        if isinstance(self.rep, SumRep):
            merged = combine([(c, f.with_cover(R)) for c, f in self.rep.terms])
            return replace(merged, conjugated=self.conjugated)
        rebuilt = fourier_measure(self.kind, cover=R, tail_tol=self.tail_tol, **self.params)
        return replace(rebuilt, conjugated=self.conjugated)

    def quadrature(self, R: float, config: QuadConfig | None = None) -> QuadRule:
        """Nodes and weights with ``sum w_k g(t_k) ~ integral g d nu``.

        Valid for every g that is a combination of ``exp(i t x)`` with
        ``|x| <= R``.  The returned error bounds the deviation measured
        against ``f`` on [-R, R], scaled to the unit sup-norm of g.
        """
        config = config or QuadConfig()
        ff = self.with_cover(R)
        nodes, weights, err = _rule(ff, R, config)
        if ff.conjugated:
            nodes, weights = -nodes, np.conj(weights)
        if len(nodes) > config.max_nodes:
            raise QuadratureBudgetExceeded(f"{len(nodes)} nodes exceed budget {config.max_nodes}")
        return QuadRule(np.asarray(nodes, float), np.asarray(weights, complex), float(err))


def _rule(ff: FourierFunction, R: float, config: QuadConfig):
    rep = ff.rep
    tol = config.tail_tol if config.tail_tol is not None else ff.tail_tol
    if isinstance(rep, PointMass):
        return np.array([rep.t]), np.array([1.0 + 0j]), 0.0
    if isinstance(rep, GaussianDensity):
        w, c, om = rep.width, rep.center, rep.freq
        reach = w * math.sqrt(2.0 * math.log(1.0 / config.alias_tol))
        h = 2.0 * math.pi / (R + abs(c) + reach) * config.spacing_scale
        half = math.sqrt(2.0) * float(erfcinv(tol)) / w
        k = int(math.ceil(half / h))
        t = om + h * np.arange(-k, k + 1)
        dens = (w / math.sqrt(2 * math.pi)) * np.exp(-(w ** 2) * (t - om) ** 2 / 2 - 1j * (t - om) * c)
        tail = float(erfc(w * (k * h) / math.sqrt(2.0)))
        # aliasing: nearest image of the Gaussian at distance 2 pi/h - R - |c|
        d = max(2.0 * math.pi / h - R - abs(c), 0.0)
        alias = 2.0 * math.exp(-(d ** 2) / (2 * w ** 2))
        return t, h * dens, tail + alias + 1e-13 * ff.fnorm
    if isinstance(rep, SampledDensity):
        if config.spacing_scale != 1.0:
            length = (rep.hi - rep.lo) / config.spacing_scale
            lo = min(rep.lo, -R)
            fresh = _sampled(lambda x: _evaluate_kind(ff, x), lo, lo + length, tol, MAX_SAMPLES)
            return fresh.nodes, fresh.weights, fresh.error
        return rep.nodes, rep.weights, rep.error
    if isinstance(rep, SumRep):
        ts, ws, err = [], [], 0.0
        for coef, f in rep.terms:
            q = f.quadrature(R, config)
            ts.append(q.nodes)
            ws.append(coef * q.weights)
            err += abs(coef) * q.error
        return np.concatenate(ts), np.concatenate(ws), err
    raise TypeError(f"no Fourier representation for kind {ff.kind!r}")


# ---------------------------------------------------------------------------
# construction


def _sampled(fn: Callable, lo: float, hi: float, tol: float, max_samples: int,
             min_samples: int = 1024) -> SampledDensity:
    """Refine an FFT sampling of fn on [lo, hi) until the spectrum has decayed."""
    length = hi - lo
    M = min_samples
    while True:
        dx = length / M
        x = lo + dx * np.arange(M)
        F = np.fft.fft(np.asarray(fn(x), dtype=complex))
        t = 2.0 * np.pi * np.fft.fftfreq(M, dx)
        w = np.exp(-1j * t * lo) * F / M
        mag = np.abs(w)
        total = float(mag.sum())
        high = float(mag[np.abs(t) > np.pi / (2 * dx)].sum())
        if total == 0.0 or high <= tol * total:
            break
        M *= 2
        if M > max_samples:
            raise TailTooHeavy(
                f"spectrum still carries {high / total:.2e} of its mass near Nyquist "
                f"at {M // 2} samples; budget {max_samples}"
            )
    order = np.argsort(np.abs(t), kind="stable")
    tail = np.cumsum(mag[order][::-1])[::-1]  # mass at and beyond each sorted index
    keep = np.searchsorted(-tail, -tol * max(total, 1e-300), side="right")
    keep = max(int(keep), 1)
    idx = np.sort(order[:keep])
    dropped = float(tail[keep]) if keep < len(tail) else 0.0
    return SampledDensity(
        nodes=t[idx], weights=w[idx], spacing=2 * np.pi / length, lo=lo, hi=hi,
        samples=M, error=dropped + high + 1e-13 * total,
    )


def _support(kind: str, p: Mapping, tol: float):
    if kind == "mollifier_window":
        reach = math.sqrt(p["eps"] * math.log(1.0 / (tol * 1e-6)))
        return p["alpha"] - reach, max(p["beta"], p["alpha"] + reach)
    if kind == "bump_window":
        return p["alpha"] - p["margin"], p["beta"]
    if kind in ("windowed_polynomial", "exponential_decay"):
        r = PLATEAU_RATIO * p["radius"]
        return -r, r
    raise KeyError(kind)


def _evaluate_kind(ff: FourierFunction, x):
    p = ff.params
    k = ff.kind
    if k == "unitary_phase":
        return np.exp(1j * p["t"] * np.asarray(x, dtype=float))
    if k == "gaussian":
        return _gauss_eval(x, p["center"], p["width"], p.get("freq", 0.0))
    if k == "atom_mollifier":
        return atom_mollifier_eval(p["alpha"], p["eps"], np.asarray(x, dtype=float))
    if k == "mollifier_window":
        return mollifier_eval(p["alpha"], p["beta"], p["eps"], np.asarray(x, dtype=float))
    if k == "bump_window":
        return _bump_eval(x, p["alpha"], p["beta"], p["margin"])
    if k == "windowed_polynomial":
        return _poly_eval(x, p["coeffs"], p["radius"])
    if k == "exponential_decay":
        x = np.asarray(x, dtype=float)
        return np.exp(-p["tau"] * x) * plateau(x, p["radius"])
    if k == "sum":
        return sum(c * f(x) for c, f in ff.rep.terms)
    raise KeyError(k)


_DEFAULTS = {
    "unitary_phase": {"t": 0.0},
    "gaussian": {"center": 0.0, "width": 1.0, "freq": 0.0},
    "atom_mollifier": {"alpha": 0.0, "eps": 1.0},
    "mollifier_window": {"alpha": 0.0, "beta": 1.0, "eps": 0.1},
    "bump_window": {},
    "windowed_polynomial": {},
    "exponential_decay": {"tau": 1.0},
}


def fourier_measure(kind: str, *, cover: float = 0.0, tail_tol: float | None = None,
                    max_samples: int = MAX_SAMPLES, **params) -> FourierFunction:
    """Build a FourierFunction of the given kind with its measure and fnorm.

    Parameters
    ----------
    kind : str
        One of ``unitary_phase``, ``gaussian``, ``modulated_gaussian``,
        ``atom_mollifier``, ``mollifier_window``, ``bump_window``,
        ``windowed_polynomial``, ``exponential_decay`` or an alias from
        :data:`KIND_ALIASES`.
    cover : float
        Sampled kinds reproduce f at least on [-cover, cover].
    tail_tol : float, optional
        Relative |nu| mass allowed beyond the truncation.
    max_samples : int
        Sampling budget; exceeding it raises :class:`TailTooHeavy`.
    """
    kind = KIND_ALIASES.get(kind, kind)
    if kind == "modulated_gaussian":
        kind = "gaussian"
    if kind not in _DEFAULTS:
        raise ValueError(f"unknown function kind {kind!r}")
    p = dict(_DEFAULTS[kind])
    p.update(params)
    _validate(kind, p)
    if kind == "unitary_phase":
        p["t"] = float(p["t"])
        return FourierFunction(kind, MappingProxyType(p), 1.0, PointMass(p["t"]))
    if kind == "gaussian":
        p = {k: float(v) for k, v in p.items()}
        rep = GaussianDensity(p["center"], p["width"], p["freq"])
        return FourierFunction(kind, MappingProxyType(p), 1.0, rep,
                               tail_tol=tail_tol or CLOSED_TAIL_TOL)
    if kind == "atom_mollifier":
        p = {k: float(v) for k, v in p.items()}
        rep = GaussianDensity(p["alpha"], math.sqrt(p["eps"] / 2.0))
        return FourierFunction(kind, MappingProxyType(p), 1.0, rep,
                               tail_tol=tail_tol or CLOSED_TAIL_TOL)
    tol = tail_tol or SAMPLED_TAIL_TOL
    lo, hi = _support(kind, p, tol)
    lo, hi = min(lo, -cover), max(hi, cover)
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    frozen_p = MappingProxyType(p)
    probe = FourierFunction(kind, frozen_p)
    rep = _sampled(lambda x: _evaluate_kind(probe, x), lo, hi, tol, max_samples)
    fnorm = float(np.abs(rep.weights).sum())
    return FourierFunction(kind, frozen_p, fnorm, rep, tail_tol=tol)


def _validate(kind, p):
    def positive(name):
        if not p.get(name, 0) > 0:
            raise ValueError(f"{kind}: parameter {name!r} must be > 0, got {p.get(name)!r}")

    if kind == "gaussian":
        positive("width")
    elif kind == "atom_mollifier":
        positive("eps")
    elif kind == "mollifier_window":
        positive("eps")
        if not p["alpha"] < p["beta"]:
            raise ValueError("mollifier_window: need alpha < beta")
    elif kind == "bump_window":
        for name in ("alpha", "beta", "margin"):
            if name not in p:
                raise ValueError(f"bump_window: missing {name!r}")
        positive("margin")
        if not p["alpha"] < p["beta"] - p["margin"]:
            raise ValueError("bump_window: need alpha < beta - margin")
    elif kind in ("windowed_polynomial", "exponential_decay"):
        positive("radius")
        if kind == "windowed_polynomial":
            c = np.atleast_1d(np.asarray(p.get("coeffs", ()), dtype=complex))
            if c.size == 0:
                raise ValueError("windowed_polynomial: empty coefficient list")
            p["coeffs"] = tuple(complex(v) if v.imag else float(v.real) for v in c)
        p["radius"] = float(p["radius"])


def window_extend(coeffs, radius: float, **kw) -> FourierFunction:
    """Polynomial (ascending coefficients) times a plateau equal to 1 on [-radius, radius]."""
    return fourier_measure("windowed_polynomial", coeffs=coeffs, radius=radius, **kw)


def gaussian(width: float = 1.0, center: float = 0.0, freq: float = 0.0) -> FourierFunction:
    return fourier_measure("gaussian", width=width, center=center, freq=freq)


def unit() -> FourierFunction:
    """The constant function 1, whose measure is the unit point mass at 0."""
    return fourier_measure("unitary_phase", t=0.0)


def combine(terms) -> FourierFunction:
    """Finite linear combination sum c_i f_i; fnorm is the triangle-inequality bound."""
    flat = []
    for c, f in terms:
        if f.kind == "sum" and not f.conjugated:
            flat.extend((c * c2, f2) for c2, f2 in f.rep.terms)
        else:
            flat.append((complex(c) if np.iscomplexobj(c) else float(c), f))
    fnorm = float(sum(abs(c) * f.fnorm for c, f in flat))
    return FourierFunction("sum", MappingProxyType({}), fnorm, SumRep(tuple(flat)))


# ---------------------------------------------------------------------------
# textual specs, e.g. "gaussian:width=1", "poly:coeffs=0,1"

KIND_ALIASES = {
    "phase": "unitary_phase",
    "unit": "unitary_phase",
    "gauss": "gaussian",
    "atom": "atom_mollifier",
    "mollifier": "mollifier_window",
    "bump": "bump_window",
    "poly": "windowed_polynomial",
    "exp_decay": "exponential_decay",
    "exp": "exponential_decay",
}


def parse_function_spec(text: str, radius: float | None = None, **extra) -> FourierFunction:
    """Parse ``kind:key=value,key=value``; bare values extend the previous key.

    ``radius`` supplies the window radius for polynomial and exponential
    kinds when the text omits it.
    """
    kind, _, rest = text.strip().partition(":")
    kind = KIND_ALIASES.get(kind.strip(), kind.strip())
    params: dict = {}
    key = None
    for token in filter(None, (s.strip() for s in rest.split(","))):
        if "=" in token:
            key, _, val = token.partition("=")
            key = key.strip()
            params[key] = [_number(val)]
        elif key is None:
            raise ValueError(f"value {token!r} has no key in function spec {text!r}")
        else:
            params[key].append(_number(token))
    resolved = {k: (v if k == "coeffs" else v[0] if len(v) == 1 else v) for k, v in params.items()}
    if kind in ("windowed_polynomial", "exponential_decay") and "radius" not in resolved:
        if radius is None:
            raise ValueError(f"{kind} needs a radius")
        resolved["radius"] = radius
    resolved.update(extra)
    return fourier_measure(kind, **resolved)


def _number(s: str):
    s = s.strip()
    try:
        return float(s)
    except ValueError:
        return complex(s.replace("i", "j"))
