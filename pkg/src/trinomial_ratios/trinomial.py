"""Closed-form objects attached to a trinomial ``D(t) = a t^k + b t^l + 1``.

Notation used throughout:

* ``alpha = (-1)^k b^k / a^l``, the invariant shared by every ratio of zeros;
* ``beta = k^k / (l^l (k-l)^(k-l))``, the value of ``g`` at 1;
* ``h(w) = (1-w^k)^k / ((1-w^l)^l (w^l-w^k)^(k-l))``, so that a ratio ``q`` of
  distinct zeros satisfies ``h(q) = alpha``;
* ``g`` is ``h`` restricted to the real line, with the removable value at 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .polyalg import ComplexPoly, RecurrenceSpec
from .rootfind import find_roots


class DomainError(ValueError):
    """Argument lies outside the domain of a closed-form expression."""


def _check_kl(k: int, l: int) -> None:
    if not (k > l >= 1 and math.gcd(k, l) == 1):
        raise ValueError(f"need coprime k > l >= 1, got k={k}, l={l}")


@dataclass(frozen=True)
class TrinomialSpec:
    a: complex
    b: complex
    k: int
    l: int

    def __post_init__(self):
        _check_kl(self.k, self.l)
        if self.a == 0:
            raise ValueError("leading coefficient a must be non-zero")

    def poly(self) -> ComplexPoly:
        c = np.zeros(self.k + 1, dtype=np.complex128)
        c[0] = 1.0
        c[self.l] = self.b
        c[self.k] = self.a
        return ComplexPoly(c)

    @property
    def alpha(self) -> complex:
        return (-1) ** self.k * self.b**self.k / self.a**self.l

    @property
    def beta(self) -> float:
        return beta_value(self.k, self.l)

    def __call__(self, t):
        return self.a * t**self.k + self.b * t**self.l + 1

    def to_dict(self) -> dict:
        return {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag], "k": self.k, "l": self.l}

    @classmethod
    def from_dict(cls, d: dict) -> "TrinomialSpec":
        return cls(complex(*d["a"]), complex(*d["b"]), int(d["k"]), int(d["l"]))


@dataclass(frozen=True)
class AlphaValue:
    alpha: complex
    is_real: bool
    beta: float


def beta_value(k: int, l: int) -> float:
    return k**k / (l**l * (k - l) ** (k - l))


def alpha_value(tri: TrinomialSpec, tol: float = 1e-9) -> AlphaValue:
    al = tri.alpha
    return AlphaValue(al, abs(al.imag) <= tol * (1 + abs(al)), tri.beta)


def specialize(spec: RecurrenceSpec, z0: complex, rel: float = 1e-12) -> TrinomialSpec:
    """``D(t; z0) = A(z0) t^k + B(z0) t^l + 1``."""
    a = spec.A(z0)
    scale = float(np.sum(np.abs(spec.A.coeffs) * abs(z0) ** np.arange(spec.A.coeffs.size)))
    if abs(a) <= rel * scale:
        raise DomainError("z0 in zero set of A")
    return TrinomialSpec(complex(a), complex(spec.B(z0)), spec.k, spec.l)


def _near_roots_of_unity(q: complex, n: int, tol: float) -> bool:
    if q == 0:
        return False
    j = round(cmath.phase(q) * n / (2 * math.pi))
    return abs(q - cmath.exp(2j * math.pi * j / n)) <= tol


def in_h_domain(q: complex, k: int, l: int, tol: float = 1e-12) -> bool:
    """Whether ``q`` lies in ``C minus (mu_l, mu_(k-l), 0)`` at tolerance ``tol``."""
    return not (abs(q) <= tol or _near_roots_of_unity(q, l, tol) or _near_roots_of_unity(q, k - l, tol))


def h_eval(q: complex, k: int, l: int) -> complex:
    if not in_h_domain(q, k, l):
        raise DomainError("pole/indeterminate point of h")
    q = complex(q)
    qk, ql = q**k, q**l
    return (1 - qk) ** k / ((1 - ql) ** l * (ql - qk) ** (k - l))


def g_eval(x: float, k: int, l: int) -> float:
    """Real restriction of ``h`` with ``g(1) = beta``."""
    x = float(x)
    if x == 1.0:
        return beta_value(k, l)
    if x == 0.0 or (x == -1.0 and (l % 2 == 0 or (k - l) % 2 == 0)):
        raise DomainError(f"g undefined at x={x}")
    return h_eval(x, k, l).real


def g_prime(q: float, k: int, l: int) -> float:
    """Closed-form derivative of ``g`` away from 0, +-1 and the real roots of unity."""
    q = float(q)
    if q in (0.0, 1.0, -1.0):
        raise DomainError(f"g' not evaluated at excluded point {q}")
    num = -((1 - q**k) ** (k - 1)) * q ** (l - 1) * (k - l + l * q**k - k * q**l) * ((k - l) * q**k - k * q ** (k - l) + l)
    den = (1 - q**l) ** (l + 1) * (q**l - q**k) ** (k - l + 1)
    if den == 0:
        raise DomainError(f"g' undefined at {q}")
    return num / den


def critical_polynomials(k: int, l: int) -> tuple[ComplexPoly, ComplexPoly]:
    """``(k-l) q^k - k q^(k-l) + l`` and its reciprocal ``(k-l) + l q^k - k q^l``."""
    p1 = np.zeros(k + 1)
    p1[k] += k - l
    p1[k - l] += -k
    p1[0] += l
    return ComplexPoly(p1), ComplexPoly(p1[::-1])


def g_critical_points(k: int, l: int, real_tol: float = 1e-9) -> list[float]:
    """Real roots other than 1 of the two critical polynomials, sorted and deduplicated."""
    _check_kl(k, l)
    out: list[float] = []
    for p in critical_polynomials(k, l):
        for r in find_roots(p).roots:
            if abs(r.imag) > real_tol * (1 + abs(r)) or abs(r - 1) <= 1e-6:
                continue
            x = r.real
            if all(abs(x - y) > 1e-9 * (1 + abs(y)) for y in out):
                out.append(x)
    return sorted(out)


def q_discriminant(tri: TrinomialSpec, q: complex) -> complex:
    """The q-discriminant of ``D``.

    Written with ``(1-q^k)^k / (q^k-1)^k = (-1)^k`` folded in, which gives

        sign * a^(k-1) b^(l-1) * f(q) / (1-q)^k,
        f(q) = (1-q^k)^k - alpha (1-q^l)^l (q^l-q^k)^(k-l).

    This has no spurious pole at the k-th roots of unity.
    """
    k, l = tri.k, tri.l
    if tri.b == 0:
        raise DomainError("q-discriminant formula requires B(z0)!=0")
    q = complex(q)
    if q == 1:
        raise DomainError("use classical_discriminant at q=1")
    sign = (-1) ** (k * (k + 3) // 2)
    qk, ql = q**k, q**l
    f = (1 - qk) ** k - tri.alpha * (1 - ql) ** l * (ql - qk) ** (k - l)
    return sign * tri.a ** (k - 1) * tri.b ** (l - 1) * f / (1 - q) ** k


def normalized_q_discriminant(tri: TrinomialSpec, q, dtype=np.clongdouble):
    """``q_discriminant(tri, q) / (a^(k-1) b^(l-1))`` evaluated in ``dtype``.

    Near ``|q| > 1`` the terms of ``f`` grow like ``|q|^(k^2)``, so the
    double-precision value at a double-rounded ratio can sit well above
    ``1e-8`` although the ratio is correct to the last bit. Passing an
    extended-precision ``q`` (see :func:`extended_roots`) avoids that.
    """
    k, l = tri.k, tri.l
    if tri.b == 0:
        raise DomainError("q-discriminant formula requires B(z0)!=0")
    a, b = dtype(tri.a), dtype(tri.b)
    q = dtype(q)
    if q == 1:
        raise DomainError("use classical_discriminant at q=1")
    alpha = (-1) ** k * b**k / a**l
    sign = (-1) ** (k * (k + 3) // 2)
    qk, ql = q**k, q**l
    f = (1 - qk) ** k - alpha * (1 - ql) ** l * (ql - qk) ** (k - l)
    return sign * f / (1 - q) ** k


def extended_roots(tri: TrinomialSpec, roots, iterations: int = 4, dtype=np.clongdouble) -> np.ndarray:
    """Newton-polish double-precision zeros of ``D`` in ``dtype``."""
    a, b = dtype(tri.a), dtype(tri.b)
    k, l = tri.k, tri.l
    t = np.asarray(roots).astype(dtype)
    for _ in range(iterations):
        d = a * t**k + b * t**l + 1
        dd = k * a * t ** (k - 1) + l * b * t ** (l - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = d / dd
        ok = np.isfinite(step) & (np.abs(step) < 1e-3 * np.abs(t))
        t = np.where(ok, t - step, t)
    return t


def q_discriminant_scale(tri: TrinomialSpec) -> float:
    """``|a|^(k-1) |b|^(l-1)``, the natural size of the q-discriminant."""
    return abs(tri.a) ** (tri.k - 1) * abs(tri.b) ** (tri.l - 1)


def q_discriminant_limit(tri: TrinomialSpec) -> complex:
    """Closed form of ``lim_{q->1}`` of :func:`q_discriminant`.

    Equals ``b^(l-1)`` times :func:`classical_discriminant`.
    """
    k, l = tri.k, tri.l
    sign = (-1) ** (k * (k + 3) // 2)
    return sign * tri.a ** (k - 1) * tri.b ** (l - 1) * k**k * (1 - tri.alpha / tri.beta)


def classical_discriminant(tri: TrinomialSpec) -> complex:
    """``a^(2k-2) prod_{i<j} (t_i - t_j)^2`` in closed form.

    Vanishes exactly when ``D`` has a repeated zero, including when ``b = 0``.
    """
    k = tri.k
    sign = (-1) ** (k * (k - 1) // 2)
    return sign * tri.a ** (k - 1) * k**k * (1 - tri.alpha / tri.beta)


def omega_expected(alpha: complex, k: int, l: int, rel: float = 1e-9) -> int:
    """Number of distinct real ratios of distinct zeros, as a function of ``alpha``.

    ``alpha == beta`` and (k even) ``alpha == 0`` are decided at relative
    tolerance ``rel`` against ``beta``.
    """
    _check_kl(k, l)
    al = complex(alpha)
    if abs(al.imag) > 1e-9 * (1 + abs(al)):
        raise DomainError("alpha must be real")
    a = al.real
    beta = beta_value(k, l)
    at_beta = abs(a - beta) <= rel * beta
    if k % 2:
        if at_beta:
            return 2
        return 0 if a < beta else 6
    if abs(a) <= rel * beta:
        return 1
    if a < 0 or (a > beta and not at_beta):
        return 2
    return 0


def omega_caveat(alpha: float, k: int, l: int, rel: float = 1e-9) -> str | None:
    beta = beta_value(k, l)
    if abs(alpha - beta) <= rel * beta:
        return "alpha == beta: the real ratio q = 1 also occurs but comes from a repeated zero"
    return None


def _f_integer_parts(k: int, l: int) -> tuple[list[int], list[int]]:
    """Exact integer coefficients of ``(1-w^k)^k`` and ``(1-w^l)^l (w^l-w^k)^(k-l)``."""

    def mul(p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            if x:
                for j, y in enumerate(q):
                    out[i + j] += x * y
        return out

    def power(p, e):
        out = [1]
        for _ in range(e):
            out = mul(out, p)
        return out

    one_minus_wk = [1] + [0] * (k - 1) + [-1]
    one_minus_wl = [1] + [0] * (l - 1) + [-1]
    wl_minus_wk = [0] * l + [1] + [0] * (k - l - 1) + [-1]
    first = power(one_minus_wk, k)
    second = mul(power(one_minus_wl, l), power(wl_minus_wk, k - l))
    return first, second


def f_polynomial(alpha: complex, k: int, l: int) -> ComplexPoly:
    """``f(w) = (1-w^k)^k - alpha (1-w^l)^l (w^l-w^k)^(k-l)``, degree ``k^2``."""
    first, second = _f_integer_parts(k, l)
    c = np.zeros(k * k + 1, dtype=np.complex128)
    c[: len(first)] += np.array(first, dtype=float)
    c[: len(second)] -= complex(alpha) * np.array(second, dtype=float)
    return ComplexPoly(c)


def ratio_polynomial(alpha: complex, k: int, l: int, rel: float = 1e-9) -> ComplexPoly:
    """``H(w) = f(w) / (1-w)^k``, of degree ``k^2 - k``; its zeros are the candidate ratios."""
    _check_kl(k, l)
    beta = beta_value(k, l)
    if abs(complex(alpha) - beta) <= rel * beta:
        raise DomainError("degenerate: repeated-zero boundary (alpha == g(1))")
    f = f_polynomial(alpha, k, l)
    c = f.coeffs[::-1].copy()  # descending for synthetic division
    scale = float(np.max(np.abs(c)))
    for _ in range(k):
        out = np.empty(c.size - 1, dtype=np.complex128)
        acc = 0j
        for i in range(c.size - 1):
            acc = acc * 1 + c[i]
            out[i] = acc
        rem = acc * 1 + c[-1]
        if abs(rem) > 1e-9 * scale:
            raise ArithmeticError(f"w=1 is not a root of multiplicity {k}: remainder {abs(rem):.3g}")
        c = out
    # divided by (w-1)^k; rescale to the (1-w)^k normalisation
    return ComplexPoly(c[::-1] * (-1) ** k)


@dataclass(frozen=True)
class RotationPlan:
    """``Y = exp(i pi lam) t`` turns ``D`` into a real trinomial ``rotated``.

    Phases are in units of pi. ``gamma`` is the integer with
    ``(k-l) lam = beta_phase - theta_phase + gamma``.
    """

    lam: float
    beta_phase: float
    theta_phase: float
    gamma: int
    rotated: TrinomialSpec
    branch: str


def _is_real(z: complex, tol: float) -> bool:
    return abs(z.imag) <= tol * (1 + abs(z))


def rotate_to_real(tri: TrinomialSpec, tol: float = 1e-9) -> RotationPlan:
    """Find ``lam`` making both coefficients of ``D(exp(-i pi lam) Y)`` real.

    The lambda formula with ``gamma`` in {-1, 0, 1} is tried first, over both
    branches of each phase. If that fails, all solutions of the congruences
    ``k lam = beta (mod 1)``, ``l lam = theta (mod 1)`` are scanned.
    """
    k, l = tri.k, tri.l
    if tri.b == 0:
        raise DomainError("rotation needs b != 0")
    al = tri.alpha
    if not _is_real(al, tol):
        raise DomainError("alpha is not real; rotation failed")
    bph = cmath.phase(tri.a) / math.pi
    tph = cmath.phase(tri.b) / math.pi

    def attempt(lam: float):
        a2 = tri.a * cmath.exp(-1j * math.pi * k * lam)
        b2 = tri.b * cmath.exp(-1j * math.pi * l * lam)
        if _is_real(a2, tol) and _is_real(b2, tol):
            return a2, b2
        return None

    candidates = []
    for gamma in (0, -1, 1):
        for db in (0.0, 2.0):
            for dt in (0.0, 2.0):
                lam = ((bph + db) - (tph + dt) + gamma) / (k - l)
                candidates.append((lam, "phase-formula"))
    for m in range(2 * k):
        candidates.append(((bph + m) / k, "congruence"))
    for lam, branch in candidates:
        got = attempt(lam)
        if got is None:
            continue
        lam_n = math.remainder(lam, 2.0)
        g0 = round((k - l) * lam_n - bph + tph)
        # theta is a phase mod 2; pick its branch so that gamma lands in {-1, 0, 1}
        shift = round(g0 / 2)
        a2, b2 = got
        rot = TrinomialSpec(complex(a2.real, 0.0), complex(b2.real, 0.0), k, l)
        return RotationPlan(lam_n, bph, tph - 2 * shift, int(g0 - 2 * shift), rot, branch)
    raise DomainError("rotation failed: no lambda makes both coefficients real")
