"""Dense complex polynomials and the three-term recurrence

    P_n + B P_{n-l} + A P_{n-k} = 0,   P_0 = 1,  P_{-1} = ... = P_{1-k} = 0.

Coefficients are stored in ascending order (index i holds the coefficient of z^i).
Trimming removes only coefficients that are exactly zero; no epsilon is applied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class ComplexPoly:
    """Immutable dense polynomial over complex doubles, ascending degree.

    The zero polynomial is stored canonically as a single ``0j`` coefficient
    and has degree -1.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = (0j,)):
        c = np.array(coeffs, dtype=np.complex128).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=np.complex128)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def constant(cls, value: complex) -> "ComplexPoly":
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coef: complex = 1.0) -> "ComplexPoly":
        c = np.zeros(degree + 1, dtype=np.complex128)
        c[degree] = coef
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def is_zero(self) -> bool:
        return self._c.size == 1 and self._c[0] == 0

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else self._c.size - 1

    @property
    def leading(self) -> complex:
        return complex(self._c[-1])

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self._c)))

    def __add__(self, other: "ComplexPoly | complex") -> "ComplexPoly":
        return poly_add(self, _as_poly(other))

    __radd__ = __add__

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self._c)

    def __sub__(self, other: "ComplexPoly | complex") -> "ComplexPoly":
        return poly_add(self, -_as_poly(other))

    def __rsub__(self, other: complex) -> "ComplexPoly":
        return poly_add(_as_poly(other), -self)

    def __mul__(self, other: "ComplexPoly | complex") -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return poly_mul(self, other)
        return ComplexPoly(self._c * complex(other))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ComplexPoly":
        if e < 0:
            raise ValueError("negative powers are not polynomials")
        out = ComplexPoly([1.0])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, z):
        return poly_eval(self, z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self) -> int:
        return hash(self._c.tobytes())

    def __repr__(self) -> str:
        return f"ComplexPoly({self._c.tolist()!r})"

    def derivative(self, order: int = 1) -> "ComplexPoly":
        c = self._c
        for _ in range(order):
            if c.size <= 1:
                return ComplexPoly()
            c = c[1:] * np.arange(1, c.size)
        return ComplexPoly(c)

    def to_pairs(self) -> list[list[float]]:
        return [[float(v.real), float(v.imag)] for v in self._c]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "ComplexPoly":
        if not isinstance(pairs, (list, tuple)) or not pairs:
            raise ValueError("polynomial literal must be a non-empty array of [re, im] pairs")
        out = []
        for p in pairs:
            if not isinstance(p, (list, tuple)) or len(p) != 2:
                raise ValueError(f"bad coefficient entry {p!r}; expected [re, im]")
            re, im = p
            if isinstance(re, bool) or isinstance(im, bool):
                raise ValueError(f"bad coefficient entry {p!r}")
            out.append(complex(float(re), float(im)))
        return cls(out)

    @classmethod
    def from_json(cls, text: str) -> "ComplexPoly":
        """Parse the ``[[re, im], ...]`` literal used on the command line."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from None
        return cls.from_pairs(data)

    def to_json(self) -> str:
        return json.dumps(self.to_pairs())


def _as_poly(x: "ComplexPoly | complex") -> ComplexPoly:
    return x if isinstance(x, ComplexPoly) else ComplexPoly([x])


def poly_add(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    a, b = p.coeffs, q.coeffs
    if a.size < b.size:
        a, b = b, a
    out = a.copy()
    out[: b.size] += b
    return ComplexPoly(out)


def poly_mul(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    if p.is_zero or q.is_zero:
        return ComplexPoly()
    return ComplexPoly(np.convolve(p.coeffs, q.coeffs))


def poly_eval(p: ComplexPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = p.coeffs
    acc = np.zeros_like(np.asarray(z, dtype=np.complex128)) + c[-1]
    for coef in c[-2::-1]:
        acc = acc * z + coef
    if np.ndim(acc) == 0:
        return complex(acc)
    return acc


@dataclass(frozen=True)
class RecurrenceSpec:
    """The data (A, B, k, l) of ``P_n + B P_{n-l} + A P_{n-k} = 0``."""

    A: ComplexPoly
    B: ComplexPoly
    k: int
    l: int

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        k, l = self.k, self.l
        if not (isinstance(k, int) and isinstance(l, int)):
            raise ValueError("k and l must be integers")
        if not k > l >= 1:
            raise ValueError("k and l must satisfy k > l >= 1")
        if math.gcd(k, l) != 1:
            raise ValueError("k and l must be coprime")
        if self.A.is_zero or self.B.is_zero:
            raise ValueError("A and B must be non-zero polynomials")
        if self.A.degree + self.B.degree < 1:
            raise ValueError("deg(A*B) must be at least 1")

    def to_dict(self) -> dict:
        return {"A": self.A.to_pairs(), "B": self.B.to_pairs(), "k": self.k, "l": self.l}

    @classmethod
    def from_dict(cls, d: dict) -> "RecurrenceSpec":
        return cls(ComplexPoly.from_pairs(d["A"]), ComplexPoly.from_pairs(d["B"]), int(d["k"]), int(d["l"]))


def _run_recurrence(A: ComplexPoly, B: ComplexPoly, r: int, s: int, n_max: int) -> list[ComplexPoly]:
    zero = ComplexPoly()
    seq = [ComplexPoly([1.0])]

    def back(j: int) -> ComplexPoly:
        return seq[j] if j >= 0 else zero

    for n in range(1, n_max + 1):
        seq.append(-(B * back(n - r)) - A * back(n - s))
    return seq


def generate_sequence(spec: RecurrenceSpec, n_max: int) -> list[ComplexPoly]:
    """Return ``[P_0, ..., P_{n_max}]``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return _run_recurrence(spec.A, spec.B, spec.l, spec.k, n_max)


def expand_non_coprime(spec: RecurrenceSpec, d: int, m_max: int) -> list[ComplexPoly]:
    """Run the recurrence with shifts ``(l*d, k*d)``; returns ``[R_0, ..., R_{m_max}]``.

    ``R_m`` equals ``P_{m/d}`` when ``d`` divides ``m`` and vanishes otherwise.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    return _run_recurrence(spec.A, spec.B, spec.l * d, spec.k * d, m_max)


def recurrence_residual(spec: RecurrenceSpec, seq: Sequence[ComplexPoly], n: int) -> float:
    """Largest coefficient of ``P_n + B P_{n-l} + A P_{n-k}``."""
    zero = ComplexPoly()

    def back(j: int) -> ComplexPoly:
        return seq[j] if j >= 0 else zero

    r = seq[n] + spec.B * back(n - spec.l) + spec.A * back(n - spec.k)
    return r.max_abs_coeff()


def generating_function_check(spec: RecurrenceSpec, z: complex, t: complex, n_terms: int) -> float:
    """``|(sum_{n<=n_terms} P_n(z) t^n) * D(t; z) - 1|``.

    Only meaningful for ``|t| <= 0.1 / (1 + |A(z)| + |B(z)|)``, where the
    series converges geometrically.
    """
    seq = generate_sequence(spec, n_terms)
    s = 0j
    tn = 1 + 0j
    for p in seq:
        s += p(z) * tn
        tn *= t
    d = spec.A(z) * t**spec.k + spec.B(z) * t**spec.l + 1
    return abs(s * d - 1)


def safe_t_radius(spec: RecurrenceSpec, z: complex) -> float:
    return 0.1 / (1 + abs(spec.A(z)) + abs(spec.B(z)))
