"""Simultaneous (Aberth-Ehrlich) root finding with residual certification.

All zeros are found at once from a fixed starting constellation, so the output
is a deterministic function of the input coefficients and the options.

After the iteration converges, the roots go through a cluster pass.
Numerically multiple roots (e.g. ``B(z)^4`` factors of a sequence polynomial)
come out of any double-precision solver as a small ring of roots with radius
about ``eps**(1/m)``. A group is *merged* when its centroid is an m-fold root
up to rounding-level backward error. It is *flagged* when it is only close
to being one (near-double zeros at a discriminant boundary, for instance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polyalg import ComplexPoly

EPS = np.finfo(float).eps


class RootFindingError(RuntimeError):
    """Aberth iteration failed to certify every root."""

    def __init__(self, msg: str, best: np.ndarray, residuals: np.ndarray):
        super().__init__(msg)
        self.best = best
        self.residuals = residuals


@dataclass(frozen=True)
class SolverOptions:
    step_tol: float = 1e-13
    max_sweeps: int = 500
    tau_root: float = 1e-10
    # pair distance below which two roots are always flagged
    cluster_dist: float = 1e-7
    # backward error (relative coefficient perturbation) for flagging / merging a group
    cluster_backward: float = 1e-9
    merge_backward: float = 1e-12
    max_cluster: int = 12
    # largest cluster radius considered, relative to 1 + |centre|
    cluster_radius: float = 0.05
    radius_factor: float = 0.9
    # "newton_polygon" (default) or "cauchy": one circle at radius_factor * cauchy_bound
    init: str = "newton_polygon"
    angle_offset: float = 0.4
    polish: bool = True
    # a root stops moving once |p| is within noise_factor times the evaluation noise
    noise_factor: float = 4.0


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    multiplicity_flags: tuple[bool, ...]
    source_degree: int
    sweeps: int = 0
    clusters: tuple[tuple[int, ...], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.roots)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=np.complex128)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def to_dict(self) -> dict:
        return {
            "roots": [[r.real, r.imag] for r in self.roots],
            "residuals": list(self.residuals),
            "multiplicity_flags": list(self.multiplicity_flags),
            "source_degree": self.source_degree,
            "sweeps": self.sweeps,
            "clusters": [list(g) for g in self.clusters],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RootSet":
        return cls(
            tuple(complex(*r) for r in d["roots"]),
            tuple(d["residuals"]),
            tuple(d["multiplicity_flags"]),
            d["source_degree"],
            d.get("sweeps", 0),
            tuple(tuple(g) for g in d.get("clusters", [])),
        )


def cauchy_bound(p: ComplexPoly) -> float:
    """``1 + max_{i<n} |c_i| / |c_n|``; every root has modulus below it."""
    if p.degree < 1:
        raise ValueError("no roots to bound")
    c = p.coeffs
    return 1.0 + float(np.max(np.abs(c[:-1]))) / abs(c[-1])


class PolyEvaluator:
    """p, p' and a rounding-noise estimate ``eps * sum |c_i| |x|^i`` from coefficients.

    Sparse inputs (the trinomials) are evaluated term by term with direct
    powers; dense ones with Horner.
    """

    def __init__(self, coeffs: np.ndarray):
        self.c = np.asarray(coeffs, dtype=np.complex128)
        self.n = self.c.size - 1
        nz = np.flatnonzero(self.c)
        self.sparse = nz.size <= max(3, (self.n + 1) // 4)
        self.idx = nz
        self.absc = np.abs(self.c)
        self.cmax = float(self.absc.max())

    def __call__(self, x: np.ndarray):
        p, dp, s = _horner(self.c, self.absc, np.asarray(x, dtype=np.complex128), self.idx if self.sparse else None)
        return p, dp, EPS * s

    def residual(self, x: np.ndarray) -> np.ndarray:
        """``|p(x)| / (max|c_i| * max(1, |x|)^deg)``."""
        p, _, _ = self(x)
        return np.abs(p) / (self.cmax * np.maximum(1.0, np.abs(x)) ** self.n)

    def taylor(self, c0: complex, order: int):
        """Taylor coefficients ``p^(j)(c0)/j!`` for ``j <= order`` with their noise estimates."""
        t, s = _taylor(self.c, self.absc, c0, order)
        return t, EPS * s


def _horner(c: np.ndarray, absc: np.ndarray, x: np.ndarray, sparse_idx=None):
    """Value, derivative and ``sum |c_i| |x|^i``, in the dtype of ``x``."""
    ax = np.abs(x)
    if sparse_idx is not None:
        p = np.zeros_like(x)
        dp = np.zeros_like(x)
        s = np.zeros(x.shape, dtype=ax.dtype)
        for i in sparse_idx:
            ci = c[i]
            p += ci * x**i
            s += absc[i] * ax**i
            if i > 0:
                dp += i * ci * x ** (i - 1)
        return p, dp, s
    n = c.size - 1
    p = np.full_like(x, c[-1])
    dp = np.zeros_like(x)
    s = np.full(x.shape, absc[-1], dtype=ax.dtype)
    for j in range(n - 1, -1, -1):
        dp = dp * x + p
        p = p * x + c[j]
        s = s * ax + absc[j]
    return p, dp, s


def _taylor(c: np.ndarray, absc: np.ndarray, c0, order: int):
    t = np.zeros(order + 1, dtype=c.dtype)
    s = np.zeros(order + 1, dtype=absc.dtype)
    t[0] = c[-1]
    s[0] = absc[-1]
    ac0 = abs(c0)
    for j in range(c.size - 2, -1, -1):
        # multiply the series by (c0 + h), then add c_j
        t[1:] = t[1:] * c0 + t[:-1]
        t[0] = t[0] * c0 + c[j]
        s[1:] = s[1:] * ac0 + s[:-1]
        s[0] = s[0] * ac0 + absc[j]
    return t, s


_XEPS = float(np.finfo(np.longdouble).eps)
# the noise estimate below needs a wider type than double
HAS_EXTENDED = _XEPS < EPS / 2


class RecurrenceEvaluator:
    """Evaluates ``P_n`` of a three-term recurrence by running the recurrence
    pointwise instead of expanding coefficients.

    The expanded coefficients of ``P_n`` lose accuracy quickly with ``n``; the
    pointwise recurrence does not. Values are computed in extended precision
    (``np.longdouble``) and the rounding noise is estimated from the gap to a
    double-precision run, scaled by the ratio of the two unit roundoffs. On
    platforms without a wider long double the absolute-value bound is used.

    All outputs for one point share an unspecified positive power-of-two
    factor: the history is rescaled as it runs so that large ``n`` neither
    overflows nor underflows. Every consumer only uses ratios.
    """

    def __init__(self, A: ComplexPoly, B: ComplexPoly, k: int, l: int, n: int):
        self.A, self.B = A.coeffs, B.coeffs
        self.k, self.l, self.steps = k, l, n

    def _coeff_series(self, x, dtype, order):
        ca, cb = self.A.astype(dtype), self.B.astype(dtype)
        if order is None:
            a, da, sa = _horner(ca, np.abs(ca), x)
            b, db, sb = _horner(cb, np.abs(cb), x)
            return (a, da), (b, db), sa, sb
        ta, sa = _taylor(ca, np.abs(ca), x, order)
        tb, sb = _taylor(cb, np.abs(cb), x, order)
        return ta, tb, sa, sb

    def _run(self, x, order=None):
        """Run the recurrence on truncated power series in ``h`` around ``x``.

        ``order=None`` means value and derivative at every point of the array
        ``x``, returned as pairs; otherwise ``x`` is a scalar and the series
        goes to ``order``. Returns double values, extended values (or None)
        and the absolute-value bound, all with the same rescaling.
        """
        dtypes = [np.complex128] + ([np.clongdouble] if HAS_EXTENDED else [])
        series = [self._coeff_series(np.asarray(x).astype(dt), dt, order) for dt in dtypes]
        sa, sb = series[0][2], series[0][3]
        k, l = self.k, self.l
        if order is None:
            def step(ta, tb, pl, pk):
                (a, da), (b, db) = ta, tb
                return (-b * pl[0] - a * pk[0], -db * pl[0] - b * pl[1] - da * pk[0] - a * pk[1])

            def step_s(sl, sk):
                return sb * sl + sa * sk

            def scaled(v, f):
                return (v[0] * f, v[1] * f)

            def start(dt, one):
                z = np.zeros(np.shape(x), dtype=dt)
                return (z + one, z), (z, z)

            s_start = (np.ones(np.shape(x)), np.zeros(np.shape(x)))
            top_of = lambda v: v
        else:
            n_terms = order + 1

            def step(ta, tb, pl, pk):
                return -np.convolve(tb, pl)[:n_terms] - np.convolve(ta, pk)[:n_terms]

            def step_s(sl, sk):
                return np.convolve(sb, sl)[:n_terms] + np.convolve(sa, sk)[:n_terms]

            def scaled(v, f):
                return v * f

            def start(dt, one):
                z = np.zeros(n_terms, dtype=dt)
                o = z.copy()
                o[0] = one
                return o, z

            s_start = tuple(v.real for v in start(np.float64, 1.0))
            top_of = lambda v: v[0]
        hists = []
        for dt in dtypes:
            one, zero = start(dt, 1)
            hists.append([zero] * (k - 1) + [one])
        s_hist = [s_start[1]] * (k - 1) + [s_start[0]]
        for _ in range(self.steps):
            for (ta, tb, _, _), h in zip(series, hists):
                h.append(step(ta, tb, h[-l], h[-k]))
                del h[0]
            s_hist.append(step_s(s_hist[-l], s_hist[-k]))
            del s_hist[0]
            top = top_of(s_hist[-1])
            if np.any((top > 1e150) | ((top < 1e-150) & (top > 0))):
                # exact power-of-two rescaling, identical in both precisions
                e = np.frexp(np.where(top > 0, top, 1.0))[1]
                f = np.ldexp(1.0, -e)
                s_hist = [v * f for v in s_hist]
                for h in hists:
                    fd = np.asarray(f).astype(np.real(h[-1][0]).dtype)
                    h[:] = [scaled(v, fd) for v in h]
        p = hists[0][-1]
        px = hists[1][-1] if HAS_EXTENDED else None
        return p, px, s_hist[-1]

    def _finish(self, p, px, s):
        if px is None:
            return p, EPS * s
        gap = np.abs(px - p).astype(float)
        px = px.astype(np.complex128)
        return px, gap * (_XEPS / EPS) + EPS * np.abs(px)

    def __call__(self, x: np.ndarray):
        x = np.asarray(x, dtype=np.complex128)
        p, px, s = self._run(x)
        val, noise = self._finish(p[0], None if px is None else px[0], s)
        dval = (px[1] if px is not None else p[1]).astype(np.complex128)
        return val, dval, noise

    def residual(self, x: np.ndarray) -> np.ndarray:
        """``|P_n(x)| / sum``-of-absolute-values bound of the recurrence."""
        p, px, s = self._run(np.asarray(x, dtype=np.complex128))
        val = px[0] if px is not None else p[0]
        return np.abs(val).astype(float) / s

    def taylor(self, c0: complex, order: int):
        p, px, s = self._run(complex(c0), order)
        return self._finish(p, px, s)


class _Deflated:
    """``p(x) / x^m`` for an evaluator of ``p`` with an exact m-fold root at 0.

    The common factor ``x^-m`` is dropped, as only ratios are used.
    """

    def __init__(self, ev, m: int):
        self.ev, self.m = ev, m

    def __call__(self, x: np.ndarray):
        p, dp, noise = self.ev(x)
        return p, dp - self.m * p / x, noise

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.ev.residual(x)

    def taylor(self, c0: complex, order: int):
        if c0 == 0:
            t, noise = self.ev.taylor(0j, self.m + order)
            return t[self.m :], noise[self.m :]
        t, noise = self.ev.taylor(c0, order)
        # series of (1 + h/c0)^(-m)
        j = np.arange(order + 1)
        binom = np.array([math.comb(self.m + i - 1, i) for i in j], dtype=float)
        inv = binom * (-1.0 / complex(c0)) ** j
        return np.convolve(t, inv)[: order + 1], np.convolve(noise, np.abs(inv))[: order + 1]


def _aberth(ev, c: np.ndarray, opts: SolverOptions):
    n = c.size - 1
    if n == 1:
        return np.array([-c[0] / c[1]]), 0, True
    if opts.init == "cauchy":
        radius = np.full(n, opts.radius_factor * cauchy_bound(ComplexPoly(c)))
        angles = 2 * np.pi * np.arange(n) / n + opts.angle_offset
    else:
        radius, angles = _newton_polygon_start(c, opts.angle_offset)
    x = radius * np.exp(1j * angles)
    active = np.ones(n, dtype=bool)
    sweeps = 0
    for sweeps in range(1, opts.max_sweeps + 1):
        idx = np.flatnonzero(active)
        xa = x[idx]
        p, dp, noise = ev(xa)
        at_noise = np.abs(p) <= opts.noise_factor * (noise + EPS * np.abs(xa) * np.abs(dp))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(at_noise, 0, p / dp)
            diff = xa[:, None] - x[None, :]
            diff[np.arange(idx.size), idx] = np.inf
            repulse = np.sum(1.0 / diff, axis=1)
            w = ratio / (1 - ratio * repulse)
        bad = ~np.isfinite(w)
        if bad.any():
            # stationary point of p: nudge instead of dividing by zero
            w[bad] = 1e-3 * (1 + np.abs(xa[bad])) * np.exp(1j * (angles[idx[bad]] + sweeps))
        x[idx] = xa - w
        small = np.abs(w) <= opts.step_tol * (1 + np.abs(x[idx]))
        active[idx[small | at_noise]] = False
        if not active.any():
            return x, sweeps, True
    return x, sweeps, False


def _newton_polygon_start(c: np.ndarray, offset: float):
    """Starting circles from the upper convex hull of ``(i, log|c_i|)``.

    Each hull edge from ``i`` to ``j`` contributes ``j - i`` points on a circle
    of radius ``(|c_i|/|c_j|)^(1/(j-i))``, the classical estimate of the moduli
    of that many roots.
    """
    n = c.size - 1
    ac = np.abs(c)
    idx = np.flatnonzero(ac)
    logs = np.log(ac[idx])
    hull: list[int] = []
    for t in range(idx.size):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 if it lies on or below the chord from i0 to t
            cross = (idx[i1] - idx[i0]) * (logs[t] - logs[i0]) - (logs[i1] - logs[i0]) * (idx[t] - idx[i0])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(t)
    radius = np.empty(n)
    angles = np.empty(n)
    pos = 0
    for a, b in zip(hull[:-1], hull[1:]):
        i, j = idx[a], idx[b]
        cnt = j - i
        u = np.exp((logs[a] - logs[b]) / cnt)
        radius[pos : pos + cnt] = u
        angles[pos : pos + cnt] = 2 * np.pi * np.arange(cnt) / cnt + 2 * np.pi * i / n + offset
        pos += cnt
    return radius, angles


def refine_root(p: ComplexPoly, x0: complex, max_iter: int = 50) -> complex:
    """Plain Newton iteration from ``x0``."""
    ev = PolyEvaluator(p.coeffs)
    x = complex(x0)
    for _ in range(max_iter):
        pv, dv, _ = ev(np.array([x]))
        pv, dv = complex(pv[0]), complex(dv[0])
        if pv == 0:
            return x
        if dv == 0:
            raise ZeroDivisionError("stationary point")
        step = pv / dv
        x -= step
        if abs(step) <= 1e-15 * (1 + abs(x)):
            break
    return x


def _polish(ev, x: np.ndarray, skip: np.ndarray) -> np.ndarray:
    """Guarded Newton: keep a step only if it shrinks the residual and stays local."""
    x = x.copy()
    if x.size < 2:
        gap = np.full(x.shape, np.inf)
    else:
        d = np.abs(x[:, None] - x[None, :])
        np.fill_diagonal(d, np.inf)
        gap = d.min(axis=1)
    for _ in range(3):
        p, dp, s = ev(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = p / dp
        y = x - step
        py, _, _ = ev(y)
        ok = (~skip) & np.isfinite(step) & (np.abs(py) < np.abs(p)) & (np.abs(step) < 0.1 * gap)
        if not ok.any():
            break
        x[ok] = y[ok]
    return x


def _taylor_backward(ev, center: complex, m: int) -> float:
    """How far ``center`` is from being an m-fold root, in units of relative rounding.

    Each Taylor coefficient ``p^(j)(center)/j!`` for ``j < m`` is compared with
    its evaluation noise; the result is ``eps * |t_j| / noise_j`` at worst, so
    a value near ``eps`` means the coefficient is pure rounding.
    """
    t, noise = ev.taylor(center, m)
    # rounding of the centre itself moves t_j by about (j+1) t_{j+1} eps |center|
    j = np.arange(m)
    noise = noise[:m] + (j + 1) * np.abs(t[1:]) * EPS * abs(center)
    t = t[:m]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(noise > 0, EPS * np.abs(t) / noise, 0.0)
    return float(np.max(r))


def _clusters(ev, x: np.ndarray, opts: SolverOptions):
    """Return (groups, merged_centres); groups are disjoint index tuples."""
    n = x.size
    if n < 2:
        return [], {}
    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1)
    scale = 1 + np.abs(x)
    nn = d.min(axis=1)
    candidates = np.flatnonzero(nn <= 2 * opts.cluster_radius * scale)
    found: list[tuple[frozenset, float, complex]] = []
    for i in candidates:
        best = None
        for m in range(2, min(opts.max_cluster, n) + 1):
            members = np.concatenate(([i], order[i, : m - 1]))
            ctr = complex(np.mean(x[members]))
            rad = float(np.max(np.abs(x[members] - ctr)))
            if rad > opts.cluster_radius * (1 + abs(ctr)):
                break
            outside = np.setdiff1d(np.arange(n), members)
            if outside.size:
                sep = float(np.min(np.abs(x[outside] - ctr)))
                if sep <= 3 * rad:
                    continue
            tight = m == 2 and d[members[0], members[1]] <= opts.cluster_dist * (1 + abs(ctr))
            ctr = _refine_multiple(ev, ctr, m, rad)
            bw = _taylor_backward(ev, ctr, m)
            if tight or bw <= opts.cluster_backward:
                best = (frozenset(int(j) for j in members), bw, ctr)
        if best is not None:
            found.append(best)
    # keep maximal groups, resolving overlaps in favour of larger ones
    found.sort(key=lambda g: (-len(g[0]), min(g[0])))
    taken: set[int] = set()
    groups = []
    merged = {}
    for members, bw, ctr in found:
        if members & taken:
            continue
        taken |= members
        g = tuple(sorted(members))
        groups.append(g)
        if bw <= opts.merge_backward:
            merged[g] = ctr
    return groups, merged


def _refine_multiple(ev, ctr: complex, m: int, rad: float) -> complex:
    """An m-fold root is a simple root of p^(m-1): Newton on that derivative.

    Falls back to the centroid if Newton leaves the cluster disc.
    """
    x = ctr
    for _ in range(60):
        t, _ = ev.taylor(x, m)
        num, den = t[m - 1], m * t[m]
        if den == 0 or num == 0:
            break
        step = complex(num / den)
        x -= step
        if abs(x - ctr) > 2 * rad + 1e-14 * (1 + abs(ctr)):
            return ctr
        if abs(step) <= 4 * EPS * (1 + abs(x)):
            break
    return x


def _sort_key(z: complex):
    ang = math.atan2(z.imag, z.real)
    if ang == -math.pi:
        ang = math.pi
    return (ang, abs(z))


def _canon(z: complex) -> complex:
    # drop negative zeros so sorting and serialisation are stable
    return complex(z.real + 0.0, z.imag + 0.0)


def find_roots(p: ComplexPoly, opts: SolverOptions | None = None, evaluator=None) -> RootSet:
    """All ``degree(p)`` zeros of ``p`` with relative residuals and cluster flags.

    ``evaluator`` replaces coefficient-based evaluation of ``p`` (see
    :class:`RecurrenceEvaluator`); the coefficients are then used only for
    the degree, exact zero roots and the starting points.
    """
    opts = opts or SolverOptions()
    deg = p.degree
    if deg < 1:
        raise ValueError("polynomial must have degree >= 1")
    c_full = p.coeffs
    # exact zero roots from vanishing low-order coefficients
    n0 = int(np.flatnonzero(c_full)[0])
    c = c_full[n0:]
    if evaluator is None:
        ev = PolyEvaluator(c)
    else:
        ev = _Deflated(evaluator, n0) if n0 else evaluator
    if c.size > 1:
        x, sweeps, converged = _aberth(ev, c, opts)
    else:
        x, sweeps, converged = np.zeros(0, dtype=complex), 0, True
    groups, merged = _clusters(ev, x, opts) if x.size else ([], {})
    in_group = np.zeros(x.size, dtype=bool)
    for g in groups:
        in_group[list(g)] = True
    if opts.polish and x.size:
        x = _polish(ev, x, in_group)
    for g, centre in merged.items():
        x[list(g)] = centre

    roots = np.concatenate((np.zeros(n0, dtype=complex), x))
    flags = np.concatenate((np.full(n0, n0 > 1), in_group))
    resid = np.concatenate((np.zeros(n0), _relative_residuals(ev, x)))
    uncertified = (resid > opts.tau_root) & ~flags
    if not converged and uncertified.any():
        raise RootFindingError(
            f"Aberth iteration did not converge in {opts.max_sweeps} sweeps", roots, resid
        )
    if uncertified.any():
        raise RootFindingError(
            f"{int(uncertified.sum())} root(s) exceed residual threshold {opts.tau_root:g}", roots, resid
        )

    # stable sort by (argument, modulus); cluster index sets follow the permutation
    items = sorted(range(roots.size), key=lambda i: _sort_key(_canon(roots[i])))
    pos = {old: new for new, old in enumerate(items)}
    clusters = []
    if n0 > 1:
        clusters.append(tuple(range(n0)))
    clusters += [tuple(j + n0 for j in g) for g in groups]
    clusters = tuple(sorted(tuple(sorted(pos[i] for i in g)) for g in clusters))
    return RootSet(
        roots=tuple(_canon(roots[i]) for i in items),
        residuals=tuple(float(resid[i]) for i in items),
        multiplicity_flags=tuple(bool(flags[i]) for i in items),
        source_degree=deg,
        sweeps=sweeps,
        clusters=clusters,
    )


def sequence_roots(spec, n: int, poly: ComplexPoly | None = None, opts: SolverOptions | None = None) -> RootSet:
    """Zeros of ``P_n`` for a :class:`RecurrenceSpec`, evaluated through the recurrence."""
    if poly is None:
        from .polyalg import generate_sequence

        poly = generate_sequence(spec, n)[n]
    ev = RecurrenceEvaluator(spec.A, spec.B, spec.k, spec.l, n)
    return find_roots(poly, opts, evaluator=ev)


def _relative_residuals(ev, x: np.ndarray) -> np.ndarray:
    if x.size == 0:
        return np.zeros(0)
    return ev.residual(x)


def root_residual(p: ComplexPoly, x: complex) -> float:
    """``|p(x)| / (max|c_i| * max(1, |x|)^deg)``."""
    return float(_relative_residuals(PolyEvaluator(p.coeffs), np.array([x], dtype=complex))[0])
