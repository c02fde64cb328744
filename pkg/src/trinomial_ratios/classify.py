"""Ratios of zeros of a trinomial and where they fall: real line, unit circle, both, neither.

Also groups the zeros themselves into equimodular sets (same circle about the
origin) and null-collinear sets (same line through the origin, with points on
both sides of it), and runs the three verifiers built on those notions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .rootfind import RootSet, SolverOptions, find_roots
from .trinomial import (
    TrinomialSpec,
    classical_discriminant,
    h_eval,
    in_h_domain,
)

DEFAULT_TOL = 1e-6
DEDUP_TOL = 1e-9


class RatioKind(str, enum.Enum):
    REAL = "Real"
    UNIT_CIRCLE = "UnitCircle"
    BOTH = "Both"
    NEITHER = "Neither"

    @property
    def on_locus(self) -> bool:
        return self is not RatioKind.NEITHER

    @property
    def is_real(self) -> bool:
        return self in (RatioKind.REAL, RatioKind.BOTH)

    @property
    def is_unimodular(self) -> bool:
        return self in (RatioKind.UNIT_CIRCLE, RatioKind.BOTH)


@dataclass(frozen=True)
class RatioRecord:
    q: complex
    i: int
    j: int
    kind: RatioKind
    dist_to_real: float
    dist_to_circle: float

    def to_dict(self) -> dict:
        return {
            "q": [self.q.real, self.q.imag],
            "i": self.i,
            "j": self.j,
            "kind": self.kind.value,
            "dist_real": self.dist_to_real,
            "dist_circle": self.dist_to_circle,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RatioRecord":
        return cls(complex(*d["q"]), d["i"], d["j"], RatioKind(d["kind"]), d["dist_real"], d["dist_circle"])


def classify_ratio(q: complex, tol: float = DEFAULT_TOL) -> RatioKind:
    q = complex(q)
    real = abs(q.imag) <= tol * (1 + abs(q))
    circ = abs(abs(q) - 1) <= tol
    if real and circ:
        return RatioKind.BOTH
    if real:
        return RatioKind.REAL
    if circ:
        return RatioKind.UNIT_CIRCLE
    return RatioKind.NEITHER


def _same_cluster(rs: RootSet) -> dict[int, int]:
    owner = {}
    for g, members in enumerate(rs.clusters):
        for m in members:
            owner[m] = g
    return owner


def all_ratios(rs: RootSet, tol: float = DEFAULT_TOL) -> list[RatioRecord]:
    """Every ordered ratio ``t_i / t_j`` of distinct zeros, classified.

    Pairs inside one multiplicity cluster are skipped: their ratio is 1 and
    comes from a repeated zero, not from distinct ones.
    """
    t = rs.roots
    for z in t:
        if abs(z) < 1e-12:
            raise ArithmeticError("zero root impossible for this trinomial - root finder failure")
    owner = _same_cluster(rs)
    out = []
    for i, ti in enumerate(t):
        for j, tj in enumerate(t):
            if i == j:
                continue
            if i in owner and owner.get(j) == owner[i]:
                continue
            q = ti / tj
            out.append(RatioRecord(q, i, j, classify_ratio(q, tol), abs(q.imag), abs(abs(q) - 1)))
    return out


def collapse_clusters(rs: RootSet) -> tuple[list[complex], list[int]]:
    """Distinct zeros with multiplicities; each flagged cluster becomes its centroid."""
    owner = _same_cluster(rs)
    zeros, mult = [], []
    for i, t in enumerate(rs.roots):
        if i not in owner:
            zeros.append(t)
            mult.append(1)
        elif min(rs.clusters[owner[i]]) == i:
            members = rs.clusters[owner[i]]
            zeros.append(complex(np.mean([rs.roots[j] for j in members])))
            mult.append(len(members))
    return zeros, mult


def distinct_values(values, tol: float = DEDUP_TOL) -> list[complex]:
    """Deduplicate complex values at relative tolerance ``tol``."""
    out: list[complex] = []
    for v in values:
        if all(abs(v - w) > tol * (1 + abs(w)) for w in out):
            out.append(v)
    return out


def count_distinct_real(records: list[RatioRecord], tol: float = DEDUP_TOL) -> int:
    return len(distinct_values([r.q.real for r in records if r.kind.is_real], tol))


@dataclass(frozen=True)
class ZeroGeometry:
    equimodular_groups: tuple[tuple[int, ...], ...]
    null_collinear_groups: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "equimodular_groups": [list(g) for g in self.equimodular_groups],
            "null_collinear_groups": [list(g) for g in self.null_collinear_groups],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ZeroGeometry":
        return cls(
            tuple(tuple(g) for g in d["equimodular_groups"]),
            tuple(tuple(g) for g in d["null_collinear_groups"]),
        )


def _chain_groups(keys: np.ndarray, close) -> list[list[int]]:
    """Single-linkage groups of indices after sorting by ``keys``."""
    order = np.argsort(keys, kind="stable")
    groups: list[list[int]] = []
    for idx in order:
        if groups and close(keys[groups[-1][-1]], keys[idx]):
            groups[-1].append(int(idx))
        else:
            groups.append([int(idx)])
    return groups


def zero_geometry(rs: RootSet, tol: float = DEFAULT_TOL) -> ZeroGeometry:
    t = rs.as_array()
    if t.size == 0:
        return ZeroGeometry((), ())
    mod = np.abs(t)
    eq = [g for g in _chain_groups(mod, lambda a, b: abs(b - a) <= tol * max(a, b)) if len(g) >= 2]

    # directions modulo pi; the line through 0 at angle phi contains arg = phi and phi + pi
    phi = np.mod(np.angle(t), np.pi)
    groups = _chain_groups(phi, lambda a, b: b - a <= tol)
    if len(groups) > 1:
        first, last = groups[0], groups[-1]
        if phi[first[0]] + np.pi - phi[last[-1]] <= tol:
            groups[0] = last + first
            groups.pop()
    nc = []
    for g in groups:
        if len(g) < 2:
            continue
        # which side of the origin: compare each direction with the group's reference one
        ref = t[g[0]] / abs(t[g[0]])
        sides = {bool((z / abs(z) / ref).real > 0) for z in t[g]}
        if len(sides) == 2:
            nc.append(g)
    return ZeroGeometry(
        tuple(tuple(sorted(g)) for g in sorted(eq, key=min)),
        tuple(tuple(sorted(g)) for g in sorted(nc, key=min)),
    )


@dataclass
class Verdict:
    holds: bool
    case: str
    witnesses: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def enc(w):
            if isinstance(w, RatioRecord):
                return w.to_dict()
            if isinstance(w, complex):
                return [w.real, w.imag]
            return w

        return {"holds": self.holds, "case": self.case, "witnesses": [enc(w) for w in self.witnesses], "notes": list(self.notes)}

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        def dec(w):
            if isinstance(w, dict):
                return RatioRecord.from_dict(w)
            # complex numbers are stored as [re, im] floats; index groups are ints
            if isinstance(w, list) and len(w) == 2 and all(isinstance(v, float) for v in w):
                return complex(*w)
            return w

        return cls(d["holds"], d["case"], [dec(w) for w in d["witnesses"]], list(d["notes"]))


def trinomial_roots(tri: TrinomialSpec, opts: SolverOptions | None = None) -> RootSet:
    return find_roots(tri.poly(), opts)


def verify_main_theorem(tri: TrinomialSpec, tol: float = DEFAULT_TOL, rs: RootSet | None = None) -> Verdict:
    """Some ratio of zeros of ``D`` is real or unimodular.

    With a repeated zero, the ratio 1 is the witness. Otherwise some ratio
    of distinct zeros must have a kind other than Neither.
    """
    rs = rs or trinomial_roots(tri)
    if rs.clusters:
        disc = classical_discriminant(tri)
        return Verdict(True, "repeated", [1 + 0j], [f"cluster {list(rs.clusters[0])}; classical discriminant {abs(disc):.3e}"])
    recs = all_ratios(rs, tol)
    wit = [r for r in recs if r.kind.on_locus]
    return Verdict(bool(wit), "distinct", wit)


def verify_iff_characterization(tri: TrinomialSpec, tol: float = DEFAULT_TOL, rs: RootSet | None = None) -> Verdict:
    """For each ratio ``q`` in the domain of h: ``h(q)`` is real, and q or some
    other ratio lies on the real line or unit circle. The ratio set must also be
    closed under ``q -> 1/q`` and ``q -> conj(q)``."""
    rs = rs or trinomial_roots(tri)
    recs = all_ratios(rs, tol)
    k, l = tri.k, tri.l
    notes = []
    witnesses = [r for r in recs if r.kind.on_locus]
    qs = np.array([r.q for r in recs])
    for r in recs:
        if not in_h_domain(r.q, k, l, 1e-9):
            continue
        hv = h_eval(r.q, k, l)
        if abs(hv.imag) > tol * (1 + abs(hv)):
            notes.append(f"h({r.q:.6g}) not real: Im={hv.imag:.3e}")
        if not r.kind.on_locus and not witnesses:
            notes.append(f"no witness on R or the unit circle for q={r.q:.6g}")
    for r in recs:
        for image in (1 / r.q, r.q.conjugate()):
            if qs.size and np.min(np.abs(qs - image)) > tol * (1 + abs(image)):
                notes.append(f"ratio set not closed: {image:.6g} missing")
    return Verdict(not notes, "distinct", witnesses[:4], notes)


def corollary_parity_size(k: int) -> int:
    return 3 if k % 2 else 2


def verify_corollary(tri: TrinomialSpec, tol: float = DEFAULT_TOL, rs: RootSet | None = None) -> Verdict:
    """``D`` has two equimodular zeros, or a null-collinear group of 3 zeros
    (k odd) or 2 zeros (k even)."""
    rs = rs or trinomial_roots(tri)
    geo = zero_geometry(rs, tol)
    need = corollary_parity_size(tri.k)
    notes = []
    if geo.equimodular_groups:
        return Verdict(True, "equimodular", [list(g) for g in geo.equimodular_groups])
    good = [g for g in geo.null_collinear_groups if len(g) == need]
    for g in geo.null_collinear_groups:
        if len(g) != need:
            notes.append(f"null-collinear group of size {len(g)} (parity rule wants {need})")
    if good:
        return Verdict(True, "null-collinear", [list(g) for g in good], notes)
    return Verdict(False, "none", [], notes or ["no equimodular or null-collinear group"])
