"""Melon and double-tadpole self-energy data, the self-consistency equation
for the dressed covariance K, its large-N limit, and the dominance scan."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Union

from .amplitude import close_legs, contract_map, leading_power, two_point_scalar
from .diagrams import trace_close
from .exactpoly import RatPolyN
from .maps import (FeynmanMap, closed_melon, double_tadpole_chain, double_tadpole_two_point,
                   enumerate_maps, insert_two_point, is_melon_map, is_melonic,
                   melon_two_point, reduces_to_bare_edge)
from .projectors import build_projector, build_vertex


# ----------------------------------------------------------- self-energy data

def double_tadpole_maps() -> List[FeynmanMap]:
    """The 15 rooted two-point maps with one vertex."""
    return enumerate_maps(1, "two_point").maps


def melon_maps() -> List[FeynmanMap]:
    """The 120 rooted two-point melon maps."""
    return [m for m in enumerate_maps(2, "two_point").maps if is_melon_map(m)]


def _top_coefficient(a: RatPolyN, power: int) -> Fraction:
    return a.series_in_inverse_n(-power).get(-power, Fraction(0))


def melon_leading_coefficient(m: FeynmanMap, P, vertex=None) -> Fraction:
    """N -> infinity limit of f for a melon two-point map.

    Only the N^5 part of the closed map is needed, so the contraction
    discards everything that cannot reach it."""
    closed = contract_map(close_legs(m), P, vertex, min_power=5)
    return _top_coefficient(closed, 5) / _top_coefficient(trace_close(P), 5)


def compute_f1_f2(rep: str, vertex="cyclic", full_f2: bool = False, check: bool = False) -> dict:
    """f1 summed over the double-tadpole maps and m = lim f2 summed over the
    melon maps.  ``full_f2`` also returns f2 with its whole N dependence
    (expensive for S); otherwise f2 is reported truncated at its limit."""
    P = build_projector(rep)
    v = build_vertex(vertex) if isinstance(vertex, str) else vertex
    f1 = RatPolyN.const(0)
    for m in double_tadpole_maps():
        f1 = f1 + two_point_scalar(m, P, v, check=check)
    per_melon = {}
    m_total = Fraction(0)
    f2 = RatPolyN.const(0) if full_f2 else None
    tr = trace_close(P)
    for m in melon_maps():
        key = close_legs(m).unrooted_code()
        if key not in per_melon:
            per_melon[key] = melon_leading_coefficient(m, P, v)
            if full_f2:
                per_melon[key] = (per_melon[key], contract_map(close_legs(m), P, v) / tr)
        if full_f2:
            m_total += per_melon[key][0]
            f2 = f2 + per_melon[key][1]
        else:
            m_total += per_melon[key]
    return {"rep": rep, "f1": f1, "f2_leading": m_total, "f2": f2,
            "f2_truncated": not full_f2, "melon_maps": len(melon_maps()),
            "distinct_closed_melons": len(per_melon)}


# ---------------------------------------------------------------- series

class Series2:
    """Truncated series sum c[v, k] lambda^v N^-k with v <= vmax, k <= kmax."""

    def __init__(self, coeffs: Optional[Dict] = None, vmax: int = 4, kmax: int = 4):
        self.vmax, self.kmax = vmax, kmax
        self.c: Dict[tuple, Fraction] = {}
        for (v, k), x in (coeffs or {}).items():
            if 0 <= v <= vmax and k <= kmax and x:
                self.c[(v, k)] = Fraction(x)

    @classmethod
    def const(cls, x, vmax, kmax):
        return cls({(0, 0): x}, vmax, kmax)

    @classmethod
    def from_ratpoly(cls, f: Union[RatPolyN, Fraction, int], v: int, vmax: int, kmax: int):
        """lambda^v times the large-N expansion of f."""
        if not isinstance(f, RatPolyN):
            return cls({(v, 0): f}, vmax, kmax)
        return cls({(v, k): x for k, x in f.series_in_inverse_n(kmax).items()}, vmax, kmax)

    def __add__(self, other):
        out = dict(self.c)
        for key, x in other.c.items():
            out[key] = out.get(key, 0) + x
        return Series2(out, self.vmax, self.kmax)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return Series2({key: x * s for key, x in self.c.items()}, self.vmax, self.kmax)

    def __mul__(self, other):
        out: Dict[tuple, Fraction] = {}
        for (v1, k1), x in self.c.items():
            for (v2, k2), y in other.c.items():
                if v1 + v2 <= self.vmax and k1 + k2 <= self.kmax:
                    key = (v1 + v2, k1 + k2)
                    out[key] = out.get(key, 0) + x * y
        return Series2(out, self.vmax, self.kmax)

    def __pow__(self, n: int):
        out = Series2.const(1, self.vmax, self.kmax)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Series2) and self.c == other.c

    def coefficient(self, v: int, k: int = 0) -> Fraction:
        return self.c.get((v, k), Fraction(0))

    def large_n(self) -> List[Fraction]:
        """Coefficients of lambda^v at N^0."""
        return [self.coefficient(v, 0) for v in range(self.vmax + 1)]

    def is_zero(self) -> bool:
        return not self.c

    def to_json(self):
        return {"vmax": self.vmax, "kmax": self.kmax,
                "coefficients": [{"v": v, "k": k, "value": f"{x.numerator}/{x.denominator}"}
                                 for (v, k), x in sorted(self.c.items())]}


def sde_residual(K: Series2, f1, f2, tadpole_power: int = 2) -> Series2:
    """1 - K + lambda f1 K^t + lambda^2 f2 K^6, truncated."""
    vmax, kmax = K.vmax, K.kmax
    one = Series2.const(1, vmax, kmax)
    t1 = Series2.from_ratpoly(f1, 1, vmax, kmax)
    t2 = Series2.from_ratpoly(f2, 2, vmax, kmax)
    return one - K + t1 * K ** tadpole_power + t2 * K ** 6


def solve_sde(f1, f2, V_max: int, K_max: int, tadpole_power: int = 2) -> Series2:
    """The formal solution K = 1 + O(lambda) of
    1 - K + lambda f1 K^t + lambda^2 f2 K^6 = 0, by fixed-point iteration
    (each pass fixes one more order in lambda).

    ``f2`` may be a rational function or just its large-N limit; in the
    latter case the N-dependence of f2 is truncated away."""
    if V_max < 0 or K_max < 0:
        raise ValueError("truncation orders must be non-negative")
    one = Series2.const(1, V_max, K_max)
    t1 = Series2.from_ratpoly(f1, 1, V_max, K_max)
    t2 = Series2.from_ratpoly(f2, 2, V_max, K_max)
    K = one
    for _ in range(V_max + 1):
        K = one + t1 * K ** tadpole_power + t2 * K ** 6
    if not sde_residual(K, f1, f2, tadpole_power).is_zero():
        raise ArithmeticError("series solution does not satisfy the equation")
    return K


def lo_free_energy(m, order: int) -> List[Fraction]:
    """Coefficients of (lambda^2)^n, n <= order, of the solution X = 1 + O(lambda)
    of 1 - X + m lambda^2 X^6 = 0."""
    if order < 0:
        raise ValueError("order must be non-negative")
    m = Fraction(m)
    X = [Fraction(1)] + [Fraction(0)] * order

    def mul(a, b):
        out = [Fraction(0)] * (order + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(order + 1 - i):
                    out[i + j] += x * b[j]
        return out

    for _ in range(order + 1):
        p = [Fraction(1)] + [Fraction(0)] * order
        for _ in range(6):
            p = mul(p, X)
        X = [Fraction(1)] + [m * p[n - 1] for n in range(1, order + 1)]
    return X


# ------------------------------------------------------ two-point bookkeeping

def generated_two_point_sum(rep: str, V_max: int = 2, vertex="cyclic") -> List[RatPolyN]:
    """Sum of f over rooted two-point maps built only from melons and
    double-tadpoles, per number of vertices 0..V_max."""
    P = build_projector(rep)
    v = build_vertex(vertex) if isinstance(vertex, str) else vertex
    tr = trace_close(P)
    out = [RatPolyN.const(1)]
    for n in range(1, V_max + 1):
        total = RatPolyN.const(0)
        cache: Dict[tuple, RatPolyN] = {}
        for m in enumerate_maps(n, "two_point").maps:
            if not reduces_to_bare_edge(m):
                continue
            closed = close_legs(m)
            key = closed.unrooted_code()
            if key not in cache:
                cache[key] = contract_map(closed, P, v) / tr
            total = total + cache[key]
        out.append(total)
    return out


def bookkeeping_check(rep: str = "A", V_max: int = 2, K_max: int = 3) -> dict:
    """Compare the dressed covariance K from the self-consistency equation
    with the direct sum over melon/double-tadpole two-point maps, for both
    tadpole exponents 2 and 3, order by order in lambda and in 1/N."""
    direct = generated_two_point_sum(rep, V_max)
    P = build_projector(rep)
    tr = trace_close(P)
    f1 = sum((two_point_scalar(m, P, check=False) for m in double_tadpole_maps()),
             RatPolyN.const(0))
    f2 = RatPolyN.const(0)
    seen: Dict[tuple, RatPolyN] = {}
    for m in melon_maps():
        key = close_legs(m).unrooted_code()
        if key not in seen:
            seen[key] = contract_map(close_legs(m), P) / tr
        f2 = f2 + seen[key]
    series_direct = Series2({}, V_max, K_max)
    for n, f in enumerate(direct):
        series_direct = series_direct + Series2.from_ratpoly(f, n, V_max, K_max)
    out = {"rep": rep, "V_max": V_max, "K_max": K_max}
    for t in (2, 3):
        K = solve_sde(f1, f2, V_max, K_max, tadpole_power=t)
        out[f"tadpole_power_{t}"] = K == series_direct
    out["exact_order_2"] = {t: direct[2] == t * f1 * f1 + f2 for t in (2, 3)} if V_max >= 2 else {}
    return out


# ----------------------------------------------------------- dominance scan

_RANDOM_V4 = (
    ((0, 6), (1, 11), (2, 17), (3, 12), (4, 15), (5, 16), (7, 9), (8, 18), (10, 23),
     (13, 22), (14, 20), (19, 21)),
    ((0, 4), (1, 15), (2, 13), (3, 21), (5, 9), (6, 22), (7, 14), (8, 20), (10, 23),
     (11, 18), (12, 16), (17, 19)),
    ((0, 9), (1, 8), (2, 7), (3, 4), (5, 15), (6, 16), (10, 23), (11, 12), (13, 17),
     (14, 19), (18, 22), (20, 21)),
)


def curated_family() -> Dict[str, FeynmanMap]:
    """Vacuum maps with up to four vertices mixing melons and double-tadpoles."""
    cm = closed_melon()
    e0 = cm.edges()[0]
    mm = insert_two_point(cm, e0, melon_two_point())
    fam = {
        "closed_melon": cm,
        "melon_chain_2": mm,
        "melon_in_melon_edge_3": insert_two_point(cm, cm.edges()[3], melon_two_point()),
        "melon_with_double_tadpole": insert_two_point(cm, e0, double_tadpole_two_point()),
        "melon_with_two_double_tadpoles": insert_two_point(
            insert_two_point(cm, e0, double_tadpole_two_point()), cm.edges()[1],
            double_tadpole_two_point()),
        "double_tadpole_chain_2": double_tadpole_chain(2),
        "double_tadpole_chain_3": double_tadpole_chain(3),
        "double_tadpole_chain_4": double_tadpole_chain(4),
        "double_tadpole_chain_2_with_melon": insert_two_point(
            double_tadpole_chain(2), double_tadpole_chain(2).edges()[0], melon_two_point()),
        "double_tadpole_with_melon_on_loop": close_legs(insert_two_point(
            double_tadpole_two_point(), double_tadpole_two_point().edges()[0],
            melon_two_point())),
    }
    # seeded random connected maps with four vertices (no special structure)
    for i, edges in enumerate(_RANDOM_V4):
        partner = [None] * 24
        for a, b in edges:
            partner[a], partner[b] = b, a
        fam[f"random_v4_{i}"] = FeynmanMap(partner, (), 0)
    fam["melon_chain_3"] = insert_two_point(mm, cm.edges()[2], melon_two_point())
    return fam


@dataclass
class DominanceReport:
    rep: str
    entries: List[dict] = field(default_factory=list)
    partial: bool = False

    @property
    def violations(self) -> List[dict]:
        return [e for e in self.entries if not e["ok"]]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.partial


def dominance_scan(V_max: int = 2, rep: str = "A", curated: bool = True,
                   time_budget: Optional[float] = None, vertex="cyclic") -> DominanceReport:
    """Check leading power 5 <=> melonic on every vacuum map with at most
    min(V_max, 2) vertices, and on the curated family up to V_max vertices."""
    P = build_projector(rep)
    v = build_vertex(vertex) if isinstance(vertex, str) else vertex
    rep_out = DominanceReport(rep)
    start = time.monotonic()
    maps = [("ring", FeynmanMap.ring())]
    for n in range(1, min(V_max, 2) + 1):
        for i, m in enumerate(enumerate_maps(n, "vacuum", rooted=False).maps):
            maps.append((f"V{n}_{i}", m))
    if curated:
        maps += [(k, m) for k, m in curated_family().items() if m.n_vertices <= V_max]
    for name, m in maps:
        if time_budget is not None and time.monotonic() - start > time_budget:
            rep_out.partial = True
            break
        lp = leading_power(m, P, v)
        mel = is_melonic(m)
        rep_out.entries.append({"name": name, "V": m.n_vertices, "leading_power": lp,
                                "melonic": mel, "ok": (lp == 5) == mel})
    return rep_out
