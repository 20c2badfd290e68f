"""The twelve acceptance checks, shared by the ``verify-all`` command and the
acceptance test module.  Each check returns a CheckResult with its
evidence; none of them raises on a failed comparison."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Optional

from .amplitude import leading_power
from .boundary import verify_deletion_distances
from .diagrams import classify_pairing, edge_census, trace_close
from .exactpoly import RatPolyN
from .maps import (FeynmanMap, double_tadpole_chain, double_tadpole_two_point, enumerate_maps,
                   fragment_h0, fragment_h4, fragment_h5, melon_two_point)
from .melonic import compute_f1_f2, dominance_scan, lo_free_energy, melon_maps, solve_sde
from .projectors import build_projector, verify_projector
from .stranded import (StrandedGraph, check_census_bounds, check_face_count_bounds,
                       configuration_census, degree_census, faces_and_degree,
                       max_faces_search, universe_pairings)


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    detail: Dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} criterion {self.number:2d}: {self.title}"


def _n() -> RatPolyN:
    return RatPolyN.var()


def binomial_poly(shift: int, k: int) -> RatPolyN:
    """C(N + shift, k) as a polynomial in N."""
    out = RatPolyN.const(1)
    for i in range(k):
        out = out * (_n() + (shift - i))
    return out / RatPolyN.const(factorial(k))


def reference_f1(rep: str) -> RatPolyN:
    """Reference closed forms of f1 for the two representations."""
    N = _n()
    if rep == "A":
        return (N - 4) ** 2 * (N * N - 13 * N + 34) / (115200 * N ** 5)
    if rep == "S":
        num = (N + 8) ** 2 * (N ** 5 + 19 * N ** 4 + 50 * N ** 3 - 356 * N ** 2 + 8 * N + 672)
        return num / (960 * N ** 4 * (N + 4) ** 2 * (N + 6) ** 2)
    raise ValueError(rep)


# ------------------------------------------------------------------ checks

def check_f1(rep: str, number: int) -> CheckResult:
    got = compute_f1_f2(rep)["f1"]
    want = reference_f1(rep)
    ratio = got / want if not want.is_zero() else None
    return CheckResult(number, f"f1 exact reproduction, rep {rep}", got == want,
                       {"computed": str(got), "expected": str(want),
                        "computed_over_expected": str(ratio)})


def check_m() -> CheckResult:
    want = Fraction(1, 120) ** 4
    per = {}
    for rep in ("A", "S"):
        per[rep] = compute_f1_f2(rep)["f2_leading"]
    n_melons = len(melon_maps())
    ok = per["A"] == per["S"] == want and n_melons * Fraction(1, 120) ** 5 == want
    return CheckResult(3, "m_S = m_A = (1/5!)^4 from 120 melon maps", ok,
                       {"m_A": str(per["A"]), "m_S": str(per["S"]), "melon_maps": n_melons})


def check_projectors() -> CheckResult:
    detail = {}
    ok = True
    dims = {"A": binomial_poly(0, 5), "S": binomial_poly(4, 5) - binomial_poly(2, 3)}
    points = {"A": (5, 1), "S": (3, 11)}
    for rep in ("A", "S"):
        v = verify_projector(build_projector(rep))
        n, val = points[rep]
        good = (v["idempotent"] and v["symmetric"] and v["dimension"] == dims[rep]
                and v["dimension"].evaluate_at(n) == val)
        detail[rep] = {"idempotent": v["idempotent"], "symmetric": v["symmetric"],
                       "trace": str(v["dimension"]), f"trace_at_{n}": str(v["dimension"](n))}
        ok = ok and good
    return CheckResult(4, "projectors idempotent, symmetric, correct traces", ok, detail)


def check_edge_census() -> CheckResult:
    c = edge_census(5)
    ok = c == {"unbroken": 120, "broken": 600, "doubly_broken": 225}
    return CheckResult(5, "945 = 120 + 600 + 225 edge pairings", ok, dict(c))


def check_counts() -> CheckResult:
    v1 = len(enumerate_maps(1, "vacuum"))
    mel = len(melon_maps())
    return CheckResult(6, "15 rooted one-vertex vacuum maps, 120 melon maps",
                       v1 == 15 and mel == 120, {"rooted_v1_vacuum": v1, "melon_maps": mel})


def check_fuss_catalan() -> CheckResult:
    lo = lo_free_energy(1, 4)
    fc = [Fraction(comb(6 * n + 1, n), 6 * n + 1) for n in range(5)]
    m = Fraction(1, 120) ** 4
    f1 = compute_f1_f2("A")["f1"]
    K = solve_sde(f1, m, 8, 0)
    from_sde = [K.coefficient(2 * n) / m ** n for n in range(5)]
    ok = lo == fc == from_sde == [1, 1, 6, 51, 506]
    return CheckResult(7, "large-N K gives Fuss-Catalan 1, 1, 6, 51, 506", ok,
                       {"lo_free_energy": [str(x) for x in lo],
                        "solve_sde_large_n": [str(x) for x in from_sde]})


def filtered_vacuum_maps(v_max: int = 2) -> List[FeynmanMap]:
    """Unrooted vacuum maps with V <= v_max and no melon or double-tadpole,
    including the ring."""
    out = [FeynmanMap.ring()]
    for n in range(1, v_max + 1):
        out += enumerate_maps(n, "vacuum", rooted=False,
                              filter="no_melon_no_double_tadpole").maps
    return out


def sample_configurations(maps: List[FeynmanMap], n: int, seed: int = 0) -> Iterable[dict]:
    """Random configurations with at least one broken or doubly-broken edge."""
    rng = random.Random(seed)
    pairings = universe_pairings("all945")
    maps = [m for m in maps if not m.special]
    for _ in range(n):
        m = rng.choice(maps)
        while True:
            cfg = {e: rng.choice(pairings) for e in m.edges()}
            if any(classify_pairing(p).tag != "unbroken" for p in cfg.values()):
                break
        yield m, faces_and_degree(StrandedGraph(m, cfg))


def check_degree_nonnegative(samples: int = 100_000, seed: int = 0) -> CheckResult:
    maps = filtered_vacuum_maps(2)
    min_omega = None
    total = 0
    for m in maps:
        census = degree_census(m, "unbroken_only")
        total += sum(census.values())
        if sum(census.values()) != 120 ** max(m.n_edges, 1):
            return CheckResult(8, "degree non-negativity", False, {"census_incomplete": repr(m)})
        lo = min(5 + 5 * m.n_vertices + b1 + 2 * b2 - f for f, b1, b2 in census)
        min_omega = lo if min_omega is None else min(min_omega, lo)
    sampled_min = None
    bad = 0
    for m, r in sample_configurations(maps, samples, seed):
        sampled_min = r["omega"] if sampled_min is None else min(sampled_min, r["omega"])
        bad += r["omega"] < 0
    ok = min_omega >= 0 and bad == 0
    return CheckResult(8, "omega >= 0 without melons and double-tadpoles (V <= 2)", ok,
                       {"maps": len(maps), "unbroken_configurations": total,
                        "min_omega_unbroken": min_omega, "sampled": samples,
                        "min_omega_sampled": sampled_min, "sampled_violations": bad})


def check_dominance(time_budget: Optional[float] = 3600) -> CheckResult:
    rep = dominance_scan(4, "A", time_budget=time_budget)
    return CheckResult(9, "leading power 5 iff melonic (rep A)", rep.ok,
                       {"maps": len(rep.entries), "partial": rep.partial,
                        "violations": rep.violations,
                        "curated": [e for e in rep.entries if not e["name"].startswith("V")]})


def check_chain() -> CheckResult:
    """Configuration powers N^(F - 5V) of the double-tadpole chains grow by one
    power of N per double-tadpole, while the summed amplitude stays <= N^4."""
    P = build_projector("A")
    powers, amps = {}, {}
    for p in (2, 3, 4):
        m = double_tadpole_chain(p)
        powers[p] = max_faces_search(m, "any", "unbroken_only").max_faces - 5 * p
        amps[p] = leading_power(m, P)
    growth = all(powers[p + 1] - powers[p] == 1 for p in (2, 3))
    ok = growth and amps[2] <= 4 and all(amps[p] < powers[p] for p in (3, 4))
    return CheckResult(10, "double-tadpole chain: configurations grow like N^(p-1), "
                           "amplitude cancels", ok,
                       {"configuration_power": powers, "amplitude_power": amps})


def check_distances(cap: int = 12) -> CheckResult:
    checks = verify_deletion_distances(cap)
    return CheckResult(11, "flip-distance bounds and class adjacencies",
                       all(c.ok for c in checks), {"lines": [c.line() for c in checks]})


FACE_CEILINGS = [
    ("double_tadpole", double_tadpole_two_point, {"any": 4}),
    ("melon", melon_two_point, {"unbroken": 10}),
    ("H0", fragment_h0, {"unbroken": 8, "broken": 8, "doubly_broken": 7}),
    ("H4", fragment_h4, {"unbroken": 7, "broken": 7, "doubly_broken": 7}),
    ("H5", fragment_h5, {"unbroken": 13, "broken": 13, "doubly_broken": 12}),
]


def check_face_bounds(census_maps: Optional[List[FeynmanMap]] = None,
                      samples: int = 100_000, seed: int = 0) -> CheckResult:
    detail: Dict = {"fragments": {}}
    ok = True
    for name, build, ceilings in FACE_CEILINGS:
        frag = build()
        for cls, ceiling in ceilings.items():
            r = max_faces_search(frag, cls, "unbroken_only")
            good = r.max_faces is not None and r.max_faces <= ceiling
            detail["fragments"][f"{name}/{cls}"] = {"max_faces": r.max_faces, "ceiling": ceiling,
                                                   "lower_bound_only": r.lower_bound_only}
            ok = ok and good and not r.lower_bound_only
    maps = census_maps if census_maps is not None else filtered_vacuum_maps(2)
    agg = Counter()
    # the ring has no corners, so its faces fall outside the bound
    for m in (m for m in maps if m.n_vertices > 0):
        census = configuration_census(m, "unbroken_only", length_cap=3)
        agg.update(check_census_bounds(census, m.n_vertices, 2))
    detail["census_k2"] = dict(agg)
    ok = ok and agg["bound_violations"] == 0 and agg["short_face_free_negative"] == 0
    bad = 0
    for m, r in sample_configurations(filtered_vacuum_maps(2), samples, seed):
        for k in range(2, max(r["F_p"]) + 1):
            bad += not check_face_count_bounds(r["F"], r["F_p"], k)
    detail["sampled_all_k_violations"] = bad
    ok = ok and bad == 0
    return CheckResult(12, "face ceilings and internal-face bounds", ok, detail)


CHECKS: Dict[int, Callable[[], CheckResult]] = {
    1: lambda: check_f1("A", 1),
    2: lambda: check_f1("S", 2),
    3: check_m,
    4: check_projectors,
    5: check_edge_census,
    6: check_counts,
    7: check_fuss_catalan,
    8: check_degree_nonnegative,
    9: check_dominance,
    10: check_chain,
    11: check_distances,
    12: check_face_bounds,
}


def run_check(number: int) -> CheckResult:
    t = time.monotonic()
    r = CHECKS[number]()
    r.seconds = round(time.monotonic() - t, 3)
    return r


def run_all(numbers: Optional[Iterable[int]] = None) -> List[CheckResult]:
    return [run_check(n) for n in (numbers or sorted(CHECKS))]
