"""Build both rank-5 projectors, print their traces, then the one-vertex
self-energy f1 and the melon coefficient m for each representation."""

from strandcalc.melonic import compute_f1_f2
from strandcalc.projectors import build_projector, verify_projector

for rep in ("A", "S"):
    v = verify_projector(build_projector(rep))
    print(f"rep {rep}: idempotent={v['idempotent']} symmetric={v['symmetric']}")
    print(f"  trace = {v['dimension']}")
    data = compute_f1_f2(rep)
    print(f"  f1    = {data['f1']}")
    print(f"  m     = {data['f2_leading']}  ({data['distinct_closed_melons']} closed melon classes)")
