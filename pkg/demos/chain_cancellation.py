"""Double-tadpole chains: the best single configuration grows with the chain
length while the summed amplitude does not."""

from strandcalc.amplitude import leading_power
from strandcalc.maps import double_tadpole_chain
from strandcalc.projectors import build_projector
from strandcalc.stranded import max_faces_search

P = build_projector("A")
for p in (2, 3, 4):
    m = double_tadpole_chain(p)
    best = max_faces_search(m, "any", "unbroken_only").max_faces - 5 * p
    print(f"p={p}: best configuration N^{best}, summed amplitude N^{leading_power(m, P)}")
