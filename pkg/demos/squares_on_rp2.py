# The cup ring of the torus and the first Steenrod square on RP^2.
from intforms import F2, ZZ
from intforms.hocolim_einfty import steenrod_square
from intforms.sset_eval import CupStructure, aw_cup_oracle, build_space, match_rings

# Products are read at object 2, where degree -2 classes exist.
T = build_space("torusmin")
ring = CupStructure(T, ZZ, 2).table()
print("torus products", ring.to_dict(ZZ)["products"])
print("matches Alexander-Whitney:", match_rings(ring, aw_cup_oracle(T, ZZ), ZZ) is not None)

# Sq^1(a) = cup_0(a, a) through the operad action on the homotopy colimit.
X = build_space("rp2min")
r = steenrod_square(X, 1, -1, F2, M=3)
entry = r.entries[0]
print("window verified:", r.verified)
print("Sq^1(a) class:", entry["class"], " a*a at object 2:", entry["product_class"])
