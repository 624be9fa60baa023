# Integral cochains of a few spaces, computed two ways: through the
# bar-construction functor evaluated at an object m, and directly from
# normalized simplicial cochains.
from intforms import F2, ZZ
from intforms.bar_ai import AISystem
from intforms.sset_eval import build_space, evaluate_functor, normalized_cochains

for name in ["S1", "S2", "rp2", "torus"]:
    X = build_space(name)
    direct = normalized_cochains(X, ZZ)
    print(name, X.counts())
    for m in (1, 2):
        E = evaluate_functor(AISystem(ZZ), X, m).complex
        row = {q: str(E.homology(q)) for q in range(-X.dim, 1)}
        print("  m=%d" % m, row)
    print("  cochains", {q: str(direct.homology(q)) for q in range(-X.dim, 1)})

# Level m only reaches degree -m, which is why m = 1 misses H^2 above.
# Over F2 the projective plane has a class in every degree up to 2.
P = build_space("rp2")
print("rp2 over F2", {q: normalized_cochains(P, F2).homology(q).describe(F2) for q in (-2, -1, 0)})
