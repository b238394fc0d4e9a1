# %% [markdown]
# Canonical forms by change of variables
#
# For groups of class 2 and exponent dividing p^m, every word can be
# rewritten (by an invertible substitution of variables) as
#
#     y_t^(p^l) * prod [y_a, y_b]^u * [y_t, h]
#
# with the commutator pairs on disjoint variables.  The value distribution
# is unchanged, and the new shape makes N(G, v = 1) >= |G|^(n-1) visible.

# %%
import logging

from wordmaps.groups import abelian, dihedral, modular16, quaternion8
from wordmaps.normal_form import collect, render
from wordmaps.reduction import burnside_valid, canonical_word, canonicalize
from wordmaps.verification import g_equivalent, verify_canonicalization
from wordmaps.words import parse_word

w = parse_word("x1^2*x2^4*[x1,x2]^3")
cw = canonicalize(w, 2, 2)
print("w =", render(collect(w)))
print("v =", render(collect(canonical_word(cw))))
for j, y in cw.substitution.images.items():
    print(f"  y{j} = {y}")
print("Burnside valid:", burnside_valid(cw.substitution))

# %%
for G in (dihedral(8), quaternion8(), abelian([4, 2]), modular16()):
    print(f"{G.name:12s} same distribution: {g_equivalent(G, w, canonical_word(cw))}")

# %%
# The pairing step on a pure commutator word; the debug log shows the
# valuation chain that guarantees termination.
logging.basicConfig(level=logging.DEBUG, format="%(message)s")
u = parse_word("[x1,x2]^4*[x2,x3]^2*[x3,x4]*[x1,x4]")
cu = canonicalize(u, 2, 4)
print(render(collect(canonical_word(cu))), "chains:", cu.witness)
logging.getLogger().setLevel(logging.WARNING)

# %%
rep = verify_canonicalization(quaternion8(), parse_word("x1^2*x2*x3^-1*x2*[x1,x3]"))
print(render(collect(parse_word(rep.canonical, 3))), rep.n_identity, ">=", rep.bound, rep.passed)
