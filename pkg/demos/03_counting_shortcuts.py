# %% [markdown]
# Counting solutions: brute force and the structural shortcuts
#
# ``distribution`` walks all of G^n.  Abelian groups, direct products,
# semidirect products with abelian kernel and nilpotent groups (through
# their Sylow subgroups) each have a cheaper exact route; here each is
# compared with brute force.

# %%
from wordmaps.counting import (
    abelian_count,
    direct_product_distribution,
    distribution,
    semidirect_count,
    sylow_distribution,
)
from wordmaps.groups import abelian, conjugacy_class_count, cyclic, dihedral, direct_product, inversion_action, quaternion8
from wordmaps.words import parse_word

D4 = dihedral(8)
comm = parse_word("[x1,x2]")
d = distribution(D4, comm)
print("N(D4, [x,y]=1) =", d.count(0), "= |G| k(G) =", D4.order * conjugacy_class_count(D4))
print("P =", d.probability(0))

# %%
G = abelian([4, 2])
w = parse_word("x1^2*x2^4*x3^-2")
print("abelian closed form:", abelian_count(G, w).counts.tolist())
print("brute force        :", distribution(G, w).counts.tolist())

# %%
G = direct_product(quaternion8(), cyclic(2))
w = parse_word("x1^2*x2^2")
prod = direct_product_distribution(distribution(quaternion8(), w), distribution(cyclic(2), w), G)
print("direct product ok:", prod == distribution(G, w))

# %%
Z3, Z2 = cyclic(3), cyclic(2)
act = inversion_action(Z3, Z2, lambda h: h == 1)
r = semidirect_count(Z3, Z2, act, comm)
print(f"S3 commuting pairs: {r.exact}; certificate {r.lower_bound} <= {r.exact}, P >= 1/6")

# %%
G = direct_product(D4, cyclic(9))
w = parse_word("x1^3*x2^6*[x1,x2]")
print("Sylow reassembly ok:", sylow_distribution(G, w) == distribution(G, w))
