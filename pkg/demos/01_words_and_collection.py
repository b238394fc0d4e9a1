# %% [markdown]
# Words, collection and evaluation
#
# A word is a freely reduced list of syllables ``(generator, exponent)``.
# Modulo class-3 commutators every word collects to
# ``x1^a1 ... xn^an * prod [xi,xj]^bij``, and on a group of class 2 the two
# define the same map.

# %%
import numpy as np

from wordmaps.groups import dihedral, evaluate_many, heisenberg
from wordmaps.normal_form import collect, nf_to_word, reduce_mod_R, render
from wordmaps.words import parse_word

w = parse_word("x1^2*x2*x1^-1")
print("word      ", w, w.letters)
print("collected ", render(collect(w)))
print("swap      ", render(collect(parse_word("x2*x1"))))

# %%
# Exponents only matter modulo p^m for commutators too, but for p = 2 a
# commutator exponent is only defined modulo 2^(m-1): (x1 x2)^4 collects
# to x1^4 x2^4 [x1,x2]^-6 and all of that is a 4th power.
nf = collect(parse_word("(x1*x2)^4"))
print(render(nf), "->", render(reduce_mod_R(nf, 2, 2)) or "1")

# %%
# Check the collected form against the word itself on every pair of the
# Heisenberg group of order 27 and every triple of D4.
for G, n in [(heisenberg(3, 1), 2), (dihedral(8), 3)]:
    grid = np.indices((G.order,) * n).reshape(n, -1)
    u = parse_word("x2^2*[x1,x2^-1]*x1^3*x2^-1*x1" + ("*x3^2*[x3,x1]" if n == 3 else ""), n)
    same = np.array_equal(evaluate_many(u, G, list(grid)), evaluate_many(nf_to_word(collect(u)), G, list(grid)))
    print(G.name, grid.shape[1], "tuples, agree:", same)
