# %% [markdown]
# A census of the bound P(G, w = 1) >= 1/|G|
#
# Every 2-variable word with up to three syllables and exponents in
# [-3, 3] is collected, deduplicated and counted on a handful of groups.
# Groups of class 2 also get their canonical form checked; dihedral:16 has
# class 3 and only gets the bound.

# %%
from fractions import Fraction

from wordmaps.groups import dihedral, direct_product, cyclic, heisenberg, modular16, quaternion8
from wordmaps.verification import dedupe_by_collection, run_census
from wordmaps.words import enumerate_words

words = dedupe_by_collection(enumerate_words(2, 3, [-3, -2, -1, 1, 2, 3]))
groups = [dihedral(8), quaternion8(), modular16(), heisenberg(3, 1), direct_product(dihedral(8), cyclic(3)),
          dihedral(16)]
report = run_census(groups, words)
print(len(words), "words,", len(report.rows), "rows")
print("violations", len(report.violations), "errors", len(report.errors),
      "canonical failures", len(report.canonical_failures))

# %%
# How tight is the bound?  Smallest P * |G| per group.
for G in groups:
    rows = [r for r in report.rows if r.group == G.name]
    worst = min(rows, key=lambda r: r.probability)
    print(f"{G.name:40s} min P*|G| = {worst.probability * G.order}  at {worst.word}")

# %%
print(report.to_csv().splitlines()[0])
assert report.ok and all(r.probability >= Fraction(1, r.order) for r in report.rows)
