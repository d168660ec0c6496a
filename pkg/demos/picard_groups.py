"""
Counting invertible Mackey functors
===================================

Picard group orders for small abelian groups, and what the classes look
like for C9.
"""

from mackey_pic import equivalent, make_group, make_twist, normalize, picard_group, picard_order, witness_iso
from mackey_pic.groups import all_groups_up_to
from mackey_pic.mackey import is_isomorphism
from mackey_pic.picard import refute_iso_bounded

for G in all_groups_up_to(16):
    print(f"{G.name():>12}  {picard_order(G)}")

# three classes over C9, one per residue of the e-value up to sign
C9 = make_group([9])
P = picard_group(C9)
for c in P.classes:
    print(c.representative)
print(P.table)

# 7 = -2 mod 9, so these two are isomorphic, and the witness says how
a, b, c = (make_twist(C9, v) for v in [(2, 1, 1), (7, 1, 1), (4, 1, 1)])
print(normalize(b), equivalent(a, b))
phi = witness_iso(a, b)
print(is_isomorphism(phi))

# no isomorphism from (2,1,1) to (4,1,1) with small coordinates
out = refute_iso_bounded(a, c, bound=81)
print(out.label)
