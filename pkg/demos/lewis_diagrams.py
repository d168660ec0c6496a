"""
Burnside functors and their twists
==================================

Restriction and transfer matrices for the Burnside Mackey functor, then the
same functor with its restrictions rescaled by a twist.
"""

import numpy as np

from mackey_pic import burnside_mackey, check_axioms, make_group, make_twist, marks, render_lewis, twisted_burnside
from mackey_pic import burnside as bs

# C3 has two subgroups; A(C3) has basis C3/e, C3/C3
C3 = make_group([3])
print(render_lewis(burnside_mackey(C3)))

# the Klein four group, with its subgroups in lattice order
K = make_group([2, 2])
lat = K.lattice
print([lat.label(h) for h in range(len(lat))])

# twisting by 3 on each order-2 subgroup turns the res entries into 9s and 3s
a = make_twist(K, (1, 3, 3, 3, 1))
F = twisted_burnside(a)
print(render_lewis(F, transfers=False))
print("axioms hold:", check_axioms(F).ok)

# products of G-sets, checked against fixed-point counts
x = bs.orbit(K, lat.top, 1)
y = bs.orbit(K, lat.top, 2)
print(x, "*", y, "=", x * y)
print(marks(x * y), np.array(marks(x)) * np.array(marks(y)))
