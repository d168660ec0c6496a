"""
Quotients, box products and A(G)-modules
========================================

Geometric fixed points along a quotient, extending twists back, the box
product of twisted functors, and the module seen at the top level.
"""

from mackey_pic import (
    burnside_mackey,
    check_counit,
    eval_GG,
    geometric_fixed_points,
    make_group,
    make_twist,
    qind_twisted,
    twisted_burnside,
    twisted_module,
    verify_box_law,
    verify_splitting,
)
from mackey_pic.changegroups import truncated_twist
from mackey_pic.groups import quotient

C9 = make_group([9])
N = 1  # the subgroup of order 3
Q, _, _ = quotient(C9, C9.lattice.subgroups[N])

# Phi of the Burnside functor over C_p is a single copy of Z
Cp = make_group([5])
print(geometric_fixed_points(burnside_mackey(Cp), Cp.lattice.top).ranks)

# push a twist over C9/C3 up to C9 and back down
alpha = make_twist(Q, (2, 1))
ahat, F = qind_twisted(alpha, C9, N)
print(alpha, "->", ahat, "->", truncated_twist(ahat, N))
print(verify_splitting(C9, N).summary())

# the box product of twisted functors is the twisted functor of the product
a, b = make_twist(C9, (2, 2, 1)), make_twist(C9, (4, 1, 1))
print(verify_box_law(a, b).summary())

# the top level as an A(G)-module, and its round trip through tensoring up
M = twisted_module(a)
print(M.action[0])  # how C9/e acts
print(eval_GG(twisted_burnside(a)).same_as(M), check_counit(M))
