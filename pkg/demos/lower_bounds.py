"""
Data-rate lower bounds
======================

Four ways to bound the channel capacity needed for stabilization: volume
growth on a set the state visits, a moment constraint, the unstable
spectrum of a linear map, and certified growth rates of invariant blocks of
switched linear systems.
"""
import math

import numpy as np

from stabcap.ams import Box
from stabcap.bounds import (cocycle_rate_lower, inf_logdet, linear_bound, moment_bound,
                            radial_profile, selgrade_sum, volume_bound)
from stabcap.models import semilinear_model, sqrt_decay_scalar

# f' = 2 near the origin and 2**(1/sqrt|x|) far out: expansion fades with |x|
f = sqrt_decay_scalar()
inf3 = inf_logdet(f, Box.interval(-3, 3)).value
print("min log2|f'| on [-3, 3]:", inf3, "(1/sqrt 3 =", 1 / math.sqrt(3), ")")
print("volume bound with Q(B) = 2/3:", volume_bound(2 / 3, inf3).value)

# with E|x| <= 1, the best radius balances mass and expansion
res = moment_bound(radial_profile(f), moment=1.0, p=1.0, kappa_max=100.0)
print(f"moment bound: kappa* = {res.kappa:.6f}, bound = {res.bound:.9f}")

print("linear diag(2, 3, 1/2):", linear_bound(np.diag([2, 3, 0.5])).value)
print("rotation-scaling 1 +- i:", linear_bound([[1, -1], [1, 1]]).value)

# two modes, both diagonal; each coordinate is an invariant block
sw = semilinear_model({"u1": np.diag([2.0, 1.5]), "u2": np.diag([3.0, 0.5])}).semilinear
rates = []
for block in ([0], [1]):
    r = cocycle_rate_lower(sw, block, n_max=10)
    print(f"block {block}: a_n/n = {np.round(r.per_step, 4)}, certified {r.rate:.4f}")
    rates.append(r.rate)
print("sum of positive block rates:", selgrade_sum(rates).value)
