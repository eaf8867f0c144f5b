"""
Reading the initial state back from the controls
================================================

If a policy keeps x' = 2x + u in [-1, 1] most of the time, the control
sequence pins x0 down to an interval shrinking like 2**(-(1 - 3 r*) T).
Grouping those estimates into bins gives a message set whose decoding error
can be bounded in closed form.
"""
import numpy as np

from stabcap.channels import noiseless
from stabcap.estimation import (bin_pipeline, conditioned_set, contraction_bound, coupling_tv,
                                estimation_experiment, step5_feasibility, tail_ratio)
from stabcap.models import Distribution, linear_model
from stabcap.policies import ZoomPolicy

uniform = Distribution("uniform", {"low": -1.0, "high": 1.0})
model = linear_model([[2.0]], init=uniform)

cs = conditioned_set(model, np.zeros(3), np.zeros(3), b=1.0, r_star=0.0, T=3)
print("u = 0, T = 3:", (cs.low, cs.high), "midpoint", cs.midpoint)

for R in (3, 0):
    rep = estimation_experiment(model, noiseless(2 ** R), ZoomPolicy(R), 1.0, 0.1, [4, 8, 12], 100, seed=0)
    print(f"R={R}: exceedance {rep.exceedance}, control rate {np.round(rep.control_rate, 3)}")

T = 12
rich = estimation_experiment(model, noiseless(8), ZoomPolicy(3), 1.0, 0.1, [T], 200, seed=1)
pipe = bin_pipeline(rich.centers[-1], 0.5 * contraction_bound(1.0, 2.0, 0.1, T), 4, (-1, 1), 0.5, 0.5, uniform)
print(f"bins: n1={pipe.n1}, n2={pipe.n2}, n3={pipe.n3}, beta={pipe.beta:.4f}")
print("coupling of (0.75, 0.25) with uniform:", coupling_tv([0.75, 0.25], 2))

for ratio, L in ((1.0, 100), (10.0, 2)):
    print(f"p_max/p_min={ratio}, L={L}:", step5_feasibility(1.0, ratio, 0.1, 0.001, L))

print("tail ratios, gaussian:", np.round(tail_ratio("gaussian", [0.1, 0.01, 0.001]), 4))
print("tail ratios, laplace: ", np.round(tail_ratio("laplace", [0.1, 0.01, 0.001]), 4))
