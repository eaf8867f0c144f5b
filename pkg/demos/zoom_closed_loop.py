"""
Stabilizing a doubling map over a finite channel
================================================

x' = 2x + u + w with bounded noise doubles any error every step.  A zoom
quantizer sends 3 bits per step; the controller cancels the predicted
growth of the reported cell midpoint.
"""
import numpy as np

from stabcap.ams import Box, ams_convergence_diagnostic, halves
from stabcap.bounds import linear_bound
from stabcap.channels import dmc, noiseless
from stabcap.models import Distribution, linear_model
from stabcap.policies import ZoomPolicy, closed_loop_run

noise = Distribution("uniform", {"low": -1.0, "high": 1.0})
model = linear_model([[2.0]], noise=noise, init=noise)

# 3 bits per step against a one-bit requirement
run = closed_loop_run(model, ZoomPolicy(3), noiseless(8), horizon=5000, count=50, seed=1)
states = run.ensemble.states[:, :, 0]
print("linear lower bound on the rate:", linear_bound([[2.0]]).value, "bit/step")
print("max |x_t| over all runs:", np.abs(states).max())

diag = ams_convergence_diagnostic(run.ensemble, Box.interval(-20, 20), halves(5000))
print("window averages of 1{|x| <= 20}:", diag.values, "converged:", diag.converged)

# the first few symbols of trajectory 0
for row in run.symbol_log(0)[:5]:
    print(row)

# no channel at all: the state doubles away
free = closed_loop_run(model, ZoomPolicy(0), noiseless(1), horizon=30, count=100, seed=2)
e = np.abs(free.ensemble.states[:, :, 0]).mean(axis=0)
print("E|x_t| without control at t = 10, 20, 30:", e[[10, 20, 30]])

# a noisy 8-ary channel; encoder and decoder stay in step through feedback
P = np.full((8, 8), 0.01) + 0.92 * np.eye(8)
noisy = closed_loop_run(model, ZoomPolicy(3), dmc(P), horizon=2000, count=20, seed=3)
print("over a noisy channel, fraction of time in [-20, 20]:",
      float((np.abs(noisy.ensemble.states) <= 20).mean()))
