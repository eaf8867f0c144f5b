"""
Channel capacity and what happens above it
==========================================

Blahut-Arimoto gives the capacity of a discrete memoryless channel.  Random
codes with maximum-likelihood decoding work below capacity and fail almost
surely above it.
"""
import numpy as np

from stabcap.channels import binary_entropy, bsc, dmc, dmc_capacity, random_code_experiment

ch = bsc(0.11)
res = dmc_capacity(ch)
print(f"BSC(0.11): C = {res.capacity:.9f}, closed form 1 - H(p) = {1 - binary_entropy(0.11):.9f}")
print("brackets:", res.lower, res.upper, "after", res.iterations, "iterations")

# Z-channel: only ones are corrupted
z = dmc([[1.0, 0.0], [0.3, 0.7]])
zc = dmc_capacity(z)
print("Z-channel capacity:", zc.capacity, "optimal inputs:", np.round(zc.input_distribution, 4))

# block error of random codes at n = 200 across rates
for rate in (0.25, 0.4, 0.5, 0.6, 0.9):
    err = random_code_experiment(ch, rate, blocklength=200, trials=300, seed=5)
    print(f"rate {rate:.2f}: block error {err:.3f}")
