# coding: utf-8

# # Single-qubit gates: Rx, phase gates, Hadamard and leakage
#
# At degeneracy a tunneling pulse tau(t) rotates the logical pair about x by
# an angle set only by its area.  A gamma1 excursion away from the degeneracy
# line writes a relative phase.  Together they give the Hadamard gate as
# P(pi/2) Rx(pi/4) P(pi/2).

# In[1]:


import math

import numpy as np

from boselat.gates import (
    compose,
    default_baseline,
    extract_logical_report,
    hadamard,
    hadamard_sequence,
    phase_gate,
    remove_global_phase,
    simulate_single_qubit,
    synthesize_phase,
)
from boselat.scenarios import leakage_for


# The symbolic composition is exactly the Hadamard once the global phase is
# divided out.

# In[2]:


u, alpha = remove_global_phase(compose(hadamard_sequence(1.0, 4.0)))
print(np.round(u, 12))
print("global phase removed:", alpha)


# A phase gate is exact for any gamma1 shape because the Hamiltonian stays
# diagonal.  Only the area of the excursion matters.

# In[3]:


phi = 0.9
r = synthesize_phase(phi, 2.0, total_particles=5)
cols, rows = simulate_single_qubit([r])
print("fidelity:", extract_logical_report(cols, rows, phase_gate(phi)).fidelity)


# With many particles the tunneling term also connects |n;1> to |n;2>, and so
# on up the ladder.  A smooth Gaussian pulse that is slow compared with the
# gap keeps that leakage tiny.  An abrupt step pulse of the same area does not.

# In[4]:


for n in (5, 30):
    row = leakage_for(n, math.pi / 4, 1 / 8, eps=2.0, duration=4.0, step_fraction=0.5)
    print(f"n={n:2d} gap/peak={row['gap'] / row['peak_tau']:.1f} "
          f"gaussian={row['leakage_gaussian']:.2e} step={row['leakage_step']:.2e}")


# The full Hadamard sequence at n = 30, simulated in the whole 31-dimensional
# sector, against the same sequence restricted to the logical pair.

# In[5]:


n = 30
seq = hadamard_sequence(1.0, 4.0, default_baseline(n, 2.0), n)
full = extract_logical_report(*simulate_single_qubit(seq), hadamard())
two = extract_logical_report(*simulate_single_qubit(seq, two_level=True), hadamard())
print(f"full sector: fidelity {full.fidelity:.6f}, leakage {full.leakage:.2e}")
print(f"two-level:   fidelity {two.fidelity:.12f}")
