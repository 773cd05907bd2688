# coding: utf-8

# # Fock sectors and the dual-rail encoding
#
# A qubit here is a pair of bosonic modes `a` and `b` holding `n` particles in
# total.  The logical value is the occupation of `a`: zero particles in `a` is
# |0>, one particle is |1>.  Everything else in the sector is leakage.
#
# Every Hamiltonian in the package conserves the particle number, so all
# computations live in a fixed-N sector.

# In[1]:


import math

import numpy as np

from boselat.fock import enumerate_sector, hopping_matrix
from boselat.propagator import logical_state, measure_logical


# The basis is ordered lexicographically descending, so for one qubit the state
# with `i` particles in mode `a` sits at position `n - i`.

# In[2]:


sector = enumerate_sector(2, 4)
for k, occ in enumerate(sector.basis):
    print(k, occ)


# Sector sizes follow the stars-and-bars count C(N + L - 1, L - 1).

# In[3]:


for L in (2, 4, 6):
    dims = [enumerate_sector(L, N).dim for N in range(5)]
    print(L, dims, [math.comb(N + L - 1, L - 1) for N in range(5)])


# The hopping operator a_i^+ a_j carries the usual square-root factors.  In the
# one-qubit sector the element between |n;0> and |n;1> is sqrt(n), which is
# why tunneling pulses are scaled by 1/sqrt(n) later on.

# In[4]:


n = 9
h = hopping_matrix(enumerate_sector(2, n), 0, 1)
print("<n;1| a^+ b |n;0> =", h[n - 1, n], "sqrt(n) =", math.sqrt(n))


# Logical states of several qubits are products of per-qubit Fock states.
# Readout looks only at the a-modes.

# In[5]:


psi = logical_state([1, 0, 1], particles_per_qubit=2)
print(psi.sector.basis[np.argmax(psi.populations)])
probs, leaked = measure_logical(psi)
print({k: v for k, v in probs.items() if v}, "leaked:", leaked)
