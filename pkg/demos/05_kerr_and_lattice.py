# coding: utf-8

# # Kerr coupling on the full lattice
#
# A cross-Kerr term chi na_i na_j between the a-modes of two qubits is
# diagonal in the Fock basis.  It only gives |11> a phase exp(-i chi T), so
# chi T = pi is a controlled sign flip.  Here the gate is propagated on the
# full four-mode lattice, not on the reduced a-mode sectors.

# In[1]:


import math

import numpy as np

from boselat.fock import enumerate_sector
from boselat.gates import synthesize_kerr
from boselat.model import kerr_unitary
from boselat.propagator import propagator_columns, schedule_hamiltonian


# In[2]:


sector = enumerate_sector(4, 2)
logical = [(0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0)]
rows = [sector.position(s) for s in logical]

r = synthesize_kerr(chi=1.0, duration=math.pi)
h = schedule_hamiltonian(r.schedule, sector)
block = propagator_columns(h, sector, logical, math.pi)[rows, :]
print(np.round(block, 12))
print("max deviation:", np.abs(block - kerr_unitary(1.0, math.pi)).max())
