# coding: utf-8

# # Single-qubit spectrum and the degeneracy condition
#
# The one-qubit Hamiltonian is
#
#     H = eps1 na^2 + eps2 nb^2 + gamma1 na + gamma2 nb + tau (a^+ b + h.c.)
#
# With tau = 0 the Fock states are eigenstates.  Choosing gamma1 on the
# degeneracy line makes the two logical levels equal, while the first leakage
# level sits a gap 2 (eps1 + eps2) above them.

# In[1]:


import numpy as np

from boselat.model import (
    SingleQubitParams,
    build_single_qubit_hamiltonian,
    degeneracy_residual,
    degenerate_gamma1,
    energy_levels,
)


# In[2]:


n = 30
p = SingleQubitParams(eps1=2.0, eps2=2.0, gamma2=0.0)
p = p.replace(gamma1=degenerate_gamma1(p, n))
print("gamma1 on the degeneracy line:", p.gamma1)
print("residual E1 - E0:", degeneracy_residual(p, n))

levels = energy_levels(p, n)
print("E0, E1, E2:", levels[:3])
print("gap E2 - E1:", levels[2] - levels[1], "expected:", 2 * (p.eps1 + p.eps2))


# Relative to the logical pair, level i sits at (eps1 + eps2)(i^2 - i): a
# parabola that pushes every leakage state away from the logical subspace.

# In[3]:


i = np.arange(6)
print(levels[:6] - levels[0])
print((p.eps1 + p.eps2) * (i**2 - i))


# Switching on tunneling couples neighbouring levels.  While tau is small
# compared to the gap, the two lowest eigenvalues split by about 2 sqrt(n) tau
# and the rest barely move.

# In[4]:


tau = 0.05
eig = np.linalg.eigvalsh(build_single_qubit_hamiltonian(p.replace(tau=tau), n).matrix)
print("splitting:", eig[1] - eig[0], "two-level estimate:", 2 * np.sqrt(n) * tau)
