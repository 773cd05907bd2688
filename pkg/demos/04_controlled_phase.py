# coding: utf-8

# # Controlled phase from tunneling between qubits
#
# Two qubits interact through tunneling mu between their a-modes, with an
# on-site self-interaction eps.  The b-modes are spectators, so the dynamics
# splits into the a-mode sectors with 0, 1 and 2 particles.  The gate is
# leakage free when both sector frequencies complete whole half-periods:
#
#     mu T = m1 pi,   sqrt(eps^2 + 4 mu^2) T = m2 pi,   m2 > 2 m1.
#
# Up to single-qubit phases the result is diag(1, 1, 1, exp(i phi11)) with
# phi11 = pi (m2 - sqrt(m2^2 - 4 m1^2)).

# In[1]:


import math

import numpy as np

from boselat.errors import InfeasibleError
from boselat.gates import cphase_report, simulate_two_qubit, synthesize_cphase, unwrap_phase


# In[2]:


r = synthesize_cphase(2, 6, eps=1.0)
ph = r.predicted_phases
print(f"mu={ph['mu']:.6f}  T={ph['duration']:.6f}  phi11/pi={ph['phi11'] / math.pi:.6f}")
rep = cphase_report(r)
print(f"fidelity {rep.fidelity:.12f}  leakage {rep.leakage:.1e}  conditional phase/pi {rep.conditional_phase / math.pi:.6f}")


# The |11> amplitude during the gate.  It dips while population visits |20>
# and |02>, then returns with magnitude one.  After removing exp(-2 i eps t)
# its phase ends at phi11.

# In[3]:


cols, rows, (ts, ys) = simulate_two_qubit(r.schedule, record_stride=50)
a11 = ys[:, 1] * np.exp(2j * ph["eps"] * ts)
phase = unwrap_phase(a11) / math.pi
for k in range(0, ts.size, max(1, ts.size // 8)):
    print(f"t={ts[k]:7.3f}  |a11|={abs(a11[k]):.4f}  phase/pi={phase[k]: .4f}")
print(f"t={ts[-1]:7.3f}  |a11|={abs(a11[-1]):.4f}  phase/pi={phase[-1]: .4f}")


# Integer pairs with m2 <= 2 m1 have no solution with eps > 0.  Without the
# self-interaction the sectors only pick up signs, which cancel in the
# conditional phase, so the gate would be trivial.

# In[4]:


try:
    synthesize_cphase(1, 2, eps=1.0)
except InfeasibleError as exc:
    print("infeasible:", exc)


# A quick scan over small integer pairs.

# In[5]:


for m1 in (1, 2):
    for m2 in range(2 * m1 + 1, 2 * m1 + 4):
        rep = cphase_report(synthesize_cphase(m1, m2, 1.0))
        print(m1, m2, f"{rep.conditional_phase / math.pi: .6f}", f"{rep.leakage:.1e}")
