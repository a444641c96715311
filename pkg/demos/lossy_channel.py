"""How external losses erode the squeezed-probe advantage.

Prints Lambda(T) for the bTMSS probe at several pre-system transmissions
T_p, then shows the symplectic eigenvalues of the lossy two-mode squeezed
covariance matrix: losses mix the state, lifting the eigenvalues off 1.

Run:  python3 demos/lossy_channel.py
"""

import numpy as np

from qcrb_lab import (
    ChannelConfig,
    ComplexAmplitude,
    SqueezeSpec,
    StateKind,
    StateSpec,
    apply_channel,
    make_btmss,
    symplectic_eigenvalues,
)
from qcrb_lab.qfi import lambda_lossy, lossy_symplectic_closed_form

S = 2.0
spec = StateSpec(
    StateKind.BTMSS, alpha=ComplexAmplitude(1e3), squeeze=SqueezeSpec(s=S, theta=np.pi)
)

print("bTMSS Lambda(T) with detection efficiencies eta_p = eta_a = 0.98\n")
tp_values = (1.0, 0.9, 0.8)
print("     T" + "".join(f"   T_p={tp:4.2f}" for tp in tp_values))
for T in np.arange(0.1, 1.0, 0.1):
    row = f"{T:6.2f}"
    for tp in tp_values:
        ch = ChannelConfig(T=T, T_p=tp, eta_p=0.98, eta_a=0.98)
        row += f"{lambda_lossy(spec, ch).lam:11.6f}"
    print(row)

print("\nsymplectic eigenvalues of the TMSS after the loss chain")
print("(pure state: both equal 1; losses push them apart)\n")
sq = SqueezeSpec(s=1.0)
vtmss = make_btmss(ComplexAmplitude(0), ComplexAmplitude(0), sq)
for T in (1.0 - 1e-12, 0.8, 0.5, 0.2):
    ch = ChannelConfig(T=T, T_p=0.9, eta_p=0.98, eta_a=0.98)
    numeric = symplectic_eigenvalues(apply_channel(vtmss, ch))
    closed = np.sort(lossy_symplectic_closed_form(sq, ch))
    print(
        f"  T={T:5.2f}  numeric=({numeric[0]:.6f}, {numeric[1]:.6f})"
        f"  closed=({closed[0]:.6f}, {closed[1]:.6f})"
    )
