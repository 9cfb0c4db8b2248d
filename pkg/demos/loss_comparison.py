"""Photon-loss sensitivity of the three transfer protocols.

With a propagation loss rate kappa on the link, the extra transfer error is
1 - exp(-kappa * integral n_photon dt): it is set by how long the excitation
actually lives in the line, not by the protocol duration alone.  The
adiabatic protocol keeps the link nearly empty (quasi-dark passage) and picks
up the least loss; shaping deliberately fills the line with a wavepacket and
pays for it at long durations.

Run:  python3 demos/loss_comparison.py
Writes loss_comparison.csv.
"""

from shortlink.io import write_csv
from shortlink.sweep import loss_scan

kappa_tau = 0.01

# coupling grids chosen so the rule-of-thumb durations sit in the
# asymptotic long-duration window T/tau ~ 9..90
out = {}
out.update(loss_scan([0.002, 0.005, 0.01, 0.02, 0.05, 0.1],
                     kappa_tau=kappa_tau, protocols=("swap",)))
out.update(loss_scan([0.01, 0.02, 0.05, 0.1, 0.2, 0.5],
                     kappa_tau=kappa_tau, protocols=("stirap", "czkm")))

print(f"kappa*tau = {kappa_tau}\n")
rows = []
for kind, rec in out.items():
    fit = rec["fit"]
    print(f"{kind:>7}: loss error ~ {fit['prefactor']:.2e} * (T/tau)^{fit['exponent']:.2f}")
    rows.extend((kind, T, eps) for T, eps in rec["rows"])

print("\nthe adiabatic protocol has the smallest loss prefactor; the shaped "
      "protocol's\nsteeper exponent reflects the wavepacket dwelling in the line")

path = write_csv("loss_comparison.csv",
                 ["protocol", "T_over_tau", "loss_error"], rows,
                 {"kappa_tau": kappa_tau})
print(f"wrote {path}")
