"""Efficiency of periodic Gaussian regularization over Sobolev classes, and finite-n Pinsker risks."""

from pgreg.asymptotics import (asymptotic_minimax_Hinf, efficiency_Hm, minimax_Hm, pinsker_solve,
                               risk_analytic)
from pgreg.sequence import Ellipsoid

print(f"{'m':>4}{'risk ratio':>12}{'sample eff.':>13}")
for m in (1, 2, 3, 4, 5, 10, 20, 50, 100):
    e = efficiency_Hm(m)
    print(f"{m:>4}{e.risk_ratio:>12.4f}{e.sample_efficiency:>13.4f}")

print("\nfinite-n Pinsker risk / closed-form limit")
print(f"{'n':>8}{'H-inf w=1':>12}{'H^1':>10}{'H^2':>10}{'A_1':>10}")
for n in (10**2, 10**3, 10**4, 10**5, 10**6):
    row = [
        pinsker_solve(Ellipsoid("infinite_order", 1.0), n).risk / asymptotic_minimax_Hinf(1.0, n),
        pinsker_solve(Ellipsoid("sobolev", 1), n).risk / minimax_Hm(1, 1.0, n),
        pinsker_solve(Ellipsoid("sobolev", 2), n).risk / minimax_Hm(2, 1.0, n),
        pinsker_solve(Ellipsoid("analytic", 1.0), n).risk / risk_analytic(1.0, n),
    ]
    print(f"{n:>8}" + "".join(f"{v:>10.4f}" if i else f"{v:>12.4f}" for i, v in enumerate(row)))
