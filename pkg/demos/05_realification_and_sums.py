"""Why dimension multiples of four behave differently.

Realifying a complex 2x2 representation doubles every singular value, so the
top gap closes identically (k=1 refuted) while the middle gap survives (k=2
certified).  Block sums repeat the effect: only the middle index of the
doubled representation keeps a growing gap.
"""

from anosov import (
    SchottkyParams,
    certify_anosov,
    direct_sum,
    gap_profile,
    realify_rep,
    schottky_rep,
)

crep = schottky_rep(
    SchottkyParams(rank=2, dilation=3.0, field="complex", twists=(0.3, 0.7))
)
rep4 = realify_rep(crep)
print("realified representation in dimension", rep4.dim)
for k in (1, 2):
    est = certify_anosov(gap_profile(rep4, k, 6))
    extra = f" witness={est.witness}" if est.witness else f" alpha_hat={est.alpha_hat:.3f}"
    print(f"  k={k}: {est.verdict}{extra}")

rep8 = direct_sum([rep4, rep4])
print()
print("doubled block sum in dimension", rep8.dim)
for k in (1, 2, 3, 4):
    est = certify_anosov(gap_profile(rep8, k, 5))
    extra = f" witness={est.witness}" if est.witness else f" alpha_hat={est.alpha_hat:.3f}"
    print(f"  k={k}: {est.verdict}{extra}")
