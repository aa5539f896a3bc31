"""Sign obstructions and ping-pong subgroups.

An odd symmetric power of a free group in SL(2,R) scanned under an odd
compound cannot be positively proximal: the scan hunts the ball for a
proximal element with negative top eigenvalue (here the commutator, whose
SL(2,R) trace is negative).  Signed top eigenvalues stay constant along
small deformation paths, and a quarter-rotation conjugator makes the
standard pair play projective ping-pong at the first power.
"""

import math

import numpy as np

from anosov import (
    SchottkyParams,
    certify_anosov,
    evaluate,
    gap_profile,
    parse_word,
    perturb_path,
    pingpong_power,
    pingpong_subgroup,
    rotation_about_i,
    scan_positivity,
    schottky_rep,
    sym_power_rep,
    track_ell1_along_path,
)

rep = schottky_rep(SchottkyParams(rank=2, dilation=3.0))
print("generator traces:", [round(float(np.trace(g.array())), 3) for g in rep.images])

print()
print("= negative-witness scan in the 20-dimensional exterior power =")
s5 = sym_power_rep(rep, 5)
for radius in range(2, 9):
    report = scan_positivity(s5, 3, radius)
    print(f"radius {radius}: {report.verdict:22s} "
          f"proximal={report.n_proximal:4d} negative={report.n_negative}")
    if report.verdict == "NotPositivelyProximal":
        base_trace = float(np.trace(evaluate(rep, parse_word(report.witness)).array()))
        print(f"witness {report.witness}: re-verified={report.witness_recheck}, "
              f"SL(2,R) trace = {base_trace:.3f}")
        break

print()
print("= signed top eigenvalue along a small deformation =")
path = perturb_path(rep, 0.01, seed=0, steps=50)
for word in ("a", "ab", "abAB"):
    trace = track_ell1_along_path(path, parse_word(word), 1)
    print(f"word {word:5s}: {trace.verdict}, signs all "
          f"{'+' if trace.signs[0] > 0 else '-'}")

print()
print("= ping-pong power search =")
quarter = rotation_about_i(math.pi / 2)
result = pingpong_power(rep, parse_word("a"), quarter)
print(f"N = {result.n} at delta = {result.delta:.4f}")
sub = pingpong_subgroup(rep, parse_word("a"), quarter, result.n)
est = certify_anosov(gap_profile(sub, 1, 4))
print(f"induced rank-2 subgroup on its radius-4 ball: {est.verdict} "
      f"(alpha_hat = {est.alpha_hat:.3f})")
