"""Log-scaled matrices and spectral classification.

Entries stay unit-normalized while a separate log scale absorbs growth, so
products along long words never overflow; singular values, eigenvalue moduli
and proximality data all come back on the log scale.
"""

import numpy as np

from anosov import (
    ScaledMatrix,
    normalize_to_sl,
    proximality_report,
    singular_values,
    spectrum,
)

print("= a long product that would overflow raw doubles =")
g = ScaledMatrix.from_array(np.array([[3.0, 1.0], [0.0, 1 / 3.0]]))
word = ScaledMatrix.identity(2)
for _ in range(64):
    word = word @ g
print(f"after 64 factors: max |entry| = {np.abs(word.entries).max():.3f}, "
      f"log scale = {word.log_scale:.1f}  (true top entry ~ e^{word.log_scale:.0f})")
sp = spectrum(word)
print(f"log eigenvalue moduli: {np.round(sp.log_moduli, 2)}  "
      f"(top gap grows by 2 log 3 per letter)")

print()
print("= full singular values of a length-8 product =")
short = ScaledMatrix.identity(2)
for _ in range(8):
    short = short @ g
sv = singular_values(short)
print(f"log sigma = {np.round(sv.log_values, 4)}, "
      f"log gap = {sv.log_gap(1):.4f} = {sv.log_gap(1) / np.log(9):.1f} * log 9")

print()
print("= spectra and proximality =")
for label, mat in [
    ("diag(2, 1, 1/2)", np.diag([2.0, 1.0, 0.5])),
    ("diag(-2, 1, -1/2)", np.diag([-2.0, 1.0, -0.5])),
    ("rotation by pi/2", np.array([[0.0, -1.0], [1.0, 0.0]])),
]:
    sp = spectrum(ScaledMatrix.from_array(mat))
    print(f"{label:20s} moduli={np.round(sp.moduli, 3)} "
          f"top_signed={sp.top_signed} semiproximal+={sp.is_semiproximal_positive}")

print()
report = proximality_report(ScaledMatrix.from_array(np.diag([3.0, 2.0, 1.0])), 2)
print(f"diag(3,2,1) at k=2: proximal={report.is_proximal}, gap={report.gap_eig:.1f}")
print(f"attracting plane:\n{np.round(report.attracting_plane, 6)}")

print()
print("= determinant normalization preserves every ratio =")
m = ScaledMatrix.from_array(np.diag([4.0, 1.0]))
n = normalize_to_sl(m)
print(f"diag(4,1) -> {np.round(n.array(), 6).diagonal()}  (gaps unchanged)")
