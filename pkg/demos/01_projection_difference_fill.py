"""Spectrum of the projection difference for the rank-one resolvent pair.

Both operators in this model have purely a.c. spectrum [0, 1] in the
continuum, and the difference of their spectral projections at any
probe inside (0, 1) fills the whole interval [-1, 1].  At finite
truncation the nonzero spectrum of D is a short geometric ladder: the
fill-in is logarithmic in the truncation length, which this script
makes visible by printing the ladder at growing sizes.
"""

import numpy as np

from projdiff.harness import write_spectrum_csv
from projdiff.models import build_krein
from projdiff.projections import projection_difference

probe = 0.5

print(f"probe = {probe}: continuum prediction is spectrum(D) = [-1, 1]\n")
print(f"{'n':>5} {'L':>5} {'min eig':>9} {'max eig':>9} {'max gap':>9} "
      f"{'coverage':>9}  top ladder")
for n, L in [(100, 10.0), (200, 20.0), (400, 40.0), (800, 80.0), (1200, 160.0)]:
    rep = projection_difference(build_krein(n, L), probe)
    top = np.sort(rep.spectrum)[-4:][::-1]
    print(f"{n:>5} {L:>5.0f} {rep.extremes[0]:>9.4f} {rep.extremes[1]:>9.4f} "
          f"{rep.max_gap:>9.4f} {rep.coverage_distance:>9.4f}  "
          + " ".join(f"{x:.4f}" for x in top))

print("""
Rows whose extreme hits -1.0000 exactly carry a swap eigenvalue: the
integer counting shift at the probe is 1 there, which forces an exact -1
(these flip between 0 and 1 as the truncation moves levels across the
probe).  Away from the swaps, the edge deficit 1 - max eig shrinks
roughly like 1/log(L): each doubling of the window adds about one rung
to the ladder.  Reaching the limiting interval within 0.05 would need
astronomically large truncations; this is the same slow finite-section
convergence seen for the Hilbert matrix.
""")

rep = projection_difference(build_krein(400, 40.0), probe)
write_spectrum_csv("krein_difference_spectrum.csv", rep.spectrum)
print("wrote krein_difference_spectrum.csv (index,value; one eigenvalue per row)")
print(f"swap dimensions: dim(+1) = {rep.dim_plus}, dim(-1) = {rep.dim_minus}")
print(f"middle-spectrum pairing defect: {rep.pairing_defect:.2e} "
      "(the +-x symmetry is exact in finite dimensions)")
