"""
Coefficient bounds on a cover of the Hartogs triangle
=====================================================

Two integrations by parts per variable bound each Laurent term by a
constant times the box (k+2)-seminorm of f.  The constant as usually
written, prod mu(alpha_j - k), can be too small when some alpha_j < k;
taking the max of mu(alpha_j - g) over g <= k repairs it.  We check both
on the cells of a rational cover of {|z1| < |z2| < 1}.
"""

from laurentseries import coefficients_dft, factor_M, factor_M_corrected, prop6_bound_check, rational_cover
from laurentseries.testfns import hartogs_function

print("constants for alpha=(-5,), k=2:", factor_M((-5,), 2), "vs corrected", factor_M_corrected((-5,), 2))

cover = rational_cover({"kind": "hartogs-triangle"}, depth=2)
h = hartogs_function()
for cell in cover.cells:
    f = h.with_validity(cell)
    table = coefficients_dft(f, N=8)
    certs = [c for k in range(4) for c in prop6_bound_check(f, table, cell, k, res=24, angles=12)]
    literal = [c for c in certs if not c.literal_ok]
    corrected = [c for c in certs if not c.corrected_ok]
    tight = min(certs, key=lambda c: c.margin_corrected / c.rhs_corrected if c.rhs_corrected else 1)
    print(f"{cell}: {len(certs)} certificates, literal failures {len(literal)}, corrected failures "
          f"{len(corrected)}, tightest alpha={tight.alpha} k={tight.k} lhs/rhs={tight.lhs / tight.rhs_corrected:.3f}")
