"""
Seminorms: sampled suprema and exact monomial values
====================================================

The C^k seminorm takes derivatives of total order <= k, the box seminorm
derivatives with every partial order <= k.  For a Laurent monomial both
have closed forms; for anything else we sample a closed polar grid.
"""

from laurentseries import (Polyannulus, Rational2D, box_seminorm, ck_seminorm, lemma5_check, monomial,
                           monomial_box_seminorm_exact)

ring = Polyannulus.annuli([0.5], [2.0])

# e_{-3} on the ring: sampled values approach the exact one from below
exact = monomial_box_seminorm_exact(1.0, (-3,), ring, 2)
for res in (5, 17, 65):
    approx = box_seminorm(monomial((-3,), ring), ring, 2, res=res).value
    print(f"res={res:<3} sampled {approx:.6f}   exact {exact:.6f}")

# in two variables the box seminorm sits between C^k and C^{2k}
bidisc = Polyannulus.polydisc(1.0, 1.0)
g = Rational2D(4.0, bidisc)
for k in (0, 1, 2):
    r = lemma5_check(g, bidisc, k)
    print(f"k={k}: C^k {r.ck_k.value:9.5f} <= box {r.box_k.value:9.5f} <= C^2k {r.ck_nk.value:9.5f}"
          f"   attained by gamma={r.box_k.gamma} at |z|={tuple(round(s, 3) for s in r.box_k.shadow)}")

# a report records where the supremum was found
rep = ck_seminorm(g, bidisc, 2)
print(rep)
