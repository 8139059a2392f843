"""Integral cohomology of [*/Z_m] and of the three-arc circle.

Run: python demos/group_cohomology.py
"""

from grpd.cochains import a_double_complex, pullback_map, total_complex
from grpd.complexes import cohomology, induced_map
from grpd.models import circle_model, cyclic_model, plain_circle_model
from grpd.nerve import label_map


def groups(tc, top):
    return ", ".join(cohomology(tc, k, False).order_label for k in range(top + 1))


for m in (2, 3, 4, 5, 6):
    tc = total_complex(a_double_complex(cyclic_model(m, 5)))
    print(f"[*/Z_{m}]  H^0..4 = {groups(tc, 4)}")

# the Cech nerve of three arcs against the one-piece cover
fine = total_complex(a_double_complex(circle_model(3)))
coarse = total_complex(a_double_complex(plain_circle_model(3)))
print(f"three arcs H^0..2 = {groups(fine, 2)}")
f = label_map(circle_model(3), plain_circle_model(3), lambda r, lab: ((0,) * (r + 1), None))
P = pullback_map(f, fine, coarse)
for k in (0, 1):
    print(f"refinement on H^{k}: {induced_map(P, k).tolist()}")
