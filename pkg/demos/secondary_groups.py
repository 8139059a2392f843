"""Differential characters, multiplicative cohomology and the map between them.

Run: python demos/secondary_groups.py
"""

from grpd.cochains import a_double_complex, total_complex
from grpd.models import circle_model, point_model, z2_model
from grpd.secondary import SecondaryQuery, diffchar_group, mh_group, mh_les, xi_surjection

MODELS = {"point": point_model, "circle": circle_model, "z2": z2_model}

for name, mk in MODELS.items():
    for r, n in ((1, 0), (1, 1), (2, 2)):
        tc = total_complex(a_double_complex(mk(2 * r - n + 2)))
        q = SecondaryQuery(tc, "Z", r=r, n=n)
        hat = diffchar_group(q).group.label()
        mh = mh_group(q).group.label()
        rep = xi_surjection(q)
        print(f"{name:6} r={r} n={n}  Hhat = {hat:18} MH = {mh:10} "
              f"Xi onto: {rep.surjective}  kernel = {rep.kernel.label()}  "
              f"LES exact: {mh_les(q).exact}")
