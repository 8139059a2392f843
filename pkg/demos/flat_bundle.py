"""A flat line bundle on the circle: holonomy, the class ξ and its character.

Also shows the one place where the Hhat class is not invariant: shifting
the stored form by an element of F^k in degree 2k - 1.

Run: python demos/flat_bundle.py
"""

from fractions import Fraction

from grpd import linalg as la
from grpd.bundles import (MultiplicativeBundle, char_class_xi, edge_cochain, flat_circle_bundle,
                          holonomy, same_hat_class, same_mh_class)
from grpd.cochains import a_double_complex, total_complex
from grpd.models import circle_model

tc = total_complex(a_double_complex(circle_model(3)))
zero = la.qvec([0] * tc.n(1))

for v in (Fraction(1, 3), Fraction(2, 7), Fraction(-5, 4)):
    d, z = flat_circle_bundle(tc, v)
    X = char_class_xi(MultiplicativeBundle(d, {1: zero}), 1)
    print(f"edge sum {v}: holonomy {holonomy(d, z)}, character {X.character(z)}, "
          f"MH zero {X.mh_zero}, Hhat zero {X.hat_zero}")

d, _ = flat_circle_bundle(tc, Fraction(1, 3))
X = char_class_xi(MultiplicativeBundle(d, {1: zero}), 1)
sigma = edge_cochain(tc, (0,), (0, 1)) * Fraction(1, 2)
Y = char_class_xi(MultiplicativeBundle(d, {1: sigma}), 1)
print(f"shift by sigma in F^1: same MH class {same_mh_class(X, Y)}, "
      f"same Hhat class {same_hat_class(X, Y)}")
