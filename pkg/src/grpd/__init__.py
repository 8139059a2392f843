"""Exact cochain models for finite groupoids, differential characters and
multiplicative bundles."""

__version__ = "0.1.0"

CONVENTIONS = {
    "composition": "(g, h) composable iff target(g) = source(h); compose(g, h) = g then h",
    "nerve_faces": "eps_0 drops the first arrow, eps_r drops the last, middle faces compose",
    "total_differential": "D = delta' + (-1)^r delta'' on A^{r,s}",
    "cup": "(-1)^{q p'} a(front) b(back) for a in A^{p,q}, b in A^{p',q'}",
    "cone": "cone^n = A^n + B^{n-1}, d(a, b) = (da, f(a) - db)",
    "mh_cone": "B = cone(C(Lambda) + F^r -> C(Q)), d(l, w, x) = (Dl, Dw, l - w - Dx)",
    "hat_cone": "A = cone(sigma_{>=k} F^r -> C(Q/Lambda)), computed through "
                "B_k = cone(C(Lambda) + sigma_{>=k} F^r -> C(Q))",
    "xi_map": "Xi(a, b) = (a - Db, a, -b)",
    "gauge": "(c, h) -> (c + Db, h - b + D lambda)",
    "stokes": "D Theta_q = (-1)^(q+1) sum_i (-1)^i Theta_(q-1)(omit i); "
              "simplex oriented by ds_1 ... ds_q",
    "transgression_cochain": "v = sum_i omega^i h c^(k-1-i), Dv = omega^k - c^k",
    "cutoff": "nerve levels 0..R; cohomology exact in degrees <= R - 1",
}

__all__ = ["__version__", "CONVENTIONS"]
