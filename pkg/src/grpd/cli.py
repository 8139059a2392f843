"""Command-line front end ``grpd``.

Exit codes: 0 ok, 1 a check reported failure, 2 parse or usage error,
3 validation failure, 4 cutoff too small, 5 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import CONVENTIONS, __version__
from . import linalg as la
from .cochains import a_double_complex, column_filtration, total_complex
from .complexes import CutoffError, FiltrationError, bete_filtration, cohomology, qz_cohomology
from .groupoid import GroupoidError, validate_groupoid
from .modelio import (ParseError, groupoid_from_json, load_json, model_from_json, space_from_json,
                      sparse_to_vec, vec_to_sparse, cover_from_json)
from .nerve import ActionError, CoverError, validate_cover

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID, EXIT_CUTOFF, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5


class UsageError(ValueError):
    pass


class ValidationFailure(ValueError):
    def __init__(self, report: dict):
        super().__init__("validation failed")
        self.report = report


# ---------------------------------------------------------------- helpers


def _filtration(name: str):
    if name in ("bete", "sigma"):
        return bete_filtration()
    if name == "column":
        return column_filtration()
    raise UsageError(f"unknown filtration {name!r}; choose bete or column")


def _model(args, R: int):
    if args.model:
        return model_from_json({"kind": "builtin", "name": args.model}, R)
    if not args.input:
        raise UsageError("give --in FILE or --model NAME")
    return model_from_json(load_json(args.input), R)


def _tc(args, R: int):
    return total_complex(a_double_complex(_model(args, R)))


def _cutoff(args, need: int) -> int:
    """Cutoff R: explicit or the smallest with degree ``need`` exact."""
    R = args.cutoff if args.cutoff is not None else need + 1
    if R < need + 1:
        raise CutoffError(f"degree {need} needs cutoff >= {need + 1}, got {R}")
    return R


def _window(args, R: int) -> list[int]:
    if not args.degree_window:
        return list(range(R))
    try:
        a, b = (int(x) for x in args.degree_window.split(".."))
    except ValueError:
        raise UsageError("--degree-window expects a..b") from None
    if b > R - 1:
        raise CutoffError(f"degree {b} needs cutoff >= {b + 1}, got {R}")
    return list(range(max(a, 0), b + 1))


def _seed(args) -> int:
    env = os.environ.get("GRPD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError("GRPD_SEED must be an integer") from None
    return args.seed


def _envelope(args, R, result) -> dict:
    return {"tool": "grpd", "version": __version__, "command": args.command,
            "conventions": CONVENTIONS,
            "cutoff": None if R is None else {"R": R, "exact_through_degree": R - 1},
            "seed": _seed(args), "result": result}


def _lam(args) -> str:
    lam = str(args.lam)
    if lam not in ("0", "Z", "Q"):
        raise UsageError("--lambda must be 0, Z or Q")
    return lam


def _indices(args):
    r, n = args.r, args.n
    if getattr(args, "k", None) is not None:
        k = args.k
        if r is None:
            r = k
        if n is None:
            n = 2 * r - k
        if 2 * r - n != k:
            raise UsageError("indices must satisfy k = 2r - n")
    if r is None or n is None:
        raise UsageError("give --r and --n (or --k)")
    if 2 * r - n < 0:
        raise UsageError("need 2r - n >= 0")
    return r, n, 2 * r - n


# ---------------------------------------------------------------- commands


def cmd_validate(args):
    d = load_json(args.input)
    kind = d.get("kind")
    if kind == "groupoid":
        try:
            rep = validate_groupoid(groupoid_from_json(d))
        except GroupoidError as e:
            rep = e.report
    elif kind == "space":
        rep = space_from_json(d).validate()
    elif kind == "cover":
        rep = validate_cover(cover_from_json(d))
    elif kind == "bundle":
        from .bundles import validate_bundle
        b, _ = _load_bundle(args.input)
        rep = validate_bundle(b)
    else:
        raise ParseError(f"cannot validate kind {kind!r}")
    out = rep.to_json()
    if not rep.ok:
        raise ValidationFailure(out)
    return None, out


def cmd_nerve(args):
    R = args.cutoff if args.cutoff is not None else 3
    n = _model(args, R)
    rep = n.validate()
    out = n.summary()
    out["valid"] = rep.ok
    if not rep.ok:
        raise ValidationFailure(rep.to_json())
    if args.dump_matrices:
        out["total_complex"] = total_complex(a_double_complex(n)).to_json()
    return R, out


def cmd_cohomology(args):
    R = args.cutoff if args.cutoff is not None else 3
    tc = _tc(args, R)
    degs = _window(args, R)
    coeff = args.coeff
    out = {"coefficients": coeff, "degrees": {}}
    for k in degs:
        if coeff == "Z":
            g = cohomology(tc, k, generators=False).to_json()
        elif coeff == "Q":
            g = cohomology(tc.over_Q(), k, generators=False).to_json()
        elif coeff == "Q/Z":
            g = qz_cohomology(tc, k).to_json()
        else:
            raise UsageError("--coeff must be Z, Q or Q/Z")
        out["degrees"][str(k)] = g
    if args.dump_matrices:
        out["total_complex"] = tc.to_json()
    return R, out


def _query(args):
    from .secondary import SecondaryQuery
    r, n, k = _indices(args)
    R = _cutoff(args, k + (1 if args.command in ("les",) else 0))
    tc = _tc(args, R)
    return R, SecondaryQuery(tc, _lam(args), _filtration(args.filtration), r=r, n=n)


def cmd_diffchar(args):
    from .secondary import diffchar_group
    R, q = _query(args)
    res = diffchar_group(q)
    out = res.to_json()
    out.update({"group": f"Hhat^{q.k - 1}_{q.r}", "lambda": q.lam, "filtration": q.F.name})
    return R, out


def cmd_mh(args):
    from .secondary import mh_group
    R, q = _query(args)
    res = mh_group(q)
    out = res.to_json()
    out.update({"group": f"MH^{2 * q.r}_{q.n}", "lambda": q.lam, "filtration": q.F.name})
    return R, out


def cmd_xi(args):
    from .secondary import xi_surjection
    R, q = _query(args)
    rep = xi_surjection(q)
    return R, rep.to_json()


def cmd_les(args):
    from .secondary import mh_les
    R, q = _query(args)
    rep = mh_les(q)
    return R, rep.to_json()


def _random_family(args, k, q):
    from .bundles import random_family
    R = _cutoff(args, 2 * k)
    tc = _tc(args, R)
    return R, tc, random_family(tc, q, random.Random(_seed(args)))


def cmd_theta(args):
    from .bundles import theta_transgression
    R, tc, fam = _random_family(args, args.k, args.q)
    th = theta_transgression(args.k, fam)
    return R, {"k": args.k, "q": args.q, "degree": 2 * args.k - args.q,
               "family": [vec_to_sparse(h) for h in fam.hs], "c": vec_to_sparse(fam.c),
               "theta": vec_to_sparse(th)}


def cmd_stokes(args):
    from .bundles import random_family, stokes_check
    R = _cutoff(args, 2 * args.k)
    tc = _tc(args, R)
    rng = random.Random(_seed(args))
    fails = []
    for t in range(args.trials):
        rep = stokes_check(args.k, random_family(tc, args.q, rng))
        if not rep.ok:
            fails.append(t)
    out = {"k": args.k, "q": args.q, "trials": args.trials, "failures": fails,
           "holds": not fails, "convention": CONVENTIONS["stokes"]}
    return R, out


def _load_bundle(path, R_default=None):
    """A bundle file: model (inline or path), cutoff, sparse c, h, ω, ω̂."""
    from .bundles import DifferentialCocycle, MultiplicativeBundle, make_bundle
    d = load_json(path)
    R = int(d.get("cutoff", R_default or 3))
    if "model" in d:
        mdl = d["model"]
    elif "model_path" in d:
        mdl = load_json(os.path.join(os.path.dirname(path), d["model_path"]))
    else:
        raise ParseError(f"{path}: bundle needs model or model_path")
    tc = total_complex(a_double_complex(model_from_json(mdl, R)))
    c = sparse_to_vec(d.get("c"), tc.n(2), "c")
    h = sparse_to_vec(d.get("h"), tc.n(1), "h")
    if "omega" in d:
        b = DifferentialCocycle(tc, c, h, sparse_to_vec(d["omega"], tc.n(2), "omega"))
    else:
        b = make_bundle(tc, c, h)
    oh = {int(r): sparse_to_vec(v, tc.n(2 * int(r) - 1), f"omega_hat[{r}]")
          for r, v in (d.get("omega_hat") or {}).items()}
    mb = MultiplicativeBundle(b, oh, _filtration(d.get("filtration", "bete")))
    return b, mb


def cmd_classify(args):
    from .bundles import char_class_xi, is_multiplicative, validate_bundle
    if not args.bundle:
        raise UsageError("classify needs --bundle FILE")
    b, mb = _load_bundle(args.bundle)
    rep = validate_bundle(b)
    if not rep.ok:
        raise ValidationFailure(rep.to_json())
    if args.filtration:
        mb.F = _filtration(args.filtration)
    k = args.k
    r = args.r if args.r is not None else k
    if args.n is not None and args.n != 2 * r - 2 * k:
        raise UsageError("the class lives in degree 2k, so n must equal 2r - 2k")
    if k not in mb.omega_hat:
        mb.omega_hat[k] = la.qvec([0] * b.tc.n(2 * k - 1))
    b.tc.check_degree(2 * k)
    ok, bad = is_multiplicative(mb)
    if not ok:
        raise ValidationFailure({"multiplicative": False, "failing_index": bad})
    X = char_class_xi(mb, k, r)
    return b.tc.valid_max + 1, X.to_json()


def cmd_iso(args):
    from .bundles import Gauge, is_multiplicative, iso_multiplicative
    b1, mb1 = _load_bundle(args.lhs)
    b2, mb2 = _load_bundle(args.rhs)
    for mb in (mb1, mb2):
        ok, bad = is_multiplicative(mb)
        if not ok:
            raise ValidationFailure({"multiplicative": False, "failing_index": bad})
    tc = b1.tc
    if args.gauge:
        g = load_json(args.gauge)
        gauge = Gauge(sparse_to_vec(g.get("b"), tc.n(1), "b"),
                      sparse_to_vec(g.get("lambda"), tc.n(0), "lambda"))
        if any(Fraction(x).denominator != 1 for x in gauge.b):
            raise ValidationFailure({"gauge": "b must be integral"})
    else:
        gauge = Gauge.identity(tc)
    if not gauge.relates(b1, b2):
        raise ValidationFailure({"gauge": "does not relate the underlying bundles"})
    dec = iso_multiplicative(mb1, mb2, gauge)
    return tc.valid_max + 1, dec.to_json()


def cmd_check_all(args):
    from .checks import run_all
    rep = run_all(seed=_seed(args))
    return None, rep


COMMANDS = {
    "validate": cmd_validate, "nerve": cmd_nerve, "cohomology": cmd_cohomology,
    "diffchar": cmd_diffchar, "mh": cmd_mh, "xi": cmd_xi, "les": cmd_les, "theta": cmd_theta,
    "stokes": cmd_stokes, "classify": cmd_classify, "iso": cmd_iso, "check-all": cmd_check_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grpd", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"grpd {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        if model:
            sp.add_argument("--in", dest="input", help="model JSON file")
            sp.add_argument("--model", help="built-in model name")
        sp.add_argument("--cutoff", type=int, help="nerve cutoff R (exact through R - 1)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--dump-matrices", action="store_true")
        sp.add_argument("--degree-window", help="a..b")

    def secondary(sp, k=False):
        if k:
            sp.add_argument("--k", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--lambda", dest="lam", default="Z")
        sp.add_argument("--filtration", default="bete")

    sp = sub.add_parser("validate", help="check a groupoid, space, cover or bundle file")
    common(sp)
    sp = sub.add_parser("nerve", help="nerve level sizes")
    common(sp)
    sp = sub.add_parser("cohomology", help="total-complex cohomology")
    common(sp)
    sp.add_argument("--coeff", default="Z")
    sp = sub.add_parser("diffchar", help="differential characters")
    common(sp)
    secondary(sp, k=True)
    for name in ("mh", "xi", "les"):
        sp = sub.add_parser(name)
        common(sp)
        secondary(sp, k=True)
    for name in ("theta", "stokes"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        if name == "stokes":
            sp.add_argument("--trials", type=int, default=10)
    sp = sub.add_parser("classify", help="characteristic class of a multiplicative bundle")
    common(sp, model=False)
    sp.add_argument("--bundle", required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--r", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--filtration")
    sp = sub.add_parser("iso", help="decide isomorphism of multiplicative bundles")
    common(sp, model=False)
    sp.add_argument("--lhs", required=True)
    sp.add_argument("--rhs", required=True)
    sp.add_argument("--gauge")
    sp = sub.add_parser("check-all", help="run the built-in self checks")
    common(sp, model=False)
    return p


def render_text(report: dict) -> str:
    lines = [f"grpd {report['version']} {report['command']}"]
    if report.get("cutoff"):
        lines.append(f"cutoff R = {report['cutoff']['R']}, exact through degree "
                     f"{report['cutoff']['exact_through_degree']}")
    res = report["result"]
    if isinstance(res, dict) and "degrees" in res:
        for k, g in res["degrees"].items():
            lines.append(f"H^{k} = {g['label']}")
    elif isinstance(res, dict) and "label" in res:
        lines.append(f"{res.get('group', 'group')} = {res['label']}")
    else:
        lines.append(json.dumps(res, sort_keys=True, indent=2))
    return "\n".join(lines) + "\n"


def _emit(args, report: dict) -> None:
    if getattr(args, "format", "json") == "text":
        text = render_text(report)
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _error(args, code: int, kind: str, msg: str, extra=None) -> int:
    out = {"tool": "grpd", "version": __version__, "command": getattr(args, "command", None),
           "error": {"kind": kind, "message": msg}}
    if extra is not None:
        out["error"]["report"] = extra
    sys.stderr.write(f"grpd: {kind}: {msg}\n")
    if args is not None and getattr(args, "format", "json") == "json":
        _emit(args, out)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        R, result = COMMANDS[args.command](args)
    except (ParseError, UsageError, KeyError, FileNotFoundError) as e:
        return _error(args, EXIT_PARSE, "parse", str(e))
    except ValidationFailure as e:
        return _error(args, EXIT_INVALID, "validation", "validation failed", e.report)
    except (GroupoidError, CoverError, ActionError, FiltrationError) as e:
        return _error(args, EXIT_INVALID, "validation", str(e))
    except CutoffError as e:
        return _error(args, EXIT_CUTOFF, "cutoff", str(e))
    except Exception as e:  # noqa: BLE001
        from .bundles import BundleError
        if isinstance(e, BundleError):
            return _error(args, EXIT_INVALID, "validation", str(e))
        return _error(args, EXIT_INTERNAL, "internal", f"{type(e).__name__}: {e}")
    report = _envelope(args, R, result)
    _emit(args, report)
    if isinstance(result, dict):
        for key in ("ok", "exact", "holds", "all_passed"):
            if result.get(key) is False:
                return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
