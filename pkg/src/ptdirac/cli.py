"""Command-line front end.

    ptdirac potential   --which V1 --a 1 --mu 1
    ptdirac spectrum    --model eq38 --branch k2 --nmax 3
    ptdirac constraints --a 1 --mu 1
    ptdirac pdfv        --kind real --alpha 1 --beta 1
    ptdirac verify

Exit codes: 0 success, 1 failed verification, 2 usage or configuration
error, 3 numeric failure. Every output starts with ``#`` lines echoing the
resolved configuration; floats are written with 17 significant digits.
"""
import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from . import intertwine as itw
from . import model as mc
from . import nu
from . import oracle
from . import pdfv
from .errors import NumericFailure, PtDiracError, TranscriptionFlagError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

MODELS = ("eq26", "eq27", "eq38", "eq39", "eq40", "eq41", "custom-bs")

COMMON = {"a": 1.0, "mu": 1.0, "k": 0.0, "order": 2, "out": None, "format": None}
DEFAULTS = {
    "potential": {**COMMON, "which": "V1", "model": "eq38", "grid_l": 12.0, "grid_n": 2001,
                  "b1": None, "s": None, "kind": "real", "alpha": 1.0, "beta": 1.0,
                  "constraint_set": "first", "veff_which": 2},
    "spectrum": {**COMMON, "model": "eq38", "branch": "both", "nmax": 3, "b1": None, "s": None,
                 "grid_l": oracle.DEFAULT_L, "grid_n": oracle.DEFAULT_N, "vf": 1.0,
                 "imaginary_vf": False, "include_marginal": False, "verify_inline": False},
    "constraints": {**COMMON},
    "pdfv": {**COMMON, "kind": "real", "alpha": 1.0, "beta": 1.0, "a0": None, "a1": None,
             "a2": 0.0, "constraint_set": "first", "veff_which": 2,
             "grid_l": 5.0, "grid_n": 1001},
    "verify": {**COMMON, "grid_l": oracle.DEFAULT_L, "grid_n": 1501, "suite": "all",
               "perturb_b1": 0.0},
}
FORMATS = {"potential": "csv", "spectrum": "csv", "constraints": "csv", "pdfv": "csv",
           "verify": "report"}
SUITES = ("factorization", "pt-symmetry", "constraints", "intertwining", "spectral-shift",
          "pdfv-reduction")


class UsageError(Exception):
    pass


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def dump(obj, indent=0):
    """Deterministic JSON-shaped text with 17-digit floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + "  " + dump(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (complex, np.complexfloating)):
        return '{"re": %s, "im": %s}' % (_num(obj.real), _num(obj.imag))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    return _num(obj)


def _num(v):
    s = fmt(v)
    return json.dumps(s) if s in ("nan", "inf", "-inf") else s


def header(cfg):
    lines = [f"# ptdirac {__version__}", f"# units: {mc.UNITS}"]
    lines += [f"# {k} = {fmt(v) if not isinstance(v, str) else v}" for k, v in sorted(cfg.items())]
    return "\n".join(lines) + "\n"


def csv_block(columns, rows):
    out = [",".join(columns)]
    out += [",".join(fmt(v) if not isinstance(v, str) else v for v in row) for row in rows]
    return "\n".join(out) + "\n"


# -- model helpers -------------------------------------------------------

def model_couplings(cfg):
    """``(A1, A2)`` of the Scarf II form selected by ``model``."""
    a, mu, name = cfg["a"], cfg["mu"], cfg["model"]
    if name == "eq26":
        return -a * a + 0j, -1j * a * mu
    if name == "eq27":
        return -a * a + 0j, 1j * a * mu
    if name == "custom-bs":
        if cfg.get("b1") is None or cfg.get("s") is None:
            raise UsageError("model custom-bs needs --b1 and --s")
        c = itw.make_coeffs(cfg["b1"], cfg["s"], a, mu)
    else:
        c = next(c for c in itw.solve_bs_constraints(a, mu) if c.label == name)
    m = itw.u_member(c, a, mu)
    return m.a1_coeff, m.a2_coeff


def _grid(cfg):
    return oracle.Grid(float(cfg["grid_l"]), int(cfg["grid_n"]))


def _ansatz(cfg):
    ans = pdfv.PdfvAnsatz(cfg["kind"], cfg["alpha"], cfg["beta"], cfg["mu"],
                          a2c=cfg.get("a2", 0.0) or 0.0, k=cfg["k"])
    if cfg.get("a0") is not None or cfg.get("a1") is not None:
        from dataclasses import replace
        return replace(ans, a0=complex(cfg.get("a0") or 0), a1c=complex(cfg.get("a1") or 0),
                       constraint_set=None)
    return ans.with_constraints(cfg["constraint_set"])


# -- commands ------------------------------------------------------------

def run_potential(cfg):
    x = _grid(cfg).points
    which = cfg["which"]
    m = mc.ScarfModel(cfg["a"], cfg["mu"], cfg["k"])
    if which in ("V1", "V2"):
        v1, v2 = mc.scarf2_potentials(m, x)
        v = v1 if which == "V1" else v2
    elif which == "U":
        a1, a2 = model_couplings(cfg)
        v = nu.NUProblem.from_potential(a1, a2, cfg["mu"]).potential(x)
    elif which == "Veff":
        v = np.asarray(pdfv.eff_potential(_ansatz(cfg), int(cfg["veff_which"]), x))
    else:
        raise UsageError(f"unknown potential {which!r}")
    samples = [mc.ComplexPotentialSample(float(xi), complex(vi), which) for xi, vi in zip(x, v)]
    return EXIT_OK, csv_block(["x", "re", "im"],
                              [(s.x, s.v.real, s.v.imag) for s in samples])


def _branches(cfg):
    b = cfg["branch"]
    if b == "both":
        return list(nu.BRANCHES)
    if b not in nu.BRANCHES:
        raise UsageError(f"branch must be k1, k2 or both, got {b!r}")
    return [b]


SPECTRUM_COLUMNS = ["branch", "n", "re_e", "im_e", "re_dirac", "im_dirac", "normalizable",
                    "marginal", "re_numeric", "im_numeric", "abs_err"]


def run_spectrum(cfg):
    if int(cfg["nmax"]) < 0:
        raise UsageError("nmax must be non-negative")
    a1, a2 = model_couplings(cfg)
    prob = nu.NUProblem.from_potential(a1, a2, cfg["mu"])
    rows, rejected = [], []
    for tag in _branches(cfg):
        if not nu.nu_branch(prob, tag).accepted:
            rejected.append(tag)
            continue
        rows += nu.spectrum_records(prob, tag, int(cfg["nmax"]), cfg["vf"], cfg["imaginary_vf"])
    cfg["rejected_branches"] = ",".join(rejected) or "none"
    if not cfg["include_marginal"]:
        rows = [r for r in rows if not r["marginal"]]
    matches = [None] * len(rows)
    if cfg["verify_inline"]:
        values = oracle.bound_spectrum(prob.potential, _grid(cfg), order=int(cfg["order"]))
        bound = [i for i, r in enumerate(rows) if r["normalizable"]]
        report = oracle.match_spectra([complex(rows[i]["re_e"], rows[i]["im_e"]) for i in bound],
                                      values, tol=2e-3)
        for e in report.entries:
            i = next(i for i in bound if matches[i] is None
                     and complex(rows[i]["re_e"], rows[i]["im_e"]) == e.closed_form)
            matches[i] = e
    out = []
    failed = False
    for r, e in zip(rows, matches):
        if e is not None and not e.matched:
            failed = True
        out.append((r["branch"], r["n"], r["re_e"], r["im_e"], r["re_dirac"], r["im_dirac"],
                    r["normalizable"], r["marginal"],
                    e.numeric.real if e is not None and e.matched else None,
                    e.numeric.imag if e is not None and e.matched else None,
                    e.abs_err if e is not None else None))
    if cfg["format"] == "report":
        recs = [dict(zip(SPECTRUM_COLUMNS, row)) for row in out]
        return (EXIT_FAIL if failed else EXIT_OK), dump({"levels": recs}) + "\n"
    return (EXIT_FAIL if failed else EXIT_OK), csv_block(SPECTRUM_COLUMNS, out)


def run_constraints(cfg):
    sols = itw.solve_bs_constraints(cfg["a"], cfg["mu"])
    cols = ["label", "re_b1", "im_b1", "re_s", "im_s", "abs_residual34", "abs_residual35",
            "degenerate"]
    rows = [(c.label, c.b1.real, c.b1.imag, c.s.real, c.s.imag, abs(c.residual34),
             abs(c.residual35), c.degenerate) for c in sols]
    if cfg["format"] == "report":
        return EXIT_OK, dump({"solutions": [dict(zip(cols, r)) for r in rows]}) + "\n"
    return EXIT_OK, csv_block(cols, rows)


def run_pdfv(cfg):
    ans = _ansatz(cfg)
    which = int(cfg["veff_which"])
    x = _grid(cfg).points
    full = pdfv.eff_potential_full(ans, x) if which == 2 else pdfv.eff_potential(ans, 1, x)
    if ans.constraint_set == "first":
        simp = np.asarray(pdfv.eff_potential_simplified(ans, which, x))
    else:
        simp = np.full(x.shape, np.nan + 0j)
    rows = [(xi, s.real, s.imag, f.real, f.imag) for xi, s, f in zip(x, simp, np.asarray(full))]
    return EXIT_OK, csv_block(["x", "re_simplified", "im_simplified", "re_full", "im_full"], rows)


# -- verification suite --------------------------------------------------

def _check(name, passed, **data):
    return {"check": name, "passed": bool(passed), **data}


def check_factorization(cfg):
    m = mc.ScarfModel(cfg["a"], cfg["mu"])
    x = np.linspace(-12 / cfg["mu"], 12 / cfg["mu"], 1000)
    v1, v2 = mc.scarf2_potentials(m, x)
    p1, p2 = mc.partner_potentials(m.superpotential(), x)
    r = float(max(np.max(np.abs(v1 - p1)), np.max(np.abs(v2 - p2))))
    return _check("factorization", r <= 1e-12, residual=r, tol=1e-12, points=1000)


def check_pt(cfg):
    m = mc.ScarfModel(cfg["a"], cfg["mu"])
    x = oracle.Grid(12 / cfg["mu"], 2001).points
    r1 = mc.pt_symmetry_residual(lambda t: mc.scarf2_potentials(m, t)[0], x)
    r2 = mc.pt_symmetry_residual(lambda t: mc.scarf2_potentials(m, t)[1], x)
    return _check("pt-symmetry", max(r1, r2) <= 1e-12, residual_v1=r1, residual_v2=r2,
                  tol=1e-12)


def check_constraints(cfg):
    a, mu = cfg["a"], cfg["mu"]
    rows, ok = [], True
    for c in itw.solve_bs_constraints(a, mu):
        b1 = c.b1 + cfg["perturb_b1"]
        r34, r35 = itw.constraint_residuals(b1, c.s, a, mu)
        m = itw.u_member(itw.make_coeffs(b1, c.s, a, mu, c.label), a, mu)
        printed = itw.PRINTED_U[c.label](a, mu)
        coef_gap = max(abs(m.a1_coeff - printed[0]), abs(m.a2_coeff - printed[1]))
        good = max(abs(r34), abs(r35)) <= 1e-12
        ok &= good
        rows.append({"label": c.label, "b1": complex(b1), "s": c.s,
                     "residual34": abs(r34), "residual35": abs(r35),
                     "printed_coefficient_gap": coef_gap})
    return _check("constraints", ok, solutions=rows, tol=1e-12)


def check_intertwining(cfg):
    a, mu = cfg["a"], cfg["mu"]
    base = (int(cfg["grid_n"]) - 1) // 2 + 1
    base += 1 - base % 2
    grids = [oracle.Grid(cfg["grid_l"], base)]
    for _ in range(2):
        grids.append(grids[-1].refined())
    c = itw.solve_bs_constraints(a, mu)[0]
    u = itw.u_member(c, a, mu)
    v2 = lambda x: mc.scarf2_potentials(mc.ScarfModel(a, mu), x)[1]
    e1 = itw.EtaOperator.eta1(c.b1, c.s, mu)
    e2 = itw.EtaOperator.eta2(a, mu)
    s1 = oracle.convergence_study(lambda g: itw.intertwining_residual(u, v2, e1, g), grids)
    s2 = oracle.convergence_study(lambda g: itw.pseudo_hermiticity_residual(v2, e2, g), grids)
    return _check("intertwining", s1.within(3.5, 4.5) and s2.within(3.5, 4.5),
                  grids=[g.n for g in grids],
                  intertwining_residuals=list(s1.errors), intertwining_ratios=list(s1.ratios),
                  pseudo_hermiticity_residuals=list(s2.errors),
                  pseudo_hermiticity_ratios=list(s2.ratios), band=[3.5, 4.5])


def check_spectral_shift(cfg):
    a, mu = cfg["a"], cfg["mu"]
    grid = _grid(cfg)
    c = itw.solve_bs_constraints(a, mu)[0]
    u = itw.u_member(c, a, mu)
    v2 = lambda x: mc.scarf2_potentials(mc.ScarfModel(a, mu), x)[1]
    states_h = oracle.bound_states(u, grid)
    rep = itw.spectral_shift_check(u, v2, 5e-3, grid, itw.EtaOperator.eta1(c.b1, c.s, mu),
                                   states_h=states_h)
    prob = nu.NUProblem.from_potential(u.a1_coeff, u.a2_coeff, mu)
    closed = [nu.nu_energy(prob, t, n) for t in nu.BRANCHES
              for n in range(nu.normalizable_levels(prob, t))]
    match = oracle.match_spectra(closed, [s.value for s in states_h], 2e-3, grid)
    coll = rep.max_collinearity()
    ok = rep.passed and match.all_matched and (coll is None or coll <= 1e-2)
    return _check("spectral-shift", ok, grid=grid.describe(), values_h=rep.values_h,
                  values_h2=rep.values_h2, exceptions=[v for _, v in rep.exceptions],
                  extra_level_owner=rep.extra_level_owner, max_collinearity=coll,
                  closed_form=match.as_dict())


PDFV_TRIPLES = ((1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (2.0, 1.0, 0.5))


def check_pdfv(cfg):
    x = np.linspace(-5, 5, 1001)
    rows, ok = [], True
    for kind in pdfv.KINDS:
        for al, be, mu in PDFV_TRIPLES:
            ans = pdfv.PdfvAnsatz(kind, al, be, mu, k=cfg["k"]).with_constraints("first")
            try:
                full = np.asarray(pdfv.eff_potential_full(ans, x))
                flagged = False
            except TranscriptionFlagError:
                full, flagged = np.asarray(pdfv.printed_expansion(ans, x)), True
            d_def = float(np.max(np.abs(full - np.asarray(pdfv.eff_potential(ans, 2, x)))))
            d_simp = float(np.max(np.abs(full - np.asarray(
                pdfv.eff_potential_simplified(ans, 2, x)))))
            good = not flagged and d_def <= 1e-10 and d_simp <= 1e-10
            ok &= good
            rows.append({"kind": kind, "alpha": al, "beta": be, "mu": mu,
                         "full_vs_definitional": d_def, "full_vs_simplified": d_simp})
    return _check("pdfv-reduction", ok, cases=rows, tol=1e-10)


CHECKS = {
    "factorization": check_factorization,
    "pt-symmetry": check_pt,
    "constraints": check_constraints,
    "intertwining": check_intertwining,
    "spectral-shift": check_spectral_shift,
    "pdfv-reduction": check_pdfv,
}


def run_verify(cfg):
    names = SUITES if cfg["suite"] == "all" else [s.strip() for s in cfg["suite"].split(",")]
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check suites: {', '.join(unknown)}")
    results = [CHECKS[n](cfg) for n in names]
    ok = all(r["passed"] for r in results)
    body = dump({"passed": ok, "checks": results}) + "\n"
    return (EXIT_OK if ok else EXIT_FAIL), body


COMMANDS = {
    "potential": run_potential,
    "spectrum": run_spectrum,
    "constraints": run_constraints,
    "pdfv": run_pdfv,
    "verify": run_verify,
}


# -- argument handling ---------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="ptdirac", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file with option values; flags win")
        sp.add_argument("--a", type=float)
        sp.add_argument("--mu", type=float)
        sp.add_argument("--k", type=float)
        sp.add_argument("--order", type=int, choices=(2, 4))
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "report"))
        if name != "constraints":
            sp.add_argument("--grid-l", dest="grid_l", type=float)
            sp.add_argument("--grid-n", dest="grid_n", type=int)
        if name in ("potential", "spectrum"):
            sp.add_argument("--model", choices=MODELS)
            sp.add_argument("--b1", type=float)
            sp.add_argument("--s", type=float)
        if name in ("potential", "pdfv"):
            sp.add_argument("--kind", choices=pdfv.KINDS)
            sp.add_argument("--alpha", type=float)
            sp.add_argument("--beta", type=float)
            sp.add_argument("--constraint-set", dest="constraint_set",
                            choices=("first", "second"))
            sp.add_argument("--veff-which", dest="veff_which", type=int, choices=(1, 2))
        if name == "potential":
            sp.add_argument("--which", choices=("V1", "V2", "U", "Veff"))
        if name == "pdfv":
            sp.add_argument("--a0", type=complex)
            sp.add_argument("--a1", type=complex)
            sp.add_argument("--a2", type=complex)
        if name == "spectrum":
            sp.add_argument("--branch", choices=("k1", "k2", "both"))
            sp.add_argument("--nmax", type=int)
            sp.add_argument("--vf", type=float)
            sp.add_argument("--imaginary-vf", dest="imaginary_vf", action="store_const",
                            const=True)
            sp.add_argument("--include-marginal", dest="include_marginal",
                            action="store_const", const=True)
            sp.add_argument("--verify-inline", dest="verify_inline", action="store_const",
                            const=True)
        if name == "verify":
            sp.add_argument("--suite", help="comma-separated subset of: " + ", ".join(SUITES))
            sp.add_argument("--perturb-b1", dest="perturb_b1", type=float,
                            help="add this offset to every B1 (negative control)")
    return p


def resolve(args):
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = sorted(set(loaded) - set(cfg))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(loaded)
    for key, val in vars(args).items():
        if key in cfg and val is not None:
            cfg[key] = val
    if cfg["format"] is None:
        cfg["format"] = FORMATS[args.command]
    cfg["command"] = args.command
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        code, body = COMMANDS[args.command](cfg)
    except (UsageError, PtDiracError) as exc:
        code = EXIT_NUMERIC if isinstance(exc, NumericFailure) else EXIT_USAGE
        if isinstance(exc, TranscriptionFlagError):
            code = EXIT_FAIL
        print(f"ptdirac: error: {exc}", file=sys.stderr)
        return code
    text = header({k: v for k, v in cfg.items() if k != "out"}) + body
    if cfg["out"]:
        with open(cfg["out"], "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
