"""The twelve acceptance checks, shared by the test suite and ``udfq verify-all``."""
from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable

import sympy as sp

from .exactalg import T, Poly, monomials_upto

TITLES = {
    1: "lambda-ordered product: smash route equals direct formula",
    2: "lambda = 1/2 equals the Weyl-ordered Moyal expansion",
    3: "L-R smash associativity for S(R^2) and U_t(Heisenberg)",
    4: "Hopf axioms of the phase-space smash bialgebra; corrupted control fails",
    5: "gauge transport T(x *S y) = Tx * Ty and *S associativity",
    6: "induced product on R x| R^2 instances: invariance and associativity",
    7: "Poisson bivector of the transported lambda-product is canonical",
    8: "structure layer: HI equivalence, central extension, round trip, nilpotent case",
    9: "twisting map of the rank-one space",
    10: "WKB product asymptotics: residual slope",
    11: "WKB product numerical associativity",
    12: "flat-kernel hbar^0 and hbar^1 coefficients match the formal product",
}

EXACT = tuple(range(1, 10))
NUMERIC = (10, 11, 12)
LAMBDAS = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))


def _timed(cid: int, fn: Callable[[], dict]) -> dict:
    t0 = time.perf_counter()
    details = fn()
    ok = bool(details.pop("pass"))
    return {"id": cid, "title": TITLES[cid], "pass": ok, "seconds": round(time.perf_counter() - t0, 3),
            "details": details}


def _pairs(names, maxdeg):
    mons = [Poly.from_mono(m) for m in monomials_upto(tuple(names), maxdeg)]
    for u in mons:
        for v in mons:
            if u.degree() + v.degree() <= maxdeg:
                yield u, v


# ---------------------------------------------------------------------------


def criterion_1(maxdeg: int = 4, ns=(1, 2), lambdas=LAMBDAS, tcap: int = 4) -> dict:
    from .phase_space import LambdaConfig, lambda_star_direct, lambda_star_smash

    def run():
        checked, bad = 0, []
        for n in ns:
            for lam in lambdas:
                cfg = LambdaConfig(lam, n, tcap)
                for u, v in _pairs(cfg.q + cfg.p, maxdeg):
                    checked += 1
                    if lambda_star_smash(cfg, u, v) != lambda_star_direct(cfg, u, v):
                        bad.append((n, str(lam), str(u), str(v)))
        return {"pass": not bad, "pairs": checked, "mismatches": len(bad), "witness": bad[:3]}

    return _timed(1, run)


def criterion_2(maxdeg: int = 4, ns=(1, 2), tcap: int = 4) -> dict:
    from .phase_space import LambdaConfig, lambda_star_smash, weyl_moyal_star

    def run():
        checked, bad = 0, []
        for n in ns:
            cfg = LambdaConfig(Fraction(1, 2), n, tcap)
            for u, v in _pairs(cfg.q + cfg.p, maxdeg):
                checked += 1
                if lambda_star_smash(cfg, u, v) != weyl_moyal_star(n, u, v, tcap):
                    bad.append((n, str(u), str(v)))
        return {"pass": not bad, "pairs": checked, "mismatches": len(bad), "witness": bad[:3]}

    return _timed(2, run)


def criterion_3(cmax: int = 3, bmax: int = 3) -> dict:
    from .phase_space import LambdaConfig, lr_actions
    from .smash import SmashAlgebra, check_smash_associativity
    from .udf import heisenberg_group

    def run():
        out = {}
        cfg = LambdaConfig(Fraction(1, 3), 2, 4)
        A = SmashAlgebra(lr_actions(cfg), "lr", tcap=cfg.tcap)
        out["S(R^2), lambda=1/3"] = check_smash_associativity(A, cfg.q, cfg.p, cmax, bmax)
        # the left/right module laws for a nonabelian g hold at lambda = 1 only
        cfg = LambdaConfig(Fraction(1), 3, 4)
        A = SmashAlgebra(lr_actions(cfg, group=heisenberg_group()), "lr", tcap=cfg.tcap)
        out["U_t(Heisenberg), lambda=1"] = check_smash_associativity(A, cfg.q, cfg.p, cmax, bmax)
        out["pass"] = all(r["pass"] for r in out.values())
        return out

    return _timed(3, run)


def criterion_4(tcap: int = 3, maxdeg: int = 3) -> dict:
    from .hopf import check_hopf_axioms
    from .phase_space import LambdaConfig, corrupted_hopf, phase_space_hopf

    def run():
        cfg = LambdaConfig(Fraction(1, 2), 1, tcap)
        good = check_hopf_axioms(phase_space_hopf(cfg), maxdeg)
        bad = check_hopf_axioms(corrupted_hopf(cfg), maxdeg)
        failed = [c["law"] for c in bad["checks"] if not c["pass"]]
        return {"pass": good["all_pass"] and not bad["all_pass"],
                "laws": {c["law"]: c["pass"] for c in good["checks"]},
                "corrupted_failures": failed}

    return _timed(4, run)


def _random_element(A, rng: random.Random, cdeg: int, bdeg: int):
    from .smash import pure

    x = A.zero()
    for _ in range(rng.randint(1, 2)):
        f = Poly.var("q1", rng.randint(0, cdeg))
        a = Poly.var("p1", rng.randint(0, bdeg))
        c = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))
        if rng.random() < 0.3:
            f = f * Poly.var(T)
        x = x + pure(f, a, A.tcap).scale(c)
    return x


def criterion_5(seed: int = 0, pairs: int = 20, tcap: int = 3) -> dict:
    from .phase_space import LambdaConfig, lr_actions
    from .smash import GaugeMap, SmashAlgebra, gauge_product, gauge_product_direct, gauge_smash

    def run():
        rng = random.Random(seed)
        cfg = LambdaConfig(Fraction(1, 2), 1, tcap)
        A = SmashAlgebra(lr_actions(cfg), "lr", tcap=tcap)
        S = GaugeMap.linear(lambda f: f.diff("q1", 2), tcap)
        AS = gauge_smash(A, S)
        transport = direct = assoc = 0
        witness = None
        for _ in range(pairs):
            x, y, z = (_random_element(A, rng, 3, 2) for _ in range(3))
            xy = gauge_product(A, S, x, y)
            if S.T(xy) == A.mul(S.T(x), S.T(y)):
                transport += 1
            elif witness is None:
                witness = (str(x.terms), str(y.terms))
            direct += xy == gauge_product_direct(A, S, x, y)
            assoc += AS.mul(xy, z) == AS.mul(x, AS.mul(y, z))
        return {"pass": transport == pairs and assoc == pairs, "seed": seed, "pairs": pairs,
                "transport_ok": transport, "direct_form_ok": direct, "associative": assoc, "witness": witness}

    return _timed(5, run)


def criterion_6(maxdeg: int = 3) -> dict:
    from .catalog import load_group
    from .phase_space import LambdaConfig, lambda_product
    from .udf import check_associativity, check_left_invariance, fake_product, induced_product

    def run():
        P = lambda_product(LambdaConfig(Fraction(1, 2), 1, 3), "direct")
        out = {}
        for name in ("r_x_r2", "r2_x_r2"):
            G = load_group(name)
            qc = [c for c in G.coords if c not in P.coords]
            ind = induced_product(qc, P)
            inv = check_left_invariance(ind, G, maxdeg)
            asc = check_associativity(ind, maxdeg)
            control = check_left_invariance(fake_product(G.coords, 3), G, maxdeg)
            out[G.name] = {"invariant": inv, "associative": asc, "fake_product_fails": not control["pass"]}
        out["pass"] = all(r["invariant"]["pass"] and r["associative"]["pass"] and r["fake_product_fails"]
                          for r in out.values())
        return out

    return _timed(6, run)


def criterion_7(ns=(1, 2)) -> dict:
    from .phase_space import LambdaConfig, lambda_product
    from .udf import (GroupDescriptor, canonical_bivector, extract_poisson, pushforward_bivector,
                      transported_product, translation_action)

    def run():
        out = {}
        for n in ns:
            cfg = LambdaConfig(Fraction(1, 2), n, 3)
            P = lambda_product(cfg, "direct")
            G = GroupDescriptor.abelian(2 * n, P.coords)
            A = translation_action(G)
            PM = transported_product(P, A)
            w = extract_poisson(PM)
            w_e = extract_poisson(P)
            push = pushforward_bivector(w_e.matrix, A)
            out[f"n={n}"] = {"antisymmetric": w.is_antisymmetric(), "jacobi": w.is_poisson(),
                             "canonical": w == canonical_bivector(n), "pushforward_matches": w == push,
                             "bivector": str(w)}
        out["pass"] = all(all(v for k, v in r.items() if k != "bivector") for r in out.values())
        return out

    return _timed(7, run)


def criterion_8() -> dict:
    from . import structure as st
    from .catalog import load_sla, load_triple

    def run():
        names = ["flat", "heisenberg_ext", "rank1", "diag", "rank1_plus_flat", "sl2", "so3"]
        hi = {}
        for n in names:
            rep = st.hi_split_diagnostics(load_triple(n))
            hi[n] = {"kp_isotropic": rep["kp_isotropic"], "derived_abelian": rep["derived_abelian"],
                     "equivalence": rep["hi_equivalence_holds"]}
        a = all(r["equivalence"] for r in hi.values()) and not hi["sl2"]["derived_abelian"]
        ext, note = st.central_extension(load_triple("flat"))
        ext_rep = st.validate_exact_triple(ext)
        b = ext_rep["all_pass"] and st.center_dimension(ext) <= 1
        rt = {}
        for n in ("rank1", "diag"):
            data = load_sla(n)
            built = st.elementary_from_symplectic_lie_algebra(data["d"], data["rho"], data["eta"], name=n)
            t = built.triple
            inst = st.elementary_instance(t, indecomposable=True, nonflat=True)
            w = st.weight_decomposition(inst)
            s_c = st.build_symplectic_lie_algebra(inst, w)
            s_neg = st.build_symplectic_lie_algebra(inst, w, [tuple(-c for c in al) for al in w.positive])
            src = built.notes[0]
            sig_in = st.real_signature(src["s"], src["omega_s"])
            rt[n] = {"triple_valid": st.validate_triple(t)["all_pass"],
                     "weights": [str(al) for al in w.phi], "b0_dim": w.b0_dim, "sigma_pairing": w.sigma_pairing,
                     "input": sig_in, "rebuilt": s_c.signature(), "rebuilt_negative": s_neg.signature(),
                     "closed": s_c.closed, "nondegenerate": s_c.nondegenerate}
        c = all(r["triple_valid"] and r["input"] == r["rebuilt"] == r["rebuilt_negative"] and r["closed"]
                and r["nondegenerate"] and r["sigma_pairing"] and r["b0_dim"] == 0 for r in rt.values())
        nil = st.nilpotent_flatness(st.nilpotent_instance())
        # the same data read as a triple: [g, g] is smaller than b, so no HI split structure exists
        nil["split_from_triple"] = bool(st.hi_split_diagnostics(load_triple("nilpotent"))["split"])
        d = nil["all_nilpotent"] and nil["weights_zero_only"] and nil["nonflat_indecomposable_excluded"]
        return {"pass": a and b and c and d, "a_hi_equivalence": hi, "b_central_extension": {
            "valid": ext_rep["all_pass"], "note": note, "center_dim": st.center_dimension(ext)},
            "c_round_trip": rt, "d_nilpotent": nil}

    return _timed(8, run)


def criterion_9() -> dict:
    from . import structure as st

    def run():
        tw = st.twist_solve(st.rank_one_instance())
        a = tw.symbols[0]
        phi_ok = sp.simplify(tw.phi[0] - sp.sinh(a)) == 0
        jac_ok = sp.simplify(tw.jacobian_det - sp.cosh(a)) == 0
        lim = st.twist_flat_limit(st.rank_one_instance())
        flat = st.twist_solve(st.flat_instance())
        flat_ok = lim[0] == a and flat.phi[0] == flat.symbols[0]
        return {"pass": phi_ok and jac_ok and tw.global_diffeo is True and flat_ok,
                "phi": str(tw.phi[0]), "jacobian": str(tw.jacobian_det), "global_diffeo": tw.global_diffeo,
                "flat_limit": str(lim[0]), "rho_zero": str(flat.phi[0])}

    return _timed(9, run)


# ---------------------------------------------------------------------------
# numerical checks


def _wkb_setup(nodes: int | None = None):
    from .catalog import load_json
    from .wkbnum import QuadratureConfig, SampledFunction, get_space

    d = load_json("rank1_wkb.json")
    cfg = QuadratureConfig(hbar=d["assoc_hbar"], nodes=nodes or d["nodes"], lbox=d["lbox"], sbox=d["sbox"])
    fns = {k: SampledFunction.parse(d[k]) for k in ("u", "v", "w")}
    return d, cfg, fns, get_space(d["space"])


def criterion_10(nodes: int | None = None) -> dict:
    from .wkbnum import asymptotic_check

    def run():
        d, cfg, f, space = _wkb_setup(nodes)
        rep = asymptotic_check(f["u"], f["v"], d["x0"], d["hbars"], cfg, space)
        ok = rep["slope"] is not None and rep["slope"] >= 1.75 and not rep["error_dominated"]
        return {"pass": ok, "slope": rep["slope"], "fit_residual": rep["fit_residual"],
                "min_residual": rep["min_residual"], "max_error": rep["max_error"],
                "rows": [{"hbar": r["hbar"], "residual": r["residual"], "error": r["error"]} for r in rep["rows"]]}

    return _timed(10, run)


def criterion_11(nodes: int | None = None) -> dict:
    from .wkbnum import associativity_defect

    def run():
        d, cfg, f, space = _wkb_setup(nodes)
        rep = associativity_defect(f["u"], f["v"], f["w"], d["x0"], d["assoc_hbar"], cfg, space)
        return {"pass": rep["pass"], "defect": rep["defect"], "error": rep["error"], "ratio": rep["ratio"],
                "left": [rep["left"].real, rep["left"].imag], "right": [rep["right"].real, rep["right"].imag]}

    return _timed(11, run)


def criterion_12(nodes: int | None = None, x0=(0.1, 0.2), tol: float = 1e-6) -> dict:
    from .wkbnum import flat_space, formal_coefficients, rank_one_space, richardson_coefficients

    def run():
        d, cfg, f, _ = _wkb_setup(nodes)
        exact = formal_coefficients(f["u"], f["v"], x0)
        out = {}
        for space in (flat_space(), rank_one_space()):
            num = richardson_coefficients(f["u"], f["v"], x0, cfg, space)
            out[space.name] = {"c0_error": abs(num["c0"] - exact["c0"]), "c1_error": abs(num["c1"] - exact["c1"])}
        flat = out["flat"]
        out["exact"] = {"c0": [exact["c0"].real, exact["c0"].imag], "c1": [exact["c1"].real, exact["c1"].imag]}
        out["pass"] = flat["c0_error"] < tol and flat["c1_error"] < tol
        return out

    return _timed(12, run)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_all(ids=None) -> list[dict]:
    return [CRITERIA[i]() for i in (ids or sorted(CRITERIA))]


def summary_line(r: dict) -> str:
    return f"{'PASS' if r['pass'] else 'FAIL'} criterion {r['id']:>2}: {r['title']} ({r['seconds']:.1f} s)"
