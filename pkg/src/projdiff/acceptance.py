"""The acceptance suite: one callable per numbered criterion.

Each criterion function returns a list of :class:`Clause` results with
the measured values, so the CLI, the test suite, and the README tables
all read from the same computations.

Six clauses (three groups) probe the fill-in of essential spectra at
fixed sizes: difference-spectrum edges and gaps, support against the
predicted interval, and corner-spectrum edges.  Finite sections of these
operators converge to their limiting intervals only logarithmically
(Hilbert-matrix-type slowness), so those clauses fail at desk scale by a
measured, slowly shrinking margin; they are kept at their stated
tolerances and reported honestly rather than retuned.  verify-all
therefore exits nonzero; the expected-failure set is ``EXPECTED_RED``.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .hankel import (build_hankel, carleman_kernel, default_hankel_rule,
                     gamma0_kernel, gamma_kernel, kernel_bound_suite,
                     laplace_factorizations, model_hankel_pair)
from .models import (build_krein, build_schrodinger_1d, random_gapped_pair,
                     resolvent_transform, sech2_spec, shift_pair,
                     square_well_spec, thresholds)
from .projections import (corner_spectrum, dsquared_block_check,
                          interval_hausdorff, projection_difference)
from .quadrature import make_quadrature
from .scattering import (birman_krein_extrapolated, extrapolated_phases,
                         resolvent_sandwich, scattering_bundle,
                         transfer_matrix_smatrix)
from .zops import product_representation_check

__all__ = ["Clause", "EXPECTED_RED", "run_criterion", "run_all", "CRITERIA"]

# clauses that probe logarithmically-slow fill-in at pinned sizes
EXPECTED_RED = {
    "2-edge-fill", "2-max-gap", "2-size-improvement",
    "4-support-match", "5-knee-location", "5-top-eigenvalue",
}


@dataclass
class Clause:
    """One pass/fail line of the acceptance suite."""

    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"[{status}] {self.name}: {extra}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(float(x)) for x in np.ravel(v)[:6]) + "]"
    return str(v)


def _krein_cfg():
    return thresholds()["krein"]


# ---------------------------------------------------------------------------
# 1. exact identities at machine precision
# ---------------------------------------------------------------------------

def criterion_1():
    """Resolvent factor identity, block decomposition of D^2, the
    defect-operator identity and the Sylvester-certified product identity
    on 20 seeded random pairs and the rank-one resolvent model."""
    cfg = thresholds()["random_pair"]
    t0 = time.monotonic()
    pairs = [random_gapped_pair(cfg["dim"], cfg["kdim"], seed, gap=cfg["gap"])
             for seed in range(cfg["count"])]
    pairs.append(build_krein(200, 40.0))
    probes = [0.0] * cfg["count"] + [0.5]

    worst = {"factor": 0.0, "block": 0.0, "defect_identity": 0.0, "product": 0.0}
    for pair, probe in zip(pairs, probes):
        for eps in (1e-1, 1e-2):
            sw = resolvent_sandwich(pair, probe + 1j * eps)
            worst["factor"] = max(worst["factor"], sw.factor_residual)
            b = scattering_bundle(pair, probe, eps)
            worst["defect_identity"] = max(worst["defect_identity"], b.identity_residual)
        worst["block"] = max(worst["block"],
                             dsquared_block_check(pair, probe) / pair.dim)
        chk = product_representation_check(shift_pair(pair, probe))
        worst["product"] = max(worst["product"], chk.residual_oracle / pair.dim)
    elapsed = time.monotonic() - t0
    return [
        Clause("1-resolvent-factor", worst["factor"] <= 1e-9,
               {"residual": worst["factor"]}),
        Clause("1-dsquared-blocks", worst["block"] <= 1e-10,
               {"residual_per_dim": worst["block"]}),
        Clause("1-defect-identity", worst["defect_identity"] <= 1e-9,
               {"residual": worst["defect_identity"]}),
        Clause("1-product-oracle", worst["product"] <= 1e-8,
               {"residual_per_dim": worst["product"]}),
        Clause("1-runtime", elapsed < 120.0, {"seconds": elapsed}),
    ]


# ---------------------------------------------------------------------------
# 2. rank-one resolvent model: difference-spectrum fill at pinned sizes
# ---------------------------------------------------------------------------

def _krein_fill(n, L, probe):
    rep = projection_difference(build_krein(n, L), probe)
    lo, hi = rep.extremes
    spec = rep.spectrum
    window = np.sort(spec[(spec >= -0.95) & (spec <= 0.95)])
    max_gap = float(np.max(np.diff(window))) if len(window) > 1 else 1.9
    edge = max(abs(lo + 1.0), abs(hi - 1.0))
    return edge, max_gap, rep


def criterion_2():
    cfg = _krein_cfg()
    probe = cfg["probe"]
    edge4, gap4, _ = _krein_fill(400, cfg["L"], probe)
    edge2, gap2, _ = _krein_fill(200, cfg["L"], probe)
    return [
        Clause("2-edge-fill", edge4 <= 0.05, {"edge_deficit_n400": edge4}),
        Clause("2-max-gap", gap4 <= 0.1, {"max_gap_n400": gap4}),
        Clause("2-size-improvement", edge4 < edge2 and gap4 < gap2,
               {"edge_n200": edge2, "edge_n400": edge4,
                "gap_n200": gap2, "gap_n400": gap4}),
    ]


# ---------------------------------------------------------------------------
# 3. rank-one resolvent model: counting shift 1/2 and phase -1
# ---------------------------------------------------------------------------

def criterion_3():
    cfg = _krein_cfg()
    pair = build_krein(cfg["n"], cfg["L"])
    probe = cfg["probe"]
    phases, _ = extrapolated_phases(pair, probe, cfg["eps_ladder"])
    phase_defect = (float(np.min(np.abs(np.exp(1j * phases) + 1.0)))
                    if len(phases) else 2.0)
    det_s, xi, bk_defect = birman_krein_extrapolated(
        pair, probe, cfg["eps_ladder"], xi_ladder=cfg["xi_eps_ladder"])
    return [
        Clause("3-counting-shift", abs(xi - 0.5) <= 0.1, {"xi": xi}),
        Clause("3-phase", phase_defect <= 0.1, {"|exp(i*theta)+1|": phase_defect}),
        Clause("3-birman-krein", bk_defect <= 0.1, {"defect": bk_defect}),
    ]


# ---------------------------------------------------------------------------
# 4. sech^2 well: support of D versus [-a, a], oracle agreement
# ---------------------------------------------------------------------------

def criterion_4():
    cfg = thresholds()["sech2"]
    probe = cfg["probe"]
    oracle = transfer_matrix_smatrix(
        sech2_spec(cfg["depth"], cfg["oracle_half_width"], 2000), probe)
    a_oracle = float(np.max(np.sin(oracle.phases / 2.0)))

    scatter = build_schrodinger_1d(
        sech2_spec(cfg["depth"], cfg["scatter_half_width"], cfg["scatter_n"]))
    phases, _ = extrapolated_phases(scatter, probe, cfg["eps_ladder"])
    a_tilde = float(np.max(np.sin(phases / 2.0))) if len(phases) else 0.0

    reps = []
    for half_width, n in cfg["d_boxes"]:
        spec = sech2_spec(cfg["depth"], half_width, n)
        reps.append(projection_difference(build_schrodinger_1d(spec), probe,
                                          target=(-a_oracle, a_oracle)))
    support_err = max(abs(reps[-1].extremes[0] + a_oracle),
                      abs(reps[-1].extremes[1] - a_oracle))
    hausdorffs = [interval_hausdorff(r.spectrum, -a_oracle, a_oracle) for r in reps]
    return [
        Clause("4-support-match", support_err <= 0.05,
               {"support_error": support_err, "a": a_oracle,
                "extremes": reps[-1].extremes}),
        Clause("4-oracle-agreement", abs(a_tilde - a_oracle) <= 0.02,
               {"a_stationary": a_tilde, "a_oracle": a_oracle}),
        Clause("4-hausdorff-decrease", hausdorffs[-1] < hausdorffs[0],
               {"hausdorff": hausdorffs}),
    ]


# ---------------------------------------------------------------------------
# 5. two-phase square well: corner-spectrum counting function
# ---------------------------------------------------------------------------

def counting_knee(values, lo=0.02):
    """Two-piece linear fit of the descending counting function N(x).

    Returns the breakpoint minimizing the least-squares error over
    candidate breakpoints taken at the eigenvalues above ``lo``.
    """
    vals = np.sort(values[values > lo])[::-1]
    if len(vals) < 6:
        return float("nan")
    x = vals
    y = np.arange(1, len(vals) + 1, dtype=float)

    def sse(mask):
        if mask.sum() < 2:
            return 0.0
        coef = np.polyfit(x[mask], y[mask], 1)
        return float(np.sum((np.polyval(coef, x[mask]) - y[mask]) ** 2))

    best, best_err = float("nan"), np.inf
    for split in range(2, len(vals) - 2):
        left = np.zeros(len(vals), dtype=bool)
        left[:split] = True
        err = sse(left) + sse(~left)
        if err < best_err:
            best_err, best = err, x[split]
    return float(best)


def criterion_5():
    cfg = thresholds()["square_well"]
    probe = cfg["probe"]
    oracle = transfer_matrix_smatrix(
        square_well_spec(cfg["depth"], cfg["width"], 30.0, 2000), probe)
    edges = np.sort(np.sin(oracle.phases / 2.0) ** 2)[::-1]
    s1, s2 = float(edges[0]), float(edges[1])
    half_width, n = cfg["corner_box"]
    pair = build_schrodinger_1d(square_well_spec(cfg["depth"], cfg["width"],
                                                 half_width, n))
    corner = corner_spectrum(pair, probe, sign=+1)
    top = float(corner.max())
    knee = counting_knee(corner)
    filled = np.sort(corner[corner > 0.01])[::-1]
    knee_ok = bool(np.isfinite(knee) and abs(knee - s2) <= 0.05)
    return [
        Clause("5-knee-location", knee_ok,
               {"knee": knee, "sin2_theta2": s2, "filled_count": len(filled),
                "filled_top": filled[:5]}),
        Clause("5-top-eigenvalue", abs(top - s1) <= 0.05,
               {"top": top, "sin2_theta1": s1}),
    ]


# ---------------------------------------------------------------------------
# 6. Hankel suite
# ---------------------------------------------------------------------------

def criterion_6():
    cfg = thresholds()["hankel"]
    rule = default_hankel_rule(cfg["n"], cfg["log_half_width"])
    pairdata = model_hankel_pair(rule)
    spec = np.concatenate([pairdata["spectrum_gamma"], pairdata["spectrum_gamma0"]])
    contained = bool(spec.min() >= -1e-8 and spec.max() <= np.pi + 1e-8)
    tops_ok = (pairdata["top_gamma"] >= np.pi - 0.1
               and pairdata["top_gamma0"] >= np.pi - 0.1)
    fact = laplace_factorizations(
        make_quadrature("halfline-exp-mapped", cfg["fact_n_t"]),
        n_lambda=cfg["fact_n_lambda"])
    fact_ok = (fact["gamma_factorization"] <= 1e-6
               and fact["gamma0_factorization"] <= 1e-6)
    carleman = build_hankel(carleman_kernel, rule, name="carleman")
    cnorm = float(np.linalg.norm(carleman.matrix, 2))
    carleman_ok = np.pi - 0.05 <= cnorm <= np.pi + 1e-9

    corpus = [
        (build_hankel(gamma0_kernel, rule), 1.0),          # e^-tau <= 1
        (build_hankel(gamma_kernel, rule), 1.0),           # 1-e^-tau <= 1
        (carleman, 1.0),
        (build_hankel(lambda tau: np.exp(-tau), rule), 1.0 / np.e),
        (build_hankel(lambda tau: 1.0 / (1.0 + tau) ** 2, rule), 0.25),
    ]
    bound_ok = True
    worst_margin = -np.inf
    for disc, c1 in corpus:
        suite = kernel_bound_suite(disc, c1)
        margin = suite["operator_norm"] - suite["bound"]
        worst_margin = max(worst_margin, margin)
        bound_ok = bound_ok and suite["bound_holds"]
    return [
        Clause("6-spectra-contained", contained,
               {"min": float(spec.min()), "max": float(spec.max())}),
        Clause("6-top-eigenvalues", tops_ok,
               {"top_gamma": pairdata["top_gamma"],
                "top_gamma0": pairdata["top_gamma0"]}),
        Clause("6-hausdorff", pairdata["hausdorff"] <= 0.05,
               {"hausdorff": pairdata["hausdorff"]}),
        Clause("6-laplace-factorizations", fact_ok,
               {"gamma": fact["gamma_factorization"],
                "gamma0": fact["gamma0_factorization"]}),
        Clause("6-carleman-norm", bool(carleman_ok), {"norm": cnorm}),
        Clause("6-kernel-bounds", bound_ok, {"worst_margin": worst_margin}),
    ]


# ---------------------------------------------------------------------------
# 7. middle-spectrum pairing symmetry on every computed difference
# ---------------------------------------------------------------------------

def criterion_7():
    cfg = thresholds()["random_pair"]
    worst = 0.0
    for seed in range(cfg["count"]):
        pair = random_gapped_pair(cfg["dim"], cfg["kdim"], seed, gap=cfg["gap"])
        rep = projection_difference(pair, 0.0)
        worst = max(worst, rep.pairing_defect)
    worst = max(worst, projection_difference(build_krein(200, 40.0), 0.5).pairing_defect)
    sech_cfg = thresholds()["sech2"]
    hw, n = sech_cfg["d_boxes"][0]
    pair = build_schrodinger_1d(sech2_spec(sech_cfg["depth"], hw, n))
    worst = max(worst, projection_difference(pair, sech_cfg["probe"]).pairing_defect)
    return [Clause("7-pairing-symmetry", worst <= 1e-6, {"worst_defect": worst})]


# ---------------------------------------------------------------------------
# 8. invariance principle
# ---------------------------------------------------------------------------

def criterion_8():
    cfg = _krein_cfg()
    pair = build_krein(cfg["n"], cfg["L"])
    probe = cfg["probe"]
    shift = cfg["resolvent_shift"]
    transform = resolvent_transform(pair, shift)
    mu = float(transform.mu(probe))

    phases, _ = extrapolated_phases(pair, probe, cfg["eps_ladder"])
    phases_t, _ = extrapolated_phases(transform.pair, mu, cfg["eps_ladder"])
    if len(phases) and len(phases_t):
        ev = np.exp(1j * phases)
        evt = np.exp(1j * phases_t)
        d = np.abs(ev[:, None] - evt[None, :])
        phase_dist = float(max(d.min(axis=1).max(), d.min(axis=0).max()))
    else:
        phase_dist = 2.0

    e0, e1 = pair.eigensystems()
    f0, f1 = transform.pair.eigensystems()
    from .projections import spectral_projection
    d_orig = (spectral_projection(e1, probe) - spectral_projection(e0, probe))
    d_tr = (spectral_projection(f0, mu) - spectral_projection(f1, mu))
    proj_resid = float(np.linalg.norm(d_orig - d_tr, 2))
    fact_resid = float(np.linalg.norm(
        transform.pair.h - transform.pair.h0
        - transform.pair.g.conj().T @ transform.pair.v0 @ transform.pair.g, 2))
    return [
        Clause("8-phase-agreement", phase_dist <= 2e-2, {"distance": phase_dist}),
        Clause("8-projection-identity", proj_resid <= 1e-12, {"residual": proj_resid}),
        Clause("8-transformed-factorization", fact_resid <= 1e-9,
               {"residual": fact_resid}),
    ]


# ---------------------------------------------------------------------------
# 9. runtime and determinism of the full run
# ---------------------------------------------------------------------------

def criterion_9(elapsed_total=None):
    from .harness import ExperimentConfig, run_experiment
    cfg = ExperimentConfig(model="finite:random", probes=(0.0,),
                           eps_ladder=(0.1, 0.05, 0.02), seed=7)
    first = run_experiment(cfg).to_json()
    second = run_experiment(cfg).to_json()
    clauses = [Clause("9-determinism", first == second,
                      {"bytes": len(first)})]
    if elapsed_total is not None:
        clauses.append(Clause("9-runtime", elapsed_total < 600.0,
                              {"seconds": elapsed_total}))
    return clauses


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
}


def run_criterion(number):
    return CRITERIA[number]()


def run_all(echo=print):
    """Run criteria 1-9 in order, echoing one line per clause.

    Returns (exit_code, clauses); exit code 1 when any clause fails.
    """
    clauses = []
    t0 = time.monotonic()
    for number in sorted(CRITERIA):
        for clause in CRITERIA[number]():
            clauses.append(clause)
            if echo:
                echo(clause.line())
    for clause in criterion_9(elapsed_total=time.monotonic() - t0):
        clauses.append(clause)
        if echo:
            echo(clause.line())
    exit_code = 0 if all(c.passed for c in clauses) else 1
    return exit_code, clauses
