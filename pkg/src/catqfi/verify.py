"""Self-verification: every module's invariants plus golden regression.

``run_all`` executes each check and returns structured results; the CLI
``verify`` command renders one line per check and exits 3 on any
violation.  Tolerances scale uniformly with ``tol_scale`` (0.1 tightens
tenfold).  Checks are phrased as error quantities against upper bounds.

Two checks encode closed-form claims that the exact numerics contradict;
they fail reproducibly and carry ``known-discrepancy`` in their detail
text (the decision record and test suite document the analysis):

* ``qfi.phase_avg_equals_arm_generator_value``: the phase-averaged
  probe's QFI is exactly generator-invariant but equals the
  balanced-generator pure value ``2 N^2 <n^2>``, not the arm-b value;
* ``loss.spectral_nonnegative``: the second closed-form spectral weight
  of the lossy probe is (x^2/2)-order negative for any eta < 1;
* ``loss.weak_error_small_x`` exceeds its bound only on the x = 0.1
  boundary, where the measured error is 1.03 x^2.
"""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import baselines, cats, fock, genscheme, loss, probes, qfi, sweep
from .pairspace import trace_distance as pair_td

GOLDEN_CURVE_REQUEST = dict(
    d_list=(8,), k_list=(0, 1), eta=0.9, n_av_range=(0.05, 4.0, 28),
    baselines=("noon", "tmsv", "sql"),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tol: float
    detail: str = ""


def _golden_dir(golden_dir=None) -> str:
    if golden_dir:
        return golden_dir
    return os.path.join(os.path.dirname(__file__), "golden")


def report(results) -> str:
    out = io.StringIO()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status}  {r.name}: measured={r.measured:.6e} tol={r.tol:.6e}"
        if r.detail:
            line += f"  [{r.detail}]"
        out.write(line + "\n")
    n_fail = sum(not r.passed for r in results)
    out.write(f"{len(results) - n_fail}/{len(results)} checks passed\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# fock-core
# ---------------------------------------------------------------------------

def _sampled_states(n_max=24, count=6):
    rng = np.random.default_rng(20240615)
    states = []
    for _ in range(count):
        amps = rng.normal(size=n_max + 1) + 1j * rng.normal(size=n_max + 1)
        states.append(fock.FockVector(amps, 1).normalize())
    return states


def check_fock_core():
    worst_u = 0.0
    for alpha in (0.8, 1.6 + 0.4j):
        n_max = fock.required_n_max(2.0 * abs(alpha))
        v2 = fock.product(fock.coherent_vector(alpha, n_max),
                          fock.coherent_vector(0.5j, n_max))
        for op in (
            lambda v: fock.apply_phase_shift(v, 0.7, 1),
            fock.beamsplitter_50_50,
            lambda v: fock.cross_kerr_unitary(v, 4),
        ):
            worst_u = max(worst_u, abs(op(v2).norm() ** 2 - 1.0))

    worst_tr, worst_eig, worst_comp = 0.0, 0.0, 0.0
    for v in _sampled_states():
        rho = v.projector()
        out = fock.loss_channel(rho, 0.83)
        worst_tr = max(worst_tr, abs(out.trace().real - 1.0))
        worst_eig = max(worst_eig, -float(np.min(np.linalg.eigvalsh(out.entries))))
        two = fock.loss_channel(fock.loss_channel(rho, 0.9), 0.8)
        one = fock.loss_channel(rho, 0.72)
        worst_comp = max(worst_comp, fock.trace_distance(two, one))

    rng = np.random.default_rng(7)
    m = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
    herm = fock.FockMatrix(m + m.conj().T, 1, (20,))
    es = fock.hermitian_eig(herm)
    rec = float(np.max(np.abs(es.reconstruct() - herm.entries)))
    vecs = np.stack([v.amps for v in es.eigenvectors], axis=1)
    ortho = float(np.max(np.abs(vecs.conj().T @ vecs - np.eye(20))))

    return [
        ("fock.unitary_norm", worst_u, 1e-12, ""),
        ("fock.loss_trace_psd", max(worst_tr, worst_eig), 1e-10, ""),
        ("fock.loss_composition", worst_comp, 1e-9, ""),
        ("fock.eig_reconstruction", max(rec, ortho), 1e-9, ""),
    ]


# ---------------------------------------------------------------------------
# cat-analytic and probes
# ---------------------------------------------------------------------------

def check_cats():
    worst_sum = 0.0
    for d in (2, 4, 8, 16):
        for alpha in (0.5, 1.7, 3.0):
            total = sum(cats.norm_M(cats.CatSpec(d, k, alpha)) for k in range(d))
            worst_sum = max(worst_sum, abs(total - d * d) / (d * d))

    worst_mom = 0.0
    for d in (2, 4, 8, 16):
        for a2 in (0.25, 1.0, 4.0, 9.0):
            for k in range(min(d, 3)):
                spec = cats.CatSpec(d, k, math.sqrt(a2))
                mom = cats.cat_moments(spec)
                p = np.abs(cats.cat_to_fock(spec).amps) ** 2
                n = np.arange(p.size)
                m1 = float(np.sum(n * p))
                m2 = float(np.sum(n * n * p))
                # <a+ a+ a a> summed directly; m2 - m1 would cancel at
                # small alpha where the moment is ~1e-22
                pair = float(np.sum(n * (n - 1) * p))
                worst_mom = max(
                    worst_mom,
                    abs(mom.mean_n - m1) / m1,
                    abs(mom.mean_n2 - m2) / m2,
                    abs(mom.g2 - pair / m1 ** 2) / mom.g2,
                )

    violations = 0
    first_flip = {}
    for d in (4, 8, 16):
        for a2 in np.linspace(0.25, 14.0, 30):
            g0 = cats.cat_moments(cats.CatSpec(d, 0, math.sqrt(a2))).g2
            g1 = cats.cat_moments(cats.CatSpec(d, 1, math.sqrt(a2))).g2
            if g0 <= g1:
                violations += 1
                first_flip.setdefault(d, a2)
    flips = ", ".join(f"d={d} from a^2={a2:.2f}" for d, a2 in sorted(first_flip.items()))

    return [
        ("cats.sector_norm_sum", worst_sum, 1e-12, ""),
        ("cats.moments_vs_oracle", worst_mom, 1e-10, ""),
        ("cats.g2_k0_above_k1", float(violations), 0.5,
         "known-discrepancy: ordering holds only below the sector-revival "
         "scale; flips at " + flips),
    ]


def check_probes():
    worst = 0.0
    for d, k, alpha in ((2, 0, 1.0), (8, 3, 2.0), (16, 2, 1.5)):
        spec = cats.CatSpec(d, k, alpha)
        pr = probes.build_probe(spec)
        swapped = fock.FockVector(pr.vector.amps.T, 2)
        worst = max(worst, abs(1.0 - fock.fidelity(pr.vector, swapped)))
        m1, m2 = probes.probe_moments_double_sum(spec)
        o1, o2 = fock.mode_number_moments(pr.vector, 1)
        worst = max(worst, abs(m1 - o1) / o1, abs(m2 - o2) / o2)
        worst = max(worst, 0.0 if m2 - m1 * m1 >= 0 else m1 * m1 - m2)
    return [("probes.swap_and_component_sums", worst, 1e-10, "")]


def check_identity_eq5_eq10():
    worst = 0.0
    for d in (1, 2, 4, 8, 16):
        for k in range(min(d, 5)):
            for a2 in (0.25, 1.0, 4.0, 9.0):
                spec = cats.CatSpec(d, k, math.sqrt(a2))
                f5 = qfi.qfi_pure(spec).f_q
                f10 = qfi.qfi_pure_g2(spec).f_q
                worst = max(worst, abs(f5 - f10) / f5)
    return [("qfi.eq5_equals_eq10", worst, 1e-10, "")]


def check_phase_average():
    worst_gen = 0.0
    worst_eq10 = 0.0
    worst_bal = 0.0
    for d, k, alpha in ((2, 0, 1.0), (8, 1, 2.0)):
        spec = cats.CatSpec(d, k, alpha)
        pa = probes.phase_averaged(spec)
        f_nb = qfi.qfi_mixed_numeric(pa.block_family("nb")).f_q
        f_hd = qfi.qfi_mixed_numeric(pa.block_family("half_diff")).f_q
        worst_gen = max(worst_gen, abs(f_nb - f_hd) / f_nb)
        f10 = qfi.qfi_pure_g2(spec).f_q
        worst_eq10 = max(worst_eq10, abs(f_nb - f10) / f10)
        mom = cats.cat_moments(spec)
        f_bal = 2.0 * probes.probe_norm(spec) ** 2 * mom.mean_n2
        worst_bal = max(worst_bal, abs(f_nb - f_bal) / f_bal)
    return [
        ("qfi.phase_avg_generator_agreement", worst_gen, 1e-8, ""),
        ("qfi.phase_avg_equals_balanced_value", worst_bal, 1e-6,
         "averaged QFI = 2 N^2 <n^2> exactly"),
        ("qfi.phase_avg_equals_arm_generator_value", worst_eq10, 1e-6,
         "known-discrepancy: averaging removes the -4 N^4 <n>^2 term"),
    ]


# ---------------------------------------------------------------------------
# loss models
# ---------------------------------------------------------------------------

def check_loss_models():
    worst_exact = 0.0
    worst_weak = 0.0
    where_weak = ""
    worst_neg = 0.0
    where_neg = ""
    worst_sum = 0.0
    for d in (2, 4, 8):
        for k in (0, 1, 2):
            if k >= d:
                continue
            for alpha in (0.5, 1.0, 2.0):
                for eta in (0.8, 0.9, 0.99):
                    first = True
                    for phi in (0.0, 0.3):
                        lp = loss.lossy_probe(cats.CatSpec(d, k, alpha), eta, phi)
                        worst_exact = max(worst_exact,
                                          pair_td(lp.paper_pair, lp.oracle_pair))
                        if not first:
                            continue
                        first = False
                        x = alpha * alpha * (1.0 - eta)
                        if x <= 0.1:
                            td = pair_td(lp.weak_pair, lp.oracle_pair)
                            if td > worst_weak:
                                worst_weak = td
                                where_weak = f"d={d} k={k} a={alpha} eta={eta}"
                        if x < 1.0:
                            lam = lp.spectral.lambdas
                            worst_sum = max(worst_sum, abs(float(np.sum(lam)) - 1.0))
                            neg = -float(np.min(lam))
                            if neg > worst_neg:
                                worst_neg = neg
                                where_neg = f"d={d} k={k} a={alpha} eta={eta}"

    spec = cats.CatSpec(4, 1, 1.0)
    errs = []
    for one_minus in (0.01, 0.02, 0.04):
        lp = loss.lossy_probe(spec, 1.0 - one_minus)
        errs.append(pair_td(lp.weak_pair, lp.oracle_pair))
    ratios = [errs[1] / errs[0], errs[2] / errs[1]]
    off = max(abs(r / 4.0 - 1.0) for r in ratios)

    lp1 = loss.lossy_probe(cats.CatSpec(8, 1, 1.0), 1.0)
    collapse = float(np.max(np.abs(lp1.spectral.lambdas - np.array([1, 0, 0, 0]))))

    sc = loss.ShiftedCat(spec, 0.0).to_fock()
    shifted_err = abs(1.0 - fock.fidelity(sc, cats.cat_to_fock(spec)))

    return [
        ("loss.closed_form_vs_kraus", worst_exact, 1e-9, ""),
        ("loss.weak_error_small_x", worst_weak, 5e-3,
         "known-discrepancy: error = 1.03 x^2 exceeds the bound at the "
         "x = 0.1 boundary and is sector-amplified at k = 2 with small "
         f"alpha; worst {where_weak}"),
        ("loss.weak_error_quadratic", off, 0.5,
         f"error ratios for doubled loss: {ratios[0]:.3f}, {ratios[1]:.3f}"),
        ("loss.spectral_sum_and_collapse", max(worst_sum, collapse), 1e-10, ""),
        ("loss.spectral_nonnegative", worst_neg, 1e-10,
         f"known-discrepancy: second weight < 0 for eta < 1; worst {where_neg}"),
        ("loss.shifted_cat_phi0", shifted_err, 1e-12, ""),
    ]


def check_pair_rep_vs_full():
    worst = 0.0
    for d, k, alpha, eta, phi in ((2, 1, 1.0, 0.9, 0.3), (4, 0, 0.7, 0.85, 0.0)):
        spec = cats.CatSpec(d, k, alpha)
        lp = loss.lossy_probe(spec, eta, phi)
        pr = probes.build_probe(spec)
        shifted = fock.apply_phase_shift(pr.vector, phi, 1)
        full = fock.loss_channel_both_modes(shifted.projector(), eta)
        worst = max(worst, float(np.max(np.abs(full.entries - lp.oracle_form.entries))))
    return [("loss.pair_sector_vs_full_kraus", worst, 1e-12, "")]


# ---------------------------------------------------------------------------
# QFI engine
# ---------------------------------------------------------------------------

def check_mixed_qfi():
    spec = cats.CatSpec(8, 1, 1.0)
    lp = loss.lossy_probe(spec, 0.9)
    f_paper = qfi.qfi_mixed_paper(lp).f_q
    f_weak = qfi.qfi_mixed_numeric(loss.weak_probe_family(spec, 0.9)).f_q
    res_exact = qfi.qfi_mixed_numeric(loss.lossy_probe_family(spec, 0.9))
    dev_weak = abs(f_paper - f_weak) / f_weak
    dev_exact = abs(f_paper - res_exact.f_q) / res_exact.f_q

    worst_gain = 0.0
    for d, k, alpha in ((8, 0, 1.0), (4, 1, 1.5)):
        s = cats.CatSpec(d, k, alpha)
        f_pure = qfi.qfi_pure(s).f_q
        f_lossy = qfi.qfi_mixed_numeric(loss.lossy_probe_family(s, 0.9)).f_q
        worst_gain = max(worst_gain, f_lossy - f_pure)

    return [
        ("qfi.closed_form_vs_weak_oracle", dev_weak, 1e-5,
         "same rank-4 eigensystem up to derivative discretization"),
        ("qfi.closed_form_vs_exact_oracle", dev_exact, 2e-2,
         f"measured {dev_exact:.2e} at d=8 k=1 a=1 eta=0.9"),
        ("qfi.loss_never_increases", worst_gain, 1e-12, ""),
        ("qfi.fd_stability", res_exact.diagnostics["fd_mismatch"], 1e-6, ""),
    ]


# ---------------------------------------------------------------------------
# baselines and sweeps
# ---------------------------------------------------------------------------

def check_baselines():
    worst_noon = 0.0
    for k in range(1, 7):
        worst_noon = max(worst_noon, abs(baselines.noon_qfi(k, 1.0).f_q - k * k))
    mono = 0.0
    for k in (1, 2, 4):
        seq = [baselines.noon_qfi(k, eta).f_q for eta in (1.0, 0.95, 0.9)]
        if not seq[0] > seq[1] > seq[2]:
            mono = 1.0
    worst_tmsv = 0.0
    for n_av in (0.25, 1.0, 4.0):
        f = baselines.tmsv_qfi(baselines.tmsv_r_for_nav(n_av), 1.0).f_q
        tgt = 4.0 * n_av * (n_av + 1.0)
        worst_tmsv = max(worst_tmsv, abs(f - tgt) / tgt)
    return [
        ("baselines.noon_exact_and_monotone", max(worst_noon, mono), 1e-12, ""),
        ("baselines.tmsv_lossless_identity", worst_tmsv, 1e-8, ""),
    ]


def check_alpha_inversion():
    worst = 0.0
    for d, k, target in ((8, 0, 1e-3), (8, 2, 1.2), (1, 0, 0.37), (16, 3, 3.0)):
        a = sweep.alpha_for_nav(d, k, target)
        worst = max(worst, abs(probes.n_av_of(cats.CatSpec(d, k, a)) - target))
    return [("sweep.energy_round_trip", worst, 1e-9, "")]


def check_lossless_k0_optimal():
    grid = np.linspace(0.05, 4.0, 40)
    f_table = {}
    for d in (2, 4, 8, 16):
        for k in (0, 1, 2, 3):
            if k >= d:
                continue
            for n_av in grid:
                if n_av <= k / 2.0:
                    continue
                spec = cats.CatSpec(d, k, sweep.alpha_for_nav(d, k, float(n_av)))
                f_table[(d, k, round(float(n_av), 9))] = qfi.qfi_pure(spec).f_q
    violations = 0
    first_beat = None
    for (d, k, n_av), f in sorted(f_table.items(), key=lambda kv: kv[0][2]):
        if k > 0 and (d, 0, n_av) in f_table:
            if f > f_table[(d, 0, n_av)] * (1 + 1e-12):
                violations += 1
                if first_beat is None:
                    first_beat = (d, k, n_av)
    d_list = (2, 4, 8, 16)
    trend_hits = trend_total = 0
    for lo, hi in zip(d_list, d_list[1:]):
        for n_av in grid:
            key = round(float(n_av), 9)
            if (lo, 0, key) in f_table and (hi, 0, key) in f_table:
                trend_total += 1
                trend_hits += f_table[(hi, 0, key)] > f_table[(lo, 0, key)]
    frac = trend_hits / trend_total
    return [
        ("sweep.lossless_k0_optimal", float(violations), 0.5,
         "known-discrepancy: k = 0 leads only at low energy; first k > 0 "
         f"win at (d, k, N_av) = {first_beat}"),
        ("sweep.lossless_d_trend", max(0.0, 0.8 - frac), 1e-12,
         f"d-trend holds on {frac:.1%} of points"),
    ]


def _curve_rows():
    return sweep.trace_curve(sweep.CurveRequest(**GOLDEN_CURVE_REQUEST))


def check_fig4_and_golden(golden_dir):
    rows = _curve_rows()
    cat0 = {round(r.n_av, 9): r for r in rows if r.d == 8 and r.k == 0}
    cat1 = {round(r.n_av, 9): r for r in rows if r.d == 8 and r.k == 1
            and r.method != "error"}
    ref = {
        kind: {round(r.n_av, 9): r for r in rows if r.method == kind}
        for kind in ("noon", "tmsv", "sql")
    }
    bad = 0
    for key, r in cat0.items():
        bad += r.delta_phi >= ref["noon"][key].delta_phi
        bad += r.delta_phi >= ref["sql"][key].delta_phi
        if key <= 3.0:
            bad += r.delta_phi >= ref["tmsv"][key].delta_phi
    for key, r in cat1.items():
        bad += r.delta_phi >= ref["noon"][key].delta_phi
        bad += r.delta_phi >= ref["sql"][key].delta_phi

    golden = _load_scalars(golden_dir)
    cross = sweep.find_crossover(rows, 0, 1)
    if cross is None:
        cross_dev = 1.0
        detail = "no crossover found"
    else:
        cross_dev = abs(cross - golden["crossover_nav_d8_eta0.9"])
        detail = f"crossover at N_av = {cross:.6f}"

    path = os.path.join(_golden_dir(golden_dir), "fig4_curve.csv")
    gold_rows = _read_golden_csv(path)
    if len(gold_rows) != len(rows):
        reg, where = 1.0, "row count mismatch"
    else:
        reg, where = 0.0, ""
        for g, r in zip(gold_rows, rows):
            for field in ("alpha", "eta", "n_av", "f_q", "delta_phi"):
                gv = float(g[field]) if g[field] else math.nan
                rv = getattr(r, field)
                if math.isnan(gv) and math.isnan(rv):
                    continue
                dev = abs(gv - rv) / max(1.0, abs(gv))
                if dev > reg:
                    reg = dev
                    where = f"{field} at d={g['d']} k={g['k']} n_av={g['n_av']}"

    return [
        ("sweep.fig4_orderings", float(bad), 0.5, "ordering violations"),
        ("sweep.fig4_crossover_vs_golden", cross_dev, 1e-4, detail),
        ("sweep.fig4_golden_regression", reg, 1e-9, where),
    ]


def check_scalar_golden(golden_dir):
    golden = _load_scalars(golden_dir)
    measured = {
        "noon_k4_eta0.9": baselines.noon_qfi(4, 0.9).f_q,
        "tmsv_nav1_eta0.9": baselines.tmsv_qfi(baselines.tmsv_r_for_nav(1.0), 0.9).f_q,
    }
    worst, where = 0.0, ""
    for key, val in measured.items():
        dev = abs(val - golden[key]) / max(1.0, abs(golden[key]))
        if dev > worst:
            worst, where = dev, key
    return [("baselines.scalar_golden", worst, 1e-9, where)]


# ---------------------------------------------------------------------------
# generation scheme
# ---------------------------------------------------------------------------

def check_genscheme(golden_dir):
    out = genscheme.bs_stage(1.0)
    tgt = genscheme.bs_stage_target(1.0, out.amps.shape[0] - 1)
    err18 = abs(1.0 - fock.fidelity(out, tgt))

    d, alpha, beta = 4, 1.0, 6.0
    state = genscheme.cpm_stage(alpha, beta, d)
    n_sig = state.amps.shape[0] - 1
    n_anc = state.amps.shape[1] - 1
    err19 = 0.0
    for k in range(d):
        catv = cats.cat_to_fock(cats.CatSpec(d, k, alpha), n_sig)
        anc = fock.coherent_amplitudes(beta * np.exp(2j * math.pi * k / d), n_anc)
        ov = np.einsum("i,ij,j->", catv.amps.conj(), state.amps, anc.conj())
        err19 = max(err19, abs(abs(ov) - math.sqrt(cats.norm_M(cats.CatSpec(d, k, alpha))) / d))
    closure = abs(sum(cats.norm_M(cats.CatSpec(d, k, alpha)) for k in range(d)) / d ** 2 - 1.0)

    outcomes = genscheme.heterodyne_condition(state, d, beta, alpha=alpha)
    prob_err = max(abs(o.probability - cats.norm_M(cats.CatSpec(d, o.k_observed[0], alpha)) / d ** 2)
                   for o in outcomes)
    fid_def = max(1.0 - o.conditional_fidelity for o in outcomes)

    leaks = [genscheme.leakage_bound(4, b) for b in (4.0, 6.0, 8.0)]
    mono = 0.0 if leaks[0] > leaks[1] > leaks[2] else 1.0

    cfg = genscheme.GenConfig(2, 1.0, 4.0, shots=10000, seed=7)
    pairs = genscheme.end_to_end(cfg)
    counts = genscheme.shot_histogram(pairs, cfg.shots, cfg.seed)
    worst_band = 0.0
    for o, c in zip(pairs, counts):
        sigma = math.sqrt(max(cfg.shots * o.probability * (1 - o.probability), 1e-9))
        worst_band = max(worst_band, abs(c - cfg.shots * o.probability) / (3.0 * sigma + 1e-12))
    det = 0.0 if np.array_equal(counts, genscheme.shot_histogram(pairs, cfg.shots, cfg.seed)) else 1.0

    golden = _load_scalars(golden_dir)
    by_pair = {o.k_observed: o for o in pairs}
    dev_main = max(
        abs(by_pair[(0, 0)].conditional_fidelity - golden["gen_d2_matched00_fidelity"]),
        abs(by_pair[(0, 0)].probability - golden["gen_d2_prob00"]),
    )
    dev_noise = abs(by_pair[(1, 1)].conditional_fidelity - golden["gen_d2_matched11_fidelity"])

    return [
        ("genscheme.bs_stage_fidelity", err18, 1e-10, ""),
        ("genscheme.cpm_branch_coefficients", err19, 1e-10, ""),
        ("genscheme.branch_weight_closure", closure, 1e-9, ""),
        ("genscheme.heterodyne_probabilities", prob_err, 1e-6, ""),
        ("genscheme.conditional_fidelity", fid_def, 1e-3, "1 - min fidelity"),
        ("genscheme.leakage_monotone_in_beta", mono, 0.5, ""),
        ("genscheme.shot_frequencies_3sigma", max(worst_band, det), 1.0,
         "max |count - expectation| / 3 sigma"),
        ("genscheme.golden_matched_outcomes", dev_main, 1e-9, ""),
        ("genscheme.golden_noise_dominated_outcome", dev_noise, 1e-3,
         "the (1,1) pair post-selects at ~1e-28 probability"),
    ]


# ---------------------------------------------------------------------------
# golden plumbing and driver
# ---------------------------------------------------------------------------

def _read_golden_csv(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = None
        for line in fh:
            if line.startswith("#"):
                continue
            parts = line.rstrip("\n").split(",")
            if header is None:
                header = parts
                continue
            rows.append(dict(zip(header, parts)))
    return rows


def _load_scalars(golden_dir) -> dict:
    path = os.path.join(_golden_dir(golden_dir), "scalars.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_golden(golden_dir=None):
    """Regenerate every golden artifact from the current build."""
    from . import cli

    out_dir = _golden_dir(golden_dir)
    os.makedirs(out_dir, exist_ok=True)
    rows = _curve_rows()
    text = io.StringIO()
    cli._emit_csv(
        text, cli.CURVE_HEADER,
        [(r.d, r.k, r.alpha, r.eta, r.n_av, r.f_q, r.delta_phi, r.method,
          r.f_q_paper) for r in rows],
        {"request": GOLDEN_CURVE_REQUEST, "version": "golden"},
    )
    with open(os.path.join(out_dir, "fig4_curve.csv"), "w", encoding="utf-8",
              newline="") as fh:
        fh.write(text.getvalue())

    cross = sweep.find_crossover(rows, 0, 1)
    cfg = genscheme.GenConfig(2, 1.0, 4.0)
    outcomes = {o.k_observed: o for o in genscheme.end_to_end(cfg)}
    scalars = {
        "crossover_nav_d8_eta0.9": cross,
        "noon_k4_eta0.9": baselines.noon_qfi(4, 0.9).f_q,
        "tmsv_nav1_eta0.9": baselines.tmsv_qfi(baselines.tmsv_r_for_nav(1.0), 0.9).f_q,
        "gen_d2_matched00_fidelity": outcomes[(0, 0)].conditional_fidelity,
        "gen_d2_matched11_fidelity": outcomes[(1, 1)].conditional_fidelity,
        "gen_d2_prob00": outcomes[(0, 0)].probability,
    }
    with open(os.path.join(out_dir, "scalars.json"), "w", encoding="utf-8") as fh:
        json.dump(scalars, fh, indent=2, sort_keys=True)
        fh.write("\n")


_CHECKS = (
    check_fock_core,
    check_cats,
    check_probes,
    check_identity_eq5_eq10,
    check_phase_average,
    check_loss_models,
    check_pair_rep_vs_full,
    check_mixed_qfi,
    check_baselines,
    check_alpha_inversion,
    check_lossless_k0_optimal,
)

_GOLDEN_CHECKS = (
    check_fig4_and_golden,
    check_scalar_golden,
    check_genscheme,
)


def run_all(tol_scale: float = 1.0, golden_dir=None) -> list:
    results = []
    for fn in _CHECKS:
        for name, measured, tol, detail in fn():
            eff = tol * tol_scale
            results.append(CheckResult(name, measured < eff, float(measured),
                                       eff, detail))
    for fn in _GOLDEN_CHECKS:
        for name, measured, tol, detail in fn(golden_dir):
            eff = tol * tol_scale
            results.append(CheckResult(name, measured < eff, float(measured),
                                       eff, detail))
    return results
