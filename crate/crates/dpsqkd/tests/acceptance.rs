//! Acceptance gate: every exit criterion runs here at its stated tolerance
//! and prints one pass/fail line. Criteria cover exact analytic anchors,
//! oracle equivalence, Monte Carlo statistical gates, figure-shape
//! properties, frozen regression constants, and byte-level determinism of
//! the CLI outputs.

use dpsqkd::collision::{
    pc0_bound, pc0_bruteforce_max, pc0_parametric, pc0_surface_dominance_excess,
    AttackSurfacePoint, SATURATION_ERROR_RATE,
};
use dpsqkd::model::{ChannelModel, ErrorCorrection, DEFAULT_BASELINE_ERROR};
use dpsqkd::montecarlo::{simulate, Attack, AttackTallies, SimConfig};
use dpsqkd::optimize::{
    cutoff_loss, optimize_nbar, protocol_rate, sweep, CutoffResult, OptimizeError, SweepProtocol,
    SweepSpec, NBAR_MIN,
};
use dpsqkd::rates;
use dpsqkd::RatePoint;

const SHANNON: ErrorCorrection = ErrorCorrection::ShannonLimit;

/// Collects clause outcomes so one criterion prints every clause before
/// asserting.
struct Gate {
    criterion: &'static str,
    failures: Vec<String>,
}

impl Gate {
    fn new(criterion: &'static str) -> Self {
        Gate {
            criterion,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, clause: &str, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("acceptance {} :: {clause} ... {verdict} ({detail})", self.criterion);
        if !ok {
            self.failures.push(format!("{clause}: {detail}"));
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n  {}",
            self.criterion,
            self.failures.join("\n  ")
        );
    }
}

/// 3-sigma binomial half-width for probability `p` estimated from `n`
/// trials.
fn gate3(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn criterion_1_collision_bound_anchors() {
    let mut g = Gate::new("1 (collision bound anchors)");
    let at_zero = pc0_bound(0.0).unwrap();
    g.check(
        "pc0(0) = 1/2 exactly",
        at_zero.pc0 == 0.5 && !at_zero.saturated,
        format!("{}", at_zero.pc0),
    );
    let at_peak = pc0_bound(SATURATION_ERROR_RATE).unwrap().pc0;
    g.check(
        "pc0(3/19) = 703/722 within 1e-12",
        (at_peak - 703.0 / 722.0).abs() <= 1e-12,
        format!("{at_peak}"),
    );
    let beyond = pc0_bound(0.2).unwrap();
    g.check(
        "saturation past e = 3/19",
        beyond.saturated && beyond.pc0 == 703.0 / 722.0,
        format!("pc0(0.2) = {} saturated = {}", beyond.pc0, beyond.saturated),
    );
    g.finish();
}

#[test]
fn criterion_2_bruteforce_oracle_agrees_with_bound() {
    let mut g = Gate::new("2 (brute-force oracle equivalence)");

    // Tightness from below: the binned surface maximum reaches the analytic
    // bound to within 2e-3. The a = c family is spaced 1/(2(gp-1)) apart in
    // error rate, so every +-0.002 bin holds a family point only for
    // gp >= ~126; at the default 60 the e = 0.01 bin provably misses (the
    // bound slope there is ~5.6, giving an ~8.6e-3 deficit). The scan runs
    // at 240 points per dimension, where the worst-case deficit from family
    // granularity is below 6e-4.
    for e in [0.01, 0.05, 0.10, 0.15] {
        let brute = pc0_bruteforce_max(e, 0.002, 240).unwrap();
        let bound = pc0_bound(e).unwrap().pc0;
        g.check(
            &format!("oracle max at e = {e} within 2e-3 below the bound"),
            brute >= bound - 2e-3,
            format!("brute {brute:.9} vs bound {bound:.9}"),
        );
        // The binned maximum may legitimately sit above the bound at the bin
        // center (it sees error rates up to e + 0.002), but never above the
        // bound at the top of its bin.
        let bin_top = pc0_bound((e + 0.002).min(SATURATION_ERROR_RATE)).unwrap().pc0;
        g.check(
            &format!("oracle max at e = {e} bounded by the bin-top value"),
            brute <= bin_top + 1e-12,
            format!("brute {brute:.9} vs bin top {bin_top:.9}"),
        );
    }

    // Dominance: no grid surface point exceeds the analytic bound at its
    // own error rate, at the default 60-point resolution.
    let excess = pc0_surface_dominance_excess(60).unwrap();
    g.check(
        "no surface point exceeds the bound by more than 1e-12",
        excess <= 1e-12,
        format!("max excess {excess:+.3e}"),
    );
    g.finish();
}

#[test]
fn criterion_3_optimum_family_identity() {
    let mut g = Gate::new("3 (optimum-family identity)");
    let mut worst_e = 0.0f64;
    let mut worst_pc = 0.0f64;
    let mut e = 0.0;
    while e <= SATURATION_ERROR_RATE {
        let p = AttackSurfacePoint::new(2.0 * e, 1.0 - 4.0 * e, 2.0 * e, 0.0, 0.0).unwrap();
        let (e_out, pc_out) = pc0_parametric(&p);
        worst_e = worst_e.max((e_out - e).abs());
        worst_pc = worst_pc.max((pc_out - pc0_bound(e).unwrap().pc0).abs());
        e += 1e-3;
    }
    g.check(
        "a = c = 2e, b = 1 - 4e, phases 0 reproduces (e, pc0) to 1e-12",
        worst_e <= 1e-12 && worst_pc <= 1e-12,
        format!("max |de| {worst_e:.2e}, max |dpc| {worst_pc:.2e}"),
    );
    g.finish();
}

#[test]
fn criterion_4_monte_carlo_matches_closed_forms() {
    let mut g = Gate::new("4 (Monte Carlo vs closed forms)");
    let million = 1_000_000u64;

    // Intercept-resend on the full train: 25% aggregate error, 50%
    // conditional on edge detections.
    let report = simulate(&SimConfig {
        n_pulses: million,
        nbar: 0.05,
        transmission: 1.0,
        dark_count: 0.0,
        baseline_error: 0.0,
        attack: Attack::InterceptResend,
        seed: 42,
    })
    .unwrap();
    g.check(
        "intercept-resend aggregate QBER = 0.25",
        (report.qber_est - 0.25).abs() <= gate3(0.25, report.n_clicks),
        format!("qber {:.5} over {} clicks", report.qber_est, report.n_clicks),
    );
    let AttackTallies::InterceptResend(ir) = report.attack else {
        panic!("wrong tallies")
    };
    let edge_err = ir.n_edge_errors as f64 / ir.n_edge as f64;
    g.check(
        "intercept-resend conditional edge error = 0.50",
        (edge_err - 0.5).abs() <= gate3(0.5, ir.n_edge),
        format!("edge error {edge_err:.5} over {} edges", ir.n_edge),
    );

    // Beamsplitter: leak nbar(1-T) immediate, 2 nbar(1-T) delayed.
    for (delayed, factor) in [(false, 1.0), (true, 2.0)] {
        let report = simulate(&SimConfig {
            n_pulses: million,
            nbar: 0.2,
            transmission: 0.5,
            dark_count: 0.0,
            baseline_error: 0.0,
            attack: Attack::Beamsplitter { delayed },
            seed: 42,
        })
        .unwrap();
        let expected = factor * 0.2 * (1.0 - 0.5);
        g.check(
            &format!(
                "beamsplitter leak (delayed = {delayed}) = {expected}"
            ),
            (report.eve_fraction_est - expected).abs() <= gate3(expected, report.n_clicks),
            format!("leak {:.5}", report.eve_fraction_est),
        );
    }

    // Sequential attack at k = 2 and k = 3: per-block error 1/(2(k+1)),
    // raw block-formation rate nbar^k per window.
    for (k, nbar, seed) in [(2u32, 0.1f64, 11u64), (3, 0.2, 13)] {
        let report = simulate(&SimConfig {
            n_pulses: million,
            nbar,
            transmission: 0.1,
            dark_count: 0.0,
            baseline_error: 0.0,
            attack: Attack::Sequential { k },
            seed,
        })
        .unwrap();
        let AttackTallies::Sequential(t) = report.attack else {
            panic!("wrong tallies")
        };
        let eps_seq = 1.0 / (2.0 * (k as f64 + 1.0));
        let block_err = t.n_block_errors as f64 / t.n_block_clicks as f64;
        g.check(
            &format!("sequential k = {k} per-block error = {eps_seq:.4}"),
            (block_err - eps_seq).abs() <= gate3(eps_seq, t.n_block_clicks),
            format!("block error {block_err:.5} over {} blocks", t.n_block_clicks),
        );
        let rate_expected = nbar.powi(k as i32);
        let window_rate = t.n_click_windows as f64 / t.n_windows as f64;
        g.check(
            &format!("sequential k = {k} block rate = nbar^k = {rate_expected}"),
            (window_rate - rate_expected).abs() <= gate3(rate_expected, t.n_windows),
            format!("window rate {window_rate:.6}"),
        );
    }

    // Honest channel reproduces the closed-form QBER.
    let report = simulate(&SimConfig {
        n_pulses: million,
        nbar: 0.2,
        transmission: 0.1,
        dark_count: 1e-5,
        baseline_error: 0.01,
        attack: Attack::NoAttack,
        seed: 7,
    })
    .unwrap();
    let e_formula = rates::qber(0.2, 0.1, 1e-5, 0.01).unwrap();
    g.check(
        "no-attack QBER matches the closed form",
        (report.qber_est - e_formula).abs() <= gate3(e_formula, report.n_clicks),
        format!("qber {:.6} vs formula {e_formula:.6}", report.qber_est),
    );
    g.finish();
}

fn curve(rows: &[RatePoint], p: SweepProtocol) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| (r.protocol, r.source) == (p.protocol_kind(), p.source_kind()))
        .map(|r| (r.loss_db, r.rate))
        .collect()
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn criterion_5_rate_vs_loss_shape() {
    let mut g = Gate::new("5 (rate-vs-loss shape)");
    let spec = SweepSpec {
        protocols: vec![
            SweepProtocol::Dps,
            SweepProtocol::Bb84Poisson,
            SweepProtocol::Bb84SinglePhoton,
        ],
        ..SweepSpec::reference_defaults()
    };
    let rows = sweep(&spec).unwrap();
    let dps = curve(&rows, SweepProtocol::Dps);
    let bbp = curve(&rows, SweepProtocol::Bb84Poisson);
    let bbs = curve(&rows, SweepProtocol::Bb84SinglePhoton);

    for (name, c) in [("dps", &dps), ("bb84-poisson", &bbp), ("bb84-single", &bbs)] {
        let monotone = c.windows(2).all(|w| w[1].1 <= w[0].1);
        g.check(
            &format!("{name} curve is monotone nonincreasing"),
            monotone,
            format!("{} rows", c.len()),
        );
    }

    let finite = |r: CutoffResult| match r {
        CutoffResult::Finite(l) => l,
        CutoffResult::NoneBelowCeiling => f64::INFINITY,
    };
    let cut_dps = finite(cutoff_loss(SweepProtocol::Dps, None, DEFAULT_BASELINE_ERROR, &SHANNON).unwrap());
    let cut_bbp = finite(
        cutoff_loss(SweepProtocol::Bb84Poisson, None, DEFAULT_BASELINE_ERROR, &SHANNON).unwrap(),
    );
    let cut_bbs = finite(
        cutoff_loss(SweepProtocol::Bb84SinglePhoton, None, DEFAULT_BASELINE_ERROR, &SHANNON)
            .unwrap(),
    );
    g.check(
        "cutoff(bb84-poisson) < cutoff(dps) <= cutoff(bb84-single)",
        cut_bbp < cut_dps && cut_dps <= cut_bbs,
        format!("{cut_bbp:.2} / {cut_dps:.2} / {cut_bbs:.2} dB"),
    );

    let violations: Vec<String> = dps
        .iter()
        .zip(&bbp)
        .filter(|((l, rd), (_, rb))| *l >= 5.0 && rd < rb)
        .map(|((l, rd), (_, rb))| format!("{l} dB: dps {rd:.4e} < bb84-poisson {rb:.4e}"))
        .collect();
    g.check(
        "dps rate >= bb84-poisson rate for all loss >= 5 dB",
        violations.is_empty(),
        if violations.is_empty() {
            "no violations".to_string()
        } else {
            violations.join("; ")
        },
    );

    // Log-rate decay slopes over the 5..=30 dB rows with positive rate:
    // the Poisson BB84 curve decays roughly twice as fast per dB.
    let log_points = |c: &[(f64, f64)]| -> Vec<(f64, f64)> {
        c.iter()
            .filter(|(l, r)| (5.0..=30.0).contains(l) && *r > 0.0)
            .map(|(l, r)| (*l, r.log10()))
            .collect()
    };
    let slope_dps = least_squares_slope(&log_points(&dps));
    let slope_bbp = least_squares_slope(&log_points(&bbp));
    let ratio = slope_bbp / slope_dps;
    g.check(
        "bb84-poisson log-rate falls ~twice as fast (ratio in [1.5, 2.5])",
        (1.5..=2.5).contains(&ratio),
        format!("slopes {slope_bbp:.4} / {slope_dps:.4} per dB, ratio {ratio:.3}"),
    );
    g.finish();
}

#[test]
fn criterion_6_sequential_rate_dominates_dps() {
    let mut g = Gate::new("6 (sequential attacks are weaker)");
    let cut = match cutoff_loss(SweepProtocol::Dps, None, DEFAULT_BASELINE_ERROR, &SHANNON).unwrap()
    {
        CutoffResult::Finite(l) => l,
        CutoffResult::NoneBelowCeiling => panic!("expected finite DPS cutoff"),
    };
    let mut violations = Vec::new();
    let mut loss = 0.0f64;
    while loss <= cut {
        let channel = ChannelModel::from_loss_db(loss, 1e-5, DEFAULT_BASELINE_ERROR).unwrap();
        match optimize_nbar(SweepProtocol::Dps, &channel, &SHANNON) {
            Ok(opt) => {
                let seq = protocol_rate(
                    SweepProtocol::DpsSequentialAdversary,
                    opt.nbar_opt,
                    &channel,
                    &SHANNON,
                );
                if seq < opt.rate_opt {
                    violations.push(format!("{loss} dB: seq {seq:.4e} < dps {:.4e}", opt.rate_opt));
                }
            }
            Err(OptimizeError::BeyondCutoff) => {}
            Err(e) => panic!("optimization failed at {loss} dB: {e}"),
        }
        loss += 1.0;
    }
    g.check(
        "sequential rate >= dps rate at the dps-optimal nbar, 1 dB grid to cutoff",
        violations.is_empty(),
        if violations.is_empty() {
            format!("0..={:.0} dB clean", cut.floor())
        } else {
            violations.join("; ")
        },
    );
    g.finish();
}

// Regression constants, frozen on first build from this crate's own
// dense-grid and bisection oracles (2000-point uniform reference grid and
// the 0.01 dB cutoff bisection), guarded to 1e-9 relative thereafter.
const RATE_DPS_NBAR02_10DB: f64 = 0.008408682837320656;
const RATE_BB84_SINGLE_20DB: f64 = 0.008529215476638471;
const DPS_20DB_NBAR_OPT: f64 = 0.22955509835211826;
const DPS_20DB_RATE_OPT: f64 = 0.0007920072889946567;
const BB84P_15DB_NBAR_OPT: f64 = 0.027332411968552548;
const BB84P_15DB_RATE_OPT: f64 = 0.0002813519081406569;
const DPS_CUTOFF_DB: f64 = 32.11669921875;
const BB84P_CUTOFF_DB: f64 = 18.5302734375;
const BB84S_CUTOFF_DB: f64 = 41.168212890625;

#[test]
fn criterion_7_regression_constants() {
    let mut g = Gate::new("7 (frozen regression constants)");
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1e-300);

    let r = rates::rate_dps(0.2, 0.1, 1e-5, 0.01, &SHANNON).unwrap();
    g.check(
        "dps rate at nbar 0.2, 10 dB, receiver defaults",
        rel(r, RATE_DPS_NBAR02_10DB),
        format!("{r:.16}"),
    );

    let src = dpsqkd::SourceModel::ideal_single_photon();
    let r = rates::rate_bb84(&src, 0.01, 2e-5, 0.01, &SHANNON).unwrap().rate;
    g.check(
        "bb84 single-photon rate at 20 dB",
        rel(r, RATE_BB84_SINGLE_20DB),
        format!("{r:.16}"),
    );

    let ch20 = ChannelModel::from_loss_db(20.0, 1e-5, DEFAULT_BASELINE_ERROR).unwrap();
    let opt = optimize_nbar(SweepProtocol::Dps, &ch20, &SHANNON).unwrap();
    g.check(
        "dps optimizer output at 20 dB",
        rel(opt.nbar_opt, DPS_20DB_NBAR_OPT) && rel(opt.rate_opt, DPS_20DB_RATE_OPT),
        format!("nbar {:.16}, rate {:.16}", opt.nbar_opt, opt.rate_opt),
    );
    // Dense-grid oracle cross-check of the frozen optimizer output.
    let grid_best = (0..2000)
        .map(|i| {
            let nbar = NBAR_MIN + (0.5 - 1e-9 - NBAR_MIN) * i as f64 / 1999.0;
            protocol_rate(SweepProtocol::Dps, nbar, &ch20, &SHANNON)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    g.check(
        "dps optimizer at 20 dB agrees with the 2000-point grid oracle",
        (opt.rate_opt - grid_best).abs() <= 1e-3 * grid_best,
        format!("optimizer {:.6e} vs grid {grid_best:.6e}", opt.rate_opt),
    );

    // Poisson BB84 has already cut off at 20 dB; its optimizer regression
    // is recorded at 15 dB instead.
    let ch20b = ChannelModel::from_loss_db(20.0, 2e-5, DEFAULT_BASELINE_ERROR).unwrap();
    g.check(
        "bb84-poisson is beyond cutoff at 20 dB",
        matches!(
            optimize_nbar(SweepProtocol::Bb84Poisson, &ch20b, &SHANNON),
            Err(OptimizeError::BeyondCutoff)
        ),
        "distinct beyond-cutoff result".to_string(),
    );
    let ch15 = ChannelModel::from_loss_db(15.0, 2e-5, DEFAULT_BASELINE_ERROR).unwrap();
    let opt = optimize_nbar(SweepProtocol::Bb84Poisson, &ch15, &SHANNON).unwrap();
    g.check(
        "bb84-poisson optimizer output at 15 dB",
        rel(opt.nbar_opt, BB84P_15DB_NBAR_OPT) && rel(opt.rate_opt, BB84P_15DB_RATE_OPT),
        format!("nbar {:.16}, rate {:.16}", opt.nbar_opt, opt.rate_opt),
    );

    for (protocol, frozen) in [
        (SweepProtocol::Dps, DPS_CUTOFF_DB),
        (SweepProtocol::Bb84Poisson, BB84P_CUTOFF_DB),
        (SweepProtocol::Bb84SinglePhoton, BB84S_CUTOFF_DB),
    ] {
        let cut = match cutoff_loss(protocol, None, DEFAULT_BASELINE_ERROR, &SHANNON).unwrap() {
            CutoffResult::Finite(l) => l,
            CutoffResult::NoneBelowCeiling => f64::INFINITY,
        };
        g.check(
            &format!("{protocol} cutoff loss"),
            rel(cut, frozen),
            format!("{cut} dB"),
        );
    }
    g.finish();
}

#[test]
fn criterion_8_byte_identical_outputs() {
    let mut g = Gate::new("8 (byte-identical reruns)");
    let bin = env!("CARGO_BIN_EXE_dpsqkd");
    let tmp = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(tmp).unwrap();

    let run = |args: &[&str], out: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args(args)
            .arg("--out")
            .arg(out)
            .stdout(std::process::Stdio::null())
            .stderr(std::process::Stdio::null())
            .status()
            .expect("spawn dpsqkd");
        assert!(status.success(), "dpsqkd {args:?} failed");
        std::fs::read(out).expect("read output")
    };

    let sweep_args = [
        "sweep",
        "--loss-min",
        "0",
        "--loss-max",
        "12",
        "--loss-step",
        "3",
        "--protocols",
        "dps,bb84-poisson,bb84-single,dps-seq",
    ];
    let a = run(&sweep_args, &tmp.join("sweep_a.csv"));
    let b = run(&sweep_args, &tmp.join("sweep_b.csv"));
    g.check(
        "sweep reruns are byte-identical",
        a == b,
        format!("{} bytes", a.len()),
    );

    let sim_args = [
        "simulate",
        "--attack",
        "intercept-resend",
        "--pulses",
        "200000",
        "--nbar",
        "0.05",
        "--transmission",
        "1",
        "--seed",
        "42",
    ];
    let a = run(&sim_args, &tmp.join("sim_a.csv"));
    let b = run(&sim_args, &tmp.join("sim_b.csv"));
    g.check(
        "simulate reruns are byte-identical",
        a == b,
        format!("{} bytes", a.len()),
    );
    g.finish();
}
