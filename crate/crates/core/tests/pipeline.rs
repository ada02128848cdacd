//! End-to-end pipeline: shipped configs, determinism, monotonicity and the
//! command-line front end.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pairsource::pipeline::{
    cw_variant, load_config, predict_state, predict_with_spectrum, run_scenario, spectral_model, RunOptions, Scenario,
    SourceConfig,
};
use pairsource::polarization::{PumpConfig, SplitterParams};
use pairsource::spectral::GridSpec;
use pairsource::units::Length;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn small(mut cfg: SourceConfig) -> SourceConfig {
    cfg.grid = GridSpec { points: 384, ..cfg.grid };
    cfg
}

fn read_tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn shipped_configs_match_builtin_ones() {
    assert_eq!(load_config(&configs_dir().join("paper_pulsed.json")).unwrap(), SourceConfig::paper_pulsed());
    assert_eq!(load_config(&configs_dir().join("paper_cw.json")).unwrap(), SourceConfig::paper_cw());
}

#[test]
fn full_table_is_byte_identical_across_runs() {
    let cfg = small(SourceConfig::paper_pulsed());
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let opts = |d: &Path| RunOptions {
        out_dir: d.to_path_buf(),
        seed: Some(42),
        mean_total: Some(5e4),
    };
    let ra = run_scenario(Scenario::FullPaperTable, &cfg, &opts(a.path())).unwrap();
    let rb = run_scenario(Scenario::FullPaperTable, &cfg, &opts(b.path())).unwrap();
    assert_eq!(ra, rb);
    let (ta, tb) = (read_tree(a.path()), read_tree(b.path()));
    assert_eq!(ta.keys().collect::<Vec<_>>(), tb.keys().collect::<Vec<_>>());
    for (k, v) in &ta {
        assert!(v == &tb[k], "{} differs", k.display());
    }
    assert!(ta.contains_key(Path::new("full_paper_table/summary.csv")));
    assert_eq!(ra.len(), Scenario::ALL.len() - 1);
}

#[test]
fn seed_changes_only_the_noisy_outputs() {
    let cfg = SourceConfig::paper_pulsed();
    let run = |seed| {
        let d = tempfile::tempdir().unwrap();
        let opts = RunOptions {
            out_dir: d.path().to_path_buf(),
            seed: Some(seed),
            mean_total: None,
        };
        run_scenario(Scenario::TomographyPulsed, &cfg, &opts).unwrap();
        read_tree(d.path())
    };
    let (a, b) = (run(1), run(2));
    let key = |s: &str| PathBuf::from("tomography_pulsed").join(s);
    assert_eq!(a[&key("predicted_rho.csv")], b[&key("predicted_rho.csv")]);
    assert_ne!(a[&key("counts.csv")], b[&key("counts.csv")]);
}

#[test]
fn prediction_is_internally_consistent() {
    let cfg = small(SourceConfig::paper_pulsed());
    let p = predict_state(&cfg).unwrap();
    let q = predict_with_spectrum(&cfg, &spectral_model(&cfg).unwrap()).unwrap();
    assert_eq!(p, q);
    let cf = p.coherence_factor;
    assert!((cf - p.factors.exchange_overlap * p.factors.inter_waveguide_overlap * p.factors.temporal).abs() < 1e-12);
    assert!((p.metrics.fidelity_psi_minus - (1.0 + cf) / 2.0).abs() < 1e-12);
    assert!((p.metrics.chsh_fixed - SQRT_2 * (1.0 + cf)).abs() < 1e-12);
    assert!((p.success_probability() - 0.942).abs() < 1e-3);
}

#[test]
fn fidelity_falls_with_pump_bandwidth() {
    let mut cfg = small(SourceConfig::paper_pulsed());
    cfg.filters = None;
    let mut last = 1.0;
    for bw in [0.1, 0.2, 0.3, 0.4] {
        cfg.pump = PumpConfig::pulsed(cfg.pump.center_wavelength, bw);
        let f = predict_state(&cfg).unwrap().target_fidelity();
        assert!(f < last, "{bw} nm: {f} >= {last}");
        last = f;
    }
}

#[test]
fn fidelity_falls_with_fibre_miscut() {
    let cfg = small(SourceConfig::paper_pulsed());
    let ideal = predict_state(&cfg).unwrap();
    let mut last = ideal.target_fidelity();
    for cm in [50.0, 100.0, 200.0] {
        let mut c = cfg.clone();
        c.fiber_length = Some(Length::from_m(ideal.walkoff.fiber_length.m() + cm / 100.0));
        let f = predict_state(&c).unwrap().target_fidelity();
        assert!(f < last, "{cm} cm");
        last = f;
    }
}

#[test]
fn splitter_leakage_costs_rate_not_fidelity_at_zero_phase() {
    let mut cfg = small(cw_variant(&SourceConfig::paper_pulsed()));
    let mut last_rate = 1.0 + 1e-12;
    let f0 = predict_state(&cfg).unwrap().target_fidelity();
    for t_v in [0.0, 0.02, 0.05, 0.1] {
        cfg.splitter = SplitterParams::new(0.996, t_v).unwrap();
        let p = predict_state(&cfg).unwrap();
        assert!(p.success_probability() < last_rate);
        assert!((p.target_fidelity() - f0).abs() < 1e-12);
        last_rate = p.success_probability();
    }
}

#[test]
fn jsa_inner_product_option_changes_the_factor() {
    let mut cfg = small(SourceConfig::paper_pulsed());
    let shg = predict_state(&cfg).unwrap();
    cfg.inter_waveguide = pairsource::pipeline::config::InterWaveguideOverlap::Jsa;
    let jsa = predict_state(&cfg).unwrap();
    assert!(jsa.factors.inter_waveguide_overlap > shg.factors.inter_waveguide_overlap);
    assert!(jsa.factors.inter_waveguide_overlap <= 1.0);
}

#[test]
fn pulsed_scenarios_reject_cw_configs() {
    let d = tempfile::tempdir().unwrap();
    let err = run_scenario(Scenario::JsaPulsed, &SourceConfig::paper_cw(), &RunOptions::new(d.path()));
    assert!(err.is_err());
    // CW scenarios derive from either
    assert!(run_scenario(Scenario::JsaCw, &SourceConfig::paper_cw(), &RunOptions::new(d.path())).is_ok());
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pairsource")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn cli_lists_and_validates() {
    let (code, out, _) = cli(&["list-scenarios"]);
    assert_eq!(code, 0);
    for s in Scenario::ALL {
        assert!(out.contains(s.name()));
    }
    let good = configs_dir().join("paper_cw.json");
    assert_eq!(cli(&["validate", "--config", good.to_str().unwrap()]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut v = SourceConfig::paper_cw().to_json();
    v["splitter"]["t_h"] = 1.2.into();
    v["pump"].as_object_mut().unwrap().remove("phase");
    fs::write(&bad, v.to_string()).unwrap();
    let (code, _, err) = cli(&["validate", "--config", bad.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert!(err.contains("splitter.t_h must lie in [0,1]"), "{err}");
    assert!(err.contains("pump.phase is required but missing"), "{err}");
}

#[test]
fn cli_simulate_writes_outputs_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("paper_pulsed.json");
    let (code, out, _) = cli(&[
        "simulate",
        "walkoff_budget",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--seed",
        "3",
        "--mean-total",
        "1e5",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    assert!(dir.path().join("walkoff_budget/summary.json").exists());

    let (code, _, err) = cli(&["simulate", "no_such_scenario"]);
    assert_eq!(code, 2);
    assert!(err.contains("valid scenarios"));
}
