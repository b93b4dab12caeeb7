use spinmech::dynamics::{linear_grid, vacuum_ground, EvolveOptions};
use spinmech::models::ModelParams;
use spinmech_harness::scenarios::fig2::coupling_rates;
use spinmech_harness::scenarios::ghz::{closed_readout, spin_figures};
use spinmech_harness::scenarios::squeezing::{xi_r_series, OatModel, Representation};
use spinmech_harness::{execute, Context, Integrator, ScenarioConfig};

#[test]
fn oat_vector_and_density_agree() {
    let model = OatModel::new(4, 0.3, &[0.0; 4]).unwrap();
    let times = linear_grid(1.5, 30);
    let options = EvolveOptions::default();
    let v = model.evolve(None, &times, &options, Representation::Vector).unwrap();
    let d = model.evolve(None, &times, &options, Representation::Density).unwrap();
    for (a, b) in v.iter().zip(&d) {
        let diff = (a.density_matrix() - b.density_matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "{diff}");
    }
    let (xv, xd) = (xi_r_series(&v, 4), xi_r_series(&d, 4));
    assert_eq!(xv.iter().map(|x| x.is_nan()).collect::<Vec<_>>(), xd.iter().map(|x| x.is_nan()).collect::<Vec<_>>());
}

#[test]
fn oat_vector_rejects_dephasing() {
    let model = OatModel::new(3, 0.3, &[0.01; 3]).unwrap();
    let r = model.evolve(None, &[0.0, 1.0], &EvolveOptions::default(), Representation::Vector);
    assert!(matches!(r, Err(spinmech::Error::Unsupported(_))));
}

#[test]
fn ghz_figures_of_the_initial_state() {
    let (f, c) = spin_figures(&vacuum_ground(3, 2).unwrap(), 2).unwrap();
    assert!((f - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert!(c.abs() < 1e-12);
}

#[test]
fn closed_ghz_readout_reaches_unit_fidelity() {
    let model = ModelParams::from_squeezed_detuning(2, 6, 40.0, 1.25);
    let readout = closed_readout(&model, 500).unwrap();
    assert!(readout.eta <= 0.1);
    assert!(readout.fidelity >= 0.99, "{readout:?}");
    assert!((30..=36).contains(&readout.best_n), "{readout:?}");
}

#[test]
fn coupling_rate_fit_matches_the_diagonalization_oracle() {
    let config = ScenarioConfig::new("fig2c").unwrap();
    let params = config.resolve().unwrap();
    let ctx = Context { params: &params, integrator: Integrator::default(), seed: 0 };
    let slow = coupling_rates(&ctx, 0.0).unwrap();
    let fast = coupling_rates(&ctx, 3.0).unwrap();
    for rate in [slow, fast] {
        assert!((rate.fitted - rate.oracle).abs() < 1e-5 * rate.oracle, "{rate:?}");
        assert!((rate.oracle - rate.lambda_eff).abs() < 1e-3 * rate.lambda_eff, "{rate:?}");
    }
    assert!((fast.fitted / slow.fitted - 3f64.exp()).abs() < 1e-3 * 3f64.exp());
}

#[test]
fn fidelity_columns_are_consistent() {
    let mut config = ScenarioConfig::new("figS3").unwrap();
    config.set("r", "0,1").unwrap();
    config.set("steps", "40").unwrap();
    let outcome = execute(&config).unwrap();
    for name in ["figS3_r0", "figS3_r1"] {
        let table = outcome.table(name).unwrap();
        let (fg, fd) = (table.column("f_g").unwrap(), table.column("f_d").unwrap());
        for (g, d) in fg.iter().zip(&fd) {
            assert!((g * g + d * d - 1.0).abs() < 1e-8);
        }
        assert!((fd[0] - 1.0).abs() < 1e-12);
        assert!((table.column("f_n0").unwrap()[0] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn closed_form_scenarios_emit_expected_shapes() {
    let outcome = execute(&ScenarioConfig::new("fig3").unwrap()).unwrap();
    let vs_r = outcome.table("fig3_vs_r").unwrap();
    assert_eq!(vs_r.rows.len(), 501);
    let last = vs_r.rows.last().unwrap();
    assert!((last[1] - (1.0 + 20f64.exp()) / 2.0).abs() < 1e-12 * last[1]);
    let vs_pump = outcome.table("fig3_vs_pump").unwrap();
    assert!(vs_pump.column("pump_ratio").unwrap().iter().all(|&x| x < 1.0));
    let s5 = execute(&ScenarioConfig::new("figS5").unwrap()).unwrap();
    assert_eq!(s5.tables[0].columns, vec!["r", "delta_m_eta_0.2", "delta_m_eta_0.1"]);
}
