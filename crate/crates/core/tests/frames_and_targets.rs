use std::sync::Arc;

use spinmech::dynamics::{evolve_unitary, linear_grid, EvolveOptions, Observable};
use spinmech::hilbert::{embed, fock_annihilation, CVector, QuantumState, SpaceSignature, C64, SPIN_D, SPIN_G};
use spinmech::metrics::{fidelity, spin_squeezing};
use spinmech::models::{build_oat, build_time_dependent, spin_spin_enhancement, FrameTerms, ModelParams, TanhRamp};
use spinmech::transforms::{cat_alpha, target_cat_state};

fn plus_x_vacuum(n_max: usize) -> QuantumState {
    let sig = SpaceSignature::boson_spins(n_max, 1).unwrap();
    let mut v = CVector::zeros(sig.total_dim());
    v[SPIN_D] = C64::new(1.0, 0.0);
    v[SPIN_G] = C64::new(1.0, 0.0);
    QuantumState::from_vector_normalized(sig, v).unwrap()
}

#[test]
fn ramp_displacement_matches_full_evolution() {
    let n_max = 40;
    let params = ModelParams::with_squeezing(1, n_max, 10.0, 0.0);
    let ramp = TanhRamp { r_max: 1.25, rate: 1.0 };
    let sig = SpaceSignature::boson_spins(n_max, 1).unwrap();
    let h = build_time_dependent(&params, Arc::new(ramp), &sig, FrameTerms::Ideal).unwrap();
    let a = embed(&fock_annihilation(n_max).unwrap(), 0, &sig).unwrap();
    let t_f = 5.0;
    let traj = evolve_unitary(
        &h,
        &plus_x_vacuum(n_max),
        &linear_grid(t_f, 10),
        &[Observable::new("a", a)],
        &EvolveOptions::default(),
    )
    .unwrap();
    // the σ_x = +1 branch is displaced by exactly α(t)
    let evolved = *traj.series("a").unwrap().last().unwrap();
    let alpha = cat_alpha(&params, &ramp, t_f).unwrap();
    assert!((evolved.norm() - alpha.norm()).abs() < 0.02 * alpha.norm(), "{evolved} vs {alpha}");
    assert!((evolved - alpha).norm() < 1e-5 * (1.0 + alpha.norm()));
}

#[test]
fn ideal_ramp_prepares_the_cat_target() {
    let n_max = 40;
    let params = ModelParams::with_squeezing(1, n_max, 10.0, 0.0);
    let ramp = TanhRamp { r_max: 1.25, rate: 1.0 };
    let sig = SpaceSignature::boson_spins(n_max, 1).unwrap();
    let h = build_time_dependent(&params, Arc::new(ramp), &sig, FrameTerms::Ideal).unwrap();
    let start = QuantumState::basis(&sig, &[0, SPIN_G]).unwrap();
    let t_f = 5.0;
    let traj = evolve_unitary(&h, &start, &[0.0, t_f], &[], &EvolveOptions::default()).unwrap();
    let alpha = cat_alpha(&params, &ramp, t_f).unwrap();
    // the free rotation e^{−iΓ a†a} acts trivially on the vacuum
    let target = target_cat_state(alpha, n_max).unwrap();
    assert!(fidelity(&traj.final_state, &target).unwrap() > 1.0 - 1e-6);
}

#[test]
fn six_spin_twisting_squeezes() {
    let n = 6;
    // fig. 4 scale: Λ₀ = 0.1λ enhanced at r = 0.5
    let strength = 0.1 * spin_spin_enhancement(0.5);
    let h = build_oat(strength, n).unwrap();
    let sig = SpaceSignature::spins(n).unwrap();
    let start = QuantumState::basis(&sig, &vec![SPIN_G; n]).unwrap();
    let times = linear_grid(2.0, 200);
    let traj = evolve_unitary(&h, &start, &times, &[], &EvolveOptions::default().recording()).unwrap();
    let min_xi_r = traj
        .states
        .unwrap()
        .iter()
        .skip(1)
        .filter_map(|s| spin_squeezing(s, n).ok().map(|r| r.xi_r_sq))
        .fold(f64::INFINITY, f64::min);
    assert!(min_xi_r < 1.0, "{min_xi_r}");
}
