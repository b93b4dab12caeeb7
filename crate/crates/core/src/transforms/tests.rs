use approx::assert_abs_diff_eq;

use super::*;
use crate::hilbert::{partial_trace, QuantumState, C64, SPIN_D, SPIN_G};
use crate::models::{build_correction, build_total_hamiltonian, derive_squeeze_params, ConstantSqueeze, TanhRamp};

fn interior(m: &CMatrix, keep: usize) -> CMatrix {
    m.view((0, 0), (keep, keep)).into_owned()
}

#[test]
fn zero_squeeze_is_identity() {
    let s = squeeze_operator(0.0, 12).unwrap();
    assert!((s.unitary().matrix() - CMatrix::identity(13, 13)).camax() < 1e-15);
    assert_eq!(s.label(), &FrameLabel::Squeeze(0.0));
}

#[test]
fn squeeze_is_unitary() {
    for r in [0.3, 1.0, 1.25] {
        assert!(squeeze_operator(r, 40).unwrap().unitarity_defect() < 1e-10, "r = {r}");
    }
}

#[test]
fn squeeze_obeys_bogoliubov_relation_in_interior() {
    let n_max = 120;
    let a = fock_annihilation(n_max).unwrap();
    for r in [0.25, 0.5, 0.8] {
        let keep = squeeze_interior_levels(r, n_max);
        let u = squeeze_operator(r, n_max).unwrap();
        let u = u.unitary().matrix();
        let lhs = u.adjoint() * a.matrix() * u;
        let rhs = a.matrix().scale(r.cosh()) - a.matrix().adjoint().scale(r.sinh());
        let err = (interior(&lhs, keep) - interior(&rhs, keep)).camax();
        assert!(err < 1e-6, "r = {r}: {err:e}");
    }
}

#[test]
fn squeezed_vacuum_matches_series() {
    let (r, n_max) = (0.7, 60);
    let u = squeeze_operator(r, n_max).unwrap();
    let psi = u.unitary().matrix().column(0).into_owned();
    // c_{2m} = (−tanh r)^m √((2m)!) / (2^m m!) / √cosh r
    let mut coeff = 1.0 / r.cosh().sqrt();
    for m in 0..=n_max / 2 {
        if m > 0 {
            let (m2, mf) = ((2 * m) as f64, m as f64);
            coeff *= -r.tanh() * ((m2 - 1.0) * m2).sqrt() / (2.0 * mf);
        }
        if 2 * m < squeeze_interior_levels(r, n_max) {
            assert!((psi[2 * m] - C64::new(coeff, 0.0)).norm() < 1e-8, "level {}", 2 * m);
        }
        if 2 * m < n_max {
            assert!(psi[2 * m + 1].norm() < 1e-14);
        }
    }
    let number: f64 = (0..=n_max).map(|n| n as f64 * psi[n].norm_sqr()).sum();
    assert_abs_diff_eq!(number, r.sinh().powi(2), epsilon = 1e-8);
}

#[test]
fn opposite_squeezes_cancel_in_interior() {
    let n_max = 80;
    let keep = squeeze_interior_levels(1.0, n_max);
    let up = squeeze_operator(1.0, n_max).unwrap();
    let down = squeeze_operator(-1.0, n_max).unwrap();
    let prod = up.unitary().matrix() * down.unitary().matrix();
    assert!((interior(&prod, keep) - CMatrix::identity(keep, keep)).camax() < 1e-8);
}

#[test]
fn squeeze_truncation_guard() {
    // sinh²(2) ≈ 13.15
    assert!(squeeze_operator(2.0, 40).is_ok());
    assert!(matches!(squeeze_operator(2.0, 20), Err(Error::Truncation(_))));
    assert!(squeeze_operator(f64::NAN, 20).is_err());
}

#[test]
fn pade_route_reproduces_squeeze() {
    let n_max = 30;
    let a = fock_annihilation(n_max).unwrap();
    let g = (&(&a * &a) - &(&a.dagger() * &a.dagger())).scale_re(0.6);
    let pade = expm::expm(g.matrix());
    let eigen = squeeze_operator(1.2, n_max).unwrap();
    assert!((pade - eigen.unitary().matrix()).camax() < 1e-10);
}

#[test]
fn identity_conjugation_and_spectrum() {
    let p = ModelParams::with_squeezing(2, 8, 10.0, 0.6).with_detunings(vec![0.4, -0.2]);
    let sq = derive_squeeze_params(&p).unwrap();
    let sig = SpaceSignature::boson_spins(8, 2).unwrap();
    let h = build_squeezed_rabi(&p, &sq, &sig).unwrap();

    let trivial = polaron(&[0.0, 0.0], &sig).unwrap();
    assert!((conjugate(&h, &trivial).unwrap().matrix() - h.matrix()).camax() < 1e-14);

    let frame = polaron(&[0.07, 0.05], &sig).unwrap();
    assert!(frame.unitarity_defect() < 1e-10);
    let before = h.eigenvalues_hermitian();
    let after = conjugate(&h, &frame).unwrap().eigenvalues_hermitian();
    for (x, y) in before.iter().zip(&after) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-8);
    }
}

#[test]
fn conjugate_rejects_mismatched_frames() {
    let sig = SpaceSignature::boson_spins(4, 1).unwrap();
    let other = SpaceSignature::boson_spins(5, 1).unwrap();
    let frame = polaron(&[0.1], &other).unwrap();
    assert!(conjugate(&Operator::identity(&sig), &frame).is_err());
    assert!(polaron(&[0.1, 0.2], &sig).is_err());
}

#[test]
fn squeeze_frame_maps_total_onto_rabi_plus_correction() {
    let n_max = 120;
    let p = ModelParams::with_squeezing(1, n_max, 20.0, 0.5).with_detunings(vec![2.0]);
    let sq = derive_squeeze_params(&p).unwrap();
    let keep = squeeze_interior_levels(sq.r, n_max) * 2;
    let sig = SpaceSignature::boson_spins(n_max, 1).unwrap();
    let total = build_total_hamiltonian(&p, &sig).unwrap();
    let transformed = conjugate(&total, &squeeze_operator(sq.r, n_max).unwrap()).unwrap();
    let expected = &build_squeezed_rabi(&p, &sq, &sig).unwrap() + &build_correction(&p, &sq, &sig).unwrap();
    // U(δ a†a − Ω/2 (a² + a†²))U† leaves the constant (Δ_m − δ_m)/2
    let shift = (sq.delta_m_eff - p.delta_m) / 2.0;
    let expected = expected.matrix() + CMatrix::identity(sig.total_dim(), sig.total_dim()).scale(shift);
    let err = (interior(transformed.matrix(), keep) - interior(&expected, keep)).camax();
    assert!(err < 1e-6, "{err:e}");
}

#[test]
fn correction_is_suppressed_by_e_minus_two_r() {
    let p = ModelParams::with_squeezing(1, 10, 20.0, 1.1);
    let sq = derive_squeeze_params(&p).unwrap();
    let sig = SpaceSignature::boson_spins(10, 1).unwrap();
    let ops = ModeOperators::new(&sig).unwrap();
    let coupling = (&ops.position() * &ops.sx[0]).scale_re(sq.lambda_eff[0]);
    let ratio = build_correction(&p, &sq, &sig).unwrap().spectral_norm() / coupling.spectral_norm();
    assert_abs_diff_eq!(ratio, (-2.0 * sq.r).exp(), epsilon = 1e-12);
}

#[test]
fn polaron_displaces_phonon_by_spin() {
    // U a U† = a − η σ_x holds exactly away from the truncation edge
    let (n_max, eta) = (30, 0.1);
    let sig = SpaceSignature::boson_spins(n_max, 1).unwrap();
    let ops = ModeOperators::new(&sig).unwrap();
    let moved = conjugate(&ops.a, &polaron(&[eta], &sig).unwrap()).unwrap();
    let expected = &ops.a - &ops.sx[0].scale_re(eta);
    let keep = 2 * (n_max / 2);
    assert!((interior(moved.matrix(), keep) - interior(expected.matrix(), keep)).camax() < 1e-12);
}

fn single_spin(eta: f64, delta_dg: f64) -> (ModelParams, SqueezeParams) {
    let delta_m_eff = 10.0;
    let p = ModelParams::from_squeezed_detuning(1, 24, delta_m_eff, 0.0).with_detunings(vec![delta_dg]);
    let mut sq = derive_squeeze_params(&p).unwrap();
    // λ such that λ_eff = η Δ_m
    let lambda = 2.0 * eta * sq.delta_m_eff / sq.r.exp();
    let p = p.with_couplings(vec![lambda]);
    sq.lambda_eff = vec![eta * sq.delta_m_eff];
    (p, sq)
}

#[test]
fn schrieffer_wolff_without_coupling_is_exact() {
    let (p, sq) = single_spin(0.0, 0.0);
    let report = schrieffer_wolff_check(&p, &sq, 2.0).unwrap();
    assert_eq!(report.residual, 0.0);
    assert_eq!(report.ratio, None);
}

#[test]
fn schrieffer_wolff_resonant_spins_leave_round_off_only() {
    // with δ_dg = 0 the polaron frame removes the coupling exactly, so the
    // second-order Ising form has no higher-order remainder
    let (p, sq) = single_spin(0.1, 0.0);
    let report = schrieffer_wolff_check(&p, &sq, 2.0).unwrap();
    assert!(report.residual < report.noise_floor, "{report:?}");
    assert!(report.residual_half < report.noise_floor);
    assert_eq!(report.ratio, None);
    assert!(!report.cubic);
}

#[test]
fn schrieffer_wolff_detuned_spin_residual_is_first_order() {
    // U σ_z U† − σ_z = O(η), so the remainder halves with η
    let (p, sq) = single_spin(0.1, 1.0);
    let report = schrieffer_wolff_check(&p, &sq, 2.0).unwrap();
    let ratio = report.ratio.unwrap();
    assert!((1.8..2.2).contains(&ratio), "{report:?}");
}

#[test]
fn schrieffer_wolff_rejects_large_eta() {
    let (p, sq) = single_spin(0.35, 0.0);
    assert!(schrieffer_wolff_check(&p, &sq, 2.0).is_err());
}

#[test]
fn pair_coefficient_matches_dispersive_exchange() {
    let n_max = 20;
    let p = ModelParams::from_squeezed_detuning(2, n_max, 10.0, 0.8);
    let sq = derive_squeeze_params(&p).unwrap();
    let sig = SpaceSignature::boson_spins(n_max, 2).unwrap();
    let h = build_squeezed_rabi(&p, &sq, &sig).unwrap();
    let etas: Vec<f64> = sq.lambda_eff.iter().map(|l| l / sq.delta_m_eff).collect();
    let conj = conjugate(&h, &polaron(&etas, &sig).unwrap()).unwrap();
    let per_ordered_pair = vacuum_pair_coefficient(&conj, 0, 1).unwrap() / 2.0;
    let expected = -sq.lambda_eff[0] * sq.lambda_eff[1] / sq.delta_m_eff;
    let eta = etas[0];
    assert!((per_ordered_pair - expected).abs() < eta.powi(3) * sq.delta_m_eff, "{per_ordered_pair} vs {expected}");
    assert!(vacuum_pair_coefficient(&conj, 0, 0).is_err());
}

#[test]
fn coherent_state_moments() {
    let vac = coherent_state(C64::new(0.0, 0.0), 6).unwrap();
    assert_eq!(vac.as_vector().unwrap()[0], C64::new(1.0, 0.0));

    let alpha = C64::new(1.3, -0.7);
    let n_max = 40;
    let state = coherent_state(alpha, n_max).unwrap();
    let a = fock_annihilation(n_max).unwrap();
    let mean_a = state.expectation(&a).unwrap();
    let mean_n = state.expectation(&(&a.dagger() * &a)).unwrap();
    assert!((mean_a - alpha).norm() < 1e-8);
    assert_abs_diff_eq!(mean_n.re, alpha.norm_sqr(), epsilon = 1e-8);
}

#[test]
fn coherent_state_truncation_error() {
    assert!(matches!(coherent_state(C64::new(3.0, 0.0), 10), Err(Error::Truncation(_))));
}

#[test]
fn zero_amplitude_cat_is_ground_spin() {
    let cat = target_cat_state(C64::new(0.0, 0.0), 5).unwrap();
    let sig = SpaceSignature::boson_spins(5, 1).unwrap();
    let expected = QuantumState::basis(&sig, &[0, SPIN_G]).unwrap();
    assert_abs_diff_eq!(cat.overlap_with_pure(&expected).unwrap(), 1.0, epsilon = 1e-14);
}

#[test]
fn large_cat_has_orthogonal_branches() {
    let alpha = C64::new(3.0, 0.0);
    let n_max = 50;
    let plus = coherent_state(alpha, n_max).unwrap();
    let minus = coherent_state(-alpha, n_max).unwrap();
    let overlap = plus.as_vector().unwrap().dotc(minus.as_vector().unwrap()).norm();
    assert_abs_diff_eq!(overlap, (-2.0 * alpha.norm_sqr()).exp(), epsilon = 1e-12);
    assert!(overlap < 1e-7);

    let cat = target_cat_state(alpha, n_max).unwrap();
    let sig = cat.signature().clone();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let branch = |coh: &QuantumState, sign: f64| -> QuantumState {
        let v = coh.as_vector().unwrap();
        let spin = [C64::new(h, 0.0), C64::new(sign * h, 0.0)];
        let full = crate::hilbert::CVector::from_fn(sig.total_dim(), |i, _| v[i / 2] * spin[i % 2]);
        QuantumState::from_vector_normalized(sig.clone(), full).unwrap()
    };
    assert_abs_diff_eq!(cat.overlap_with_pure(&branch(&plus, 1.0)).unwrap(), 0.5, epsilon = 1e-7);
    assert_abs_diff_eq!(cat.overlap_with_pure(&branch(&minus, -1.0)).unwrap(), 0.5, epsilon = 1e-7);
}

#[test]
fn ghz_state_shape() {
    let ghz = ghz_target(2).unwrap();
    let v = ghz.as_vector().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sig = ghz.signature();
    assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-15);
    assert!(
        (v[sig.index_of(&[SPIN_G, SPIN_G]).unwrap()] - C64::from_polar(h, -std::f64::consts::FRAC_PI_4)).norm() < 1e-15
    );
    assert!(
        (v[sig.index_of(&[SPIN_D, SPIN_D]).unwrap()] - C64::from_polar(h, std::f64::consts::FRAC_PI_4)).norm() < 1e-15
    );

    for n in 2..=4 {
        let reduced = partial_trace(&ghz_target(n).unwrap(), &[0]).unwrap().density_matrix();
        assert!((reduced - CMatrix::identity(2, 2).scale(0.5)).camax() < 1e-15);
    }
    assert!(ghz_target(1).is_err());
}

#[test]
fn cat_alpha_constant_schedule_matches_closed_form() {
    let p = ModelParams::with_squeezing(1, 10, 10.0, 0.0);
    for (r, t) in [(0.0_f64, 0.0), (0.0, 1.7), (0.9, 2.3), (1.25, 5.0)] {
        let delta_m_eff = p.delta_m / (2.0 * r).cosh();
        let quad = cat_alpha(&p, &ConstantSqueeze(r), t).unwrap();
        let closed = cat_alpha_constant(p.lambda[0], r, delta_m_eff, t);
        assert!((quad - closed).norm() < 1e-8, "r = {r}, t = {t}: {quad} vs {closed}");
    }
}

#[test]
fn cat_alpha_ramp_is_smooth_and_bounded() {
    let p = ModelParams::with_squeezing(1, 10, 10.0, 0.0);
    let ramp = TanhRamp { r_max: 1.25, rate: 1.0 };
    let a1 = cat_alpha(&p, &ramp, 5.0).unwrap();
    let a2 = cat_alpha(&p, &ramp, 5.0 + 1e-4).unwrap();
    assert!((a1 - a2).norm() < 1e-3);
    // |α| ≤ (λ/2) ∫ e^r ≤ λ e^{r_max} t / 2
    assert!(a1.norm() < 1.25_f64.exp() * 5.0 / 2.0);
    assert!(cat_alpha(&p, &ramp, -1.0).is_err());
}
