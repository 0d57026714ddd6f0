//! Property tests for the invariants of each module.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use cylbif_core::bifurcation::{domain_profile, find_sigma_zeros, select_t_star, sigma_fn, Zero, ZeroSearchOptions};
use cylbif_core::dispersion::{log_grid, sigma_closed, sigma_ode, sigma_reduced};
use cylbif_core::oracle::fd_sigma;
use cylbif_core::specfun::{ferrers_p_complex, gamma, legendre_p, legendre_p_complex, olver_hyp, Degree};
use cylbif_core::spectral::{ground_state, GroundState};
use cylbif_core::verify::legendre_ode_residual;
use cylbif_core::SpaceForm;

fn state(idx: usize) -> &'static (SpaceForm, GroundState) {
    static CELLS: [OnceLock<(SpaceForm, GroundState)>; 4] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    const CASES: [(u32, f64); 4] = [(2, -1.0), (2, 1.0), (3, -1.0), (3, 1.0)];
    CELLS[idx].get_or_init(|| {
        let (n, k) = CASES[idx];
        let sf = SpaceForm::new(n, k).unwrap();
        let gs = ground_state(&sf).unwrap();
        (sf, gs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn pythagorean_identity(n in 2u32..9, k in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], frac in 0.0..0.99f64) {
        let sf = SpaceForm::new(n, k).unwrap();
        let r = frac * sf.radial_limit().min(5.0);
        let (s, c) = (sf.s_k(r).unwrap(), sf.c_k(r).unwrap());
        prop_assert!((c * c + k * s * s - 1.0).abs() < 1e-12 * (1.0 + c * c));
    }

    #[test]
    fn gamma_reflection(x in -4.9..4.9f64, y in -2.0..2.0f64) {
        let z = Complex64::new(x, y);
        prop_assume!((x - x.round()).abs() > 1e-3 || y.abs() > 1e-3);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (z * PI).sin();
        prop_assert!((lhs - rhs).norm() < 1e-11 * rhs.norm());
    }

    #[test]
    fn hypergeometric_at_origin(a in -3.0..3.0f64, b in -3.0..3.0f64, c in 0.2..4.0f64) {
        // 𝐅(a, b; c; 0) = 1/Γ(c)
        let f = olver_hyp(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let g = gamma(Complex64::new(c, 0.0)).unwrap();
        prop_assert!((f * g - 1.0).norm() < 1e-13);
    }

    #[test]
    fn legendre_solves_its_equation(nu in 0.1..4.0f64, twice_m in -3i32..5, x in 1.2..6.0f64) {
        let m = twice_m as f64 / 2.0;
        let d = Degree::real(nu).unwrap();
        let r = legendre_ode_residual(|y| legendre_p(m, d, y), m, d, x).unwrap();
        prop_assert!(r < 1e-7, "residual {}", r);
    }

    #[test]
    fn conical_values_are_real(tau in 0.05..30.0f64, twice_m in -3i32..5, x in 1.01..8.0f64, y in -0.9..0.95f64) {
        let m = twice_m as f64 / 2.0;
        let d = Degree::conical(tau).unwrap();
        let p = legendre_p_complex(m, d, x).unwrap();
        prop_assert!(p.im.abs() <= 1e-12 * p.norm() + 1e-300);
        let f = ferrers_p_complex(m, d, y).unwrap();
        prop_assert!(f.im.abs() <= 1e-12 * f.norm() + 1e-300);
    }

    #[test]
    fn profile_invariants(eps in 0.0..0.5f64, samples in 8usize..300, t in 0.1..50.0f64) {
        let sf = SpaceForm::new(2, 1.0).unwrap();
        let p = domain_profile(&sf, t, eps, samples).unwrap();
        prop_assert_eq!(p.samples.len(), samples);
        prop_assert!(p.mean_deviation().abs() < 1e-14);
        prop_assert!(p.evenness_defect() < 1e-14);
        prop_assert!(p.samples.iter().all(|&(_, r)| r >= 1.0 - eps - 1e-15 && r <= 1.0 + eps + 1e-15));
    }

    #[test]
    fn t_star_is_smallest_sign_change(ts in prop::collection::vec((0.01..100.0f64, any::<bool>()), 1..12)) {
        let zeros: Vec<Zero> = ts.iter().map(|&(t, s)| Zero { t, sign_change: s, width: 0.0, residual: 0.0 }).collect();
        let expected = ts.iter().filter(|p| p.1).map(|p| p.0).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |x| x.min(t))));
        prop_assert_eq!(select_t_star(&zeros), expected);
    }

    #[test]
    fn zero_search_is_grid_invariant(roots in prop::collection::btree_set(1u32..400, 1..4)) {
        // simple zeros, an odd number of them so the ends have opposite signs
        let mut rs: Vec<f64> = roots.iter().map(|&r| 0.37 + r as f64 * 0.05).collect();
        if rs.len().is_multiple_of(2) {
            rs.push(25.0);
        }
        let f = |t: f64| Ok(rs.iter().map(|r| r - t).product::<f64>());
        let base = ZeroSearchOptions::default();
        let dense = ZeroSearchOptions { initial_points: 1024, ..base };
        let a = find_sigma_zeros(f, 0.3, 30.0, &base).unwrap();
        let b = find_sigma_zeros(f, 0.3, 30.0, &dense).unwrap();
        let sa: Vec<f64> = a.zeros.iter().filter(|z| z.sign_change).map(|z| z.t).collect();
        let sb: Vec<f64> = b.zeros.iter().filter(|z| z.sign_change).map(|z| z.t).collect();
        prop_assert_eq!(sa.len(), sb.len());
        for (x, y) in sa.iter().zip(&sb) {
            prop_assert!((x - y).abs() <= 1e-10 * x);
        }
        for r in &rs {
            prop_assert!(sa.iter().any(|z| (z - r).abs() <= 1e-10 * r));
        }
    }

    #[test]
    fn log_grid_shape(lo in 1e-3..1.0f64, span in 1.01..1e4f64, points in 2usize..600) {
        let g = log_grid(lo, lo * span, points).unwrap();
        prop_assert_eq!(g.len(), points);
        prop_assert_eq!(g[0], lo);
        prop_assert_eq!(*g.last().unwrap(), lo * span);
        prop_assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn mode_relabeling(case in 0usize..4, t in 0.2..60.0f64, j in 1u32..9) {
        let (sf, gs) = state(case);
        let a = sigma_ode(gs, sf, t, j).unwrap();
        let b = sigma_ode(gs, sf, t / j as f64, 1).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300));
    }

    #[test]
    fn routes_agree(case in 0usize..4, t in 0.1..100.0f64) {
        let (sf, gs) = state(case);
        let a = sigma_ode(gs, sf, t, 1).unwrap();
        let b = sigma_closed(gs, sf, t, 1).unwrap();
        prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a.abs()));
    }

    #[test]
    fn sigma_is_linear_in_normalization(case in 0usize..4, t in 0.2..40.0f64, factor in 1e-3..1e3f64) {
        let (sf, gs) = state(case);
        let scaled = gs.rescaled(factor);
        let a = sigma_fn(&scaled, sf)(t).unwrap();
        let b = sigma_fn(gs, sf)(t).unwrap();
        prop_assert!((a - factor * b).abs() <= 1e-12 * (factor * b).abs().max(1e-300));
        // the reduced bracket does not see s at all
        prop_assert_eq!(sigma_reduced(&scaled, sf, t, 1).unwrap(), sigma_reduced(gs, sf, t, 1).unwrap());
    }

    #[test]
    fn fd_sigma_tracks_shooting(case in 0usize..4, t in 0.5..20.0f64, j in 1u32..4) {
        let (sf, gs) = state(case);
        let exact = sigma_ode(gs, sf, t, j).unwrap();
        let coarse = fd_sigma(gs, sf, t, j, 128).unwrap();
        let fine = fd_sigma(gs, sf, t, j, 256).unwrap();
        // second order: the error shrinks by about four
        let (ec, ef) = ((coarse - exact).abs(), (fine - exact).abs());
        prop_assert!(ef <= 0.3 * ec + 1e-9, "errors {} {}", ec, ef);
    }
}
