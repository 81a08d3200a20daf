use catenoid::asymptotics::*;
use catenoid::numerics::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn gaps(rows: &[ConvergenceRow], q: Quantity) -> Vec<f64> {
    rows.iter().filter(|r| r.quantity == q).map(|r| r.gap).collect()
}

#[test]
fn closed_forms_agree() {
    let c = constants(&tol()).unwrap();
    let k = constant_checks(&c, &tol()).unwrap();
    assert!(k.d_inf_forms_gap.abs() <= 1e-11);
    assert!(k.sigma_residual.abs() <= 1e-12);
    assert!(k.rho_residual.abs() <= 1e-11);
    assert!(k.rho_cosh_gap.abs() <= 1e-12);
    assert!(k.c_star_cosh_gap.abs() <= 1e-13);
    assert!(k.c_star_rho_gap.abs() <= 1e-12);
    let v = verify_i_inf(&tol()).unwrap();
    assert!(v.gap.abs() <= 1e-10);
    assert!((v.substituted_value - v.closed_form).abs() <= 1e-9);
    assert!((v.beta_integral - v.beta_closed_form).abs() <= 1e-9);
}

#[test]
fn large_a_law() {
    let c = constants(&tol()).unwrap();
    let rows = large_a_table(&geometric_grid(1e2, 1e6, 9).unwrap(), &tol()).unwrap();
    assert_eq!(rows.len(), 18);
    let g = gaps(&rows, Quantity::RadiusShift);
    assert!(g.windows(2).all(|w| w[1].abs() < w[0].abs()));
    let at = |a: f64, q| rows.iter().find(|r| (r.a / a - 1.0).abs() < 1e-12 && r.quantity == q).unwrap();
    let g4 = at(1e4, Quantity::RadiusShift).gap;
    let g6 = at(1e6, Quantity::RadiusShift).gap;
    assert!(g4.abs() <= 1e-3 && g6.abs() <= 2e-5);
    assert!((50.0..=200.0).contains(&(g4 / g6)), "{}", g4 / g6);
    assert!((at(1e4, Quantity::S0Shift).value - c.s0_shift).abs() <= 1e-3);
    for r in &rows {
        assert_eq!(r.gap, r.value - r.target);
    }
}

#[test]
fn degenerate_law() {
    let rows = degenerate_table(&[1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8], &tol()).unwrap();
    for q in [Quantity::RadiusRatio, Quantity::S0Ratio] {
        let g = gaps(&rows, q);
        assert!(g.windows(2).all(|w| w[1].abs() < w[0].abs()), "{q:?}: {g:?}");
        assert!(g[2].abs() <= 0.01);
    }
}

#[test]
fn d1_fit_is_stable() {
    let wide = estimate_d1(&geometric_grid(1e3, 1e5, 6).unwrap(), &tol()).unwrap();
    assert!(wide.fit_residual <= 1e-2 * wide.d1_hat.abs());
    let high = estimate_d1(&geometric_grid(1e4, 1e6, 6).unwrap(), &tol()).unwrap();
    assert!((wide.d1_hat - high.d1_hat).abs() <= 0.05 * high.d1_hat.abs());
    assert!(matches!(estimate_d1(&[1e3, 1e4, 1e5], &tol()), Err(catenoid::Error::IllConditionedFit(_))));
}

#[test]
fn synthetic_d1_recovery() {
    let d = constants(&tol()).unwrap().d_inf;
    let pts: Vec<(f64, f64)> = geometric_grid(1e3, 1e6, 6)
        .unwrap()
        .into_iter()
        .map(|a| (a, (1.5 * a.ln() + d + 7.0 / a) - 1.5 * a.ln() - d))
        .collect();
    assert!((fit_d1(&pts).unwrap().d1_hat - 7.0).abs() <= 1e-6);
}

#[test]
fn phi_decays_like_i_inf_over_root_a() {
    for a in [1e4, 1e5, 1e6] {
        let ratio = phi_decay_ratio(a, &tol()).unwrap();
        assert!((0.99..=1.01).contains(&ratio), "a={a}: {ratio}");
    }
}
