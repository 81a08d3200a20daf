use catenoid::geometry::{fstar, fstar_with_phi, make_params, phi_on_grid};
use catenoid::numerics::Tolerance;
use catenoid::spectrum::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn problem(a: f64, k: u32) -> SLProblem {
    build_problem(&make_params(a).unwrap(), k, &tol()).unwrap()
}

#[test]
fn problem_assembly() {
    let p = problem(1.0, 1);
    assert!(p.robin_coef > 1.0);
    let p0 = problem(1.0, 0);
    let b = |s: f64| p0.params.ab(s).1;
    for s in [0.0, 0.5, -0.9] {
        assert!((p0.potential(s) - b(s) * (2.0 - p0.params.ii_sq(s))).abs() < 1e-13);
    }
    let p3 = problem(1.0, 3);
    let b0 = b(0.0);
    assert!((p3.potential(0.0) - b0 * (2.0 + 9.0 / (b0 * b0) - p3.params.ii_sq(0.0))).abs() < 1e-12);
}

#[test]
fn mode_one_has_one_negative_eigenvalue_and_a_kernel() {
    for a in [0.51, 0.6, 0.8, 1.0, 2.0, 5.0, 10.0, 100.0] {
        let p = problem(a, 1);
        let pairs = eigenvalues_below(&p, 1e-3, &tol()).unwrap();
        let negatives = pairs.iter().filter(|e| e.mu < -KERNEL_THRESHOLD).count();
        assert_eq!(negatives, 1, "a={a}");
        let mu1 = &pairs[1];
        assert!(mu1.mu.abs() < KERNEL_THRESHOLD, "a={a}: mu1={}", mu1.mu);
        assert_eq!(mu1.parity, Parity::Odd);
        assert_eq!((pairs[0].n_zeros, mu1.n_zeros), (0, 1));

        // The kernel eigenfunction is f*, normalized the same way.
        let grid: Vec<f64> = mu1.samples.iter().map(|q| q.0).collect();
        let ph = phi_on_grid(&p.params, &grid, &tol()).unwrap();
        let fs: Vec<f64> = grid.iter().zip(&ph).map(|(&s, &f)| fstar_with_phi(&p.params, s, f)).collect();
        let max = fs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let dev = mu1.samples.iter().zip(&fs).map(|(q, f)| (q.1 - f / max).abs()).fold(0.0, f64::max);
        assert!(dev <= 1e-6, "a={a}: {dev}");
    }
}

#[test]
fn even_residual_at_zero_is_bounded_away() {
    for a in [0.51, 0.6, 1.0, 2.0, 10.0] {
        let p = problem(a, 1);
        let even = shoot_parity(&p, Parity::Even, 0.0, &tol()).unwrap();
        let scale = even.f_s0.abs().max(even.fp_s0.abs());
        assert!(even.robin_match(p.robin_coef).abs() > 1e-6 * scale, "a={a}");
    }
}

#[test]
fn even_ground_state_approaches_zero_for_large_a() {
    // At a = 100 the even ground state sits at mu ~ -2.1e-6, so the even
    // residual at mu = 0 is small relative to the solution size but far above noise.
    let p = problem(100.0, 1);
    let even = shoot_parity(&p, Parity::Even, 0.0, &tol()).unwrap();
    let rel = even.robin_match(p.robin_coef).abs() / even.f_s0.abs().max(even.fp_s0.abs());
    assert!(rel > 1e-7 && rel < 1e-6, "{rel}");
    let mu0 = lowest_eigenpairs(&p, 1, &tol()).unwrap()[0].mu;
    let fd = fd_spectrum(&p, 32_000, 1).unwrap()[0];
    assert!(mu0 < -KERNEL_THRESHOLD && (mu0 - fd).abs() < 2e-7, "{mu0} vs {fd}");
}

#[test]
fn odd_kernel_matches_fstar_at_zero() {
    for a in [0.6, 1.0, 2.0, 10.0] {
        let p = problem(a, 1);
        let odd = shoot_parity(&p, Parity::Odd, 0.0, &tol()).unwrap();
        let scale = odd.f_s0.abs().max(odd.fp_s0.abs());
        assert!(odd.robin_match(p.robin_coef).abs() <= 1e-8 * scale, "a={a}");
        // Shooting starts with f'(0) = 1, so f(s0) should equal f*(s0) / f*'(0).
        let fs0 = fstar(&p.params, p.s0, &tol()).unwrap();
        let fp0 = catenoid::geometry::fstar_prime_with_phi(&p.params, 0.0, 0.0);
        assert!((odd.f_s0 - fs0 / fp0).abs() <= 1e-7 * odd.f_s0.abs(), "a={a}");
    }
}

#[test]
fn sturm_ordering() {
    for (a, k) in [(1.0, 0), (1.0, 1), (2.0, 2), (0.6, 3)] {
        let pairs = lowest_eigenpairs(&problem(a, k), 5, &tol()).unwrap();
        for (n, e) in pairs.iter().enumerate() {
            assert_eq!(e.n_zeros, n, "a={a} k={k}");
            assert!(e.robin_residual.abs() <= 1e-8, "a={a} k={k} n={n}");
        }
        assert!(pairs.windows(2).all(|w| w[1].mu > w[0].mu));
    }
}

#[test]
fn shooting_agrees_with_finite_volumes() {
    let n_grid = 4000;
    for a in [1.0, 5.0] {
        for k in 0..=3 {
            let p = problem(a, k);
            let shot: Vec<f64> = lowest_eigenpairs(&p, 3, &tol()).unwrap().iter().map(|e| e.mu).collect();
            let fd = fd_spectrum(&p, n_grid, 3).unwrap();
            let h = 2.0 * p.s0 / n_grid as f64;
            for (x, y) in shot.iter().zip(&fd) {
                assert!((x - y).abs() <= (10.0 * h * h).max(1e-5), "a={a} k={k}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn finite_volumes_converge_at_second_order() {
    let p = problem(1.0, 1);
    let err = |n| fd_spectrum(&p, n, 2).unwrap()[1].abs();
    let ratio = err(1000) / err(2000);
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    assert!(fd_spectrum(&problem(2.0, 0), 400, 1).unwrap()[0] < 0.0);
    assert!(fd_spectrum(&p, 100, 1).unwrap_err().is_domain());
}

#[test]
fn abel_identity() {
    for a in [0.7, 1.0, 3.0] {
        let p = problem(a, 1);
        for mu in [-1.0, -0.3, 0.0, 0.5] {
            let w = wronskian_diag(&p, mu, &tol()).unwrap();
            assert!(w.max_drift <= 1e-8 * w.w_value.abs(), "a={a} mu={mu}: {}", w.max_drift);
            assert!(w.w_value.abs() > 1e-6);
        }
    }
}

#[test]
fn lowest_mode_is_monotone_in_k() {
    for a in [0.6, 1.0, 10.0] {
        let mu0: Vec<f64> = (0..=3).map(|k| lowest_eigenpairs(&problem(a, k), 1, &tol()).unwrap()[0].mu).collect();
        assert!(mu0.windows(2).all(|w| w[1] >= w[0]), "a={a}: {mu0:?}");
    }
}

#[test]
fn quadratic_form_of_the_rotation_field_vanishes() {
    let params = make_params(1.0).unwrap();
    let fb = catenoid::free_boundary::radius(&params, &tol()).unwrap();
    let n_s = 2001;
    let grid = symmetric_grid(fb.s0, n_s);
    let ph = phi_on_grid(&params, &grid, &tol()).unwrap();
    let radial: Vec<(f64, f64)> = grid.iter().zip(&ph).map(|(&s, &f)| (s, fstar_with_phi(&params, s, f))).collect();
    let u_cos = SampledField::separable(&radial, 16, f64::cos);
    let u_sin = SampledField::separable(&radial, 16, f64::sin);
    let norm = l2_norm_sq(&params, &u_cos).unwrap();
    let s_cos = quadratic_form(&params, &u_cos, &tol()).unwrap();
    let s_sin = quadratic_form(&params, &u_sin, &tol()).unwrap();
    assert!(s_cos.abs() <= 1e-5 * norm, "{s_cos} vs {norm}");
    assert!((s_cos - s_sin).abs() <= 1e-10 * norm.max(1.0));
}

#[test]
fn quadratic_form_reproduces_eigenvalues() {
    let params = make_params(1.0).unwrap();
    for k in 0..=2u32 {
        let p = build_problem(&params, k, &tol()).unwrap();
        for e in lowest_eigenpairs_sampled(&p, 3, 4001, &tol()).unwrap() {
            let u = SampledField::separable(&e.samples, 16, |t| (k as f64 * t).cos());
            let ratio = quadratic_form(&params, &u, &tol()).unwrap() / l2_norm_sq(&params, &u).unwrap();
            // Relative agreement, or the kernel bound when mu itself vanishes.
            let bound = if e.mu.abs() < KERNEL_THRESHOLD { 1e-5 } else { 1e-4 * e.mu.abs() };
            assert!((ratio - e.mu).abs() <= bound, "k={k}: {ratio} vs {}", e.mu);
        }
    }
}

#[test]
fn ground_state_lowers_the_energy() {
    let params = make_params(1.0).unwrap();
    let p = build_problem(&params, 1, &tol()).unwrap();
    let e = &lowest_eigenpairs_sampled(&p, 1, 1001, &tol()).unwrap()[0];
    let u = SampledField::separable(&e.samples, 8, f64::cos);
    assert!(quadratic_form(&params, &u, &tol()).unwrap() < 0.0);
    let v = SampledField::from_fn(p.s0, 1001, 8, |_, t| t.cos());
    assert!(quadratic_form(&params, &v, &tol()).is_ok());
}

#[test]
fn index_table_on_the_evidence_grid() {
    let grid = [0.6, 1.0, 2.0, 10.0];
    let rows = mode_index_table(&grid, 3, &tol());
    assert_eq!(rows.len(), 16);
    for &a in &grid {
        let counts: Vec<usize> = rows.iter().filter(|r| r.a == a).map(|r| r.n_negative_radial).collect();
        assert_eq!(counts, vec![2, 1, 0, 0], "a={a}");
        assert_eq!(index_total(&rows, a), 4);
        assert_eq!(nullity_total(&rows, a), 2);
    }
    assert!(rows.iter().all(|r| r.failure.is_none()));
}

#[test]
fn eigenvalues_below_cap() {
    let p = problem(1.0, 2);
    assert!(eigenvalues_below(&p, 1.0, &tol()).unwrap().is_empty());
    let pairs = eigenvalues_below(&p, 2.0, &tol()).unwrap();
    assert_eq!(pairs.len(), 2);
    assert!(pairs.iter().all(|e| e.mu < 2.0));
}
