//! Properties of the steady family checked against independent oracles:
//! closed-form antiderivatives where the exponent is an integer, and a
//! tanh-sinh rule otherwise.

use proptest::prelude::*;
use radhj::params::stationary_residual_radial;
use radhj::{chi, derive_constants, theta_from_max, ProblemParams, SteadyState};

fn admissible() -> impl Strategy<Value = ProblemParams> {
    (2.0f64..5.0, 0.05f64..0.95, 2u32..=5)
        .prop_map(|(p, frac, n)| ProblemParams::new(p, frac * (p - 1.0), n).unwrap())
}

/// Double-exponential quadrature on `[a, b]`; independent of the adaptive
/// Gauss–Kronrod rule used by the library.
fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    let mut k = -400i32;
    while k <= 400 {
        let t = f64::from(k) * h;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // distance to the nearer endpoint, computed without cancellation
        let gap = half / ((u.abs()).exp() * u.cosh());
        let x = if u < 0.0 { a + gap } else { b - gap };
        if x > a && x < b && w > 0.0 {
            sum += w * f(x);
        }
        k += 1;
    }
    sum * half * h
}

fn oracle_max(params: &ProblemParams, theta: f64) -> f64 {
    let c = derive_constants(params);
    let k = 1.0 / (params.p() - 1.0 - params.q());
    let f = |r: f64| (r - theta.powf(c.beta) * r.powf(1.0 - c.beta)).max(0.0).powf(k);
    c.c0 * tanh_sinh(f, theta, 1.0)
}

/// Closed form for (p, q, N) = (2, 1/2, 2): the integrand is
/// `(ρ - ϑ^(3/2) ρ^(-1/2))²`, a sum of powers.
fn semilinear_closed_form(theta: f64, r: f64) -> f64 {
    let c0 = 1.0 / 9.0;
    let lo = r.max(theta);
    let t32 = theta.powf(1.5);
    let prim = |x: f64| x.powi(3) / 3.0 - t32 * 4.0 / 3.0 * x.powf(1.5) + theta.powi(3) * x.ln();
    if theta == 0.0 {
        return c0 * (1.0 - lo.powi(3)) / 3.0;
    }
    c0 * (prim(1.0) - prim(lo))
}

/// Closed form for (3, 1, 2): integrand `ρ - ϑ^(3/2) ρ^(-1/2)`.
fn cubic_closed_form(theta: f64, r: f64) -> f64 {
    let c0 = 1.0 / 3.0;
    let lo = r.max(theta);
    let t32 = theta.powf(1.5);
    let prim = |x: f64| x * x / 2.0 - 2.0 * t32 * x.sqrt();
    c0 * (prim(1.0) - prim(lo))
}

#[test]
fn tanh_sinh_oracle_reproduces_polynomial_integral() {
    let v = tanh_sinh(|x| x * x, 0.0, 1.0);
    assert!((v - 1.0 / 3.0).abs() < 1e-14, "{v}");
}

#[test]
fn max_value_matches_tanh_sinh_at_half() {
    for (p, q, n) in [(2.0, 0.5, 2), (3.0, 1.0, 2), (2.5, 1.2, 4), (4.0, 0.5, 3)] {
        let pp = ProblemParams::new(p, q, n).unwrap();
        let got = SteadyState::new(pp, 0.5).unwrap().max_value().unwrap();
        let want = oracle_max(&pp, 0.5);
        assert!((got - want).abs() <= 1e-11 * want.max(1e-3), "{p} {q} {n}: {got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_is_odd_and_increasing(pp in admissible(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        prop_assert_eq!(chi(-a, &pp), -chi(a, &pp));
        if a < b {
            prop_assert!(chi(a, &pp) < chi(b, &pp));
        }
    }

    #[test]
    fn constants_are_consistent(pp in admissible()) {
        let c = derive_constants(&pp);
        let gap = pp.p() - 1.0 - pp.q();
        prop_assert!(c.alpha > 1.0 && c.beta >= 1.0 && c.c0 > 0.0);
        prop_assert!((c.alpha * gap - (pp.p() - pp.q())).abs() < 1e-12);
        // w_0 = (c0/α)(1 - r^α) solves the stationary equation: c0^(p-1-q) β = gap/(p-1)
        prop_assert!((c.c0.powf(gap) * c.beta * (pp.p() - 1.0) - gap).abs() < 1e-10);
    }

    #[test]
    fn residual_difference_is_minus_gradient_power(
        pp in admissible(), r in 0.01f64..0.99, mu in -3.0f64..3.0, zeta in -3.0f64..3.0,
    ) {
        let f = stationary_residual_radial(r, mu, zeta, &pp).unwrap();
        let f0 = radhj::params::p_laplace_residual_radial(r, mu, zeta, &pp).unwrap();
        let want = -mu.abs().powf(pp.q());
        prop_assert!((f - f0 - want).abs() <= 1e-12 * (1.0 + f.abs() + f0.abs()));
    }

    #[test]
    fn semilinear_matches_closed_form(theta in 0.0f64..1.0, r in 0.0f64..1.0) {
        let pp = ProblemParams::new(2.0, 0.5, 2).unwrap();
        let got = SteadyState::new(pp, theta).unwrap().eval(r).unwrap();
        prop_assert!((got - semilinear_closed_form(theta, r)).abs() <= 1e-12);
    }

    #[test]
    fn cubic_matches_closed_form(theta in 0.0f64..1.0, r in 0.0f64..1.0) {
        let pp = ProblemParams::new(3.0, 1.0, 2).unwrap();
        let got = SteadyState::new(pp, theta).unwrap().eval(r).unwrap();
        prop_assert!((got - cubic_closed_form(theta, r)).abs() <= 1e-12);
    }

    #[test]
    fn sample_agrees_with_pointwise_eval(pp in admissible(), theta in 0.0f64..0.9) {
        let w = SteadyState::new(pp, theta).unwrap();
        let radii: Vec<f64> = (0..=16).map(|i| f64::from(i) / 16.0).collect();
        let s = w.sample(&radii).unwrap();
        for (r, v) in radii.iter().zip(&s) {
            prop_assert!((w.eval(*r).unwrap() - v).abs() <= 2e-12);
        }
    }

    #[test]
    fn first_integral_is_constant(pp in admissible(), theta in 0.0f64..0.9, frac in 0.0f64..1.0) {
        let r = theta + 1e-3 + frac * (1.0 - 2e-3 - theta);
        prop_assume!(r < 1.0 - 1e-3);
        let w = SteadyState::new(pp, theta).unwrap();
        prop_assert!(w.first_integral_residual(r).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn steady_states_are_stationary(pp in admissible(), theta in 0.0f64..0.9, frac in 0.0f64..1.0) {
        let r = theta + 1e-3 + frac * (1.0 - 2e-3 - theta);
        prop_assume!(r < 1.0 - 1e-3);
        let w = SteadyState::new(pp, theta).unwrap();
        let d1 = w.eval_derivative(r).unwrap();
        let d2 = w.eval_second_derivative(r).unwrap();
        let f = stationary_residual_radial(r, d1, d2, &pp).unwrap();
        let scale = d1.abs().powf(pp.q()).max(1e-300);
        prop_assert!(f.abs() <= 1e-6 * scale.max(1.0), "f = {f}, scale {scale}");
    }

    #[test]
    fn steady_states_are_flat_then_decreasing(pp in admissible(), theta in 0.05f64..0.9) {
        let w = SteadyState::new(pp, theta).unwrap();
        let top = w.max_value().unwrap();
        prop_assert_eq!(w.eval(theta * 0.5).unwrap(), top);
        prop_assert_eq!(w.eval_derivative(theta * 0.5).unwrap(), 0.0);
        prop_assert!(w.eval_derivative(0.5 * (theta + 1.0)).unwrap() < 0.0);
        prop_assert_eq!(w.eval(1.0).unwrap(), 0.0);
    }

    #[test]
    fn max_map_is_strictly_decreasing(pp in admissible(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!((a - b).abs() > 1e-3);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let m_lo = SteadyState::new(pp, lo).unwrap().max_value().unwrap();
        let m_hi = SteadyState::new(pp, hi).unwrap().max_value().unwrap();
        prop_assert!(m_lo > m_hi);
        prop_assert!(m_lo <= derive_constants(&pp).max_steady_value() * (1.0 + 1e-12));
    }

    #[test]
    fn theta_round_trip(pp in admissible(), theta in 0.0f64..0.98) {
        let m = SteadyState::new(pp, theta).unwrap().max_value().unwrap();
        let back = theta_from_max(m, &pp, 1e-10).unwrap();
        prop_assert!((back - theta).abs() <= 1e-8, "{theta} -> {m} -> {back}");
    }
}
