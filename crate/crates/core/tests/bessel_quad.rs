use cyclohc::bessel::quad::*;
use cyclohc::bessel::series::eval_n1;
use cyclohc::bessel::series_c_for_integral_c;
use cyclohc::scalars::Rational;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn series_value(ell: u32, c_int: &[i64], lambda: f64, x: f64) -> Complex64 {
    let big_c: Vec<Rational> = c_int.iter().map(|v| Rational::from_integer((*v).into())).collect();
    let c_ser = series_c_for_integral_c(&big_c);
    eval_n1(ell, &c_ser, c64(ell as f64 * lambda), c64(x), 1e-15).unwrap().0
}

/// Independent oracle: sum_{m} (z/2)^{2m + nu} / (m! (m+nu)!).
fn bessel_i(nu: u32, z: f64) -> f64 {
    let mut term = (z / 2.0).powi(nu as i32) / (1..=nu).map(|v| v as f64).product::<f64>();
    let mut acc = 0.0;
    for m in 0..200 {
        acc += term;
        term *= (z / 2.0).powi(2) / ((m + 1) as f64 * (m + 1 + nu) as f64);
    }
    acc
}

#[test]
fn torus_examples() {
    let v = torus_bessel_n1(&[0], c64(1.0), 1.0, 16).unwrap();
    assert!((v.value.re - std::f64::consts::E).abs() < 1e-14);
    let v = torus_bessel_n1(&[0, 0], c64(1.0), 1.0, 64).unwrap();
    assert!((v.value.re - 2.279_585_302_336_067).abs() < 1e-13, "{}", v.value);
    assert!((v.value.re - bessel_i(0, 2.0)).abs() < 1e-13);
    let v = torus_bessel_n1(&[-1, 1], c64(1.0), 1.0, 64).unwrap();
    assert!((v.value.re - 1.590_636_854_637_329).abs() < 1e-12, "{}", v.value);
    assert!((v.value.re - bessel_i(1, 2.0)).abs() < 1e-12);
    assert!(v.value.im.abs() < 1e-14);
}

#[test]
fn torus_refuses_zero_argument_with_positive_t() {
    assert!(torus_bessel_n1(&[-1, 1], c64(1.0), 0.0, 16).is_err());
    assert!(torus_bessel_n1(&[0, 0], c64(1.0), 0.0, 16).is_ok());
}

#[test]
fn torus_matches_series_rank_two() {
    for c in [[0i64, 0], [-1, 1]] {
        for x in [0.5, 1.0, 1.5, 2.0] {
            let q = torus_bessel_n1(&c, c64(1.0), x, 64).unwrap().value;
            let s = series_value(2, &c, 1.0, x);
            assert!((q - s).norm() < 1e-12, "C = {:?}, x = {}: {} vs {}", c, x, q, s);
        }
    }
}

#[test]
fn torus_rank_three_needs_leading_term_normalization() {
    let c = [-1i64, 0, 1];
    assert_eq!(leading_exponents(&c), vec![1, 1, 0]);
    for x in [0.5, 1.0, 1.5, 2.0] {
        let s = series_value(3, &c, 1.0, x);
        let lead = torus_bessel_n1_with(&c, c64(1.0), x, 64, Normalization::LeadingTerm)
            .unwrap()
            .value;
        assert!((lead - s).norm() < 1e-12, "x = {}: {} vs {}", x, lead, s);
        let fact = torus_bessel_n1(&c, c64(1.0), x, 64).unwrap().value;
        assert!((fact / s - 2.0).norm() < 1e-12);
    }
}

#[test]
fn remark_bessel_j_under_imaginary_lambda() {
    // lambda -> i lambda turns the modified series into J_nu
    for x in [0.3, 0.8, 1.7] {
        let s = series_value(2, &[-1, 1], 1.0, x);
        assert!((s.re - bessel_i(1, 2.0 * x) * 1.0 / x).abs() < 1e-12);
        let big_c = [Rational::from_integer(1.into()), Rational::from_integer((-1).into())];
        let si = eval_n1(2, &big_c, Complex64::new(0.0, 2.0), c64(x), 1e-15).unwrap().0;
        // J_1(2x) = (x) sum (-1)^m x^{2m} / (m!(m+1)!)
        let mut j1 = 0.0;
        let mut term = x;
        for m in 0..60 {
            j1 += term;
            term *= -x * x / ((m + 1) as f64 * (m + 2) as f64);
        }
        assert!(
            (si.re * x - j1).abs() < 1e-12 && si.im.abs() < 1e-14,
            "{} vs {}",
            si,
            j1
        );
    }
}

#[test]
fn vanishing_orders() {
    assert_eq!(vanishing_order(&[0], c64(1.0), 16).unwrap(), 0);
    assert_eq!(vanishing_order(&[-1, 1], c64(1.0), 16).unwrap(), 1);
    assert_eq!(vanishing_order(&[-1, 0, 1], c64(1.0), 16).unwrap(), 2);
    assert_eq!(t_of(&[-1, 0, 1]), 2);
}

#[test]
fn torus_spectral_convergence() {
    let exact = bessel_i(0, 2.0);
    let mut prev = f64::INFINITY;
    for n in 16..=64 {
        let err = (torus_bessel_n1(&[0, 0], c64(1.0), 1.0, n).unwrap().value.re - exact).abs();
        if n >= 48 {
            assert!(err < 1e-10);
        }
        // monotone down to the roundoff floor
        assert!(err <= prev.max(ROUNDOFF_FLOOR), "N = {}: {} > {}", n, err, prev);
        prev = err;
    }
}

const ROUNDOFF_FLOOR: f64 = 1e-14;

#[test]
fn haar_is_unitary_and_reproducible() {
    for n in 1..=4 {
        let g = haar_unitary(n, 7, 3);
        let e = (g.adjoint() * &g - DMatrix::<Complex64>::identity(n, n)).norm();
        assert!(e < 1e-12);
        assert_eq!(g, haar_unitary(n, 7, 3));
    }
    let g = haar_unitary(1, 1, 0);
    assert!((g[(0, 0)].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn haar_moment() {
    for n in [2usize, 3] {
        let draws = 100_000u64;
        let mut s = HaarSampler::new(n, 11, 0);
        let v: Vec<f64> = (0..draws).map(|_| s.sample()[(0, 0)].norm_sqr()).collect();
        let mean = v.iter().sum::<f64>() / draws as f64;
        let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se = (var / draws as f64).sqrt();
        assert!(
            (mean - 1.0 / n as f64).abs() < 3.0 * se,
            "n = {}: {} +- {}",
            n,
            mean,
            se
        );
    }
}

#[test]
fn m_k_examples_and_permanent() {
    let id = DMatrix::<Complex64>::identity(3, 3);
    assert_eq!(m_k(&id, 0), c64(1.0));
    assert_eq!(m_k(&id, 1), c64(1.0));
    assert_eq!(m_k(&id, 2), c64(1.0));
    let g = DMatrix::from_row_slice(2, 2, &[c64(2.0), c64(3.0), c64(5.0), c64(7.0)]);
    assert_eq!(m_k(&g, 1), c64(2.0 * 7.0 + 3.0 * 5.0));
    for n in 1..=4 {
        for draw in 0..5 {
            let g = haar_unitary(n, 5, draw);
            assert!((m_k(&g, 1) - permanent(&g)).norm() < 1e-12);
        }
    }
}

#[test]
fn m_2_brute_force() {
    // coefficient of y1^2 y2^2 in (a y1 + c y2)^2 (b y1 + d y2)^2
    let (a, b, c, d) = (1.5, -0.5, 2.0, 0.25);
    let g = DMatrix::from_row_slice(2, 2, &[c64(a), c64(b), c64(c), c64(d)]);
    let expect = a * a * d * d + 4.0 * a * c * b * d + c * c * b * b;
    assert!((m_k(&g, 2).re - expect).abs() < 1e-12);
}

#[test]
fn mc_rank_one_matches_torus() {
    let p = McProblem {
        n: 1,
        ell: 2,
        k: 0,
        c: vec![-1, 1],
        lambda: vec![1.0],
        x: vec![0.8],
    };
    let mc = mc_bessel(&p, 200_000, 3).unwrap();
    let torus = torus_integral(&[-1, 1], c64(1.0), 0.8, 64).unwrap() / 0.8;
    assert!(
        (mc.value - torus).norm() < 3.0 * mc.stderr + 1e-12,
        "{} +- {} vs {}",
        mc.value,
        mc.stderr,
        torus
    );
}

#[test]
fn mc_seed_reproducible_bytes() {
    let p = McProblem {
        n: 2,
        ell: 2,
        k: 1,
        c: vec![-1, 1],
        lambda: vec![0.5, 1.0],
        x: vec![0.4, 1.1],
    };
    let a = serde_json::to_string(&mc_bessel(&p, 10_000, 42).unwrap()).unwrap();
    let b = serde_json::to_string(&mc_bessel(&p, 10_000, 42).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&mc_bessel(&p, 10_000, 43).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn mc_stderr_scales() {
    let p = McProblem {
        n: 2,
        ell: 1,
        k: 0,
        c: vec![0],
        lambda: vec![1.0, 2.0],
        x: vec![0.3, 0.9],
    };
    let a = mc_integral(&p, 10_000, 1).unwrap().stderr;
    let b = mc_integral(&p, 100_000, 1).unwrap().stderr;
    let ratio = a / b / 10f64.sqrt();
    assert!((0.5..2.0).contains(&ratio), "{}", ratio);
}

#[test]
fn mc_integral_invariant_under_simultaneous_permutation() {
    let p = McProblem {
        n: 2,
        ell: 2,
        k: 0,
        c: vec![-1, 1],
        lambda: vec![0.5, 1.0],
        x: vec![0.4, 1.1],
    };
    let q = McProblem {
        lambda: vec![1.0, 0.5],
        x: vec![1.1, 0.4],
        ..p.clone()
    };
    let a = mc_integral(&p, 100_000, 9).unwrap();
    let b = mc_integral(&q, 100_000, 19).unwrap();
    let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!((a.value - b.value).norm() < 3.0 * se);
    // the division by delta^{k+1} flips the sign for even k
    assert!((p.delta_kc() + q.delta_kc()).abs() < 1e-12);
}

#[test]
fn mc_refuses_singular_points() {
    let p = McProblem {
        n: 2,
        ell: 2,
        k: 0,
        c: vec![-1, 1],
        lambda: vec![0.5, 1.0],
        x: vec![0.4, -0.4],
    };
    assert!(matches!(mc_bessel(&p, 100, 0), Err(cyclohc::Error::Regularity(_))));
    let p = McProblem { x: vec![0.0, 1.0], ..p };
    assert!(matches!(mc_bessel(&p, 100, 0), Err(cyclohc::Error::Regularity(_))));
}

#[test]
fn cross_check_single_point_is_exact_ratio() {
    let q = QuadEstimate {
        value: Complex64::new(3.0, 1.0),
        stderr: 0.1,
        samples_or_nodes: 10,
        seed: None,
    };
    let r = cross_check(&[c64(2.0)], &[q], 0.0).unwrap();
    assert!((r.constant - Complex64::new(1.5, 0.5)).norm() < 1e-15);
    assert!(r.residuals[0] < 1e-15 && r.pass);
}

fn shifted_multiplicity_fit(ell: usize, c_int: &[i64], divide_gamma: bool) -> CrossCheckReport {
    use cyclohc::bessel::c_for_big_c;
    use cyclohc::bessel::series::series_multivariate;
    use cyclohc::dunkl::Convention;
    use cyclohc::scalars::Field;
    let conv = Convention::calibrated();
    let big_c: Vec<Rational> = c_int.iter().map(|v| Rational::from_integer((*v).into())).collect();
    let c: Vec<Complex64> = c_for_big_c(&series_c_for_integral_c(&big_c), &conv)
        .unwrap()
        .iter()
        .map(|v| v.to_complex())
        .collect();
    let lambda = [0.5, 1.0];
    let lam: Vec<Complex64> = lambda.iter().map(|l| c64(ell as f64 * l)).collect();
    let e = series_multivariate(2, ell as u32, c64(-1.0), &c, &lam, 30, &conv).unwrap();
    let mut s = Vec::new();
    let mut qv = Vec::new();
    for x in [[0.4, 1.0], [0.6, 1.3], [0.2, 0.7], [0.9, 1.5]] {
        s.push(e.eval(&[c64(x[0]), c64(x[1])], 1e-12).unwrap());
        let p = McProblem {
            n: 2,
            ell,
            k: 0,
            c: c_int.to_vec(),
            lambda: lambda.to_vec(),
            x: x.to_vec(),
        };
        let mut q = mc_integral(&p, 200_000, 77).unwrap();
        if divide_gamma {
            let g = (x[0] * x[1]).powi(t_of(c_int) as i32);
            q.value /= g;
            q.stderr /= g.abs();
        }
        qv.push(q);
    }
    cross_check(&s, &qv, 0.0).unwrap()
}

#[test]
fn undivided_integral_matches_shifted_multiplicity_type_a() {
    // k = 0: the raw integral is the HCIZ integral, i.e. the series at k = -1
    let r = shifted_multiplicity_fit(1, &[0], false);
    assert!(r.pass, "{:?}", r);
}

#[test]
fn undivided_integral_matches_shifted_multiplicity_cyclic() {
    let r = shifted_multiplicity_fit(2, &[-1, 1], true);
    assert!(r.pass, "{:?}", r);
}
