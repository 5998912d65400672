use kappa_core::jacobi::{build_s_finite, sturm_negative_count};
use kappa_core::model::PointConfig;
use kappa_core::oracle::{count_bound_states, ScanSettings};
use kappa_core::recurrence::{count_from_gamma, gamma_finite, gamma_tail, is_nonnegative, phi_signature};
use kappa_core::delta_prime::count_negative_strengths;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(777_000);
    let mut failures = 0;
    for case in 0..5000 {
        let n = rng.random_range(2..=8);
        let mut points = vec![rng.random_range(-1.0..1.0)];
        for _ in 1..n { let p = *points.last().unwrap(); points.push(p + rng.random_range(0.2..3.0)); }
        let strengths: Vec<f64> = (0..n).map(|_| loop {
            let a: f64 = rng.random_range(-10.0..10.0);
            if a.abs() >= 0.05 { break a; }
        }).collect();
        let cfg = PointConfig::delta(points, strengths).unwrap();
        let tol = cfg.tol(1e-12);
        let rec = count_from_gamma(&gamma_finite(&cfg, &tol), &tol).total();
        let stu = sturm_negative_count(&build_s_finite(&cfg), &0.0, &tol);
        let phi = phi_signature(&cfg, &tol).unwrap().sign_changes;
        let tail = count_from_gamma(&gamma_tail(&cfg, cfg.len() + 50, &tol).unwrap(), &tol).total();
        let nn = is_nonnegative(&cfg, cfg.len() + 50, &tol);
        let ora = match count_bound_states(&cfg, &ScanSettings::auto_for(&cfg)) {
            Ok(s) => s.count,
            Err(e) => { println!("delta case {case}: oracle error {e} for {cfg:?}"); failures += 1; continue; }
        };
        if !(rec == stu && stu == phi && phi == ora && ora == tail) || nn != (rec == 0) {
            println!("delta case {case}: rec={rec} stu={stu} phi={phi} ora={ora} tail={tail} nn={nn} {cfg:?}");
            failures += 1;
        }
    }
    for case in 0..5000 {
        let n = rng.random_range(1..=6);
        let mut points = vec![rng.random_range(-1.0..1.0)];
        for _ in 1..n { let p = *points.last().unwrap(); points.push(p + rng.random_range(0.2..3.0)); }
        let strengths: Vec<f64> = (0..n).map(|_| loop {
            let b: f64 = rng.random_range(-5.0..5.0);
            if b.abs() >= 0.1 { break b; }
        }).collect();
        let cfg = PointConfig::delta_prime(points, strengths).unwrap();
        let tol = cfg.tol(1e-12);
        let cnt = count_negative_strengths(&cfg, &tol).total();
        let win = kappa_core::delta_prime::windowed_inertia_count(&cfg, &tol).unwrap().total();
        let ora = match count_bound_states(&cfg, &ScanSettings::auto_for(&cfg)) {
            Ok(s) => s.count,
            Err(e) => { println!("dp case {case}: oracle error {e} for {cfg:?}"); failures += 1; continue; }
        };
        if !(cnt == ora && cnt == win) {
            println!("dp case {case}: strengths={cnt} window={win} oracle={ora} {cfg:?}");
            failures += 1;
        }
    }
    println!("stress complete: {failures} failures over 10000 cases");
}
