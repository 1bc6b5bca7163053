use lowrankdm::random::{random_density, random_hermitian, random_low_rank_state, random_unitary};
use lowrankdm::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn specs(n: usize) -> Vec<NormSpec> {
    let mut v: Vec<NormSpec> = [1.0, 1.5, 2.0, 3.0, 4.5, 7.0, f64::INFINITY]
        .iter()
        .map(|&p| NormSpec::Schatten(p))
        .collect();
    v.extend((1..=n).map(NormSpec::KyFan));
    v
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_unitarily_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let h = random_hermitian(n, &mut r);
        let u = random_unitary(n, &mut r);
        let g = h.conjugate_by(&u).unwrap();
        for spec in specs(n) {
            let a = norm_of_matrix(&h, spec).unwrap();
            let b = norm_of_matrix(&g, spec).unwrap();
            prop_assert!(close(a, b, 1e-10), "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn schatten_norm_decreases_in_p(seed in any::<u64>(), n in 1usize..7, p in 1.0f64..8.0, dp in 0.0f64..8.0) {
        let h = random_hermitian(n, &mut rng(seed));
        let a = norm_of_matrix(&h, NormSpec::Schatten(p)).unwrap();
        let b = norm_of_matrix(&h, NormSpec::Schatten(p + dp)).unwrap();
        let c = norm_of_matrix(&h, NormSpec::operator()).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(c <= b * (1.0 + 1e-12));
    }

    #[test]
    fn ky_fan_endpoints_and_monotonicity(seed in any::<u64>(), n in 1usize..7) {
        let h = random_hermitian(n, &mut rng(seed));
        let tr = norm_of_matrix(&h, NormSpec::trace()).unwrap();
        let op = norm_of_matrix(&h, NormSpec::operator()).unwrap();
        prop_assert!(close(norm_of_matrix(&h, NormSpec::KyFan(n)).unwrap(), tr, 1e-12));
        prop_assert!(close(norm_of_matrix(&h, NormSpec::KyFan(1)).unwrap(), op, 1e-12));
        let mut prev = 0.0;
        for r in 1..=n {
            let v = norm_of_matrix(&h, NormSpec::KyFan(r)).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let a = random_hermitian(n, &mut r);
        let b = random_hermitian(n, &mut r);
        let sum = a.sub(&b.neg()).unwrap();
        for spec in specs(n) {
            let lhs = norm_of_matrix(&sum, spec).unwrap();
            let rhs = norm_of_matrix(&a, spec).unwrap() + norm_of_matrix(&b, spec).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{spec}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn closest_state_is_valid_and_norm_independent(seed in any::<u64>(), n in 2usize..7, kk in 0usize..6) {
        let k = 1 + kk % (n - 1);
        let x = random_density(n, &mut rng(seed));
        let base = closest_rank_k(&x, k, NormSpec::trace()).unwrap();
        let y = &base.closest;
        prop_assert!(y.rank(1e-12) <= k);
        prop_assert!(close(y.hermitian().trace(), 1.0, 1e-12));
        prop_assert!(y.eigenvalues().iter().all(|&e| e >= 0.0));
        for spec in specs(n) {
            let res = closest_rank_k(&x, k, spec).unwrap();
            let diff = res.closest.hermitian().sub(y.hermitian()).unwrap();
            prop_assert!(norm_of_matrix(&diff, NormSpec::operator()).unwrap() < 1e-12);
            // distance equals the norm of X − Y computed from matrices
            let direct = norm_of_matrix(&x.hermitian().sub(res.closest.hermitian()).unwrap(), spec).unwrap();
            prop_assert!(close(res.distance, direct, 1e-9), "{spec}: {} vs {direct}", res.distance);
        }
    }

    #[test]
    fn no_low_rank_state_is_closer(seed in any::<u64>(), n in 2usize..6, kk in 0usize..5) {
        let k = 1 + kk % (n - 1);
        let mut r = rng(seed);
        let x = random_density(n, &mut r);
        let candidates: Vec<DensityMatrix> = (0..20).map(|_| random_low_rank_state(n, k, &mut r)).collect();
        for spec in specs(n) {
            let d = distance_to_low_rank(x.eigenvalues(), k, spec).unwrap();
            for z in &candidates {
                let dz = norm_of_matrix(&x.hermitian().sub(z.hermitian()).unwrap(), spec).unwrap();
                prop_assert!(d <= dz * (1.0 + 1e-10), "{spec}: {d} > {dz}");
            }
        }
    }

    #[test]
    fn dominance_implies_every_norm_inequality(seed in any::<u64>(), n in 1usize..6, scale in 0.05f64..1.5) {
        let mut r = rng(seed);
        let y = random_hermitian(n, &mut r);
        let u = random_unitary(n, &mut r);
        // a scaled, rotated copy of Y is dominated exactly when the scale is at most 1
        let rotated = y.conjugate_by(&u).unwrap();
        let x = HermitianMatrix::new(rotated.matrix() * C64::new(scale, 0.0), 1e-12).unwrap();
        let d = usi_dominates(&x, &y, 1e-12).unwrap();
        prop_assert_eq!(d.dominated, scale <= 1.0 + 1e-12);
        if d.dominated {
            for spec in specs(n) {
                let nx = norm_of_matrix(&x, spec).unwrap();
                let ny = norm_of_matrix(&y, spec).unwrap();
                prop_assert!(nx <= ny * (1.0 + 1e-9) + 1e-12, "{spec}: {nx} > {ny}");
            }
        }
    }
}

#[test]
fn majorized_spectra_are_dominated() {
    let mut r = rng(5);
    let mut hits = 0;
    for _ in 0..400 {
        let x = random_density(4, &mut r);
        let y = random_density(4, &mut r);
        if majorizes(x.eigenvalues(), y.eigenvalues(), 1e-12).unwrap() {
            hits += 1;
            let d = usi_dominates(x.hermitian(), y.hermitian(), 1e-12).unwrap();
            assert!(d.dominated);
            assert!((d.witness.unwrap() - 1.0).abs() < 1e-9);
        }
    }
    assert!(hits > 10, "only {hits} majorized pairs drawn");
}
