mod common;

use std::f64::consts::PI;

use common::{c, naive_trace, pure_chain, spectral_sum};
use mixphase::linalg::{hermitian_eig, ordered_exp, psd_power, Exponent};
use mixphase::phases::{gamma_mixed, gamma_pure, principal_arg};
use mixphase::random::{random_density, random_density_with_spectrum, random_phase, random_spectrum, random_unitary};
use mixphase::states::{generate_family, interference_profile, make_density};
use mixphase::transport::project_parallel;
use mixphase::{ComplexMatrix, DensityOperator, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = random_unitary(n, rng);
    let b = random_unitary(n, rng);
    let m = &a + &b;
    (&m + &m.adjoint()).scale(c(0.5, 0.0))
}

fn densities(n: usize, l: usize, rng: &mut ChaCha8Rng) -> Vec<DensityOperator> {
    (0..l).map(|_| random_density(n, rng)).collect()
}

/// `(n, l)` with `1 <= l <= n <= 6`.
fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), 1..=n))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigendecomposition_reconstructs(seed: u64, n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian(n, &mut rng);
        let eig = hermitian_eig(&m).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&m) < 1e-12);
        prop_assert!(eig.eigenvectors().unitarity_deviation() < 1e-12);
        prop_assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn root_powers_back(seed: u64, (n, l) in dims()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(n, &mut rng);
        let root = psd_power(rho.matrix(), Exponent::root(l)).unwrap();
        prop_assert!(root.pow(l as u32).max_abs_diff(rho.matrix()) < 1e-12);
        prop_assert!(root.hermitian_deviation() < 1e-13);
    }

    #[test]
    fn ordered_exponential_is_unitary(seed: u64, n in 1usize..=6, steps in 1usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let b = random_hermitian(n, &mut rng);
        let u = ordered_exp(|s| &a + &b.scale(c(s.sin(), 0.0)), 1.5, steps).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn parallel_projection_is_traceless_and_hollow(seed: u64, n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_hermitian(n, &mut rng);
        let basis = random_unitary(n, &mut rng);
        let p = project_parallel(&j, &basis).unwrap();
        prop_assert!(p.trace().norm() <= 1e-12 * j.max_abs().max(1.0));
        prop_assert!(p.in_basis(&basis).diagonal().iter().all(|z| z.norm() < 1e-12));
        prop_assert!(p.hermitian_deviation() < 1e-13);
    }

    #[test]
    fn rephased_eigenvectors_leave_the_trace_unchanged(seed: u64, (n, l) in dims()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng);
        let rhos = densities(n, l, &mut rng);
        let refs: Vec<&DensityOperator> = rhos.iter().collect();
        let base = gamma_mixed(&u, &refs, 1e-9).unwrap().raw_trace;
        let rephased: Vec<ComplexMatrix> = rhos
            .iter()
            .map(|rho| {
                let v = rho.spectrum().eigenvectors();
                let w: Vec<f64> = rho.eigenvalues().iter().map(|x| x.max(0.0).powf(1.0 / l as f64)).collect();
                let cols: Vec<Vec<C64>> = (0..n)
                    .map(|k| {
                        let ph = random_phase(&mut rng);
                        v.column(k).into_iter().map(|z| z * ph).collect()
                    })
                    .collect();
                spectral_sum(&ComplexMatrix::from_columns(&cols).unwrap(), &w)
            })
            .collect();
        prop_assert!((naive_trace(&u, &rephased) - base).norm() < 1e-10);
    }

    #[test]
    fn cyclic_relabelling_is_invisible(seed: u64, (n, l) in dims(), shift in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng);
        let rhos = densities(n, l, &mut rng);
        let mut refs: Vec<&DensityOperator> = rhos.iter().collect();
        let base = gamma_mixed(&u, &refs, 1e-9).unwrap();
        refs.rotate_left(shift % l);
        let other = gamma_mixed(&u, &refs, 1e-9).unwrap();
        prop_assert!((base.raw_trace - other.raw_trace).norm() < 1e-12);
        prop_assert_eq!(base.is_determinate(), other.is_determinate());
    }

    #[test]
    fn global_phase_covariance(seed: u64, (n, l) in dims(), phi in -PI..PI) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng);
        let rhos = densities(n, l, &mut rng);
        let refs: Vec<&DensityOperator> = rhos.iter().collect();
        let base = gamma_mixed(&u, &refs, 1e-9).unwrap().raw_trace;
        let moved = gamma_mixed(&u.scale(C64::from_polar(1.0, phi)), &refs, 1e-9).unwrap().raw_trace;
        prop_assert!((moved - base * C64::from_polar(1.0, l as f64 * phi)).norm() < 1e-12);
    }

    #[test]
    fn pure_states_follow_the_vector_chain(seed: u64, (n, l) in dims()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(n, &mut rng);
        let b = random_unitary(n, &mut rng);
        let states: Vec<Vec<C64>> = (0..l).map(|k| b.column(k)).collect();
        let projectors: Vec<ComplexMatrix> = states.iter().map(|v| ComplexMatrix::outer(v, v).unwrap()).collect();
        let rhos: Vec<DensityOperator> = projectors.iter().map(|p| make_density(p.clone()).unwrap()).collect();
        let refs: Vec<&DensityOperator> = rhos.iter().collect();
        let chain = pure_chain(&u, &states);
        prop_assert!((gamma_mixed(&u, &refs, 1e-9).unwrap().raw_trace - chain).norm() < 1e-10);
        prop_assert!((gamma_pure(&u, &projectors, 1e-9).unwrap().raw_trace - chain).norm() < 1e-12);
    }

    #[test]
    fn family_members_are_orthogonal_with_flat_fringes(seed: u64, n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spectrum = random_spectrum(n, &mut rng);
        let fam = generate_family(&random_density_with_spectrum(&spectrum, &mut rng)).unwrap();
        prop_assert!(fam.is_pairwise_orthogonal().unwrap());
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                let u = fam.connector(a, b);
                prop_assert!(fam.member(a).matrix().conjugated_by(&u).max_abs_diff(fam.member(b).matrix()) < 1e-12);
                for k in 0..8 {
                    let level = interference_profile(fam.member(a), &u, 2.0 * PI * k as f64 / 8.0).unwrap();
                    prop_assert!((level - 2.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn arguments_stay_on_the_principal_branch(re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let a = principal_arg(c(re, im));
        prop_assert!(a > -PI && a <= PI);
    }
}
