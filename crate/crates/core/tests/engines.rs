use rayon::prelude::*;

use qboson::focksim::{
    clements_decompose, engine_equivalence, evolve_unitary, haar_unitary, mesh_reconstruct, outcome_distribution,
    substitution_oracle, tv_distance,
};
use qboson::permanent::{distribution_permanent, unitarity_deviation};
use qboson::qalgebra::{CharacteristicF, Species};
use qboson::sector::Occupation;

fn occ(v: &[u32]) -> Occupation {
    Occupation::new(v.to_vec())
}

fn f(species: Species, n: u32) -> CharacteristicF {
    CharacteristicF::for_photons(species, n).unwrap()
}

#[test]
fn three_engines_agree_over_twenty_seeds() {
    let seeds: Vec<u64> = (0..20).collect();
    let report = engine_equivalence(&seeds, 4, 3).unwrap();
    assert_eq!(report.cases.len(), 20 * 3 * 3);
    assert!(report.pass, "max tv {:e}", report.max_tv);
}

#[test]
fn haar_three_mode_oracle_example() {
    let u = haar_unitary(3, 42).unwrap();
    let l = occ(&[1, 1, 0]);
    let std = f(Species::Standard, 2);
    let a = substitution_oracle(&u, &l, &std).unwrap().probabilities().unwrap();
    let b = outcome_distribution(&u, &l, &std).unwrap();
    assert!(tv_distance(&a, &b).unwrap() < 1e-8);
}

#[test]
fn reconstruction_of_haar_meshes() {
    for m in 2..=10 {
        for seed in 100..110 {
            let u = haar_unitary(m, seed).unwrap();
            let back = mesh_reconstruct(&clements_decompose(&u).unwrap()).unwrap();
            let err = (back.matrix() - u.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "m={m} seed={seed} err={err:e}");
        }
    }
}

#[test]
fn deformation_continuity_is_monotone() {
    let qs = [0.5, 0.8, 0.95, 0.99];
    for seed in 0..5 {
        let u = haar_unitary(3, seed).unwrap();
        let l = occ(&[1, 1, 1]);
        let standard = outcome_distribution(&u, &l, &f(Species::Standard, 3)).unwrap();
        let tvs: Vec<f64> = qs
            .iter()
            .map(|&q| {
                let d = outcome_distribution(&u, &l, &f(Species::q_boson(q).unwrap(), 3)).unwrap();
                tv_distance(&d, &standard).unwrap()
            })
            .collect();
        assert!(tvs.windows(2).all(|w| w[1] < w[0]), "seed {seed}: {tvs:?}");
    }
}

#[test]
fn single_photon_universality() {
    // f(1) = 1 for these species, so one quantum hops exactly as in the
    // mode unitary.
    let unit_f1 = [
        Species::Standard,
        Species::q_boson(0.8).unwrap(),
        Species::q_boson(1.1).unwrap(),
        Species::spin(0.5).unwrap(),
    ];
    for seed in 0..5 {
        let u = haar_unitary(4, seed).unwrap();
        let l = Occupation::single(4, 0);
        let reference = distribution_permanent(&u, &l).unwrap();
        for j in 0..4 {
            let p = reference.prob(&Occupation::single(4, j));
            assert!((p - u.matrix()[(j, 0)].norm_sqr()).abs() < 1e-14);
        }
        for sp in unit_f1 {
            let d = outcome_distribution(&u, &l, &f(sp, 1)).unwrap();
            assert!(tv_distance(&d, &reference).unwrap() < 1e-12, "{sp}");
        }
        for sp in unit_f1.into_iter().chain([Species::spin(1.0).unwrap()]) {
            let d = substitution_oracle(&u, &l, &f(sp, 1)).unwrap().probabilities().unwrap();
            assert!(tv_distance(&d, &reference).unwrap() < 1e-12, "{sp}");
        }
    }
}

#[test]
fn spin_one_mesh_rescales_single_photon_hops() {
    // f(1) = √(2S) = √2: the mesh couples one quantum with strength 2θ.
    let u = haar_unitary(3, 8).unwrap();
    let l = Occupation::single(3, 1);
    let d = outcome_distribution(&u, &l, &f(Species::spin(1.0).unwrap(), 1)).unwrap();
    let reference = distribution_permanent(&u, &l).unwrap();
    assert!(tv_distance(&d, &reference).unwrap() > 1e-3);
    assert!((d.total() - 1.0).abs() < 1e-12);
}

#[test]
fn deformed_norms_and_support() {
    let species = [
        Species::Standard,
        Species::q_boson(0.8).unwrap(),
        Species::q_boson(0.9).unwrap(),
        Species::q_boson(1.1).unwrap(),
        Species::spin(0.5).unwrap(),
        Species::spin(1.0).unwrap(),
    ];
    for seed in 0..10 {
        let u = haar_unitary(4, seed).unwrap();
        for sp in species {
            let l = occ(&[1, 0, 1, 1]);
            let fs = f(sp, 3);
            let out = evolve_unitary(&u, &l, &fs).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-10);
            let d = out.probabilities().unwrap();
            assert!((d.total() - 1.0).abs() < 1e-8);
            let cap = sp.max_occupation().unwrap_or(3);
            assert!(d.basis().states().iter().all(|k| k.total() == 3 && k.max() <= cap));
            let oracle = substitution_oracle(&u, &l, &fs).unwrap();
            assert!((oracle.norm() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn haar_second_moment() {
    let m = 4;
    let samples: Vec<f64> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| haar_unitary(m, seed).unwrap().matrix()[(0, 0)].norm_sqr())
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    assert!((mean - 1.0 / m as f64).abs() < 3.0 * se, "mean {mean} se {se}");
    let u = haar_unitary(m, 0).unwrap();
    assert!(unitarity_deviation(u.matrix()) < 1e-12);
}
