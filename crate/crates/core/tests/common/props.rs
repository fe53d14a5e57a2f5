//! Property bodies shared by the proptest suite and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::*;
use jacring::algebra::echelon::{self, Echelon};
use jacring::algebra::modular::{prepass_primes, rank_mod_p};
use jacring::algebra::{EliminationOptions, ExactMatrix};
use jacring::jacobian::{KernelComparison, Verdict};
use jacring::koszul::{build_koszul, KoszulSetup};
use jacring::local::ade::{battery, homogenize, normal_form};
use jacring::local::{classify_ade, AffinePoint};

pub type Outcome = Result<(), TestCaseError>;

pub fn rank_nullity(m: ExactMatrix) -> Outcome {
    let rank = m.rank();
    let ker = m.kernel_basis();
    prop_assert_eq!(rank + ker.rows(), m.cols());
    prop_assert!(m.mul(&ker.transpose()).is_zero());
    prop_assert_eq!(m.transpose().rank(), rank);
    Ok(())
}

/// Modular ranks never exceed the exact one, and Chinese remaindering
/// agrees with fraction-free elimination on the reduced echelon form.
pub fn modular_agrees_with_exact(m: ExactMatrix) -> Outcome {
    let exact = echelon::rank(
        &m,
        EliminationOptions {
            modular_prepass: false,
        },
    );
    for &p in prepass_primes() {
        prop_assert!(rank_mod_p(&m, p).unwrap().rank <= exact);
    }
    prop_assert!(rank_mod_p(&m, 3).unwrap().rank <= exact);
    prop_assert_eq!(echelon::rank(&m, EliminationOptions::default()), exact);
    let crt = Echelon::of_rows(m.cols(), m.row_slices());
    let ff = Echelon::of_rows_fraction_free(m.cols(), m.row_slices());
    prop_assert_eq!(crt, ff);
    Ok(())
}

pub fn koszul_square_zero(coeffs: Vec<i64>, m: i64) -> Outcome {
    // a random ternary quartic plus a Fermat part
    let monos = jacring::algebra::monomial_basis(3, 4);
    let mut f = fermat(3, 4);
    for (mono, c) in monos.iter().zip(&coeffs) {
        f = f.add(&HomogeneousPoly::monomial(mono.clone(), int(*c)));
    }
    prop_assume!(f.gradient().iter().all(|g| !g.is_zero()));
    let setup = KoszulSetup::jacobian(&f, m).unwrap();
    prop_assert!(build_koszul(&setup).is_complex());
    Ok(())
}

pub fn ade_invariance(idx: usize, g: Vec<Vec<Scalar>>) -> Outcome {
    let t = battery()[idx];
    let f = homogenize(&normal_form(t, 3), 6);
    let ginv = inverse(&g).unwrap();
    // f(g x) is singular at g^{-1} [0:0:0:1]
    let moved = substitute(&f, &g);
    let p: Vec<_> = ginv.iter().map(|r| r[3].clone()).collect();
    let rec = classify_ade(&moved, &AffinePoint::from_projective(&p).unwrap(), 16).unwrap();
    prop_assert_eq!(rec.ade_type, t);
    prop_assert_eq!(rec.tjurina as u32, t.index());
    prop_assert_eq!(rec.milnor as u32, t.index());
    Ok(())
}

pub fn containment_and_ev_monotone(pts: Vec<[i64; 3]>, coeffs: Vec<i64>) -> Outcome {
    let points: Vec<_> = pts.iter().map(|p| point(&[p[0], p[1], p[2], 1])).collect();
    let mut distinct = points.clone();
    distinct.sort();
    distinct.dedup();
    prop_assume!(distinct.len() == points.len());
    let f = singular_form(4, 5, &points, &coeffs);
    prop_assume!(f.is_some());
    let h = HypersurfaceInstance::new(2, f.unwrap(), &points);
    prop_assume!(h.is_ok());
    let a = Analysis::new(h.unwrap(), AnalysisOptions::default());
    prop_assume!(a.is_ok());
    let a = a.unwrap();
    let tau = a.total_tjurina();
    prop_assert_eq!(a.h1_ideal(-1).unwrap(), tau);
    let mut surjective = false;
    for m in 0..=tau as i64 + 1 {
        prop_assert!(a.check_containment(m).is_ok());
        let onto = a.evaluation_map(m).unwrap().is_surjective();
        prop_assert!(
            onto || !surjective,
            "ev onto in degree {} but not {}",
            m - 1,
            m
        );
        surjective = onto;
    }
    prop_assert!(surjective);
    Ok(())
}

pub fn quintic_duality_and_ivhs(
    p: [i64; 3],
    coeffs: Vec<i64>,
    lin: Vec<i64>,
    mix: Vec<i64>,
) -> Outcome {
    let a = one_point_instance(5, p, &coeffs);
    prop_assume!(a.is_some());
    let a = a.unwrap();
    prop_assume!(a.records()[0].tjurina == 1);
    prop_assume!(a.completeness_certificate().unwrap().passed);
    prop_assert!(a.duality_report().unwrap().holds());

    // any element of J_d has zero IVHS differential
    let f = a.instance().f().clone();
    let mut xi = HomogeneousPoly::zero(4, 5);
    for (i, g) in f.gradient().iter().enumerate() {
        for j in 0..4 {
            let l =
                HomogeneousPoly::monomial(Monomial::var(4, j), int(lin[(4 * i + j) % lin.len()]));
            xi = xi.add(&l.multiply(g));
        }
    }
    prop_assert!(a.ivhs_differential(&xi).unwrap().is_zero());

    // and a random element of I_d outside J_d does not
    let ideal = a.ideal_piece(5).unwrap();
    let basis = a.basis(5).unwrap();
    let mut eta = HomogeneousPoly::zero(4, 5);
    for (k, row) in ideal.span().row_slices().iter().enumerate() {
        let c = int(mix[k % mix.len()] + (k as i64 % 2));
        eta = eta.add(&HomogeneousPoly::from_coordinates(&basis, row).scale(&c));
    }
    let outside = !a
        .reduce_mod_j(5, &eta.coordinates(&basis))
        .unwrap()
        .is_empty();
    prop_assume!(outside);
    prop_assert!(!a.ivhs_differential(&eta).unwrap().is_zero());

    let t = a.torelli_report().unwrap().report;
    prop_assert_eq!(t.verdict, Verdict::Injective);
    prop_assert_eq!(t.kernel_comparison, KernelComparison::KernelEqualsJd);
    Ok(())
}

pub fn sextic_duality(p: [i64; 3], coeffs: Vec<i64>) -> Outcome {
    let a = one_point_instance(6, p, &coeffs);
    prop_assume!(a.is_some());
    let a = a.unwrap();
    prop_assume!(a.completeness_certificate().unwrap().passed);
    let report = a.duality_report().unwrap();
    prop_assert!(report.holds(), "{:?}", report.rows);
    Ok(())
}

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        max_global_rejects: 4 * cases + 16,
        ..Config::default()
    }
}

/// Case counts for one full run of the suite.
pub const SUITE: [(&str, u32); 7] = [
    ("rank_nullity", 64),
    ("modular_agrees_with_exact", 64),
    ("koszul_square_zero", 32),
    ("ade_invariance", 24),
    ("containment_and_ev_monotone", 24),
    ("quintic_duality_and_ivhs", 12),
    ("sextic_duality", 3),
];

fn cases(name: &str) -> u32 {
    SUITE.iter().find(|s| s.0 == name).unwrap().1
}

/// Runs one named property with its configured case count through a
/// fresh runner; returns the number of cases and the first failure.
pub fn run(name: &str) -> (u32, Result<(), String>) {
    let n = cases(name);
    let mut runner = TestRunner::new(config(n));
    let res = match name {
        "rank_nullity" => runner
            .run(&small_matrix(), rank_nullity)
            .map_err(|e| e.to_string()),
        "modular_agrees_with_exact" => runner
            .run(&small_matrix(), modular_agrees_with_exact)
            .map_err(|e| e.to_string()),
        "koszul_square_zero" => runner
            .run(
                &(proptest::collection::vec(-3i64..=3, 15), 2i64..7),
                |(c, m)| koszul_square_zero(c, m),
            )
            .map_err(|e| e.to_string()),
        "ade_invariance" => runner
            .run(&(0usize..10, coordinate_change(4)), |(i, g)| {
                ade_invariance(i, g)
            })
            .map_err(|e| e.to_string()),
        "containment_and_ev_monotone" => runner
            .run(
                &(
                    proptest::collection::vec(node_position(), 1..4),
                    coefficients(),
                ),
                |(p, c)| containment_and_ev_monotone(p, c),
            )
            .map_err(|e| e.to_string()),
        "quintic_duality_and_ivhs" => runner
            .run(
                &(
                    node_position(),
                    coefficients(),
                    proptest::collection::vec(-3i64..=3, 16),
                    proptest::collection::vec(-3i64..=3, 64),
                ),
                |(p, c, l, x)| quintic_duality_and_ivhs(p, c, l, x),
            )
            .map_err(|e| e.to_string()),
        "sextic_duality" => runner
            .run(&(node_position(), coefficients()), |(p, c)| {
                sextic_duality(p, c)
            })
            .map_err(|e| e.to_string()),
        other => panic!("unknown property {other}"),
    };
    (n, res)
}
