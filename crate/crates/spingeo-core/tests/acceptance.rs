//! End-to-end acceptance suite: every golden value is recomputed from
//! structure constants and compared exactly (zero tolerance), one
//! criterion per test, one pass/fail line per criterion.

use spingeo_core::catalog::{self, SuiteKind};
use spingeo_core::clifford::{sigma_t, Multivector};
use spingeo_core::estimates::{self, EstimateInput, IneqStatus};
use spingeo_core::exactfield::{poly_identity, Scalar, ScalarPoly};
use spingeo_core::linalg::Mat;
use spingeo_core::report::{self, Arithmetic};
use spingeo_core::spinrep::SpinorVec;

fn criterion(name: &str, ok: bool, detail: &str) {
    println!("{}  {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name} failed: {detail}");
}

fn sqrt5() -> Scalar {
    Scalar::sqrt(5).unwrap()
}

fn inv_sqrt5() -> Scalar {
    sqrt5().inverse().unwrap()
}

#[test]
fn criterion_1_berger_golden_chain() {
    let entry = catalog::build_b7();
    let space = &entry.space;
    let mut ok = true;
    let mut failures: Vec<&str> = Vec::new();
    let mut check = |name: &'static str, cond: bool| {
        if !cond {
            failures.push(name);
        }
        ok &= cond;
    };

    // Brackets: [e_i, e_{i+1}] = (1/sqrt5) e_{i+3}, cyclic mod 7.
    let c = inv_sqrt5();
    let mut cyclic = true;
    for i in 0..7usize {
        let bm = space.bracket_m(i, (i + 1) % 7);
        for (k, v) in bm.iter().enumerate() {
            let expect = if k == (i + 3) % 7 { c.clone() } else { Scalar::zero() };
            cyclic &= *v == expect;
        }
    }
    check("cyclic bracket", cyclic);

    // T and dT in the frozen frame.
    let mut t_expect = Multivector::zero(7);
    for idx in [[1, 2, 4], [1, 3, 7], [1, 5, 6], [2, 3, 5], [2, 6, 7], [3, 4, 6], [4, 5, 7]] {
        t_expect = &t_expect + &Multivector::blade(7, &idx, -&c).unwrap();
    }
    check("torsion form", entry.torsion == t_expect);
    let mut star_omega = Multivector::zero(7);
    for (sign, idx) in [
        (1i64, [1, 2, 3, 6]),
        (-1, [1, 2, 5, 7]),
        (-1, [1, 3, 4, 5]),
        (1, [1, 4, 6, 7]),
        (1, [2, 3, 4, 7]),
        (-1, [2, 4, 5, 6]),
        (-1, [3, 5, 6, 7]),
    ] {
        star_omega = &star_omega + &Multivector::blade(7, &idx, Scalar::from_integer(sign)).unwrap();
    }
    let dt = space.invariant_d(&entry.torsion).unwrap();
    check("dT printed form", dt == star_omega.scale(&Scalar::rational(-6, 5)));
    let sigma = sigma_t(&entry.torsion).unwrap();
    check("dT = 2 sigma", dt == sigma.scale(&Scalar::from_integer(2)));
    check(
        "torsion norm",
        entry.torsion.three_form_norm_sq().unwrap() == Scalar::rational(7, 5),
    );
    let omega = entry.torsion.scale(&-&sqrt5());
    check("omega is dual to its differential", {
        let domega = space.invariant_d(&omega).unwrap();
        domega == omega.hodge_star().scale(&(&Scalar::from_integer(6) * &c))
    });
    check("coclosed torsion", space.invariant_delta(&entry.torsion).unwrap().is_zero());

    // Curvature.
    let ric = space.ricci(&Scalar::zero());
    check("Einstein constant 27/10", ric == Mat::identity(7).scale(&Scalar::rational(27, 10)));
    check(
        "scalar curvature 189/10",
        space.scalar_curvature(&Scalar::zero()) == Scalar::rational(189, 10),
    );

    // Spectrum and the distinguished spinor.
    let geo = report::entry_geometry(&entry);
    let spectrum = geo.t_spectrum().unwrap();
    let gamma = &Scalar::from_integer(-7) * &c;
    check(
        "torsion spectrum",
        spectrum.exact
            && spectrum.eigenvalues == vec![(gamma.clone(), 1), (c.clone(), 7)],
    );
    let basis = geo.parallel_basis().unwrap();
    check("unique parallel spinor", basis.len() == 1);
    let phi0 = &basis[0];
    let kappa = &Scalar::rational(-3, 4) * &c;
    let mut parallel = true;
    let mut killing = true;
    for i in 1..=7usize {
        parallel &= geo.nabla_spinor(i, phi0, &entry.torsion).unwrap().is_zero();
        let lc = geo.nabla_spinor(i, phi0, &Multivector::zero(7)).unwrap();
        let xphi =
            entry.rep.act(&Multivector::basis_vector(7, i).unwrap(), phi0).unwrap();
        killing &= lc == xphi.scale(&kappa);
    }
    check("parallel spinor equation", parallel);
    check("Killing equation with kappa = -3/(4 sqrt5)", killing);

    // Cubic member: scalar curvature and the constant in the Dirac square.
    let cubic = entry.torsion.scale(&Scalar::rational(1, 3));
    let sca_third = space.ricci_with_torsion(&cubic).unwrap().trace();
    check("scalar curvature of the cubic member", sca_third == Scalar::rational(560, 30));
    let shift = &(&Scalar::rational(1, 8) * &sca_third)
        + &(&Scalar::rational(3, 4) * &cubic.three_form_norm_sq().unwrap());
    check("Dirac-square shift 49/20", shift == Scalar::rational(49, 20));
    let d_cubic = geo.dirac(phi0, &cubic).unwrap();
    let d_cubic2 = geo.dirac(&d_cubic, &cubic).unwrap();
    check("cubic Dirac square on phi0", d_cubic2 == phi0.scale(&Scalar::rational(49, 20)));

    // Estimates.
    let input = EstimateInput::new(7, Scalar::rational(189, 10), Scalar::rational(7, 5), gamma);
    check("universal estimate", estimates::beta_univ(&input) == Scalar::rational(49, 20));
    check(
        "twistorial estimate",
        estimates::beta_tw(&input).unwrap() == Scalar::rational(49, 20),
    );

    // And the full report must be green with at least 40 checks.
    let full = report::run_verify("b7", Arithmetic::Exact, None).unwrap();
    check("full verification report", full.failures() == 0 && full.summary.pass >= 40);

    criterion(
        "criterion-1 berger golden chain",
        ok,
        &if failures.is_empty() {
            format!("all exact values reproduced ({} report checks)", full.summary.pass)
        } else {
            format!("failed: {failures:?}")
        },
    );
}

#[test]
fn criterion_2_sphere_golden_chain() {
    let entry = catalog::build_s3();
    let space = &entry.space;
    let mut ok = true;
    let mut failures: Vec<&str> = Vec::new();
    let mut check = |name: &'static str, cond: bool| {
        if !cond {
            failures.push(name);
        }
        ok &= cond;
    };

    check(
        "Einstein constant 2",
        space.ricci(&Scalar::zero()) == Mat::identity(3).scale(&Scalar::from_integer(2)),
    );
    check("scalar curvature 6", space.scalar_curvature(&Scalar::zero()) == Scalar::from_integer(6));
    check("flat canonical connection", space.curvature(&Scalar::one()).is_flat());

    // T(X,Y) phi = -(XY - YX) phi on the spinor module.
    let mut action = true;
    for i in 1..=3usize {
        for j in 1..=3usize {
            if i == j {
                continue;
            }
            let ei = Multivector::basis_vector(3, i).unwrap();
            let ej = Multivector::basis_vector(3, j).unwrap();
            let tv = entry.torsion.torsion_vector(&ei, &ej).unwrap();
            let lhs = entry.rep.act_matrix(&tv).unwrap();
            let gi = entry.rep.gamma(i);
            let gj = entry.rep.gamma(j);
            action &= lhs == &gj.matmul(gi) - &gi.matmul(gj);
        }
    }
    check("torsion action identity", action);

    // Ric^s = 2 (1 - 16 s^2) Id at s in {0, 1/4, 1/2}.
    let geo = report::entry_geometry(&entry);
    let mut family = true;
    for s in [Scalar::zero(), Scalar::rational(1, 4), Scalar::rational(1, 2)] {
        let coeff = &Scalar::from_integer(2)
            * &(&Scalar::one() - &(&(&s * &s) * &Scalar::from_integer(16)));
        family &= geo.ricci_s(&s).unwrap() == Mat::identity(3).scale(&coeff);
    }
    check("Ricci family", family);

    // Killing with torsion at s = 1/2 with zeta = -1/2, on a trivializing
    // basis of constant spinors.
    let s_half = Scalar::rational(1, 2);
    let h = geo.family_torsion(&s_half);
    let mut kst = true;
    let basis = geo.parallel_basis().unwrap();
    kst &= basis.len() == 2;
    for phi in &basis {
        for i in 1..=3usize {
            let lhs = geo.nabla_spinor(i, phi, &h).unwrap();
            let xphi =
                entry.rep.act(&Multivector::basis_vector(3, i).unwrap(), phi).unwrap();
            kst &= lhs == xphi.scale(&Scalar::rational(-1, 2));
        }
    }
    check("Killing spinors with torsion at s = 1/2", kst);

    criterion(
        "criterion-2 sphere golden chain",
        ok,
        &if failures.is_empty() {
            "all exact values reproduced".to_string()
        } else {
            format!("failed: {failures:?}")
        },
    );
}

#[test]
fn criterion_3_coefficient_identities() {
    let s2 = &ScalarPoly::var() * &ScalarPoly::var();
    let mut ok = true;

    // C(6, s) = 3 (5 - 16 s^2)/8, C(7, s) = (9 - 16 s^2)/4,
    // C(3, s) = 3 (1 - 16 s^2)/4, as polynomial identities.
    let expect6 = (&ScalarPoly::constant(Scalar::from_integer(5))
        - &s2.scale(&Scalar::from_integer(16)))
        .scale(&Scalar::rational(3, 8));
    ok &= poly_identity(&estimates::ric_coefficient_poly(6), &expect6);
    let expect7 = (&ScalarPoly::constant(Scalar::from_integer(9))
        - &s2.scale(&Scalar::from_integer(16)))
        .scale(&Scalar::rational(1, 4));
    ok &= poly_identity(&estimates::ric_coefficient_poly(7), &expect7);
    let expect3 = (&ScalarPoly::constant(Scalar::one()) - &s2.scale(&Scalar::from_integer(16)))
        .scale(&Scalar::rational(3, 4));
    ok &= poly_identity(&estimates::ric_coefficient_poly(3), &expect3);

    // Specializations at s = 0 and s = 1/4 recover the Einstein constants.
    for n in 3..=8usize {
        let poly = estimates::ric_coefficient_poly(n);
        ok &= poly.eval(&Scalar::zero()) == Scalar::rational(6 * (n as i64 - 1), 16);
        ok &= poly.eval(&Scalar::rational(1, 4)) == Scalar::rational(n as i64 - 3, 2);
        // (6 gamma^2/n^2) C(n, 0) must equal the Riemannian coefficient
        // 9(n-1) gamma^2/(4 n^2): an identity in gamma^2.
        let ni = n as i64;
        ok &= &Scalar::rational(6, ni * ni) * &poly.eval(&Scalar::zero())
            == Scalar::rational(9 * (ni - 1), 4 * ni * ni);
        ok &= &Scalar::rational(6, ni * ni) * &poly.eval(&Scalar::rational(1, 4))
            == Scalar::rational(3 * (ni - 3), ni * ni);
    }
    criterion(
        "criterion-3 coefficient identities",
        ok,
        "specializations of the family coefficient polynomial",
    );
}

#[test]
fn criterion_4_clifford_identity_fuzz() {
    let mut total = 0usize;
    let mut failures = 0usize;
    for dim in 3..=8usize {
        let report = report::run_fuzz(dim, 100, 42, Arithmetic::Exact);
        total += report.checks.len();
        failures += report.failures();
    }
    criterion(
        "criterion-4 clifford identity fuzz",
        failures == 0,
        &format!("{total} identity checks over dimensions 3..=8, {failures} failures"),
    );
}

#[test]
fn criterion_5_block_connection_parallel_pair() {
    let s_half = Scalar::rational(1, 2);
    let mut ok = true;
    for entry in [catalog::build_b7(), catalog::build_s3()] {
        let geo = report::entry_geometry(&entry);
        let h = geo.family_torsion(&s_half);
        for phi in geo.parallel_basis().unwrap() {
            let dphi = geo.dirac(&phi, &h).unwrap();
            for i in 1..=geo.frame_dim() {
                let (a, b) = geo.super_connection_apply(i, &phi, &dphi, &s_half).unwrap();
                ok &= a.is_zero() && b.is_zero();
            }
        }
    }
    criterion(
        "criterion-5 block connection",
        ok,
        "(phi, D^s phi) is parallel at s = 1/2 on both catalog spaces",
    );
}

#[test]
fn criterion_6_spinor_class_coincidence() {
    let s_half = Scalar::rational(1, 2);
    let mut ok = true;
    let mut detail = String::new();
    for (entry, expect_dim) in [(catalog::build_b7(), 1usize), (catalog::build_s3(), 2usize)] {
        let geo = report::entry_geometry(&entry);
        let classes = geo.coincidence_classes(&entry.gamma, &s_half).unwrap();
        let dims = classes.dims();
        ok &= classes.all_coincide() && dims == [expect_dim; 4];
        detail.push_str(&format!("{}: dims {:?}; ", entry.name, dims));
    }
    criterion("criterion-6 class coincidence", ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_7_scalar_suites() {
    let mut ok = true;
    let mut detail = String::new();
    for kind in [SuiteKind::Nk6, SuiteKind::Npg2] {
        let suite = catalog::scalar_suite(kind);
        let pass = suite.rows.iter().filter(|r| r.pass).count();
        ok &= suite.all_pass() && suite.rows.len() >= 12;
        detail.push_str(&format!("{}: {}/{} identities; ", kind.name(), pass, suite.rows.len()));
    }
    criterion("criterion-7 scalar suites", ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_8_estimate_behaviour() {
    let gamma = &Scalar::from_integer(-7) * &inv_sqrt5();
    let input = EstimateInput::new(7, Scalar::rational(189, 10), Scalar::rational(7, 5), gamma);
    let base = estimates::inequality_suite(&input).unwrap();
    let mut ok = base.torsion_bound == IneqStatus::Equality
        && base.scalar_bound == IneqStatus::Equality
        && base.estimate_comparison == IneqStatus::Equality
        && base.killing_flag;

    // Perturb gamma^2 by +1/10: gamma' = (3/10) sqrt(110) squares to 99/10.
    let gamma_perturbed = &Scalar::rational(3, 10) * &Scalar::sqrt(110).unwrap();
    assert_eq!(&gamma_perturbed * &gamma_perturbed, Scalar::rational(99, 10));
    let perturbed = EstimateInput::new(
        7,
        Scalar::rational(189, 10),
        Scalar::rational(7, 5),
        gamma_perturbed,
    );
    let report = estimates::inequality_suite(&perturbed).unwrap();
    ok &= !report.killing_flag;
    ok &= report.estimate_comparison == IneqStatus::Strict;
    ok &= report.torsion_bound != IneqStatus::Equality;
    criterion(
        "criterion-8 estimate behaviour",
        ok,
        &format!(
            "equality with flag on the nominal data; perturbed: estimates {}, torsion bound {}, flag {}",
            report.estimate_comparison, report.torsion_bound, report.killing_flag
        ),
    );
}

// ---------------------------------------------------------------------------
// supporting end-to-end properties from the module contracts

#[test]
fn dirac_family_operator_identity() {
    // D^H = D^g + (3/4) H as operators on the invariant subspace, for
    // H in {0, T/3, T, 4sT}.
    for entry in [catalog::build_s3(), catalog::build_b7()] {
        let geo = report::entry_geometry(&entry);
        let n = geo.frame_dim();
        let d_g = geo.dirac_matrix(&Multivector::zero(n)).unwrap();
        for h in [
            entry.torsion.scale(&Scalar::rational(1, 3)),
            entry.torsion.clone(),
            entry.torsion.scale(&Scalar::from_integer(2)),
        ] {
            let d_h = geo.dirac_matrix(&h).unwrap();
            let h_act = entry.rep.act_matrix(&h).unwrap();
            let expect = &d_g + &h_act.scale(&Scalar::rational(3, 4));
            assert_eq!(d_h, expect, "{}", entry.name);
        }
    }
}

#[test]
fn twistor_kernel_dimension_bound() {
    for entry in [catalog::build_s3(), catalog::build_b7()] {
        let geo = report::entry_geometry(&entry);
        let d = geo.spinor_dim();
        for s in [Scalar::zero(), Scalar::rational(1, 2)] {
            let h = geo.family_torsion(&s);
            let mut stack = Mat::zeros(0, d);
            for m in geo.twistor_matrices(&h).unwrap() {
                stack = stack.vstack(&m);
            }
            let kernel = stack.nullspace().len();
            assert!(kernel <= 2 * d, "{}: kernel {kernel}", entry.name);
        }
    }
}

#[test]
fn characteristic_dirac_measures_eigenvalue_defect() {
    // D^c phi = (3/4)(T phi - gamma phi) for Killing spinors with number
    // 3 gamma/(4n).
    for entry in [catalog::build_s3(), catalog::build_b7()] {
        let geo = report::entry_geometry(&entry);
        for phi in geo.parallel_basis().unwrap() {
            let lhs = geo.dirac(&phi, &entry.torsion).unwrap();
            let t_phi = entry.rep.act(&entry.torsion, &phi).unwrap();
            let rhs = (&t_phi - &phi.scale(&entry.gamma)).scale(&Scalar::rational(3, 4));
            assert_eq!(lhs, rhs, "{}", entry.name);
        }
    }
}

#[test]
fn twistor_spinors_are_killing_across_family() {
    // On the catalog spaces the parallel spinor solves, simultaneously:
    // the twistor equation for s in {0, 1/2, 3/8}, the torsion Killing
    // equation with zeta = 3(1-4s) gamma/(4n), and the Riemannian Killing
    // equation with kappa = 3 gamma/(4n).
    for entry in [catalog::build_s3(), catalog::build_b7()] {
        let geo = report::entry_geometry(&entry);
        let n = geo.frame_dim() as i64;
        let kappa = &entry.gamma * &Scalar::rational(3, 4 * n);
        for phi in geo.parallel_basis().unwrap() {
            for s in [Scalar::zero(), Scalar::rational(1, 2), Scalar::rational(3, 8)] {
                let h = geo.family_torsion(&s);
                let residuals = geo.twistor_residual(&phi, &h).unwrap();
                assert!(residuals.iter().all(SpinorVec::is_zero), "{}", entry.name);
                let zeta = &kappa * &(&Scalar::one() - &(&Scalar::from_integer(4) * &s));
                for i in 1..=geo.frame_dim() {
                    let lhs = geo.nabla_spinor(i, &phi, &h).unwrap();
                    let x = Multivector::basis_vector(geo.frame_dim(), i).unwrap();
                    let rhs = entry.rep.act(&x, &phi).unwrap().scale(&zeta);
                    assert_eq!(lhs, rhs, "{} at s = {s}", entry.name);
                }
            }
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let a = report::run_verify("b7", Arithmetic::Exact, None).unwrap().to_json();
    let b = report::run_verify("b7", Arithmetic::Exact, None).unwrap().to_json();
    assert_eq!(a, b);
    let f = report::run_fuzz(6, 20, 7, Arithmetic::Exact);
    let g = report::run_fuzz(6, 20, 7, Arithmetic::Exact);
    assert_eq!(f.to_json(), g.to_json());
    assert_eq!(f.failures(), 0);
}

#[test]
fn float_mode_agrees_on_catalog_targets() {
    for target in ["s3", "b7", "nk6-table", "npg2-table"] {
        let exact = report::run_verify(target, Arithmetic::Exact, None).unwrap();
        let float = report::run_verify(target, Arithmetic::Float, None).unwrap();
        assert_eq!(exact.failures(), 0, "{target} exact");
        assert_eq!(float.failures(), 0, "{target} float");
        assert_eq!(exact.checks.len(), float.checks.len());
    }
}
