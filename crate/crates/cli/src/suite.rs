//! The aggregated verification suite behind `o2sym suite`.
//!
//! Human-readable report goes to stdout; a machine-readable `PASS <id>` /
//! `FAIL <id>` line per check goes to stderr. Randomised checks use a fixed
//! seed so runs are reproducible.

use o2sym::algebra::{generators as g, AlgebraElement};
use o2sym::expr;
use o2sym::matrix2;
use o2sym::numeric::{self, OdometerLetter};
use o2sym::sample;
use o2sym::scalar::Scalar;
use o2sym::tower;
use o2sym::zcross;
use o2sym::DEFAULT_DEPTH_CEILING;
use rand::rngs::StdRng;
use rand::SeedableRng;

struct CheckResult {
    pass: bool,
    detail: Option<String>,
}

fn pass() -> CheckResult {
    CheckResult {
        pass: true,
        detail: None,
    }
}

fn verdict(pass: bool) -> CheckResult {
    CheckResult { pass, detail: None }
}

fn fail(detail: String) -> CheckResult {
    CheckResult {
        pass: false,
        detail: Some(detail),
    }
}

/// Equality check that reports the offending normal form on failure.
fn expect_equal(lhs: &AlgebraElement, rhs: &AlgebraElement) -> CheckResult {
    if lhs == rhs {
        pass()
    } else {
        fail(format!(
            "normal form of left-hand side:\n{}",
            lhs.to_lines()
        ))
    }
}

fn seeded() -> StdRng {
    StdRng::seed_from_u64(0x5eed02)
}

fn check_kernel_symbolic() -> Vec<(&'static str, &'static str, CheckResult)> {
    let one = AlgebraElement::one();
    vec![
        (
            "kernel.s1.isometry",
            "S1'*S1 = 1",
            expect_equal(&(&g::s1().adjoint() * &g::s1()), &one),
        ),
        (
            "kernel.s2.isometry",
            "S2'*S2 = 1",
            expect_equal(&(&g::s2().adjoint() * &g::s2()), &one),
        ),
        (
            "kernel.range.sum",
            "S1*S1' + S2*S2' = 1",
            expect_equal(
                &(&(&g::s1() * &g::s1().adjoint()) + &(&g::s2() * &g::s2().adjoint())),
                &one,
            ),
        ),
    ]
}

fn check_kernel_numeric() -> Vec<(String, String, CheckResult)> {
    let one = AlgebraElement::one();
    let identities = [
        ("S1'*S1", &g::s1().adjoint() * &g::s1()),
        ("S2'*S2", &g::s2().adjoint() * &g::s2()),
        (
            "S1*S1'+S2*S2'",
            &(&g::s1() * &g::s1().adjoint()) + &(&g::s2() * &g::s2().adjoint()),
        ),
    ];
    let mut out = Vec::new();
    for depth in 1..=3u32 {
        let ok = identities
            .iter()
            .all(|(_, a)| numeric::numeric_equals(a, &one, depth).unwrap());
        out.push((
            format!("kernel.matrix.depth{depth}"),
            format!("kernel identities under matrix_of at depth {depth}"),
            verdict(ok),
        ));
    }
    out
}

fn check_grading() -> Vec<(&'static str, &'static str, CheckResult)> {
    let u = g::u();
    let one = AlgebraElement::one();
    let mut out = vec![
        (
            "grading.u.selfadjoint",
            "U' = U",
            expect_equal(&u.adjoint(), &u),
        ),
        (
            "grading.u.squares",
            "U*U = 1",
            expect_equal(&(&u * &u), &one),
        ),
        (
            "grading.u.antisymmetric",
            "sigma(U) = -U",
            expect_equal(&u.sigma(), &(-&u)),
        ),
    ];
    let mut rng = seeded();
    let mut ok = true;
    for _ in 0..100 {
        let a = sample::random_element(&mut rng, 4, 4);
        let (f, n) = (a.fixed_part(), a.anti_part());
        ok &= &f + &n == a;
        ok &= f.sigma() == f;
        ok &= (&n * &u).is_symmetric();
    }
    out.push((
        "grading.decomposition",
        "a = fixed + anti with sigma-fixed parts, 100 random elements",
        verdict(ok),
    ));
    out
}

fn check_fixed_point() -> Vec<(&'static str, &'static str, CheckResult)> {
    let (t, v, u) = (g::t(), g::v(), g::u());
    let one = AlgebraElement::one();
    vec![
        (
            "fixed.t.isometry",
            "T'*T = 1",
            expect_equal(&(&t.adjoint() * &t), &one),
        ),
        (
            "fixed.v.isometry",
            "V'*V = 1",
            expect_equal(&(&v.adjoint() * &v), &one),
        ),
        (
            "fixed.range.sum",
            "T*T' + V*V' = 1",
            expect_equal(&(&(&t * &t.adjoint()) + &(&v * &v.adjoint())), &one),
        ),
        (
            "fixed.sigma.invariance",
            "sigma(T) = T and sigma(V) = V",
            verdict(t.sigma() == t && v.sigma() == v),
        ),
        (
            "fixed.v.formula",
            "V = U*T*U = (1/r2)*(S1-S2)*U",
            expect_equal(
                &v,
                &(&(&g::s1() - &g::s2()) * &u).scale(&Scalar::inv_sqrt2()),
            ),
        ),
    ]
}

fn check_crossed_product() -> Vec<(&'static str, &'static str, CheckResult)> {
    let w = g::w();
    let one = AlgebraElement::one();
    let (b1, b2) = (g::b1(), g::b2());
    let p_w = &(&g::s1() * &g::s1().adjoint()) * &w;
    // the rejected transcription: W multiplied on the right
    let wrong_b1 = (&g::s1() + &(&g::s1() * &w)).scale(&Scalar::inv_sqrt2());
    let wrong_gram = &wrong_b1.adjoint() * &wrong_b1;
    vec![
        (
            "cross.w.involution",
            "W*W = 1",
            expect_equal(&(&w * &w), &one),
        ),
        (
            "cross.w.covariance",
            "W*S1*W = S2",
            expect_equal(&(&(&w * &g::s1()) * &w), &g::s2()),
        ),
        (
            "cross.w.reconstruction",
            "S1*S1'*W + (S1*S1'*W)' = W",
            expect_equal(&(&p_w + &p_w.adjoint()), &w),
        ),
        (
            "tau.b1.isometry",
            "B1'*B1 = 1",
            expect_equal(&(&b1.adjoint() * &b1), &one),
        ),
        (
            "tau.b2.isometry",
            "B2'*B2 = 1",
            expect_equal(&(&b2.adjoint() * &b2), &one),
        ),
        (
            "tau.b.range",
            "B1*B1' + B2*B2' = 1",
            expect_equal(&(&(&b1 * &b1.adjoint()) + &(&b2 * &b2.adjoint())), &one),
        ),
        (
            "tau.b.flip",
            "B1*B1' - B2*B2' = W",
            expect_equal(&(&(&b1 * &b1.adjoint()) - &(&b2 * &b2.adjoint())), &w),
        ),
        (
            "tau.b1.erratum",
            "right-multiplied (S1+S1*W)/r2 has gram 1 + W, refuting that transcription",
            if wrong_gram == &one + &w && wrong_gram != one {
                pass()
            } else {
                fail(format!(
                    "normal form of the gram matrix:\n{}",
                    wrong_gram.to_lines()
                ))
            },
        ),
    ]
}

fn check_m2() -> Vec<(&'static str, &'static str, CheckResult)> {
    let (t1, t2) = (matrix2::tmat1(), matrix2::tmat2());
    let id = matrix2::Mat2::identity();
    let mut out = vec![
        (
            "m2.t1.isometry",
            "T1'*T1 = 1 in M2",
            verdict(&t1.adjoint() * &t1 == id),
        ),
        (
            "m2.t2.isometry",
            "T2'*T2 = 1 in M2",
            verdict(&t2.adjoint() * &t2 == id),
        ),
        (
            "m2.range.sum",
            "T1*T1' + T2*T2' = 1 in M2",
            verdict(&(&t1 * &t1.adjoint()) + &(&t2 * &t2.adjoint()) == id),
        ),
        (
            "m2.y.xi",
            "Y = T1*T1' - T2*T2' = Xi",
            verdict(matrix2::ymat() == matrix2::xi()),
        ),
        (
            "m2.r2.conjugation",
            "R2 = Y*R1*Y",
            verdict(matrix2::r2() == &(&matrix2::ymat() * &matrix2::r1()) * &matrix2::ymat()),
        ),
        (
            "m2.tau.swap",
            "tau(T1) = T2",
            verdict(matrix2::tau_conj(&t1) == t2),
        ),
    ];
    // every word of length <= 4 over {T1, T2, T1', T2'} keeps the lemma form
    let letters = [t1.clone(), t2.clone(), t1.adjoint(), t2.adjoint()];
    let mut all = true;
    let mut words: Vec<matrix2::Mat2> = letters.to_vec();
    for _ in 1..4 {
        let mut next = Vec::new();
        for word in &words {
            all &= matrix2::has_lemma_form(word);
            for l in &letters {
                next.push(word * l);
            }
        }
        words = next;
    }
    for word in &words {
        all &= matrix2::has_lemma_form(word);
    }
    out.push((
        "m2.lemma.closure",
        "all words of length <= 4 in {T1, T2, adjoints} have the lemma form",
        verdict(all),
    ));
    out
}

fn check_tower() -> Vec<(&'static str, &'static str, CheckResult)> {
    let mut ok_down = true;
    let mut level = tower::base_level();
    for _ in 0..3 {
        match tower::descend(&level, DEFAULT_DEPTH_CEILING) {
            Ok(next) => {
                ok_down &= tower::verify_level(&next).all_pass();
                level = next;
            }
            Err(_) => {
                ok_down = false;
                break;
            }
        }
    }
    let mut ok_round = true;
    let mut base = tower::base_level();
    for _ in 0..3 {
        let round = tower::ascend(&base, DEFAULT_DEPTH_CEILING)
            .and_then(|up| tower::descend(&up, DEFAULT_DEPTH_CEILING));
        match round {
            Ok(back) => {
                ok_round &= back == base;
                base = back;
            }
            Err(_) => {
                ok_round = false;
                break;
            }
        }
    }
    vec![
        (
            "tower.descents",
            "three descents from (S1, S2, W) verify exactly",
            verdict(ok_down),
        ),
        (
            "tower.roundtrips",
            "three ascend-then-descend roundtrips reproduce (r, t, w) exactly",
            verdict(ok_round),
        ),
    ]
}

fn check_numeric_oracle() -> Vec<(&'static str, &'static str, CheckResult)> {
    let mut rng = seeded();
    let mut agree = true;
    for round in 0..200 {
        let a = sample::random_element(&mut rng, 4, 4);
        let b = sample::random_element(&mut rng, 4, 4);
        let sym = a == b;
        let num = numeric::numeric_equals(&a, &b, 5).unwrap();
        agree &= sym == num;
        // pairs equal along two algebraic routes, kept shallow so the
        // product depth stays near the comparison depth
        if round % 4 == 0 {
            let x = sample::random_element(&mut rng, 2, 3);
            let y = sample::random_element(&mut rng, 2, 3);
            let c = sample::random_element(&mut rng, 2, 3);
            let lhs = &(&x + &y) * &c;
            let rhs = &(&x * &c) + &(&y * &c);
            agree &= lhs == rhs;
            agree &= numeric::numeric_equals(&lhs, &rhs, lhs.max_depth().max(rhs.max_depth()) + 1)
                .unwrap();
        }
    }
    let mut hom = true;
    for _ in 0..100 {
        let a = sample::random_element(&mut rng, 2, 3);
        let b = sample::random_element(&mut rng, 2, 3);
        let depth = a.max_depth() + b.max_depth() + 1;
        let sum = numeric::matrix_of(&(&a + &b), depth).unwrap();
        let parts = numeric::matrix_of(&a, depth)
            .unwrap()
            .add(&numeric::matrix_of(&b, depth).unwrap())
            .unwrap();
        hom &= sum.equal(&parts);
        let mb = numeric::matrix_of(&b, depth).unwrap();
        let ma = numeric::matrix_of(&a, mb.dst_depth()).unwrap();
        hom &= ma
            .compose(&mb)
            .unwrap()
            .equal(&numeric::matrix_of(&(&a * &b), depth).unwrap());
        let c = sample::random_single_slope_element(&mut rng, 3, 3);
        let m = numeric::matrix_of(&c, c.max_depth() + 3).unwrap();
        let madj = numeric::matrix_of(&c.adjoint(), m.dst_depth()).unwrap();
        hom &= m.conj_transpose().equal(&madj);
    }
    vec![
        (
            "numeric.agreement",
            "equals matches numeric_equals at depth 5 on 200 random pairs",
            verdict(agree),
        ),
        (
            "numeric.homomorphism",
            "matrix_of respects add, mul, adjoint on 100 random pairs",
            verdict(hom),
        ),
    ]
}

fn check_odometer() -> Vec<(&'static str, &'static str, CheckResult)> {
    let n = 128;
    let t1 = numeric::odometer_word(&[OdometerLetter::T1], n);
    let t2 = numeric::odometer_word(&[OdometerLetter::T2], n);
    let id = numeric::IntMatrix::identity(n);
    let e0_fixed = t1.column(0)[0] == 1 && t1.column(0).iter().sum::<i64>() == 1;
    let mut no_eigen = true;
    for k in 0..64 {
        let col = t2.column(k);
        // the image is e_{2k+1}, never proportional to e_k
        no_eigen &= col[2 * k + 1] == 1 && col[k] == 0 && col.iter().sum::<i64>() == 1;
    }
    let gram1 = numeric::odometer_word(&[OdometerLetter::T1Adj, OdometerLetter::T1], n);
    let gram2 = numeric::odometer_word(&[OdometerLetter::T2Adj, OdometerLetter::T2], n);
    let ranges = t1.mul(&t1.transpose()).add(&t2.mul(&t2.transpose()));
    let cuntz = gram1.eq_on_columns(&id, n / 2)
        && gram2.eq_on_columns(&id, n / 2)
        && ranges.eq_on_columns(&id, n);
    vec![
        (
            "odometer.t1.fixed",
            "T1 e0 = e0 in the truncated odometer",
            verdict(e0_fixed),
        ),
        (
            "odometer.t2.no_eigenvector",
            "no basis vector e_n (n < 64) is an eigenvector of T2",
            verdict(no_eigen),
        ),
        (
            "odometer.cuntz.prefix",
            "truncated Cuntz relations exact on the guaranteed prefix",
            verdict(cuntz),
        ),
    ]
}

fn check_commutant(max_depth: u32) -> Vec<(String, String, CheckResult)> {
    let mut out = Vec::new();
    for depth in 1..=max_depth {
        let survivors = numeric::commutant_survivors(depth).unwrap();
        let ok = survivors.len() == 2
            && survivors.iter().any(|v| v.iter().all(|&b| b))
            && survivors.iter().any(|v| v.iter().all(|&b| !b));
        out.push((
            format!("commutant.depth{depth}"),
            format!(
                "exactly the two constant 0/1 vectors commute at depth {depth} ({} candidates)",
                1u64 << (1u32 << depth)
            ),
            verdict(ok),
        ));
    }
    out
}

fn check_zcross() -> Vec<(&'static str, &'static str, CheckResult)> {
    let v = zcross::field_v();
    let s1 = zcross::field_s1();
    let s2 = zcross::field_s2();
    let boundary_named = [&v, &s1, &s2].iter().all(|f| {
        *f.value(zcross::GridPoint::NegOne) == f.value(zcross::GridPoint::PosOne).sigma_hat()
    });
    // closure under 50 random words: construction through the checked
    // boundary must keep succeeding
    let mut rng = seeded();
    let mut closure = true;
    for _ in 0..50 {
        let mut acc = zcross::SampledField::constant(&AlgebraElement::one()).unwrap();
        for _ in 0..4 {
            let pick = match rand::Rng::gen_range(&mut rng, 0..3) {
                0 => &v,
                1 => &s1,
                _ => &s2,
            };
            acc = if rand::Rng::gen_bool(&mut rng, 0.5) {
                acc.mul(pick)
            } else {
                acc.mul(&pick.adjoint())
            };
        }
        let values: [AlgebraElement; 5] =
            std::array::from_fn(|k| acc.value(zcross::GridPoint::ALL[k]).clone());
        closure &= zcross::SampledField::new(values).is_ok();
    }
    let covariance = zcross::check_covariance()
        .iter()
        .all(|c| c.v_s1_v_adj_is_s2 && c.v_s2_v_adj_is_s1);
    let vv = v.mul(&v);
    let v2_scalar = zcross::GridPoint::ALL
        .iter()
        .all(|&p| vv.value(p).as_scalar() == Some(p.square_phase()));
    let corollary = {
        let rv = zcross::corollary_form(&v);
        let r1 = zcross::corollary_form(&s1);
        rv.sum_symmetric
            && rv.difference_antisymmetric
            && r1.sum_symmetric
            && r1.difference_antisymmetric
    };
    vec![
        (
            "zcross.boundary",
            "boundary condition holds for v, s1, s2 and 50 random words",
            verdict(boundary_named && closure),
        ),
        (
            "zcross.v.unitary",
            "v is unitary at every grid point",
            verdict(v.is_unitary_pointwise()),
        ),
        (
            "zcross.v2.scalar",
            "v^2 is the scalar e^(i*pi*t) at every grid point",
            verdict(v2_scalar),
        ),
        (
            "zcross.covariance",
            "v s1 v' = s2 and v s2 v' = s1 at all five grid points",
            verdict(covariance),
        ),
        (
            "zcross.corollary",
            "f(1)+f(-1) symmetric and f(1)-f(-1) antisymmetric for v, s1",
            verdict(corollary),
        ),
    ]
}

fn check_parser() -> Vec<(&'static str, &'static str, CheckResult)> {
    let mut rng = seeded();
    let mut ok = true;
    for _ in 0..100 {
        let a = sample::random_element(&mut rng, 4, 5);
        let text = expr::to_expr_string(&a);
        let back = expr::parse(&text).ok().and_then(|e| expr::eval(&e).ok());
        ok &= back.as_ref() == Some(&a);
        let lines = a.to_lines();
        ok &= AlgebraElement::from_lines(&lines).ok().as_ref() == Some(&a);
    }
    vec![(
        "parser.roundtrip",
        "parse/print round-trip on 100 random canonical elements",
        verdict(ok),
    )]
}

/// Run every check; human-readable report on stdout, `PASS|FAIL <id>` lines
/// on stderr. Returns overall success.
pub fn run(commutant_depth: u32) -> bool {
    let mut checks: Vec<(String, String, CheckResult)> = Vec::new();
    let push_static = |list: Vec<(&'static str, &'static str, CheckResult)>,
                       checks: &mut Vec<(String, String, CheckResult)>| {
        for (id, desc, result) in list {
            checks.push((id.to_string(), desc.to_string(), result));
        }
    };
    push_static(check_kernel_symbolic(), &mut checks);
    checks.extend(check_kernel_numeric());
    push_static(check_grading(), &mut checks);
    push_static(check_fixed_point(), &mut checks);
    push_static(check_crossed_product(), &mut checks);
    push_static(check_m2(), &mut checks);
    push_static(check_tower(), &mut checks);
    push_static(check_numeric_oracle(), &mut checks);
    push_static(check_odometer(), &mut checks);
    checks.extend(check_commutant(commutant_depth));
    push_static(check_zcross(), &mut checks);
    push_static(check_parser(), &mut checks);

    let mut all = true;
    for (id, desc, result) in &checks {
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} — {desc}");
        if let Some(detail) = &result.detail {
            println!("{detail}");
        }
        eprintln!("{tag} {id}");
        all &= result.pass;
    }
    let passed = checks.iter().filter(|(_, _, r)| r.pass).count();
    println!("{passed}/{} checks passed", checks.len());
    all
}
