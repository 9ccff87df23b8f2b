//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use circletree::checks::{
    check_antipode_agreement, check_antipode_axiom, check_co_prelie, check_coassociativity, check_counit,
    check_duality, check_forest_signs, check_grading, check_isomorphism, check_prelie_exhaustive, check_prelie_triples,
    CheckReport,
};
use circletree::fliess::convergence_table;
use circletree::words::{left_concat_poly, shuffle_poly};
use circletree::{
    group_inverse, group_product, mod_compose, numeric_corpus, phi_inv, phi_poly, rcts_up_to_degree, AntipodeMethod,
    Character, CoordMap, Extraction, FdbHopf, Letter, Rct, RctHopf, Series, Side, Word, Q,
};
use common::*;
use rand::Rng;

const MEMO_ON_LIMIT: Duration = Duration::from_secs(10);
const MEMO_OFF_LIMIT: Duration = Duration::from_secs(600);
const NUMERIC_TOL: f64 = 1e-6;
const NUMERIC_N: usize = 2000;
const RATIO_RANGE: (f64, f64) = (3.2, 4.8);
const NUMERIC_LIMIT: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn reports(rs: &[CheckReport]) -> Outcome {
    let cases: usize = rs.iter().map(|r| r.cases).sum();
    match rs.iter().find(|r| !r.ok()) {
        Some(bad) => Err(bad.to_string()),
        None => Ok(format!("{} suites, {cases} cases", rs.len())),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn x0_power(k: usize) -> Rct {
    Rct::with_alphabet(1, Word::from_indices(&vec![0; k]), alpha(1)).unwrap()
}

fn table_one() -> Outcome {
    let expected = [2usize, 6, 17, 50, 139, 390, 1059];
    let h = RctHopf::<Q>::with_memo(alpha(1), true);
    for (k, &n) in (1..=6).zip(&expected) {
        let got = h.antipode(&x0_power(k), AntipodeMethod::Left).len();
        ensure(got == n, || format!("k={k}: {got} distinct, want {n}"))?;
    }
    let c7 = x0_power(7);
    let fresh = RctHopf::<Q>::with_memo(alpha(1), true);
    let t = Instant::now();
    let on = fresh.antipode(&c7, AntipodeMethod::Left).len();
    let t_on = t.elapsed();
    ensure(on == 1059 && t_on < MEMO_ON_LIMIT, || format!("k=7 memo on: {on} in {t_on:?}"))?;
    let off = RctHopf::<Q>::with_memo(alpha(1), false);
    let t = Instant::now();
    let n_off = off.antipode(&c7, AntipodeMethod::Left).len();
    let t_off = t.elapsed();
    ensure(n_off == 1059 && t_off < MEMO_OFF_LIMIT, || format!("k=7 memo off: {n_off} in {t_off:?}"))?;
    Ok(format!("2,6,17,50,139,390,1059; k=7 memo on {:.2}s, memo off {:.2}s", t_on.as_secs_f64(), t_off.as_secs_f64()))
}

fn extraction_lists() -> Outcome {
    let c = Rct::parse("1:0.0.0", alpha(1)).unwrap();
    let n = c.all_extractions().len();
    ensure(n == 26, || format!("|E~(x0^3)| = {n}"))?;
    let c = Rct::parse("1:1.0.2.0", alpha(2)).unwrap();
    let subs: BTreeSet<Vec<usize>> = c.admissible_subsets().iter().map(|s| s.positions().collect()).collect();
    let want: BTreeSet<Vec<usize>> = [vec![2], vec![4], vec![2, 3], vec![2, 4], vec![2, 3, 4]].into();
    ensure(subs == want, || format!("subsets {subs:?}"))?;
    let ext: BTreeSet<Vec<Vec<usize>>> = c
        .admissible_extractions(false)
        .iter()
        .map(|e| match e {
            Extraction::Proper(v) => v.iter().map(|s| s.positions().collect()).collect(),
            other => vec![vec![usize::MAX; other.subsets().len()]],
        })
        .collect();
    let want: BTreeSet<Vec<Vec<usize>>> = [
        vec![vec![2]],
        vec![vec![4]],
        vec![vec![2, 3]],
        vec![vec![2, 4]],
        vec![vec![2, 3, 4]],
        vec![vec![2], vec![4]],
        vec![vec![2, 3], vec![4]],
    ]
    .into();
    ensure(ext == want, || format!("extractions {ext:?}"))?;
    Ok("26 general extractions; 5 subsets and 7 extractions as listed".into())
}

fn hopf(m: usize) -> RctHopf<Q> {
    RctHopf::with_memo(alpha(m), true)
}

fn antipode_agreement() -> Outcome {
    reports(&[check_antipode_agreement(&hopf(1), 11), check_antipode_agreement(&hopf(2), 8)])
}

fn forest_signs() -> Outcome {
    reports(&[check_forest_signs(&hopf(1), 9), check_forest_signs(&hopf(2), 9)])
}

fn hopf_axioms() -> Outcome {
    let mut rs = Vec::new();
    for m in [1, 2] {
        let h = hopf(m);
        rs.push(check_coassociativity(&h, 8));
        rs.push(check_counit(&h, 8));
        rs.push(check_grading(&h, 8));
        rs.push(check_antipode_axiom(&h, 8));
    }
    reports(&rs)
}

fn isomorphism() -> Outcome {
    let mut rs = Vec::new();
    for m in [1, 2] {
        let h = hopf(m);
        let f = FdbHopf::<Q>::with_memo(alpha(m), true);
        rs.push(check_isomorphism(&h, &f, 8));
        let mut closed = CheckReport::new(format!("closed forms m={m}"));
        for (a, expected) in closed_form_antipodes(m) {
            let ok = *f.antipode(&a, Side::Left) == expected
                && *f.antipode(&a, Side::Right) == expected
                && phi_poly(&h.antipode_forest(&phi_inv(&a))) == expected;
            closed.record(ok, || a.to_string());
        }
        rs.push(closed);
    }
    let six = closed_form_antipodes(1).into_iter().find(|(a, _)| *a == coord(1, &[0, 0], 1)).map(|(_, p)| p.len());
    ensure(six == Some(6), || format!("S(a_x0^2) at m=1 has {six:?} terms"))?;
    reports(&rs)
}

fn group_example() -> Outcome {
    let c = series("1 2 1", 2, 2, 4);
    let d = series("2 1 1", 2, 2, 4);
    let got = group_product(&c, &d).map_err(|e| e.to_string())?;
    let want = series("1 2 1\n1 0.1 1\n2 1 1", 2, 2, 4);
    ensure(got == want, || format!("got\n{}", got.to_text()))?;
    Ok(got.to_text().trim().replace('\n', "; "))
}

fn group_properties() -> Outcome {
    let h = FdbHopf::<Q>::with_memo(alpha(2), true);
    let mut r = rng(8);
    for n in 0..20 {
        let c = random_series(&mut r, 2, 2, 4);
        let d = random_series(&mut r, 2, 2, 4);
        let e = random_series(&mut r, 2, 2, 4);
        let gp = |x: &Series<Q>, y: &Series<Q>| group_product(x, y).unwrap();
        ensure(gp(&gp(&c, &d), &e) == gp(&c, &gp(&d, &e)), || format!("associativity, triple {n}"))?;
        let inv = group_inverse(&h, &c, 4).map_err(|e| e.to_string())?;
        ensure(gp(&c, &inv).is_zero(), || format!("inverse, triple {n}"))?;
    }
    Ok("20 triples, truncation length 4".into())
}

fn mod_compose_identities() -> Outcome {
    let (m, l) = (2, 4);
    let mut r = rng(9);
    for n in 0..50 {
        let c = random_series(&mut r, m, 2, l);
        let d = random_series(&mut r, m, 2, l);
        let e = random_series(&mut r, m, 2, l);
        let i = r.gen_range(0..=m);
        let li = Letter::new(i as u8);
        let cd = mod_compose(&c, &d).unwrap();
        let mut channels = Vec::new();
        for ch in cd.channels() {
            let mut p = left_concat_poly(li, ch, l);
            if i != 0 {
                p.add_assign_scaled(&left_concat_poly(Letter::X0, &shuffle_poly(d.channel(i), ch, l - 1), l), &q(1));
            }
            channels.push(p);
        }
        let rhs = Series::from_channels(alpha(m), l, channels).unwrap();
        ensure(mod_compose(&c.left_concat(li), &d).unwrap() == rhs, || format!("letter identity, instance {n}"))?;
        let lhs = mod_compose(&cd, &e).unwrap();
        let rhs = mod_compose(&c, &mod_compose(&d, &e).unwrap().add(&e).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("non-associativity identity, instance {n}"))?;
    }
    Ok("50 instances".into())
}

fn prelie_suite() -> Outcome {
    let h = hopf(2);
    let (pl, jac) = check_prelie_exhaustive(&h, 4);
    let trees = rcts_up_to_degree(alpha(2), 6);
    let mut r = rng(10);
    let mut pick = || &trees[r.gen_range(0..trees.len())];
    let triples: Vec<(&Rct, &Rct, &Rct)> = (0..100).map(|_| (pick(), pick(), pick())).collect();
    let (rpl, rjac) = check_prelie_triples::<Q>("100 random deg<=6", triples);
    reports(&[pl, jac, rpl, rjac, check_duality(&h, 6), check_co_prelie(&hopf(1), 7), check_co_prelie(&h, 7)])
}

fn convolution() -> Outcome {
    let f = FdbHopf::<Q>::with_memo(alpha(2), true);
    let mut r = rng(11);
    let mut cases = 0;
    for n in 0..20 {
        let c = random_series(&mut r, 2, 2, 4);
        let d = random_series(&mut r, 2, 2, 4);
        let prod = group_product(&c, &d).unwrap();
        let (pc, pd) = (Character::new(&c), Character::new(&d));
        for i in 1..=2 {
            for w in alpha(2).words_up_to_len(3) {
                let a = CoordMap::new(i, w.clone(), alpha(2)).unwrap();
                let v = circletree::convolve(&f, &pc, &pd, &a).map_err(|e| e.to_string())?;
                ensure(v == prod.coeff(i, &w), || format!("pair {n}, {a}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("20 pairs, {cases} coordinates"))
}

fn numerics() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut ratios = Vec::new();
    for case in numeric_corpus::<Q>() {
        let table = convergence_table(&case, 1.0f64, &[NUMERIC_N / 2, NUMERIC_N]).map_err(|e| e.to_string())?;
        let (coarse, fine) = (table[0].1, table[1].1);
        ensure(fine <= NUMERIC_TOL, || format!("{}: deviation {fine:e} at N={NUMERIC_N}", case.name))?;
        worst = worst.max(fine);
        if case.second_order {
            let ratio = coarse / fine;
            ensure(ratio >= RATIO_RANGE.0 && ratio <= RATIO_RANGE.1, || format!("{}: ratio {ratio:.3}", case.name))?;
            ratios.push(format!("{} {ratio:.3}", case.name));
        }
    }
    let el = t.elapsed();
    ensure(el < NUMERIC_LIMIT, || format!("runtime {el:?}"))?;
    Ok(format!("max deviation {worst:.2e}; ratios {}; {:.2}s", ratios.join(", "), el.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Table 1 distinct terms", table_one),
        ("extraction counts and lists", extraction_lists),
        ("antipode left = right = forest", antipode_agreement),
        ("forest formula cancellation-free", forest_signs),
        ("Hopf axioms", hopf_axioms),
        ("isomorphism and closed-form antipodes", isomorphism),
        ("feedback group example", group_example),
        ("group associativity and inverse", group_properties),
        ("modified composition identities", mod_compose_identities),
        ("pre-Lie suite", prelie_suite),
        ("convolution equals group product", convolution),
        ("numerical identities", numerics),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
