//! A quick, seeded pass over the ten acceptance checks. Sample counts are
//! small; the `acceptance` test target runs the full versions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use kforms::albert::CubicNormStructure;
use kforms::bounds::{cd_bound, ledger, Route};
use kforms::fields::{p_class, Field, FiniteField, FqElem, LaurentField, TowerField};
use kforms::forms::{chevalley_warning_check, pfister, randomized_search, Form, SearchOptions, SearchPlan};
use kforms::milnor::{common_slot_step, neutralize_check, shared_slots, split_check, Symbol};
use kforms::powassoc::Algebra;
use kforms::symbolalg::SymbolAlgebra;

use crate::report::Report;
use crate::Global;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: kforms::Error) -> String {
    e.to_string()
}

fn gf(p: u64) -> FiniteField {
    FiniteField::new(p, 1).expect("prime")
}

fn unit(f: &FiniteField, rng: &mut ChaCha8Rng) -> FqElem {
    f.elem(rng.gen_range(1..f.order()))
}

fn det(m: &[Vec<i64>], p: i64) -> i64 {
    match m.len() {
        2 => (m[0][0] * m[1][1] - m[0][1] * m[1][0]).rem_euclid(p),
        _ => (0..3)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor, p)
            })
            .sum::<i64>()
            .rem_euclid(p),
    }
}

fn norm_is_det(rng: &mut ChaCha8Rng) -> Check {
    for (q, n) in [(5u64, 2usize), (7, 3)] {
        let f = gf(q);
        let norm = Algebra::matrix_algebra(f.clone(), n).map_err(e2s)?.norm_form().map_err(e2s)?;
        for _ in 0..100 {
            let a: Vec<FqElem> = (0..n * n).map(|_| f.random_elem(rng)).collect();
            let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| f.coeffs(a[i * n + j])[0] as i64).collect()).collect();
            let got = f.coeffs(norm.evaluate(&a).map_err(e2s)?)[0] as i64;
            ensure(got == det(&m, q as i64), || format!("N ≠ det on {m:?}"))?;
        }
    }
    Ok("200 matrices".into())
}

fn char_identities(rng: &mut ChaCha8Rng) -> Check {
    let (f5, f7) = (gf(5), gf(7));
    let algebras = [
        Algebra::matrix_algebra(f5.clone(), 2).map_err(e2s)?,
        Algebra::kummer(f7.clone(), 3, &f7.from_int(3)).map_err(e2s)?,
        SymbolAlgebra::build(&f7, 3, &f7.from_int(3), &f7.from_int(5)).map_err(e2s)?.algebra().clone(),
    ];
    for alg in &algebras {
        for _ in 0..20 {
            let a: Vec<FqElem> = (0..alg.dim()).map(|_| alg.field().random_elem(rng)).collect();
            let chi = alg.reduced_char_poly(&a).map_err(e2s)?;
            ensure(alg.is_zero_elem(&alg.eval_poly(&chi, &a)), || format!("χ_a(a) ≠ 0 in {}", alg.name()))?;
            ensure(alg.norm_of_t_minus(&a).map_err(e2s)? == chi, || format!("χ_a ≠ N(T - a) in {}", alg.name()))?;
        }
    }
    Ok("60 elements in 3 algebras".into())
}

fn symbol_identity() -> Check {
    let f = gf(7);
    let mut n = 0;
    for a in 1..7 {
        for b in 1..7 - a {
            let d = SymbolAlgebra::build(&f, 3, &f.elem(a), &f.elem(b)).map_err(e2s)?;
            ensure(d.identity_witness().map_err(e2s)?.holds(), || format!("({a}, {b})"))?;
            n += 1;
        }
    }
    Ok(format!("{n} pairs over F_7"))
}

fn quaternion_shape(rng: &mut ChaCha8Rng) -> Check {
    let f = gf(7);
    for _ in 0..10 {
        let (a, b) = (unit(&f, rng), unit(&f, rng));
        let got = SymbolAlgebra::build(&f, 2, &a, &b).map_err(e2s)?.norm_form().map_err(e2s)?;
        let c = [f.one(), f.neg(&a), f.neg(&b), f.mul(&a, &b)];
        let expected = Form::diagonal(f.clone(), &c, 2).map_err(e2s)?;
        ensure(got.poly() == expected.poly(), || got.format())?;
    }
    Ok("10 quaternion algebras".into())
}

fn chevalley(rng: &mut ChaCha8Rng) -> Check {
    let f = gf(5);
    for (d, n) in [(2u32, 3usize), (3, 4)] {
        for _ in 0..10 {
            let c: Vec<FqElem> = (0..n).map(|_| unit(&f, rng)).collect();
            let r = chevalley_warning_check(&Form::diagonal(f.clone(), &c, d).map_err(e2s)?, 1 << 20).map_err(e2s)?;
            ensure(r.passed && r.count_mod_char == Some(0), || format!("{r:?}"))?;
        }
    }
    Ok("20 forms over F_5".into())
}

fn bounds() -> Check {
    let l = ledger(7, 2, Route::Symbol, 3).map_err(e2s)?;
    ensure(l.total_dim.to_string() == "98" && l.sufficient, || l.summary())?;
    let l = ledger(3, 3, Route::Albert, 4).map_err(e2s)?;
    ensure(l.total_dim.to_string() == "54" && l.sufficient, || l.summary())?;
    ensure(cd_bound(7, 3).map_err(e2s)? == 4 && cd_bound(3, 4).map_err(e2s)? == 4, || "cd bounds".into())?;
    Ok("98, 54; cd_7(C_3) = 4".into())
}

fn milnor(rng: &mut ChaCha8Rng) -> Check {
    let f = LaurentField::new(gf(7), &["t1", "t2"], 5).map_err(e2s)?;
    for _ in 0..20 {
        let slots = (0..4)
            .map(|_| loop {
                let a = f.random_elem(rng);
                if f.is_nonzero(&a) {
                    break a;
                }
            })
            .collect();
        let s = Symbol::new(&f, 3, slots).map_err(e2s)?;
        ensure(s.is_trivial().map_err(e2s)?, || format!("{} nontrivial", s.format()))?;
    }
    let u = f.from_base(f.base().generator());
    ensure(p_class(&f, &u, 3).map_err(e2s)?.last() != Some(&0), || "generator is a cube".into())?;
    let top = Symbol::new(&f, 3, vec![f.var(1).unwrap(), f.var(0).unwrap(), u]).map_err(e2s)?;
    ensure(!top.is_trivial().map_err(e2s)?, || "top symbol trivial".into())?;
    Ok("20 length-4 symbols trivial; (t2, t1, 3) nontrivial".into())
}

fn contracts(seed: u64) -> Check {
    let f = LaurentField::new(gf(3), &["s", "t"], 8).map_err(e2s)?;
    let plan = SearchPlan { trials: 2000, seed, ..SearchPlan::default() };
    for text in ["(t, s, -1)", "(t, -t)", "(t, s)"] {
        let s = Symbol::parse(&f, 2, text).map_err(e2s)?;
        let n = pfister(&f, s.slots()).map_err(e2s)?;
        let sp = split_check(&n, &s, &plan).map_err(e2s)?;
        let ne = neutralize_check(&n, &s, 5, seed).map_err(e2s)?;
        ensure(sp.consistent && ne.consistent, || format!("{text}: {sp:?} {ne:?}"))?;
    }
    Ok("3 Pfister forms".into())
}

fn albert(seed: u64, rng: &mut ChaCha8Rng) -> Check {
    let f = gf(7);
    let d = SymbolAlgebra::build(&f, 3, &f.from_int(3), &f.from_int(5)).map_err(e2s)?;
    let j = CubicNormStructure::build_first_tits(&d, &f.from_int(2)).map_err(e2s)?;
    for _ in 0..20 {
        let x = j.random_elem(rng);
        let n = j.norm(&x);
        ensure(j.sharp(&j.sharp(&x)) == j.scale(&n, &x), || "(x#)# ≠ N(x) x".into())?;
    }
    let out = randomized_search(&j.norm_form().map_err(e2s)?, seed, 20_000, &SearchOptions::default()).map_err(e2s)?;
    let w = out.witness().ok_or("no zero of N_A")?;
    ensure(f.is_zero(&j.norm(w)), || "bad witness".into())?;
    Ok("20 adjoint identities; N_A isotropic".into())
}

fn common_slot() -> Check {
    let f = LaurentField::new(gf(3), &["s", "t"], 8).map_err(e2s)?;
    let plan = SearchPlan::default();
    let pairs = [("t, s, -1", "s, t, s"), ("t, s, -1", "-1, -1, t"), ("s, t, t", "t, -1, s")];
    for (a, b) in pairs {
        let (alpha, beta) = (Symbol::parse(&f, 2, a).map_err(e2s)?, Symbol::parse(&f, 2, b).map_err(e2s)?);
        let out = common_slot_step(&alpha, &beta, &plan).map_err(e2s)?;
        ensure(out.shared_after > out.shared_before && out.shared_after == shared_slots(&out.alpha, &out.beta), || a.into())?;
        let same = out.alpha.is_trivial().map_err(e2s)? == alpha.is_trivial().map_err(e2s)?
            && out.beta.is_trivial().map_err(e2s)? == beta.is_trivial().map_err(e2s)?;
        ensure(same, || format!("({a}), ({b}): class changed"))?;
    }
    Ok("3 length-3 pairs over F_3((s))((t))".into())
}

pub fn verify_all(g: &Global) -> kforms::Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let checks: Vec<(&str, Check)> = vec![
        ("01 reduced norm = determinant", norm_is_det(&mut rng)),
        ("02 characteristic identities", char_identities(&mut rng)),
        ("03 symbol identity", symbol_identity()),
        ("04 quaternion norm shape", quaternion_shape(&mut rng)),
        ("05 Chevalley-Warning", chevalley(&mut rng)),
        ("06 bounds ledger", bounds()),
        ("07 Milnor structure", milnor(&mut rng)),
        ("08 split / neutralize", contracts(g.seed)),
        ("09 Albert structure", albert(g.seed, &mut rng)),
        ("10 common slot", common_slot()),
    ];
    let mut r = Report::new("verify-all", g.seed);
    let mut text = String::new();
    for (name, check) in checks {
        let (ok, detail) = match check {
            Ok(d) => (true, d),
            Err(e) => (false, e),
        };
        text.push_str(&format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" }));
        r = r.verdict(name, Value::from(format!("{}: {detail}", if ok { "pass" } else { "fail" }))).assert(ok);
    }
    Ok(r.with_text(text))
}
