mod common;

use std::time::{Duration, Instant};

use common::{ideal, mono, path_ideal, quasitransverse_pairs, random_pairs, show};
use monres::constructions::{double_star, gen_taylor, minimal_resolution, quasitransverse, taylor};
use monres::dg::minimal_taylor_product;
use monres::koszul::{
    expected_form, golod_injectivity, h1_product_vanishing, in_expected_span, intersection_homology_map,
    is_boundary, is_cycle, kunneth_rescaled, massey_condition,
};
use monres::scarf::{gen_scarf, is_quasiscarf, scarf};
use monres::*;
use rayon::prelude::*;

type Outcome = std::result::Result<String, String>;

fn terms_display(c: &MultigradedComplex, terms: &[Term]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .map(|t| format!("({})·{}·{}", t.coeff, t.monomial, c.element(t.slot).label))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn path_ideal_betti() -> Outcome {
    let start = Instant::now();
    let i = path_ideal();
    let (_, betti) = minimize(&taylor(&i).map_err(e)?);
    let b3 = betti.get(3, &mono(6, "x3*x4*x5*x6"));
    let b4 = betti.get(4, &mono(6, "x1*x2*x3*x4*x5*x6"));
    ensure(b3 == 0, format!("beta_3 at (0,0,1,1,1,1) is {b3}"))?;
    ensure(b4 == 1, format!("beta_4 at (1,1,1,1,1,1) is {b4}"))?;
    let k = koszul_homology(&i).map_err(e)?;
    ensure(k.betti() == betti, "Koszul homology dimensions differ from the Betti table")?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), format!("took {t:?}"))?;
    Ok(format!("totals {:?}, beta_3 = 0, beta_4 = 1, Koszul table agrees, {t:.2?}", betti.totals()))
}

fn path_ideal_product() -> Outcome {
    let i = ideal(4, &["x1*x2", "x2*x3", "x3*x4"]);
    let p = minimal_taylor_product(&i, Field::Rational).map_err(e)?;
    let c = p.complex();
    let s = scarf(&i).map_err(e)?;
    let labels = |c: &MultigradedComplex| c.slots().map(|x| c.element(x).label.clone()).collect::<Vec<_>>();
    ensure(labels(c) == labels(&s), "minimal resolution is not the Scarf complex")?;
    let at = |sub: &[usize]| c.find_label(&Label::Subset(sub.to_vec())).unwrap();
    let terms = p.product_terms(at(&[0]), at(&[2]));
    let find = |sub: &[usize]| terms.iter().find(|t| t.slot == at(sub));
    let (bc, ab) = match (find(&[1, 2]), find(&[0, 1])) {
        (Some(bc), Some(ab)) if terms.len() == 2 => (bc, ab),
        _ => return Err(format!("support is {}", terms_display(c, &terms))),
    };
    ensure(bc.monomial == mono(4, "x1") && ab.monomial == mono(4, "x4"), "monomial parts")?;
    let one = Field::Rational.one();
    let minus = Field::Rational.from_i64(-1);
    ensure(
        (bc.coeff == one && ab.coeff == one) || (bc.coeff == minus && ab.coeff == minus),
        format!("scalars {} and {}", bc.coeff, ab.coeff),
    )?;
    let report = verify_dg(&p);
    ensure(report.is_dg(), report.to_string())?;
    Ok(format!(
        "g_a·g_c = {}, verify_dg all-ok",
        terms_display(c, &terms)
    ))
}

fn split_path_scarf() -> Outcome {
    let split = [ideal(6, &["x1*x2"]), ideal(6, &["x2*x3", "x3*x4", "x4*x5", "x5*x6"])];
    let r = gen_scarf(&split).map_err(e)?;
    ensure(r.ranks() == vec![1, 5, 7, 3], format!("ranks {:?}", r.ranks()))?;
    ensure(r.unique_mdeg_count == 18, format!("unique multidegrees {}", r.unique_mdeg_count))?;
    ensure(r.standard_scarf_count == 15, format!("standard Scarf {}", r.standard_scarf_count))?;
    let extra = mono(6, "x2*x3*x4*x5*x6");
    ensure(r.extra_mdegs == vec![extra], format!("extra {:?}", r.extra_mdegs))?;
    ensure(!r.dropped.is_empty(), "nothing dropped")?;
    let q = is_quasiscarf(&split).map_err(e)?;
    ensure(!q, "reported quasiscarf")?;
    Ok(format!(
        "ranks {:?}, unique 18, standard 15, extra (0,1,1,1,1,1), dropped {}, quasiscarf false",
        r.ranks(),
        r.dropped.len()
    ))
}

fn star_is_minimal(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<bool> {
    let f = minimal_resolution(i, Field::Rational)?;
    let g = minimal_resolution(j, Field::Rational)?;
    Ok(is_minimal(&double_star(&f, &g)?))
}

fn quasitransverse_verdicts() -> Outcome {
    let qt = |a: &MonomialIdeal, b: &MonomialIdeal| quasitransverse(&[a.clone(), b.clone()]).map(|v| v.quasitransverse);
    ensure(qt(&ideal(3, &["x1*x2"]), &ideal(3, &["x2*x3"])).map_err(e)?, "(x1x2),(x2x3) not quasitransverse")?;
    ensure(!qt(&ideal(2, &["x1"]), &ideal(2, &["x1*x2"])).map_err(e)?, "(x1),(x1x2) quasitransverse")?;
    let coprime = [
        (ideal(2, &["x1"]), ideal(2, &["x2"])),
        (ideal(4, &["x1^2", "x1*x2"]), ideal(4, &["x3*x4", "x4^2"])),
        (ideal(5, &["x1*x2", "x2*x3"]), ideal(5, &["x4", "x5^2"])),
    ];
    for (a, b) in &coprime {
        ensure(qt(a, b).map_err(e)?, format!("coprime {} {} rejected", show(a), show(b)))?;
    }
    let mut pairs: Vec<(MonomialIdeal, MonomialIdeal)> = coprime.to_vec();
    pairs.push((ideal(3, &["x1*x2"]), ideal(3, &["x2*x3"])));
    pairs.extend(random_pairs(5, 200));
    pairs.extend(quasitransverse_pairs(7, 20));
    let results: Vec<Result<Option<bool>>> = pairs
        .par_iter()
        .map(|(a, b)| {
            if qt(a, b)? {
                star_is_minimal(a, b).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect();
    let mut checked = 0;
    for ((a, b), r) in pairs.iter().zip(results) {
        match r.map_err(e)? {
            Some(true) => checked += 1,
            Some(false) => return Err(format!("F ** G not minimal on {} {}", show(a), show(b))),
            None => {}
        }
    }
    Ok(format!("fixed verdicts agree; F ** G minimal on all {checked} true verdicts"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let pairs = random_pairs(5, 200);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|(i, j)| {
            let run = || -> Result<Option<String>> {
                let f = minimal_resolution(i, Field::Rational)?;
                let g = minimal_resolution(j, Field::Rational)?;
                let sum = minimize(&gen_taylor(&f, &g)?).1 == minimize(&taylor(&i.sum(j)?)?).1;
                let cap = minimize(&double_star(&f, &g)?).1 == minimize(&taylor(&i.intersection(j)?)?).1;
                Ok((!sum || !cap).then(|| format!("{} {} sum {sum} intersection {cap}", show(i), show(j))))
            };
            run().unwrap_or_else(|err| Some(err.to_string()))
        })
        .collect();
    ensure(bad.is_empty(), bad.join("; "))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    let big = pairs.iter().filter(|(i, j)| i.len() >= 3 && j.len() >= 3).count();
    let vars = pairs.iter().filter(|(i, _)| i.nvars() == 6).count();
    Ok(format!(
        "200 instances ({big} with at least 3 generators on both sides, {vars} in 6 variables), sums and intersections agree, {t:.2?}"
    ))
}

fn dg_suite() -> Outcome {
    let pairs = random_pairs(5, 200);
    let signs: Vec<std::result::Result<i8, String>> = pairs
        .par_iter()
        .map(|(i, j)| {
            let tag = || format!("{} {}", show(i), show(j));
            let f = taylor_product(i).map_err(e)?;
            let g = taylor_product(j).map_err(e)?;
            let gt = gen_taylor_product(&[f.clone(), g.clone()]).map_err(e)?;
            let r = verify_dg(&gt);
            ensure(r.is_dg(), format!("gen_taylor_product on {}: {r}", tag()))?;
            let ds = double_star_product(&f, &g).map_err(|err| format!("double_star_product on {}: {err}", tag()))?;
            let r = verify_dg(&ds.table);
            ensure(r.is_dg(), format!("double_star_product on {}: {r}", tag()))?;
            let a = degree_one_action(&f, &g).map_err(|err| format!("degree_one_action on {}: {err}", tag()))?;
            ensure(a.report.is_ok(), format!("degree_one_action on {}: {}", tag(), a.report))?;
            Ok(ds.third_term_sign)
        })
        .collect();
    let signs: Vec<i8> = signs.into_iter().collect::<std::result::Result<_, _>>()?;
    let plus = signs.iter().filter(|&&s| s == 1).count();
    Ok(format!(
        "200 instances all-ok; third-term sign + chosen {plus} times, - chosen {} times",
        signs.len() - plus
    ))
}

fn convolve(a: &[usize], b: &[usize], shift: usize) -> Vec<usize> {
    let mut out = vec![0; (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in a.iter().enumerate().skip(shift) {
        for (j, y) in b.iter().enumerate().skip(shift) {
            out[i + j - shift] += x * y;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn trimmed(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn koszul_suite() -> Outcome {
    let pairs = quasitransverse_pairs(7, 24);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|(i, j)| {
            let run = || -> Result<Vec<&'static str>> {
                let mut fails = Vec::new();
                let hi = koszul_homology(i)?.totals();
                let hj = koszul_homology(j)?.totals();
                let sum = i.sum(j)?;
                let cap = i.intersection(j)?;
                let k = kunneth_rescaled(i, j)?;
                if !k.map.all_cycles || !k.map.full_rank || !k.map.adapted {
                    fails.push("kunneth map");
                }
                if trimmed(koszul_homology(&sum)?.totals()) != convolve(&hi, &hj, 0) || !k.map.dimension_identity {
                    fails.push("sum dimension identity");
                }
                let m = intersection_homology_map(i, j)?;
                if !m.all_cycles || !m.full_rank || !m.adapted {
                    fails.push("intersection map");
                }
                let mut expect = convolve(&hi, &hj, 1);
                if expect.is_empty() {
                    expect.push(0);
                }
                expect[0] = 1;
                if trimmed(koszul_homology(&cap)?.totals()) != expect || !m.dimension_identity {
                    fails.push("intersection dimension identity");
                }
                if !golod_injectivity(i, j)? {
                    fails.push("golod injectivity");
                }
                if !h1_product_vanishing(&cap)?.vanishes {
                    fails.push("products on R/(I∩J)");
                }
                if !massey_condition(i, j)?.holds {
                    fails.push("massey");
                }
                Ok(fails)
            };
            match run() {
                Ok(f) if f.is_empty() => None,
                Ok(f) => Some(format!("{} {}: {}", show(i), show(j), f.join(", "))),
                Err(err) => Some(format!("{} {}: {err}", show(i), show(j))),
            }
        })
        .collect();
    ensure(bad.is_empty(), bad.join("; "))?;
    let gens: usize = pairs.iter().map(|(i, j)| i.len() + j.len()).sum();
    Ok(format!(
        "{} squarefree quasitransverse pairs with overlapping supports ({gens} generators in all), every check holds",
        pairs.len()
    ))
}

fn negative_controls() -> Outcome {
    let i = ideal(4, &["x1*x3", "x1*x4", "x2*x3", "x2*x4", "x1^2", "x2^2", "x3^2", "x4^2"]);
    let r = expected_form(&i).map_err(e)?;
    ensure(!r.holds, "expected form reported")?;
    let q = Field::Rational;
    let w = KoszulElement::from_terms(
        &i,
        [(q.one(), mono(4, "x1"), vec![1, 2, 3]), (q.from_i64(-1), mono(4, "x2"), vec![0, 2, 3])],
    );
    ensure(is_cycle(&w), format!("{w} is not a cycle"))?;
    ensure(!is_boundary(&w, q), format!("{w} is a boundary"))?;
    ensure(in_expected_span(&w) == Some(false), format!("{w} lies in the expected span"))?;
    let top = mono(4, "x1*x2*x3*x4");
    ensure(r.witnesses.iter().any(|(h, m, _)| *h == 3 && *m == top), "no witness in H_3 at x1x2x3x4")?;
    let ci = h1_product_vanishing(&ideal(2, &["x1", "x2"])).map_err(e)?;
    ensure(!ci.vanishes, "products vanish on (x1, x2)")?;
    let (a, b) = ci.witness.ok_or("no witness for (x1, x2)")?;
    Ok(format!("witness class {w} outside the expected span; on (x1, x2) {a} ∧ {b} survives"))
}

fn displayed_form_discrepancy() -> Outcome {
    let k = kunneth_rescaled(&ideal(3, &["x1*x2"]), &ideal(3, &["x2*x3"])).map_err(e)?;
    let f = k
        .stored_forms
        .iter()
        .find(|f| f.left.0 == 1 && f.right.0 == 1)
        .ok_or("no stored pair in degree (1, 1)")?;
    let gcd = f.gcd_form.as_ref().map_or("undefined".to_string(), |g| g.to_string());
    let line = format!(
        "on {} ∧ {}: termwise-lcm {} (cycle {}), gcd-division {} (cycle {:?}); adapted image {}",
        f.z,
        f.z2,
        if f.termwise.is_zero() { "0".to_string() } else { f.termwise.to_string() },
        f.termwise_is_cycle,
        gcd,
        f.gcd_is_cycle,
        k.map.images.iter().map(|p| p.image.to_string()).collect::<Vec<_>>().join(", "),
    );
    ensure(f.termwise_is_cycle && f.gcd_is_cycle == Some(false), line.clone())?;
    ensure(k.map.is_isomorphism(), format!("map not an isomorphism: {:?}", k.map.failures))?;
    Ok(line)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("path ideal Betti facts", path_ideal_betti),
        ("path ideal product", path_ideal_product),
        ("split path generalized Scarf", split_path_scarf),
        ("quasitransverse verdicts", quasitransverse_verdicts),
        ("oracle equivalence", oracle_equivalence),
        ("DG axiom suite", dg_suite),
        ("Koszul homology suite", koszul_suite),
        ("negative controls", negative_controls),
        ("displayed Künneth form", displayed_form_discrepancy),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{t:.2?}]", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{t:.2?}]", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
