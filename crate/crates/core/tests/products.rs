mod common;

use common::{ideal, mono, quasitransverse_pairs};
use monres::constructions::{gen_taylor, unit_embedding};
use monres::dg::{gen_taylor_product_pair, minimal_taylor_product};
use monres::*;

fn labels(c: &MultigradedComplex, parts: &[&Label]) -> Slot {
    let l = parts[1..].iter().fold(parts[0].clone(), |acc, p| Label::star(&acc, p));
    c.find_label(&l).unwrap_or_else(|| panic!("no basis element {l}"))
}

fn unit_label(c: &MultigradedComplex) -> Label {
    c.element(Slot::new(0, 0)).label.clone()
}

fn sub(v: &[usize]) -> Label {
    Label::Subset(v.to_vec())
}

#[test]
fn path_split_generalized_product() {
    let s1 = minimal_taylor_product(&ideal(6, &["x1*x2", "x2*x3", "x3*x4"]), Field::Rational).unwrap();
    let s2 = minimal_taylor_product(&ideal(6, &["x4*x5", "x5*x6"]), Field::Rational).unwrap();
    let p = gen_taylor_product(&[s1.clone(), s2.clone()]).unwrap();
    assert!(verify_dg(&p).is_dg(), "{}", verify_dg(&p));
    let c = p.complex();
    let one = unit_label(s2.complex());
    let u = labels(c, &[&sub(&[0]), &one]);
    let v = labels(c, &[&sub(&[2]), &sub(&[0, 1])]);
    let terms = p.product_terms(u, v);
    assert_eq!(terms.len(), 2);
    let abde = labels(c, &[&sub(&[0, 1]), &sub(&[0, 1])]);
    let bcde = labels(c, &[&sub(&[1, 2]), &sub(&[0, 1])]);
    let get = |s: Slot| terms.iter().find(|t| t.slot == s).unwrap();
    assert_eq!(get(abde).monomial, Multidegree::zero(6));
    assert_eq!(get(bcde).monomial, mono(6, "x1"));
    let (x, y) = (&get(abde).coeff, &get(bcde).coeff);
    assert!(x.is_one() || (-x).is_one());
    assert_eq!(x, y);
}

#[test]
fn path_split_unique_multidegrees() {
    let f = minimal_taylor_product(&ideal(6, &["x1*x2", "x2*x3", "x3*x4"]), Field::Rational).unwrap();
    let g = minimal_taylor_product(&ideal(6, &["x4*x5", "x5*x6"]), Field::Rational).unwrap();
    let c = gen_taylor(f.complex(), g.complex()).unwrap();
    let first = mono(6, "x3*x4*x5*x6");
    let second = mono(6, "x1*x2*x3*x4*x5*x6");
    let at = |h: usize, m: &Multidegree| c.slots().filter(|&s| s.hdeg == h && c.mdeg(s) == m).collect::<Vec<_>>();
    assert_eq!(at(3, &first), vec![labels(&c, &[&sub(&[2]), &sub(&[0, 1])])]);
    assert_eq!(at(4, &second), vec![labels(&c, &[&sub(&[0, 1]), &sub(&[0, 1])])]);
    // Unique only within its degree: g_c * g_e sits one degree lower.
    assert_eq!(at(2, &first), vec![labels(&c, &[&sub(&[2]), &sub(&[1])])]);
    for h in [0, 1, 2, 3, 5] {
        assert!(at(h, &second).is_empty());
    }
    let betti = minimize(&c).1;
    assert_eq!(betti.get(3, &first), 0);
    assert_eq!(betti.get(4, &second), 1);
}

#[test]
fn unit_embedding_recovers_the_left_table() {
    let cases = [
        (ideal(4, &["x1*x2", "x2*x3"]), ideal(4, &["x3*x4", "x1^2"])),
        (ideal(5, &["x1*x2", "x2^2*x3", "x3*x4"]), ideal(5, &["x4*x5", "x5^2"])),
    ];
    for (i, j) in cases {
        let f = taylor_product(&i).unwrap();
        let g = taylor_product(&j).unwrap();
        let (p, index) = gen_taylor_product_pair(&f, &g).unwrap();
        let emb = unit_embedding(&index, f.complex(), Slot::new(0, 0));
        let image = |s: Slot| emb[s.hdeg][s.pos];
        for u in f.complex().slots() {
            for v in f.complex().slots() {
                let want: Vec<(usize, Scalar)> = f
                    .get(u, v)
                    .iter()
                    .map(|(q, c)| (image(Slot::new(u.hdeg + v.hdeg, *q)).pos, c.clone()))
                    .collect();
                let mut got = p.get(image(u), image(v)).to_vec();
                let mut want = want;
                got.sort_by_key(|x| x.0);
                want.sort_by_key(|x| x.0);
                assert_eq!(got, want);
            }
        }
    }
}

#[test]
fn star_of_squarefree_elements_is_squarefree_part_of_product() {
    let ideals = [
        ideal(6, &["x1*x2", "x2*x3"]),
        ideal(6, &["x3*x4", "x2*x5"]),
        ideal(6, &["x5*x6", "x1*x6"]),
    ];
    let tables: Vec<ProductTable> = ideals.iter().map(|i| taylor_product(i).unwrap()).collect();
    let p = gen_taylor_product(&tables).unwrap();
    let c = p.complex();
    let ones: Vec<Label> = tables.iter().map(|t| unit_label(t.complex())).collect();
    let faces = [vec![], vec![0], vec![1], vec![0, 1]];
    for a in &faces {
        for b in &faces {
            for d in &faces {
                let embed = |k: usize, face: &[usize]| {
                    let mut parts: Vec<Label> = ones.clone();
                    if !face.is_empty() {
                        parts[k] = sub(face);
                    }
                    labels(c, &parts.iter().collect::<Vec<_>>())
                };
                let (fa, fb, fd) = (embed(0, a), embed(1, b), embed(2, d));
                let mut prod = Vec::new();
                for t in p.product_terms(fa, fb) {
                    for s in p.product_terms(t.slot, fd) {
                        prod.push(Term { slot: s.slot, monomial: s.monomial.mul(&t.monomial), coeff: &s.coeff * &t.coeff });
                    }
                }
                let sq = dg::squarefree_part(c, &prod).unwrap();
                let parts: Vec<Label> = [a, b, d]
                    .iter()
                    .zip(&ones)
                    .map(|(f, one)| if f.is_empty() { one.clone() } else { sub(f) })
                    .collect();
                let star = labels(c, &parts.iter().collect::<Vec<_>>());
                assert_eq!(sq.len(), 1);
                assert_eq!(sq[0].slot, star);
                assert!(sq[0].monomial.is_one());
                assert!(sq[0].coeff.is_one() || (-&sq[0].coeff).is_one());
            }
        }
    }
}

#[test]
fn coprime_tensor_table_is_dg() {
    let i = ideal(5, &["x1^2", "x1*x2", "x2^2"]);
    let j = ideal(5, &["x3*x4", "x4*x5", "x5^2"]);
    let p = gen_taylor_product(&[taylor_product(&i).unwrap(), taylor_product(&j).unwrap()]).unwrap();
    let r = verify_dg(&p);
    assert!(r.is_dg(), "{r}");
}

#[test]
fn double_star_products_on_quasitransverse_pairs() {
    for (i, j) in quasitransverse_pairs(11, 8) {
        let d = double_star_product(&taylor_product(&i).unwrap(), &taylor_product(&j).unwrap()).unwrap();
        assert!(d.report.is_dg(), "{}", d.report);
        assert_eq!(d.third_term_sign, 1);
        let a = degree_one_action(&taylor_product(&i).unwrap(), &taylor_product(&j).unwrap()).unwrap();
        assert!(a.report.is_ok(), "{}", a.report);
    }
}

#[test]
fn flipped_sign_is_caught() {
    let p = taylor_product(&ideal(3, &["x1*x2", "x2*x3", "x1*x3"])).unwrap();
    let c = p.complex();
    let u = c.find_label(&sub(&[0])).unwrap();
    let v = c.find_label(&sub(&[1])).unwrap();
    let r = verify_dg(&p.with_negated(u, v));
    assert!(!r.is_dg());
    assert!(r.commutativity.witness.is_some() || r.leibniz.witness.is_some());
}
