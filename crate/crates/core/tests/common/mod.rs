#![allow(dead_code)]

use std::collections::BTreeSet;

use monres::constructions::quasitransverse;
use monres::{MonomialIdeal, Multidegree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `"x1*x2^2"` in `n` variables.
pub fn mono(n: usize, text: &str) -> Multidegree {
    let mut e = vec![0u32; n];
    for factor in text.split('*') {
        let (var, exp) = factor.split_once('^').unwrap_or((factor, "1"));
        let i: usize = var.trim().trim_start_matches('x').parse().unwrap();
        e[i - 1] += exp.trim().parse::<u32>().unwrap();
    }
    Multidegree::new(e)
}

pub fn ideal(n: usize, gens: &[&str]) -> MonomialIdeal {
    MonomialIdeal::new(n, gens.iter().map(|g| mono(n, g))).unwrap()
}

pub fn path_ideal() -> MonomialIdeal {
    ideal(6, &["x1*x2", "x2*x3", "x3*x4", "x4*x5", "x5*x6"])
}

pub fn show(i: &MonomialIdeal) -> String {
    let g: Vec<String> = i.gens().iter().map(|m| m.to_string()).collect();
    format!("({})", g.join(", "))
}

/// Aims for a uniformly drawn number of minimal generators, settling for
/// fewer when the draws keep collapsing.
fn random_ideal(rng: &mut ChaCha8Rng, n: usize, max_gens: usize, max_exp: u32, vars: &[usize]) -> MonomialIdeal {
    let target = rng.gen_range(1..=max_gens);
    for attempt in 0.. {
        let gens: Vec<Multidegree> = (0..target)
            .map(|_| {
                let mut e = vec![0; n];
                for &v in vars {
                    e[v] = rng.gen_range(0..=max_exp);
                }
                Multidegree::new(e)
            })
            .filter(|m| !m.is_one())
            .collect();
        if let Ok(i) = MonomialIdeal::new(n, gens) {
            if !i.is_zero() && (i.len() == target || attempt >= 50) {
                return i;
            }
        }
    }
    unreachable!()
}

/// Pairs with `n ≤ 6`, at most four generators each, exponents at most 2.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(MonomialIdeal, MonomialIdeal)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let vars: Vec<usize> = (0..n).collect();
            let i = random_ideal(&mut rng, n, 4, 2, &vars);
            let j = random_ideal(&mut rng, n, 4, 2, &vars);
            (i, j)
        })
        .collect()
}

/// Squarefree quasitransverse pairs whose supports meet. Generators of `I`
/// live below a split point and those of `J` above it, both allowed one
/// shared variable; uniform sampling almost never passes the test.
pub fn quasitransverse_pairs(seed: u64, count: usize) -> Vec<(MonomialIdeal, MonomialIdeal)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(4..=6);
        let shared = rng.gen_range(0..n);
        let split = rng.gen_range(1..n);
        let left: Vec<usize> = (0..n).filter(|&v| v == shared || v < split).collect();
        let right: Vec<usize> = (0..n).filter(|&v| v == shared || v >= split).collect();
        let i = random_ideal(&mut rng, n, 4, 1, &left);
        let j = random_ideal(&mut rng, n, 4, 1, &right);
        if i.len() + j.len() < 3 {
            continue;
        }
        let si: BTreeSet<usize> = i.gens().iter().flat_map(|g| g.support()).collect();
        if !j.gens().iter().flat_map(|g| g.support()).any(|v| si.contains(&v)) {
            continue;
        }
        if quasitransverse(&[i.clone(), j.clone()]).unwrap().quasitransverse {
            out.push((i, j));
        }
    }
    out
}
