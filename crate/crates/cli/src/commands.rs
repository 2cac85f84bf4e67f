use std::fmt::Write as _;

use monres::constructions::{
    double_star_fold, gen_taylor_fold, minimal_resolution, quasitransverse_over, resolves, taylor_over,
};
use monres::dg::{minimal_taylor_product, taylor_product_over};
use monres::koszul::{
    expected_form_over, golod_injectivity_over, h1_product_vanishing_over, intersection_homology_map_over,
    koszul_homology_over, kunneth_rescaled_over, massey_condition_over, MapReport,
};
use monres::scarf::{gen_scarf_over, is_quasiscarf_over, scarf_over};
use monres::{
    double_star_product, degree_one_action, gen_taylor_product, minimize, verify_dg, BettiTable, Error, Field,
    MonomialIdeal, MultigradedComplex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::json::export;
use crate::parse::IdealFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Betti,
    Taylor,
    Gentaylor,
    Doublestar,
    Scarf,
    Genscarf,
    Quasitransverse,
    Quasiscarf,
    Dgverify,
    Koszul,
    Expectedform,
    Golod,
    Massey,
    Kunneth,
    /// Seeded self-check of the resolution pipelines; needs no input file.
    Selftest,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub field: Field,
    pub multi: bool,
    pub seed: u64,
    pub max_hdeg: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The computation ran but its hypotheses do not hold.
    HypothesisFailure,
}

#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub json: Option<String>,
    pub status: Status,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("self-test failed: {0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Hypothesis(_) => 2,
            _ => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesesUnmet(_)
            | Error::NotSquarefree(_)
            | Error::SharedGenerator { .. }
            | Error::NotSimplicial(_)
            | Error::Unverified(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Run = Result<Output, CliError>;

fn ok(text: String, json: Option<String>) -> Run {
    Ok(Output { text, json, status: Status::Ok })
}

fn value_json(v: Value) -> Option<String> {
    Some(serde_json::to_string_pretty(&v).expect("report serializes"))
}

fn show(i: &MonomialIdeal) -> String {
    let g: Vec<String> = i.gens().iter().map(|m| m.to_string()).collect();
    format!("({})", g.join(", "))
}

fn ranks(c: &MultigradedComplex) -> String {
    c.ranks().iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn exps(m: &monres::Multidegree) -> String {
    let e: Vec<String> = m.exps().iter().map(u32::to_string).collect();
    format!("({})", e.join(","))
}

struct Inputs<'a> {
    file: &'a IdealFile,
    names: &'a [String],
}

impl Inputs<'_> {
    fn lookup(&self, name: &str) -> Result<MonomialIdeal, CliError> {
        if let Some(i) = self.file.ideal(name) {
            return Ok(i.clone());
        }
        if let Some(parts) = self.file.split(name) {
            return parts
                .iter()
                .skip(1)
                .try_fold(parts[0].clone(), |acc, p| acc.sum(p))
                .map_err(CliError::from);
        }
        Err(CliError::Input(format!("no ideal or splitting named `{name}`")))
    }

    fn one(&self) -> Result<MonomialIdeal, CliError> {
        match self.names {
            [n] => self.lookup(n),
            _ => Err(CliError::Input(format!("expected one ideal name, got {}", self.names.len()))),
        }
    }

    fn family(&self) -> Result<Vec<MonomialIdeal>, CliError> {
        match self.names {
            [] => Err(CliError::Input("expected a splitting or ideal names".into())),
            [n] if self.file.ideal(n).is_none() => self
                .file
                .split(n)
                .map(|p| p.into_iter().cloned().collect())
                .ok_or_else(|| CliError::Input(format!("no splitting named `{n}`"))),
            names => names.iter().map(|n| self.lookup(n)).collect(),
        }
    }

    fn pair(&self) -> Result<(MonomialIdeal, MonomialIdeal), CliError> {
        let f = self.family()?;
        match <[MonomialIdeal; 2]>::try_from(f) {
            Ok([a, b]) => Ok((a, b)),
            Err(f) => Err(CliError::Input(format!("expected two ideals, got {}", f.len()))),
        }
    }
}

fn fold_ideals(ideals: &[MonomialIdeal], op: impl Fn(&MonomialIdeal, &MonomialIdeal) -> monres::Result<MonomialIdeal>) -> Result<MonomialIdeal, CliError> {
    ideals[1..]
        .iter()
        .try_fold(ideals[0].clone(), |acc, i| op(&acc, i))
        .map_err(CliError::from)
}

fn cap_hdeg(c: MultigradedComplex, max: Option<usize>) -> MultigradedComplex {
    match max {
        Some(m) if m + 1 < c.len() => c.restrict(|e| e.hdeg <= m),
        _ => c,
    }
}

const TAYLOR_LIMIT: usize = 20;

pub fn run(cmd: Command, file: Option<&IdealFile>, names: &[String], opts: &Options) -> Run {
    if cmd == Command::Selftest {
        return selftest(opts);
    }
    let file = file.ok_or_else(|| CliError::Input("an ideal file is required".into()))?;
    let inp = Inputs { file, names };
    let field = opts.field;
    match cmd {
        Command::Betti => {
            let i = inp.one()?;
            let c = minimal_resolution(&i, field)?;
            let b = BettiTable::from_complex(&c);
            let mut t = format!("betti numbers of R/I, I = {}\n{}", show(&i), b.render());
            if opts.multi {
                t.push_str("multigraded:\n");
                t.push_str(&b.render_multigraded());
            }
            ok(t, Some(export(&c)))
        }
        Command::Taylor => {
            let i = inp.one()?;
            if i.len() > TAYLOR_LIMIT {
                return Err(CliError::Input(format!("{} generators is too many for the Taylor complex", i.len())));
            }
            let c = cap_hdeg(taylor_over(&i, field)?, opts.max_hdeg);
            let mut t = format!("ranks: {}\n", ranks(&c));
            if opts.multi {
                for s in c.slots() {
                    let e = c.element(s);
                    let _ = writeln!(t, "{} {} {}", e.hdeg, e.label, e.mdeg);
                }
            }
            ok(t, Some(export(&c)))
        }
        Command::Gentaylor | Command::Doublestar => {
            let fam = inp.family()?;
            let res: Vec<MultigradedComplex> =
                fam.iter().map(|i| minimal_resolution(i, field)).collect::<monres::Result<_>>()?;
            let (c, target, what) = if cmd == Command::Gentaylor {
                (gen_taylor_fold(&res)?, fold_ideals(&fam, MonomialIdeal::sum)?, "sum")
            } else {
                if fam.len() < 2 {
                    return Err(CliError::Input("doublestar needs at least two ideals".into()));
                }
                (double_star_fold(&res)?, fold_ideals(&fam, MonomialIdeal::intersection)?, "intersection")
            };
            let r = resolves(&c, &target);
            let betti = minimize(&c).1;
            let mut t = format!("ranks: {}\n", ranks(&c));
            let _ = writeln!(t, "minimal: {}", monres::is_minimal(&c));
            let _ = writeln!(t, "resolves the {what} {}: {}", show(&target), r.resolves);
            let _ = write!(t, "betti numbers after minimizing:\n{}", betti.render());
            if opts.multi {
                t.push_str(&betti.render_multigraded());
            }
            ok(t, Some(export(&cap_hdeg(c, opts.max_hdeg))))
        }
        Command::Scarf => {
            let i = inp.one()?;
            let c = scarf_over(&i, field)?;
            let r = resolves(&c, &i);
            let t = format!("ranks: {}\nresolves: {}\n", ranks(&c), r.resolves);
            ok(t, Some(export(&c)))
        }
        Command::Genscarf => {
            let fam = inp.family()?;
            let r = gen_scarf_over(&fam, field)?;
            let q = is_quasiscarf_over(&fam, field)?;
            let mut t = format!("ranks: {}\n", ranks(&r.complex));
            let _ = writeln!(t, "unique multidegrees: {} (standard Scarf: {})", r.unique_mdeg_count, r.standard_scarf_count);
            let list = |ms: &[monres::Multidegree]| {
                if ms.is_empty() {
                    "none".to_string()
                } else {
                    ms.iter().map(|m| format!("{m} {}", exps(m))).collect::<Vec<_>>().join(", ")
                }
            };
            let _ = writeln!(t, "extra multidegrees: {}", list(&r.extra_mdegs));
            let _ = writeln!(t, "missing standard multidegrees: {}", list(&r.missing_standard_mdegs));
            let _ = writeln!(t, "dropped: {}", r.dropped.len());
            for e in &r.dropped {
                let _ = writeln!(t, "  {} in degree {} at {}", e.label, e.hdeg, e.mdeg);
            }
            let _ = writeln!(t, "quasiscarf: {q}");
            ok(t, Some(export(&r.complex)))
        }
        Command::Quasitransverse => {
            let fam = inp.family()?;
            let v = quasitransverse_over(&fam, field)?;
            let mut t = format!("{}\n", v.quasitransverse);
            if let Some(w) = &v.witness {
                let l = |ls: &[monres::Label]| ls.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" * ");
                let _ = writeln!(t, "cover: {} < {} in total degree {}", l(&w.lower), l(&w.upper), w.degree);
            }
            let json = json!({
                "quasitransverse": v.quasitransverse,
                "minimal_route": v.minimal_route,
                "poset_route": v.poset_route,
            });
            ok(t, value_json(json))
        }
        Command::Quasiscarf => {
            let q = is_quasiscarf_over(&inp.family()?, field)?;
            ok(format!("{q}\n"), value_json(json!({ "quasiscarf": q })))
        }
        Command::Dgverify => dgverify(&inp, field),
        Command::Koszul => {
            let i = inp.one()?;
            let h = koszul_homology_over(&i, field)?;
            let keep = |d: usize| opts.max_hdeg.is_none_or(|m| d <= m);
            let mut t = String::new();
            for (d, dim) in h.totals().iter().enumerate().filter(|(d, _)| keep(*d)) {
                let _ = writeln!(t, "H_{d}: {dim}");
            }
            let mut strata = Vec::new();
            for ((d, m), reps) in h.strata().filter(|((d, _), _)| keep(*d)) {
                let reps: Vec<String> = reps.iter().map(|z| z.to_string()).collect();
                if opts.multi {
                    let _ = writeln!(t, "H_{d} {} {m}: {}", exps(m), reps.join(", "));
                }
                strata.push(json!({ "hdeg": d, "mdeg": m.exps(), "reps": reps }));
            }
            let h1 = h1_product_vanishing_over(&i, field)?;
            let _ = writeln!(t, "products of positive-degree classes vanish: {}", h1.vanishes);
            if let Some((a, b)) = &h1.witness {
                let _ = writeln!(t, "  surviving product: {a} ∧ {b}");
            }
            ok(t, value_json(json!({ "strata": strata, "products_vanish": h1.vanishes })))
        }
        Command::Expectedform => {
            let i = inp.one()?;
            let r = expected_form_over(&i, field)?;
            let mut t = format!("expected form: {}\n", r.holds);
            for (d, m, z) in &r.witnesses {
                let _ = writeln!(t, "  class outside the expected span: H_{d} at {m}: {z}");
            }
            ok(t, value_json(json!({ "expected_form": r.holds, "witnesses": r.witnesses.len() })))
        }
        Command::Golod => {
            let (i, j) = inp.pair()?;
            let qt = quasitransverse_over(&[i.clone(), j.clone()], field)?.quasitransverse;
            let inj = golod_injectivity_over(&i, &j, field)?;
            let cap = i.intersection(&j)?;
            let h1 = h1_product_vanishing_over(&cap, field)?;
            let mut t = format!("quasitransverse: {qt}\ninjective on positive degrees: {inj}\n");
            let _ = writeln!(t, "products vanish on R/(I∩J): {}", h1.vanishes);
            if let Some((a, b)) = &h1.witness {
                let _ = writeln!(t, "  surviving product: {a} ∧ {b}");
            }
            let json = value_json(json!({ "quasitransverse": qt, "injective": inj, "products_vanish": h1.vanishes }));
            if !qt {
                t.push_str("no Golod claim: the pair is not quasitransverse\n");
                return Ok(Output { text: t, json, status: Status::HypothesisFailure });
            }
            ok(t, json)
        }
        Command::Massey => {
            let (i, j) = inp.pair()?;
            let r = massey_condition_over(&i, &j, field)?;
            let mut t = format!("condition (*): {}\nbasis elements: {}\n", r.holds, r.basis.len());
            if let Some((a, b)) = r.witness {
                let _ = writeln!(t, "  fails on {} and {}", r.basis[a].class, r.basis[b].class);
            }
            ok(t, value_json(json!({ "holds": r.holds, "basis": r.basis.len() })))
        }
        Command::Kunneth => {
            let (i, j) = inp.pair()?;
            let k = kunneth_rescaled_over(&i, &j, field)?;
            let m = intersection_homology_map_over(&i, &j, field)?;
            let mut t = String::new();
            map_lines(&mut t, "H(R/I) ⊗ H(R/J) → H(R/(I+J))", &k.map, opts.multi);
            map_lines(&mut t, "H_{≥1}(R/I) ⊗ H_{≥1}(R/J) → H(R/(I∩J))", &m, opts.multi);
            t.push_str("stored representatives, both rescalings:\n");
            for f in k.stored_forms.iter().filter(|f| f.left.0 > 0 && f.right.0 > 0) {
                let gcd = f.gcd_form.as_ref().map_or("undefined".to_string(), |g| g.to_string());
                let _ = writeln!(
                    t,
                    "  {} ∧ {}: termwise {} (cycle {}), gcd {} (cycle {})",
                    f.z,
                    f.z2,
                    f.termwise,
                    f.termwise_is_cycle,
                    gcd,
                    f.gcd_is_cycle.map_or("-".to_string(), |b| b.to_string())
                );
            }
            let json = value_json(json!({
                "kunneth_isomorphism": k.map.is_isomorphism(),
                "kunneth_dimensions": k.map.dimension_identity,
                "intersection_isomorphism": m.is_isomorphism(),
                "intersection_dimensions": m.dimension_identity,
            }));
            ok(t, json)
        }
        Command::Selftest => unreachable!(),
    }
}

fn map_lines(t: &mut String, title: &str, m: &MapReport, multi: bool) {
    let _ = writeln!(t, "{title}");
    let _ = writeln!(t, "  isomorphism: {}", m.is_isomorphism());
    let _ = writeln!(t, "  images are cycles: {}", m.all_cycles);
    let _ = writeln!(t, "  dimension identity: {}", m.dimension_identity);
    if multi {
        for p in &m.images {
            let _ = writeln!(t, "  {} ⊗ {} ↦ {}", p.z, p.z2, p.image);
        }
    }
    for f in &m.failures {
        let _ = writeln!(t, "  failure: {f}");
    }
}

fn dgverify(inp: &Inputs, field: Field) -> Run {
    let fam = inp.family()?;
    let mut t = String::new();
    let mut verdicts = serde_json::Map::new();
    if let [i] = fam.as_slice() {
        let r = verify_dg(&taylor_product_over(i, field)?);
        let _ = writeln!(t, "taylor product:\n{r}");
        verdicts.insert("taylor".into(), r.is_dg().into());
        let r = verify_dg(&minimal_taylor_product(i, field)?);
        let _ = writeln!(t, "transferred product on the minimal resolution:\n{r}");
        verdicts.insert("minimal".into(), r.is_dg().into());
        return ok(t, value_json(Value::Object(verdicts)));
    }
    let tables = fam.iter().map(|i| taylor_product_over(i, field)).collect::<monres::Result<Vec<_>>>()?;
    let r = verify_dg(&gen_taylor_product(&tables)?);
    let _ = writeln!(t, "generalized taylor product:\n{r}");
    verdicts.insert("generalized_taylor".into(), r.is_dg().into());
    if let [f, h] = tables.as_slice() {
        let d = double_star_product(f, h)?;
        let _ = writeln!(t, "double star product, third-term sign {:+}:\n{}", d.third_term_sign, d.report);
        verdicts.insert("double_star".into(), d.report.is_dg().into());
        verdicts.insert("third_term_sign".into(), d.third_term_sign.into());
        let a = degree_one_action(f, h)?;
        let _ = writeln!(t, "degree-one action:\n{}", a.report);
        verdicts.insert("degree_one".into(), a.report.is_ok().into());
    }
    ok(t, value_json(Value::Object(verdicts)))
}

fn random_ideal(rng: &mut ChaCha8Rng, n: usize) -> MonomialIdeal {
    loop {
        let gens: Vec<monres::Multidegree> = (0..rng.gen_range(1..=4))
            .map(|_| monres::Multidegree::new((0..n).map(|_| rng.gen_range(0..=2)).collect()))
            .filter(|m| !m.is_one())
            .collect();
        if let Ok(i) = MonomialIdeal::new(n, gens) {
            if !i.is_zero() {
                return i;
            }
        }
    }
}

const SELFTEST_COUNT: usize = 100;

fn selftest(opts: &Options) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pairs: Vec<(MonomialIdeal, MonomialIdeal)> = (0..SELFTEST_COUNT)
        .map(|_| {
            let n = rng.gen_range(2..=5);
            (random_ideal(&mut rng, n), random_ideal(&mut rng, n))
        })
        .collect();
    let field = opts.field;
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|(i, j)| {
            let check = || -> monres::Result<bool> {
                let f = minimal_resolution(i, field)?;
                let g = minimal_resolution(j, field)?;
                let sum = minimize(&monres::constructions::gen_taylor(&f, &g)?).1
                    == minimize(&taylor_over(&i.sum(j)?, field)?).1;
                let cap = minimize(&monres::constructions::double_star(&f, &g)?).1
                    == minimize(&taylor_over(&i.intersection(j)?, field)?).1;
                Ok(sum && cap)
            };
            match check() {
                Ok(true) => None,
                Ok(false) => Some(format!("{} {}", show(i), show(j))),
                Err(e) => Some(format!("{} {}: {e}", show(i), show(j))),
            }
        })
        .collect();
    if !bad.is_empty() {
        return Err(CliError::Failure(bad.join("; ")));
    }
    ok(
        format!("{SELFTEST_COUNT} random pairs, seed {}: sums and intersections match their Taylor resolutions\n", opts.seed),
        None,
    )
}
