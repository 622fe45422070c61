use std::path::Path;

use padic_core::diffquot::{
    holder_scan, identity_suite, phin, phin_limit, stepanoff_scan, taylor_eval, LimitSchedule, QuotientPoint,
    SymbolicFunction,
};
use padic_core::haar::{ap_limit, decompose_series, density_at, GridFunction, ResolutionRule};
use padic_core::lipschitz::{chebyshev_radius, decompose_ej, extend_to_grid, verify_extension};
use padic_core::magnitude::{format_rational, Magnitude};
use padic_core::padic::vdp_dense_sequence;
use padic_core::whitney::{verify_whitney, whitney_extend, CosetUnion, JetField, WhitneyExtension, WhitneyParams};
use padic_core::{Ball, Error, PAdicNumber, PAdicVector, PointFunction, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{self, check_prime};
use crate::{FnArgs, GridArgs, ScanVerb, Verb, WhitneyParamArgs, WhitneyVerb};

/// Largest dense-sequence prefix `decompose` will build.
const SEQUENCE_CAP: u128 = 1_000_000;

pub struct Output {
    pub body: String,
    pub summary: Vec<String>,
    pub violation: Option<String>,
}

impl Output {
    fn json<T: Serialize>(report: &T, summary: Vec<String>) -> Result<Self> {
        let mut body = serde_json::to_string_pretty(report).map_err(|e| Error::Invalid(e.to_string()))?;
        body.push('\n');
        Ok(Output { body, summary, violation: None })
    }

    fn violated_if(mut self, bad: bool, why: impl FnOnce() -> String) -> Self {
        if bad {
            self.violation = Some(why());
        }
        self
    }
}

pub fn emit(out: &Output, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, &out.body),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.body.as_bytes())
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap { .. } => 3,
        Error::Parse { .. }
        | Error::NotPrime(_)
        | Error::Invalid(_)
        | Error::DimensionMismatch { .. }
        | Error::PrimeMismatch(..)
        | Error::PrecisionTooLarge { .. }
        | Error::Precondition(_)
        | Error::Uncertified => 2,
        _ => 1,
    }
}

fn function(a: &FnArgs, prec: u32) -> Result<SymbolicFunction> {
    SymbolicFunction::parse_with_prec(check_prime(a.p)?, &a.f, a.m, prec)
}

fn grid_domain(g: &GridArgs, p: u32, m: usize, prec: u32) -> Result<Ball> {
    let b = match &g.domain {
        Some(s) => input::ball(p, s, prec)?,
        None => Ball::origin(p, m, 0),
    };
    if b.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.dim() });
    }
    Ok(b)
}

fn rule(s: &str) -> Result<ResolutionRule> {
    match input::int_list(s)?.as_slice() {
        [a, b] => Ok(ResolutionRule::new(*a, *b)),
        _ => Err(Error::Parse { offset: 0, message: "rule is 'scale,offset'".into() }),
    }
}

fn show(v: &PAdicVector) -> String {
    let parts: Vec<String> =
        v.coords().iter().map(|c| input::integer_view(c).unwrap_or_else(|| c.to_string())).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

fn valued(v: &PAdicVector) -> Value {
    json!({
        "value": v,
        "integer": v.coords().iter().map(input::integer_view).collect::<Vec<_>>(),
    })
}

fn whitney_params(a: &WhitneyParamArgs) -> WhitneyParams {
    WhitneyParams { s0: a.s0, s1: a.s1, s2: a.s2 }
}

fn load_jets(path: &Path) -> Result<JetField> {
    input::json(&input::read_file(path)?)
}

fn extension(jets: &JetField, grid: &GridArgs, params: &WhitneyParamArgs, prec: u32) -> Result<WhitneyExtension> {
    let domain = grid_domain(grid, jets.prime(), jets.dim_in(), prec)?;
    whitney_extend(jets, &domain, grid.k, &whitney_params(params))
}

pub fn run(verb: &Verb, prec: u32) -> Result<Output> {
    match verb {
        Verb::Eval { f, x } => {
            let g = function(f, prec)?;
            let rows = x
                .iter()
                .map(|s| {
                    let pt = input::point(g.prime(), s, prec)?;
                    let v = g.eval(&pt)?;
                    Ok((json!({"x": pt, "f": valued(&v)}), format!("f({s}) = {}", show(&v))))
                })
                .collect::<Result<Vec<_>>>()?;
            let (report, summary): (Vec<Value>, Vec<String>) = rows.into_iter().unzip();
            Output::json(&report, summary)
        }
        Verb::Quotient { f, x, v, t, limit } => {
            let g = function(f, prec)?;
            let p = g.prime();
            let x = input::point(p, x, prec)?;
            let vs = v.iter().map(|s| input::point(p, s, prec)).collect::<Result<Vec<_>>>()?;
            if *limit {
                if !t.is_empty() {
                    return Err(Error::Invalid("--limit takes no --t".into()));
                }
                let r = phin_limit(&g, &x, &vs, &LimitSchedule::default())?;
                let summary = vec![format!("limit of order {} = {} (mod p^{})", vs.len(), show(&r.value), r.agreed_abs_prec)];
                return Output::json(&json!({"order": vs.len(), "limit": r, "integer": valued(&r.value)["integer"]}), summary);
            }
            if t.len() != vs.len() {
                return Err(Error::Invalid(format!("{} directions but {} increments", vs.len(), t.len())));
            }
            let ts = t.iter().map(|s| input::scalar(p, s, prec)).collect::<Result<Vec<PAdicNumber>>>()?;
            let q = QuotientPoint::new(x, vs, ts)?;
            let val = phin(&g, &q)?;
            let summary = vec![format!("quotient of order {} = {}", q.order(), show(&val))];
            Output::json(&json!({"order": q.order(), "quotient": valued(&val)}), summary)
        }
        Verb::Taylor { f, n, x, y } => {
            let g = function(f, prec)?;
            let p = g.prime();
            let r = taylor_eval(&g, *n, &input::point(p, y, prec)?, &input::point(p, x, prec)?, &LimitSchedule::default())?;
            let summary = vec![format!("residual {} (norm {})", show(&r.residual), r.residual.magnitude())];
            Output::json(&r, summary)
        }
        Verb::Density { p, set, at, j, rule: rl, theta, csv } => {
            let p = check_prime(*p)?;
            let s = input::set(p, set, prec)?;
            let x = input::point(p, at, prec)?;
            let d = density_at(|z| s.contains(z), &x, &input::int_list(j)?, rule(rl)?, &input::rational(theta)?)?;
            let ratios: Vec<String> = d.ratios.iter().map(|(_, r)| format_rational(r)).collect();
            let summary = vec![format!("ratios {} ({:?})", ratios.join(", "), d.verdict)];
            if *csv {
                return Ok(Output { body: d.to_csv(), summary, violation: None });
            }
            Output::json(&d, summary)
        }
        Verb::Aplimit { f, at, y, eps, j, rule: rl, theta } => {
            let g = function(f, prec)?;
            let p = g.prime();
            let r = ap_limit(
                &g,
                &input::point(p, at, prec)?,
                &input::point(p, y, prec)?,
                &input::tolerance(p, eps)?,
                &input::int_list(j)?,
                rule(rl)?,
                &input::rational(theta)?,
            )?;
            let summary = vec![format!("ap-limit {:?}", r.outcome)];
            Output::json(&r, summary)
        }
        Verb::Decompose { f, grid, tol } => {
            let g = function(f, prec)?;
            let p = g.prime();
            if g.dim_out() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, got: g.dim_out() });
            }
            let domain = grid_domain(grid, p, g.dim_in(), prec)?;
            let table = GridFunction::sample(&g, &domain, grid.k)?;
            let tol = tol.unwrap_or(grid.k);
            let floor = table.table().iter().map(|(_, v)| v.valuation_floor().min(0)).min().unwrap_or(0);
            let depth = u32::try_from(tol - floor).map_err(|_| Error::Invalid("tolerance below the value scale".into()))?;
            let count = (p as u128).checked_pow(depth).filter(|&c| c <= SEQUENCE_CAP);
            let count = count.ok_or(Error::ResourceCap { count: u128::MAX, cap: SEQUENCE_CAP })?;
            let ys = vdp_dense_sequence(p, floor, count as usize)?;
            let s = decompose_series(&table, &ys, tol)?;
            let target = Magnitude::from_valuation(p, Some(tol));
            let summary = vec![format!("{} terms, max residual {}", s.terms.len(), s.max_residual())];
            let bad = s.max_residual() > target;
            Ok(Output::json(&s, summary)?.violated_if(bad, || format!("residual above p^-{tol}")))
        }
        Verb::Certify { samples } => {
            let file: input::SampleFile = input::json(&input::read_file(samples)?)?;
            let mut set = file.build(prec)?;
            let r = set.certify()?;
            let summary = vec![format!("certified: {}, max ratio {}", r.certified, r.max_ratio)];
            let witness = r.witness;
            Ok(Output::json(&r, summary)?.violated_if(!r.certified, || format!("pair {witness:?} breaks the bound")))
        }
        Verb::Extend { samples, grid } => {
            let file: input::SampleFile = input::json(&input::read_file(samples)?)?;
            let mut set = file.build(prec)?;
            let cert = set.certify()?;
            if !cert.certified {
                let out = Output::json(&json!({"certify": cert}), vec!["sample set not certified".into()])?;
                return Ok(out.violated_if(true, || "cannot extend an uncertified sample set".into()));
            }
            let domain = grid_domain(grid, set.prime(), set.dim_in(), prec)?;
            let g = extend_to_grid(&set, &domain, grid.k)?;
            let check = verify_extension(&set, g.table())?;
            let summary = vec![format!(
                "{} grid points, {} pairs checked, max ratio {}",
                g.len(),
                check.pairs_checked,
                check.max_ratio
            )];
            let holds = check.holds;
            let out = Output::json(&json!({"certify": cert, "grid": g, "check": check}), summary)?;
            Ok(out.violated_if(!holds, || "extension breaks the certified bound".into()))
        }
        Verb::Cheb { p, site, r } => {
            let p = check_prime(*p)?;
            let h = site
                .iter()
                .map(|s| {
                    let (z, w) = s
                        .rsplit_once(':')
                        .ok_or_else(|| Error::Parse { offset: 0, message: format!("site {s:?} is not 'point:weight'") })?;
                    Ok((input::point(p, z, prec)?, input::scalar(p, w, prec)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let res = chebyshev_radius(&h, input::exponent(r)?)?;
            let summary = vec![format!("c = {}, q = {}", res.c, show(&res.q))];
            Output::json(&res, summary)
        }
        Verb::Ej { f, grid, r, j } => {
            let g = function(f, prec)?;
            let domain = grid_domain(grid, g.prime(), g.dim_in(), prec)?;
            let table = GridFunction::sample(&g, &domain, grid.k)?;
            let js = input::int_list(j)?;
            let (lo, hi) = (*js.first().expect("nonempty"), *js.last().expect("nonempty"));
            let d = decompose_ej(&table, input::exponent(r)?, lo..=hi)?;
            let sizes: Vec<String> = d.classes.iter().map(|c| format!("E_{}: {}", c.j, c.points.len())).collect();
            let summary = vec![format!("{}; unassigned {}", sizes.join(", "), d.unassigned.len())];
            let bad = !d.violations.is_empty();
            let n = d.violations.len();
            Ok(Output::json(&d, summary)?.violated_if(bad, || format!("{n} close pairs break the level bound")))
        }
        Verb::Whitney { action } => whitney(action, prec),
        Verb::Scan { kind } => scan(kind, prec),
        Verb::Identities { p, seed, samples } => {
            let s = identity_suite(check_prime(*p)?, *seed, *samples)?;
            let summary = s
                .tallies
                .iter()
                .map(|t| format!("{:?}/{:?}: {}/{}", t.identity, t.family, t.passed, t.samples).to_lowercase())
                .collect();
            let ok = s.all_pass();
            Ok(Output::json(&s, summary)?.violated_if(!ok, || "identity failed on some instance".into()))
        }
    }
}

fn whitney(action: &WhitneyVerb, prec: u32) -> Result<Output> {
    match action {
        WhitneyVerb::Build { f, a, order, jet_resolution, truncation } => {
            let g = function(f, prec)?;
            let balls = match input::set(g.prime(), a, prec)? {
                input::SetSpec::Balls(bs) => bs,
                _ => return Err(Error::Invalid("the closed set must be a union of balls".into())),
            };
            let jets = JetField::from_function(
                &g,
                CosetUnion::new(balls)?,
                *jet_resolution,
                *order,
                *truncation,
                &LimitSchedule::default(),
            )?;
            let summary = vec![format!("{} jets of order {}", jets.jets().len(), jets.k())];
            Output::json(&jets, summary)
        }
        WhitneyVerb::Eval { jets, grid, params, x } => {
            let jets = load_jets(jets)?;
            let g = extension(&jets, grid, params, prec)?;
            let pts = x.iter().map(|s| input::point(jets.prime(), s, prec)).collect::<Result<Vec<_>>>()?;
            let vals = g.eval_queries(&pts)?;
            let summary = x.iter().zip(&vals).map(|(s, v)| format!("g({s}) = {}", show(v))).collect();
            let report: Vec<Value> = pts.iter().zip(&vals).map(|(pt, v)| json!({"x": pt, "g": valued(v)})).collect();
            Output::json(&report, summary)
        }
        WhitneyVerb::Verify { jets, grid, params, seed, samples, csv } => {
            let jets = load_jets(jets)?;
            let g = extension(&jets, grid, params, prec)?;
            let qs = whitney_samples(&jets, *seed, *samples, prec)?;
            let report = verify_whitney(&g, &jets, &qs)?;
            let partition = g.partition_check()?;
            let one = num_rational::BigRational::from_integer(1.into());
            let packing = g.packing_scan(one.clone(), one)?;
            let mut summary: Vec<String> =
                report.rows.iter().map(|r| format!("j={}: {} samples, max error {}, bound {}", r.j, r.samples, r.max_error, r.max_bound)).collect();
            summary.push(format!(
                "partition of unity on {} points: {}; packing: {}",
                partition.points,
                partition.unity && partition.glue_agrees,
                packing.ratio_ok && packing.card_ok
            ));
            let bad = !report.dominated || !partition.unity || !partition.glue_agrees || !packing.ratio_ok || !packing.card_ok;
            let out = if *csv {
                Output { body: report.to_csv(), summary, violation: None }
            } else {
                Output::json(&json!({"report": report, "partition": partition, "packing": packing}), summary)?
            };
            Ok(out.violated_if(bad, || "Whitney estimate, partition or packing check failed".into()))
        }
    }
}

/// Seeded quotient points at jet sites: unit directions, `|t| = 1/p`.
fn whitney_samples(jets: &JetField, seed: u64, n: usize, prec: u32) -> Result<Vec<QuotientPoint>> {
    let p = jets.prime();
    let m = jets.dim_in();
    let pi = p as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |rng: &mut ChaCha8Rng| loop {
        let xs: Vec<i64> = (0..m).map(|_| rng.gen_range(0..pi * pi)).collect();
        if xs.iter().any(|x| x % pi != 0) {
            return PAdicVector::from_ints(p, &xs);
        }
    };
    (0..n)
        .map(|_| {
            let z = jets.site(rng.gen_range(0..jets.jets().len())).clone();
            let j = rng.gen_range(0..=jets.k() as usize);
            let vs = (0..j).map(|_| unit(&mut rng)).collect::<Result<Vec<_>>>()?;
            let ts = (0..j)
                .map(|_| PAdicNumber::from_int(p, pi * rng.gen_range(1..pi) + pi * pi * rng.gen_range(0..pi), prec))
                .collect::<Result<Vec<_>>>()?;
            QuotientPoint::new(z, vs, ts)
        })
        .collect()
}

fn scan(kind: &ScanVerb, prec: u32) -> Result<Output> {
    match kind {
        ScanVerb::Stepanoff { f, grid, eps } => {
            let g = function(f, prec)?;
            let domain = grid_domain(grid, g.prime(), g.dim_in(), prec)?;
            let r = stepanoff_scan(&g, &domain, grid.k, &input::tolerance(g.prime(), eps)?, &LimitSchedule::default())?;
            let summary = vec![format!("fraction {} ({}/{})", format_rational(&r.fraction), r.successes, r.total)];
            Output::json(&r, summary)
        }
        ScanVerb::Holder { f, grid, r } => {
            let g = function(f, prec)?;
            let domain = grid_domain(grid, g.prime(), g.dim_in(), prec)?;
            let table = GridFunction::sample(&g, &domain, grid.k)?;
            let h = holder_scan(&table, input::exponent(r)?)?;
            let summary = vec![format!("Hölder constant {}", h.constant)];
            Output::json(&h, summary)
        }
    }
}
