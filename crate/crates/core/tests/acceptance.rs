//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Oracles here work on plain integers (valuations of differences, digit
//! strings) and never call the library routine they check.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::diffquot::{holder_scan, identity_suite, stepanoff_scan, taylor_eval, Expr, LimitSchedule, QuotientPoint, SymbolicFunction};
use padic_core::haar::{
    decompose_series, density_at, set_measure, sparse_set_indicator, sphere_measure, GridFunction, SPARSE_RULE,
};
use padic_core::lipschitz::{chebyshev_radius, extend_to_grid, SampleSet};
use padic_core::magnitude::{pow_rational, Exponent};
use padic_core::padic::{vdp_compare, vdp_dense_sequence, DEFAULT_PREC};
use padic_core::whitney::{verify_whitney, whitney_extend, CosetUnion, JetField, WhitneyParams};
use padic_core::{Ball, Magnitude, PAdicNumber, PAdicVector, PointFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;

const SEED: u64 = 20_240_601;

fn vp(p: u32, n: i64) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let (mut n, mut v) = (n, 0);
    while n % p as i64 == 0 {
        n /= p as i64;
        v += 1;
    }
    Some(v)
}

/// Least valuation over coordinate differences (the sup-norm exponent).
fn vp_vec(p: u32, a: &[i64], b: &[i64]) -> Option<i64> {
    a.iter().zip(b).filter_map(|(x, y)| vp(p, x - y)).min()
}

fn int(p: u32, n: i64) -> PAdicNumber {
    PAdicNumber::from_int(p, n, DEFAULT_PREC).unwrap()
}

fn ints(p: u32, xs: &[i64]) -> PAdicVector {
    PAdicVector::from_ints(p, xs).unwrap()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: padic_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// 1 ----------------------------------------------------------------------

fn c1_field_axioms() -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    for p in [2u32, 3, 5] {
        // values p^v * n, v in -2..=2, n a unit below p^3, stored as N = x * p^2
        let mut vals: Vec<i64> = vec![0];
        for v in -2i64..=2 {
            for n in 1..(p as i64).pow(3) {
                if n % p as i64 != 0 {
                    vals.push(n * (p as i64).pow((v + 2) as u32));
                }
            }
        }
        let scale = (p as i64).pow(2);
        let xs: Vec<PAdicNumber> = vals
            .iter()
            .map(|&n| PAdicNumber::from_ratio(p, &ratio(n, scale), DEFAULT_PREC).unwrap())
            .collect();
        let width = 10;
        let digits = |mut n: i64| -> Vec<i64> {
            (0..width)
                .map(|_| {
                    let d = n % p as i64;
                    n /= p as i64;
                    d
                })
                .collect()
        };
        let oracle_norm = |n: i64, shift: i64| Magnitude::from_valuation(p, vp(p, n).map(|v| v - shift));
        for (i, x) in xs.iter().enumerate() {
            ensure(x.magnitude() == oracle_norm(vals[i], 2), || format!("p={p}: |{x}| wrong"))?;
            for (j, y) in xs.iter().enumerate() {
                let s = *x + *y;
                ensure(s.magnitude() == oracle_norm(vals[i] + vals[j], 2), || format!("p={p}: |{x} + {y}| wrong"))?;
                ensure(s.magnitude() <= x.magnitude().max(y.magnitude()), || {
                    format!("p={p}: ultrametric inequality fails for {x}, {y}")
                })?;
                let m = *x * *y;
                ensure(m.magnitude() == x.magnitude().mul(&y.magnitude()), || {
                    format!("p={p}: |{x} * {y}| is not multiplicative")
                })?;
                ensure(m.magnitude() == oracle_norm(vals[i] * vals[j], 4), || format!("p={p}: |{x} * {y}| wrong"))?;
                let o = lib(vdp_compare(x, y))?.ordering;
                let back = lib(vdp_compare(y, x))?.ordering;
                ensure(o == back.reverse(), || format!("p={p}: order not antisymmetric on {x}, {y}"))?;
                ensure((o == Ordering::Equal) == (i == j), || format!("p={p}: order not strict on {x}, {y}"))?;
                ensure(o == digits(vals[i]).cmp(&digits(vals[j])), || format!("p={p}: order differs from digit oracle on {x}, {y}"))?;
                checked += 1;
            }
        }
        // Sorting with the comparator and finding every pair (i < j) strictly
        // increasing shows the relation is the linear order of positions,
        // hence transitive.
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| vdp_compare(a, b).unwrap().ordering);
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                ensure(lib(vdp_compare(&sorted[i], &sorted[j]))?.ordering == Ordering::Less, || {
                    format!("p={p}: order not transitive around {} and {}", sorted[i], sorted[j])
                })?;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("{checked} pairs, {:.2}s", took.as_secs_f64()))
}

// 2 ----------------------------------------------------------------------

fn c2_measure() -> Outcome {
    let mut checks = 0;
    for p in [2u32, 3, 5] {
        let unit = Ball::origin(p, 1, 0);
        for l in 0..=4i64 {
            let on_sphere = |x: &PAdicVector| Ok(x.valuation() == Some(l));
            let counted = lib(set_measure(on_sphere, &unit, l + 1))?;
            let oracle = ratio(p as i64 - 1, (p as i64).pow(l as u32 + 1));
            ensure(sphere_measure(p, l) == oracle, || format!("sphere_measure({p}, {l}) != (p-1)/p^(l+1)"))?;
            ensure(counted == oracle, || format!("set_measure of sphere {l} at p={p} is {counted}"))?;
            checks += 1;
        }
        for big_l in 0..=12i64 {
            let mut s = pow_rational(p, -big_l - 1);
            for l in 0..=big_l {
                s += sphere_measure(p, l);
            }
            ensure(s.is_one(), || format!("sphere sum to L={big_l} at p={p} is {s}"))?;
        }
    }
    Ok(format!("{checks} sphere measures, tail sums exact"))
}

// 3 ----------------------------------------------------------------------

fn c3_identities() -> Outcome {
    let s = lib(identity_suite(5, SEED, 1000))?;
    for t in &s.tallies {
        ensure(t.samples >= 1000 && t.passed == t.samples, || {
            format!("{:?}/{:?}: {}/{} ({:?})", t.identity, t.family, t.passed, t.samples, t.first_failure)
        })?;
    }
    Ok(format!("{} identity/family tallies x 1000, all equal", s.tallies.len()))
}

// 4 ----------------------------------------------------------------------

/// Random polynomial in `m` variables with total degree at most `deg` and
/// at least one monomial of degree exactly `deg`.
fn random_poly(rng: &mut ChaCha8Rng, p: u32, m: usize, deg: u32) -> Expr {
    let mut acc = Expr::constant(int(p, rng.gen_range(-9..=9)));
    for d in 1..=deg {
        let monomials = if d == deg { 1 } else { rng.gen_range(0..=2) };
        for _ in 0..monomials {
            let mut mono = Expr::constant(int(p, rng.gen_range(1..=30) * if rng.gen() { 1 } else { -1 }));
            for _ in 0..d {
                mono = Expr::mul(mono, Expr::var(rng.gen_range(0..m)));
            }
            acc = Expr::add(acc, mono);
        }
    }
    acc
}

fn random_point(rng: &mut ChaCha8Rng, m: usize) -> Vec<i64> {
    (0..m).map(|_| rng.gen_range(-500..=500)).collect()
}

fn c4_taylor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let p = 5;
    let schedule = LimitSchedule::default();
    let mut count = 0;
    for deg in 1..=4u32 {
        for _ in 0..100 {
            let m = rng.gen_range(1..=2);
            let f = lib(SymbolicFunction::new(p, m, vec![random_poly(&mut rng, p, m, deg)]))?;
            let (x, y) = (random_point(&mut rng, m), random_point(&mut rng, m));
            let (xv, yv) = (ints(p, &x), ints(p, &y));
            for n in deg.saturating_sub(1) as usize..=deg as usize {
                let r = lib(taylor_eval(&f, n, &yv, &xv, &schedule))?;
                ensure(r.residual.is_zero(), || format!("degree {deg}, n={n}: residual {} at x={x:?}, y={y:?}", r.residual))?;
            }
            if deg >= 2 {
                // degree n + 2 with n = deg - 2
                let n = deg as usize - 2;
                let r = lib(taylor_eval(&f, n, &yv, &xv, &schedule))?;
                let bound = Magnitude::from_valuation(p, vp_vec(p, &x, &y)).powr(Exponent::from_integer(n as i64 + 2));
                ensure(r.residual.magnitude() <= bound, || format!("degree {deg}, n={n}: tail exceeds |x-y|^(n+2)"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} (polynomial, x, y) samples over degrees 1..=4"))
}

// 5 ----------------------------------------------------------------------

struct KirszbraunCase {
    sites: Vec<i64>,
    values: Vec<Vec<i64>>,
    r: Exponent,
}

fn kirszbraun_case(rng: &mut ChaCha8Rng) -> KirszbraunCase {
    let n = rng.gen_range(2..=20);
    let mut sites: Vec<i64> = Vec::new();
    while sites.len() < n {
        let s = rng.gen_range(0..125);
        if !sites.contains(&s) {
            sites.push(s);
        }
    }
    let dim_out = rng.gen_range(1..=2);
    let values = (0..n).map(|_| (0..dim_out).map(|_| rng.gen_range(-60..=60)).collect()).collect();
    let r = if rng.gen() { Exponent::from_integer(1) } else { Exponent::new(1, 2) };
    KirszbraunCase { sites, values, r }
}

/// Largest `-v(f(a) - f(b)) + r v(a - b)` over pairs, i.e. `log_p` of the
/// Hölder constant.
fn holder_exponent(p: u32, pts: &[(i64, Vec<i64>)], r: Exponent) -> Option<Exponent> {
    let mut best: Option<Exponent> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let Some(dv) = vp_vec(p, &pts[i].1, &pts[j].1) else { continue };
            let dx = vp(p, pts[i].0 - pts[j].0).expect("distinct points");
            let e = Exponent::from_integer(-dv) + r * dx;
            best = Some(best.map_or(e, |b| b.max(e)));
        }
    }
    best
}

fn run_kirszbraun(case: &KirszbraunCase) -> Result<serde_json::Value, String> {
    let p = 5;
    let pts: Vec<(i64, Vec<i64>)> = case.sites.iter().cloned().zip(case.values.iter().cloned()).collect();
    let e = holder_exponent(p, &pts, case.r);
    let c_exp = e.map_or(0, |e| e.ceil().to_integer());
    let c = pow_rational(p, c_exp);
    let samples = pts.iter().map(|(s, v)| (ints(p, &[*s]), ints(p, v))).collect();
    let mut set = lib(SampleSet::new(samples, c.clone(), case.r))?;
    let cert = lib(set.certify())?;
    ensure(cert.certified, || format!("sample set not certified against C = 5^{c_exp}"))?;
    let domain = Ball::origin(p, 1, 0);
    let grid = lib(extend_to_grid(&set, &domain, 3))?;
    // nearest-site oracle on all residues mod 125
    let mut table = Vec::new();
    for g in 0..125i64 {
        let mut best = 0;
        for i in 1..pts.len() {
            let closer = |k: usize| vp(p, g - pts[k].0).unwrap_or(i64::MAX);
            if closer(i) > closer(best) {
                best = i;
            }
        }
        let want = pts[best].1.clone();
        let got = &grid.table()[lib(grid.locate(&ints(p, &[g])))?].1;
        ensure(*got == ints(p, &want), || format!("extension at {g} is {got}, oracle {want:?}"))?;
        table.push((g, want));
    }
    let h = lib(holder_scan(&grid, case.r))?;
    let oracle = holder_exponent(p, &table, case.r);
    ensure(h.constant.exponent() == oracle, || format!("holder_scan {} vs oracle {oracle:?}", h.constant))?;
    ensure(h.constant.le_rational(&c), || format!("extension constant {} exceeds C = 5^{c_exp}", h.constant))?;
    Ok(json!({"C": c_exp, "holder": h, "grid": grid}))
}

fn c5_kirszbraun() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for n in 0..100 {
        let case = kirszbraun_case(&mut rng);
        run_kirszbraun(&case).map_err(|e| format!("instance {n}: {e}"))?;
    }
    Ok("100 certified sample sets extended to Z_5 mod 5^3".into())
}

// 6 ----------------------------------------------------------------------

struct ChebCase {
    m: usize,
    depth: u32,
    sites: Vec<Vec<i64>>,
    weights: Vec<i64>,
    r: Exponent,
}

fn cheb_case(rng: &mut ChaCha8Rng) -> ChebCase {
    let m = rng.gen_range(1..=2);
    let depth = if m == 1 { 3 } else { 2 };
    let n = rng.gen_range(1..=6);
    let sites = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..5i64.pow(depth))).collect()).collect();
    let weights = (0..n).map(|_| rng.gen_range(1..125)).collect();
    let r = if rng.gen() { Exponent::from_integer(1) } else { Exponent::new(1, 2) };
    ChebCase { m, depth, sites, weights, r }
}

fn level_oracle(p: u32, c: &ChebCase, y: &[i64]) -> Option<Exponent> {
    c.sites
        .iter()
        .zip(&c.weights)
        .filter_map(|(z, &w)| vp_vec(p, y, z).map(|d| Exponent::from_integer(-d) + c.r * vp(p, w).unwrap()))
        .max()
}

fn grid_points(p: u32, m: usize, depth: u32) -> Vec<Vec<i64>> {
    let side = (p as i64).pow(depth);
    (0..side.pow(m as u32)).map(|mut n| (0..m).map(|_| {
        let d = n % side;
        n /= side;
        d
    }).collect()).collect()
}

fn run_cheb(c: &ChebCase) -> Result<serde_json::Value, String> {
    let p = 5;
    let h: Vec<(PAdicVector, PAdicNumber)> = c.sites.iter().zip(&c.weights).map(|(z, &w)| (ints(p, z), int(p, w))).collect();
    let res = lib(chebyshev_radius(&h, c.r))?;
    let brute = grid_points(p, c.m, c.depth).iter().map(|y| level_oracle(p, c, y)).min().expect("nonempty grid");
    ensure(res.c.exponent() == brute, || format!("search gives {}, brute force {brute:?}", res.c))?;
    let mut candidates = vec![None];
    for i in 0..c.sites.len() {
        for j in i + 1..c.sites.len() {
            if let Some(d) = vp_vec(p, &c.sites[i], &c.sites[j]) {
                let wv = vp(p, c.weights[i]).unwrap().min(vp(p, c.weights[j]).unwrap());
                candidates.push(Some(Exponent::from_integer(-d) + c.r * wv));
            }
        }
    }
    ensure(candidates.contains(&res.c.exponent()), || format!("radius {} outside the candidate set", res.c))?;
    let q: Vec<i64> = res.q.coords().iter().map(|x| digits_to_int(x, c.depth)).collect();
    ensure(level_oracle(p, c, &q) == brute, || format!("center {} does not attain the radius", res.q))?;
    Ok(json!(res))
}

fn digits_to_int(x: &PAdicNumber, depth: u32) -> i64 {
    (0..depth as i64).rev().fold(0, |acc, n| acc * x.prime() as i64 + x.digit_at(n).unwrap_or(0) as i64)
}

fn c6_chebyshev() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for n in 0..200 {
        run_cheb(&cheb_case(&mut rng)).map_err(|e| format!("instance {n}: {e}"))?;
    }
    Ok("200 instances agree with the grid brute force".into())
}

// 7 ----------------------------------------------------------------------

fn two_cosets() -> CosetUnion {
    CosetUnion::new(vec![Ball::new(ints(5, &[0, 0]), 1), Ball::new(ints(5, &[1, 2]), 1)]).unwrap()
}

fn random_unit_vector(rng: &mut ChaCha8Rng) -> PAdicVector {
    loop {
        let xs = [rng.gen_range(-30..=30), rng.gen_range(-30..=30)];
        if xs.iter().any(|x| x % 5 != 0) {
            return ints(5, &xs);
        }
    }
}

/// Whitney data from a random global polynomial of degree <= 3.
fn whitney_run(rng: &mut ChaCha8Rng, k: u32) -> Result<serde_json::Value, String> {
    let p = 5;
    let deg = rng.gen_range(1..=3);
    let outputs = (0..rng.gen_range(1..=2)).map(|_| random_poly(rng, p, 2, deg)).collect();
    let f = lib(SymbolicFunction::new(p, 2, outputs))?;
    let jets = lib(JetField::from_function(&f, two_cosets(), 2, k, None, &LimitSchedule::default()))?;
    let g = lib(whitney_extend(&jets, &Ball::origin(p, 2, 0), 3, &WhitneyParams::default()))?;
    let mut samples = Vec::new();
    for (z, _) in jets.jets() {
        for j in 0..=k as usize {
            let vs = (0..j).map(|_| random_unit_vector(rng)).collect();
            let ts = (0..j).map(|_| int(p, 5 * rng.gen_range(1..=4) + 25 * rng.gen_range(0..=4))).collect();
            samples.push(lib(QuotientPoint::new(z.clone(), vs, ts))?);
        }
    }
    ensure(samples.len() >= 100, || format!("only {} samples", samples.len()))?;
    let report = lib(verify_whitney(&g, &jets, &samples))?;
    ensure(report.dominated, || format!("estimate fails at sample {:?}", report.witness))?;
    for row in &report.rows {
        ensure(row.max_error.is_zero(), || format!("k={k}, j={}: error {}", row.j, row.max_error))?;
    }
    let grid = lib(g.grid())?;
    for (x, val) in grid.table() {
        ensure(*val == lib(f.eval(x))?, || format!("extension differs from the polynomial at {x}"))?;
    }
    let pc = lib(g.partition_check())?;
    ensure(pc.unity && pc.glue_agrees && pc.points == 15625 - 2 * 625, || format!("partition check {pc:?}"))?;
    let pk = lib(g.packing_scan(BigRational::one(), BigRational::one()))?;
    ensure(pk.ratio_ok && pk.card_ok && pk.points == pc.points, || format!("packing scan {pk:?}"))?;
    Ok(json!({"k": k, "report": report, "partition": pc, "packing": pk}))
}

fn c7_whitney() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for k in 1..=3 {
        whitney_run(&mut rng, k).map_err(|e| format!("k={k}: {e}"))?;
    }
    Ok("k = 1, 2, 3 on two cosets in Z_5^2: zero error, unity and packing on 14375 points".into())
}

// 8 ----------------------------------------------------------------------

fn series_run(rng: &mut ChaCha8Rng, ys: &[PAdicNumber]) -> Result<serde_json::Value, String> {
    let p = 5;
    let n_vals = rng.gen_range(2..=4);
    let vals: Vec<i64> = (0..n_vals).map(|_| rng.gen_range(0..1000)).collect();
    let assign: Vec<i64> = (0..125).map(|_| vals[rng.gen_range(0..n_vals)]).collect();
    let domain = Ball::origin(p, 1, 0);
    let f = lib(GridFunction::from_fn(&domain, 3, 1, |x| {
        Ok(ints(p, &[assign[digits_to_int(x.get(0), 3) as usize]]))
    }))?;
    let s = lib(decompose_series(&f, ys, 3))?;
    for r in 0..125i64 {
        let x = ints(p, &[r]);
        let got = lib(s.eval(&x, &f))?;
        let diff = got - int(p, assign[r as usize]);
        ensure(diff.valuation_floor() >= 3, || format!("residual at {r} is |{diff}|"))?;
    }
    ensure(s.residual_profile.windows(2).all(|w| w[1] <= w[0]), || "residual profile increases".to_string())?;
    ensure(s.max_residual() <= Magnitude::from_valuation(p, Some(3)), || format!("max residual {}", s.max_residual()))?;
    Ok(json!(s))
}

fn c8_series() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let ys = lib(vdp_dense_sequence(5, 0, 125))?;
    for n in 0..50 {
        series_run(&mut rng, &ys).map_err(|e| format!("function {n}: {e}"))?;
    }
    Ok("50 step functions reproduced within 5^-3".into())
}

// 9 ----------------------------------------------------------------------

fn random_mix(rng: &mut ChaCha8Rng) -> Result<SymbolicFunction, String> {
    let p = 5;
    let mut e = random_poly(rng, p, 1, 2);
    for _ in 0..rng.gen_range(1..=3) {
        let ball = Ball::new(ints(p, &[rng.gen_range(0..125)]), rng.gen_range(1..=3));
        e = Expr::add(e, Expr::mul(Expr::constant(int(p, rng.gen_range(1..=40))), Expr::Indicator(ball)));
    }
    lib(SymbolicFunction::new(p, 1, vec![e]))
}

/// Count of residues mod p^R in `B(0, p^-j)` lying in the sparse set: for
/// valuation k, digit k is nonzero and digits k+1..min(2k, R-1) vanish.
fn sparse_oracle(p: i64, j: i64, big_r: i64) -> BigRational {
    let mut hits = BigInt::zero();
    for k in j.max(1)..big_r {
        let fixed = big_r.min(2 * k + 1) - k;
        hits += BigInt::from(p - 1) * BigInt::from(p).pow((big_r - k - fixed) as u32);
    }
    BigRational::new(hits, BigInt::from(p).pow((big_r - j) as u32))
}

fn c9_stepanoff() -> Outcome {
    let p = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let domain = Ball::origin(p, 1, 0);
    let eps = pow_rational(p, -2);
    let schedule = LimitSchedule::default();
    let sq = lib(SymbolicFunction::parse(p, "x0^2", None))?;
    let mut fs = vec![sq];
    fs.push(random_mix(&mut rng)?);
    for f in &fs {
        let r = lib(stepanoff_scan(f, &domain, 3, &eps, &schedule))?;
        ensure(r.fraction.is_one(), || format!("fraction {} for {}", r.fraction, f.outputs()[0]))?;
    }
    let js: Vec<i64> = (1..=4).collect();
    let d = lib(density_at(sparse_set_indicator, &PAdicVector::zeros(p, 1), &js, SPARSE_RULE, &BigRational::one()))?;
    for (j, r) in &d.ratios {
        ensure(*r == sparse_oracle(p as i64, *j, SPARSE_RULE.at(*j)), || format!("density ratio at j={j} is {r}"))?;
        ensure(*r <= BigRational::from_integer(5.into()) * pow_rational(p, -j), || format!("ratio {r} above 5*5^-{j}"))?;
    }
    Ok(format!("fraction 1 on x^2 and a random mix; sparse ratios {}", d.ratios.iter().map(|(_, r)| r.to_string()).collect::<Vec<_>>().join(", ")))
}

// 10 ---------------------------------------------------------------------

fn randomized_bundle(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = lib(identity_suite(5, seed, 200))?;
    let kirsz = (0..10).map(|_| run_kirszbraun(&kirszbraun_case(&mut rng))).collect::<Result<Vec<_>, _>>()?;
    let cheb = (0..40).map(|_| run_cheb(&cheb_case(&mut rng))).collect::<Result<Vec<_>, _>>()?;
    let ys = lib(vdp_dense_sequence(5, 0, 125))?;
    let series = (0..10).map(|_| series_run(&mut rng, &ys)).collect::<Result<Vec<_>, _>>()?;
    let mix = random_mix(&mut rng)?;
    let scan = lib(stepanoff_scan(&mix, &Ball::origin(5, 1, 0), 3, &pow_rational(5, -2), &LimitSchedule::default()))?;
    let whitney = whitney_run(&mut rng, 2)?;
    let bundle = json!({"identities": ids, "kirszbraun": kirsz, "chebyshev": cheb, "series": series, "stepanoff": scan, "whitney": whitney});
    serde_json::to_string(&bundle).map_err(|e| e.to_string())
}

fn c10_determinism() -> Outcome {
    let in_pool = |threads: usize| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        pool.install(|| randomized_bundle(SEED ^ 10))
    };
    let one = in_pool(1)?;
    let four = in_pool(4)?;
    let again = in_pool(4)?;
    ensure(one == four && four == again, || "reports differ between runs".into())?;
    Ok(format!("{} byte report identical at 1 and 4 threads", one.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("field axioms and ultrametric", c1_field_axioms),
        ("measure identities", c2_measure),
        ("difference quotient identities", c3_identities),
        ("taylor residuals", c4_taylor),
        ("ultrametric kirszbraun", c5_kirszbraun),
        ("chebyshev radius", c6_chebyshev),
        ("whitney extension", c7_whitney),
        ("series decomposition", c8_series),
        ("stepanoff and sparse density", c9_stepanoff),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({secs:.1}s)", n + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({secs:.1}s)", n + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
