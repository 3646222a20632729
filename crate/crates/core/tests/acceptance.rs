//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fuglede_core::cm_structure::{build_laba_spectrum, build_tiling_complement_cm, check_t1t2};
use fuglede_core::pair_lab::{
    exclusion_predicate, spectral_by_differences, spectral_by_orders, tiling_by_differences,
    tiling_by_product, verify_spectral_pair, verify_tiling_pair, ExclusionVerdict,
};
use fuglede_core::search::{
    all_tiling_complements, enumerate_canonical, survey_stream, OrbitMode, SearchOutcome, SurveyOptions,
    SurveySummary,
};
use fuglede_core::vanishing_sums::lam_leung_decompose;
use fuglede_core::{vanishes_at, Error, GroupContext, MaskMultiset, TwoPrimeShape};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn cyclotomic_product() -> Outcome {
    let start = Instant::now();
    for n in 1..=60 {
        let ctx = GroupContext::new(n).map_err(|e| e.to_string())?;
        let mut product = vec![BigInt::one()];
        for &d in ctx.divisors() {
            let phi = ctx.cyclotomic(d).map_err(|e| e.to_string())?;
            product = poly_mul(&product, phi.coeffs());
        }
        let mut expected = vec![BigInt::zero(); n + 1];
        expected[0] = -BigInt::one();
        expected[n] = BigInt::one();
        ensure(product == expected, || format!("product of Phi_d over d | {n} is not X^{n} - 1"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("N <= 60 in {elapsed:.2?}"))
}

fn small_example() -> Outcome {
    let a: MaskMultiset = "6:{0,3}".parse().map_err(|e: Error| e.to_string())?;
    let doubled = a.dilate(2);
    ensure(doubled.coeffs()[0] == 2 && doubled.mass() == 2, || format!("2·A = {doubled}"))?;
    let class = a.restrict_class(0, 3).map_err(|e| e.to_string())?;
    ensure(class == a, || format!("A_(0 mod 3) = {class}"))?;
    Ok(format!("2·A = {doubled}, A_(0 mod 3) = {class}"))
}

fn tiling_product_law() -> Outcome {
    let start = Instant::now();
    let (mut pairs, mut dilations) = (0usize, 0usize);
    for n in 1..=20 {
        let ctx = GroupContext::new(n).map_err(|e| e.to_string())?;
        let full = MaskMultiset::full(&ctx);
        for size in (1..=n).filter(|k| n % k == 0) {
            for a in enumerate_canonical(&ctx, Some(size), OrbitMode::Translation).map_err(|e| e.to_string())? {
                let complements = match all_tiling_complements(&a, u64::MAX).map_err(|e| e.to_string())? {
                    SearchOutcome::Found(ts) => ts,
                    other => return Err(format!("{a}: {other:?}")),
                };
                for t in &complements {
                    pairs += 1;
                    let product = a.convolve(t).map_err(|e| e.to_string())?;
                    ensure(product == full, || format!("A(X)T(X) != 1+...+X^(N-1) for ({a}, {t})"))?;
                    for m in (1..n.max(2)).filter(|&m| gcd(m, size) == 1) {
                        dilations += 1;
                        let scaled = a.dilate(m as i64);
                        ensure(scaled.is_proper(), || format!("{m}·{a} is not a set"))?;
                        let product = scaled.convolve(t).map_err(|e| e.to_string())?;
                        ensure(product == full, || format!("{m}·{a} does not tile with {t}"))?;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} tiling pairs, {dilations} dilated pairs, N <= 20 in {elapsed:.2?}"))
}

fn construction_theorems() -> Outcome {
    let mut checked = 0;
    for n in 1..=30 {
        let ctx = GroupContext::new(n).map_err(|e| e.to_string())?;
        for size in 1..=6.min(n) {
            for a in enumerate_canonical(&ctx, Some(size), OrbitMode::Translation).map_err(|e| e.to_string())? {
                if !check_t1t2(&a).map_err(|e| e.to_string())?.holds() {
                    continue;
                }
                checked += 1;
                let t = build_tiling_complement_cm(&a).map_err(|e| format!("{a}: {e}"))?;
                ensure(verify_tiling_pair(&a, &t).map_err(|e| e.to_string())?.is_verified(), || {
                    format!("complement {t} of {a} fails")
                })?;
                let b = build_laba_spectrum(&a).map_err(|e| format!("{a}: {e}"))?;
                ensure(verify_spectral_pair(&a, &b).map_err(|e| e.to_string())?.is_verified(), || {
                    format!("spectrum {b} of {a} fails")
                })?;
            }
        }
    }
    Ok(format!("{checked} sets satisfying T1/T2 with N <= 30, |A| <= 6"))
}

/// A random nonnegative combination of p- and q-cycles of total mass <= 8.
fn random_cycle_union(rng: &mut ChaCha8Rng, ctx: &std::sync::Arc<GroupContext>, p: usize, q: usize) -> MaskMultiset {
    let n = ctx.n();
    let mut coeffs = vec![0u32; n];
    let mut mass = 0;
    loop {
        let r = if rng.gen_bool(0.5) { p } else { q };
        if mass + r > 8 {
            break;
        }
        let x = rng.gen_range(0..n);
        for k in 0..r {
            coeffs[(x + k * n / r) % n] += 1;
        }
        mass += r;
        if rng.gen_bool(0.3) {
            break;
        }
    }
    MaskMultiset::new(ctx, coeffs).expect("valid coefficients")
}

fn random_multiset(rng: &mut ChaCha8Rng, ctx: &std::sync::Arc<GroupContext>) -> MaskMultiset {
    let n = ctx.n();
    let mass = rng.gen_range(1..=8);
    let elems: Vec<usize> = (0..mass).map(|_| rng.gen_range(0..n)).collect();
    MaskMultiset::from_elements(ctx, &elems)
}

fn lam_leung_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let groups = [(12, 2, 3), (18, 2, 3), (24, 2, 3), (36, 2, 3)];
    let (mut vanishing, mut non_vanishing, mut from_uniform) = (0, 0, 0);
    for (i, &(n, p, q)) in groups.iter().cycle().enumerate() {
        if vanishing >= 10_000 && non_vanishing >= 10_000 {
            break;
        }
        if i > 10_000_000 {
            return Err("sampler did not reach 10,000 of each kind".into());
        }
        let ctx = GroupContext::new(n).map_err(|e| e.to_string())?;
        let uniform = rng.gen_bool(0.5);
        let a = if uniform { random_multiset(&mut rng, &ctx) } else { random_cycle_union(&mut rng, &ctx, p, q) };
        if a.is_empty() {
            continue;
        }
        if vanishes_at(&a, n).map_err(|e| e.to_string())? {
            if vanishing >= 10_000 {
                continue;
            }
            vanishing += 1;
            from_uniform += usize::from(uniform);
            let dec = lam_leung_decompose(&a).map_err(|e| format!("{a}: {e}"))?;
            ensure(dec.recompose() == a, || format!("{a} does not round-trip"))?;
        } else {
            if non_vanishing >= 10_000 {
                continue;
            }
            non_vanishing += 1;
            match lam_leung_decompose(&a) {
                Err(Error::Precondition(_)) => {}
                other => return Err(format!("{a} not rejected: {other:?}")),
            }
        }
    }
    Ok(format!(
        "{vanishing} vanishing ({from_uniform} from uniform draws) decomposed, {non_vanishing} non-vanishing rejected"
    ))
}

/// Aggregates over every survey run by criteria 6, 7, 8 and 10.
#[derive(Default)]
struct SurveyTotals {
    summaries: Vec<SurveySummary>,
    tiles: usize,
    spectral_agreements: usize,
    tiling_agreements: usize,
    route_disagreements: Vec<String>,
    elapsed: Duration,
}

fn parse(s: &str) -> MaskMultiset {
    s.parse().expect("survey emits valid literals")
}

fn run_surveys() -> Result<SurveyTotals, String> {
    let start = Instant::now();
    let mut totals = SurveyTotals::default();
    let plans: Vec<(usize, Option<usize>)> =
        (1..=24).map(|n| (n, None)).chain([(27, Some(10)), (32, Some(8)), (36, Some(8))]).collect();
    for (n, max_size) in plans {
        let ctx = GroupContext::new(n).map_err(|e| e.to_string())?;
        let options = SurveyOptions { max_size, ..SurveyOptions::default() };
        let mut spectral_agree = 0;
        let mut tiling_agree = 0;
        let mut disagreements = Vec::new();
        let summary = survey_stream(&ctx, &options, &mut |record| {
            let a = parse(&record.set);
            let mut candidates = vec![a.clone()];
            if let Some(b) = &record.spectral.witness {
                candidates.push(parse(b));
            }
            for b in &candidates {
                let by_diff = spectral_by_differences(&a, b)?.is_none();
                let by_orders = spectral_by_orders(&a, b)?.is_none();
                if by_diff == by_orders {
                    spectral_agree += 1;
                } else {
                    disagreements.push(format!("spectral ({a}, {b})"));
                }
            }
            if let Some(t) = &record.tile.witness {
                let t = parse(t);
                let by_diff = tiling_by_differences(&a, &t)?.is_none();
                let by_product = tiling_by_product(&a, &t)?;
                if by_diff == by_product && by_diff {
                    tiling_agree += 1;
                } else {
                    disagreements.push(format!("tiling ({a}, {t})"));
                }
            }
            Ok(())
        })
        .map_err(|e| format!("survey of Z_{n}: {e}"))?;
        totals.tiles += summary.per_size.iter().map(|c| c.tiles).sum::<usize>();
        totals.spectral_agreements += spectral_agree;
        totals.tiling_agreements += tiling_agree;
        totals.route_disagreements.extend(disagreements);
        totals.summaries.push(summary);
    }
    totals.elapsed = start.elapsed();
    Ok(totals)
}

fn fuglede_survey_criterion(totals: &SurveyTotals) -> Outcome {
    let orbits: usize = totals.summaries.iter().map(|s| s.orbits).sum();
    for s in &totals.summaries {
        ensure(s.f_members.is_empty(), || format!("F({}) = {:?}", s.n, s.f_members))?;
        ensure(s.is_complete(), || format!("survey of Z_{} incomplete: {:?}", s.n, s.unresolved))?;
        ensure(s.failures.is_empty(), || format!("Z_{}: {:?}", s.n, &s.failures[..s.failures.len().min(5)]))?;
    }
    Ok(format!(
        "F(N) empty for N <= 24 and N in {{27 (|A| <= 10), 32 (|A| <= 8), 36 (|A| <= 8)}}; {orbits} orbits in {:.2?}",
        totals.elapsed
    ))
}

fn dual_direction(totals: &SurveyTotals) -> Outcome {
    let certified: usize = totals.summaries.iter().map(|s| s.tiles_certified_spectral).sum();
    for s in &totals.summaries {
        ensure(s.non_spectral_tiles.is_empty(), || format!("Z_{}: {:?}", s.n, s.non_spectral_tiles))?;
    }
    ensure(certified == totals.tiles, || format!("{certified} of {} tiles certified", totals.tiles))?;
    Ok(format!("{certified} tiles certified spectral by construction"))
}

fn extension_operator(totals: &SurveyTotals) -> Outcome {
    let instances: usize = totals.summaries.iter().map(|s| s.extension_instances).sum();
    let closures: usize = totals.summaries.iter().map(|s| s.closures).sum();
    for s in &totals.summaries {
        let bad: Vec<&String> = s.failures.iter().filter(|f| f.contains("extension")).collect();
        ensure(bad.is_empty(), || format!("Z_{}: {:?}", s.n, bad))?;
    }
    ensure(instances > 0, || "no instance with nonempty K_p(B) was found".into())?;
    Ok(format!("{instances} extensions and {closures} absorption-free closures verified"))
}

fn exclusion_table() -> Outcome {
    let table = [
        ((2, 9, 3, 100), ExclusionVerdict::Excluded),
        ((2, 100, 3, 6), ExclusionVerdict::Excluded),
        ((2, 5, 3, 7), ExclusionVerdict::Excluded),
        ((2, 100, 3, 100), ExclusionVerdict::Open),
    ];
    let mut lines = Vec::new();
    for ((p, m, q, n), expected) in table {
        let report = exclusion_predicate(TwoPrimeShape { p, m, q, n }).map_err(|e| e.to_string())?;
        ensure(report.verdict == expected, || format!("{p}^{m}·{q}^{n}: {}", report.message()))?;
        lines.push(format!("{p}^{m}·{q}^{n} {}", report.message()));
    }
    Ok(lines.join("; "))
}

fn cross_consistency(totals: &SurveyTotals) -> Outcome {
    ensure(totals.route_disagreements.is_empty(), || {
        format!("{:?}", &totals.route_disagreements[..totals.route_disagreements.len().min(5)])
    })?;
    let internal_spectral: usize = totals.summaries.iter().map(|s| s.spectral_route_checks).sum();
    let internal_tiling: usize = totals.summaries.iter().map(|s| s.tiling_route_checks).sum();
    Ok(format!(
        "{} spectral and {} tiling pairs agree across both routes (plus {internal_spectral} and {internal_tiling} checked inside the survey)",
        totals.spectral_agreements, totals.tiling_agreements
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "cyclotomic product", guarded(cyclotomic_product)),
        (2, "dilation and divisor-class example", guarded(small_example)),
        (3, "tiling product law", guarded(tiling_product_law)),
        (4, "construction theorems", guarded(construction_theorems)),
        (5, "Lam-Leung completeness", guarded(lam_leung_completeness)),
    ];
    let surveys = catch_unwind(AssertUnwindSafe(run_surveys)).unwrap_or_else(|_| Err("survey panicked".into()));
    match surveys {
        Ok(totals) => {
            results.push((6, "Fuglede survey", guarded(|| fuglede_survey_criterion(&totals))));
            results.push((7, "dual direction", guarded(|| dual_direction(&totals))));
            results.push((8, "extension operator", guarded(|| extension_operator(&totals))));
            results.push((10, "cross-criterion consistency", guarded(|| cross_consistency(&totals))));
        }
        Err(e) => {
            for (i, name) in [(6, "Fuglede survey"), (7, "dual direction"), (8, "extension operator"), (10, "cross-criterion consistency")] {
                results.push((i, name, Err(e.clone())));
            }
        }
    }
    results.push((9, "exclusion predicate table", guarded(exclusion_table)));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (i, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {i:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {i:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
