use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bits::{require_small, to_set};
use super::canonical::{canonical_masks, OrbitMode};
use super::{find_spectrum, find_tiling_complement, SearchOutcome};
use crate::cm_structure::{build_laba_spectrum, check_t1t2, tiling_implies_spectral, CmReport};
use crate::error::{precondition, Error, Result};
use crate::pair_lab::{
    absorption_exponents, absorption_free_closure, deficit_bounds_check, extend_pair, root_profile,
    symmetry_check, verify_spectral_pair, verify_tiling_pair, DeficitReport, RootProfile, SpectralCheck,
    SpectralPair, SymmetryReport,
};
use crate::zn_core::{zero_set, GroupContext, MaskMultiset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyOptions {
    /// Only this size, when set.
    pub size: Option<usize>,
    /// Largest size surveyed when no single size is requested.
    pub max_size: Option<usize>,
    pub mode: OrbitMode,
    /// Node limit for each individual spectrum or complement search.
    pub budget: u64,
    /// Run the extension operators on spectral pairs with absorption.
    pub extensions: bool,
    /// Cursor file updated after every chunk and read back on restart.
    pub cursor: Option<PathBuf>,
    pub chunk: usize,
}

impl Default for SurveyOptions {
    fn default() -> SurveyOptions {
        SurveyOptions {
            size: None,
            max_size: None,
            mode: OrbitMode::Translation,
            budget: 10_000_000,
            extensions: true,
            cursor: None,
            chunk: 4096,
        }
    }
}

impl SurveyOptions {
    fn sizes(&self, n: usize) -> Vec<usize> {
        match self.size {
            Some(k) => vec![k],
            None => (1..=self.max_size.unwrap_or(n).min(n)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordVerdict {
    /// `found`, `exhausted` or `budget_exceeded`.
    pub verdict: String,
    pub witness: Option<String>,
}

impl RecordVerdict {
    fn from_outcome(outcome: &SearchOutcome<MaskMultiset>) -> RecordVerdict {
        let (verdict, witness) = match outcome {
            SearchOutcome::Found(w) => ("found", Some(w.to_string())),
            SearchOutcome::Exhausted => ("exhausted", None),
            SearchOutcome::BudgetExceeded => ("budget_exceeded", None),
        };
        RecordVerdict { verdict: verdict.to_string(), witness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCertificate {
    /// `tiling_certificate` when the complement-dilation certificate applies,
    /// otherwise `laba`.
    pub method: String,
    pub spectrum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyDiagnostics {
    pub spectrum: String,
    pub profile: RootProfile,
    pub symmetry: SymmetryReport,
    pub deficits: DeficitReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRecord {
    pub set: String,
    pub size: usize,
    pub zero_orders: Vec<usize>,
    pub spectral: RecordVerdict,
    pub tile: RecordVerdict,
    pub cm: CmReport,
    pub dual: Option<DualCertificate>,
    pub extension_instances: usize,
    pub in_f: bool,
    pub diagnostics: Option<Box<SurveyDiagnostics>>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCount {
    pub size: usize,
    pub orbits: usize,
    pub spectral: usize,
    pub tiles: usize,
    pub t1t2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub n: usize,
    pub mode: String,
    pub sizes: Vec<usize>,
    pub budget: u64,
    pub orbits: usize,
    pub completed_orbits: usize,
    pub per_size: Vec<SizeCount>,
    /// Spectral sets shown not to tile.
    pub f_members: Vec<String>,
    /// Tiles for which no spectrum was found.
    pub non_spectral_tiles: Vec<String>,
    pub unresolved: Vec<String>,
    pub failures: Vec<String>,
    pub tiles_certified_spectral: usize,
    pub spectral_route_checks: usize,
    pub tiling_route_checks: usize,
    pub extension_instances: usize,
    pub closures: usize,
    /// `complete` or `incomplete`.
    pub status: String,
}

impl SurveySummary {
    fn new(n: usize, sizes: &[usize], options: &SurveyOptions, orbits: usize) -> SurveySummary {
        SurveySummary {
            n,
            mode: mode_name(options.mode).to_string(),
            sizes: sizes.to_vec(),
            budget: options.budget,
            orbits,
            completed_orbits: 0,
            per_size: sizes.iter().map(|&size| SizeCount { size, ..SizeCount::default() }).collect(),
            f_members: Vec::new(),
            non_spectral_tiles: Vec::new(),
            unresolved: Vec::new(),
            failures: Vec::new(),
            tiles_certified_spectral: 0,
            spectral_route_checks: 0,
            tiling_route_checks: 0,
            extension_instances: 0,
            closures: 0,
            status: "incomplete".to_string(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.status == "complete"
    }

    fn absorb(&mut self, outcome: &Classified) {
        let r = &outcome.record;
        self.completed_orbits += 1;
        if let Some(c) = self.per_size.iter_mut().find(|c| c.size == r.size) {
            c.orbits += 1;
            c.spectral += usize::from(r.spectral.verdict == "found");
            c.tiles += usize::from(r.tile.verdict == "found");
            c.t1t2 += usize::from(r.cm.holds());
        }
        if r.in_f {
            self.f_members.push(r.set.clone());
        }
        if r.tile.verdict == "found" && r.spectral.verdict == "exhausted" {
            self.non_spectral_tiles.push(r.set.clone());
        }
        if r.spectral.verdict == "budget_exceeded" || r.tile.verdict == "budget_exceeded" {
            self.unresolved.push(r.set.clone());
        }
        self.failures.extend(r.failures.iter().map(|f| format!("{}: {f}", r.set)));
        self.tiles_certified_spectral += usize::from(r.dual.is_some());
        self.spectral_route_checks += outcome.spectral_checks;
        self.tiling_route_checks += outcome.tiling_checks;
        self.extension_instances += r.extension_instances;
        self.closures += outcome.closures;
    }

    fn finish(&mut self) {
        let done = self.completed_orbits == self.orbits && self.unresolved.is_empty();
        self.status = if done { "complete" } else { "incomplete" }.to_string();
    }
}

fn mode_name(mode: OrbitMode) -> &'static str {
    match mode {
        OrbitMode::Translation => "translation",
        OrbitMode::Affine => "affine",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub records: Vec<SurveyRecord>,
    pub summary: SurveySummary,
}

struct Classified {
    record: SurveyRecord,
    spectral_checks: usize,
    tiling_checks: usize,
    closures: usize,
}

fn failure_text(e: &Error) -> String {
    e.to_string()
}

fn spectral_pair(a: &MaskMultiset, b: &MaskMultiset) -> Result<Option<SpectralPair>> {
    Ok(match verify_spectral_pair(a, b)? {
        SpectralCheck::Verified(p) => Some(p),
        SpectralCheck::Rejected(_) => None,
    })
}

fn certify_dual(a: &MaskMultiset, t: &MaskMultiset, cm: &CmReport) -> Result<Option<DualCertificate>> {
    let (method, spectrum) = match tiling_implies_spectral(a, t) {
        Ok(cert) => ("tiling_certificate", cert.spectrum),
        Err(Error::Domain(_)) if cm.holds() => ("laba", build_laba_spectrum(a)?),
        Err(Error::Domain(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if spectral_pair(a, &spectrum)?.is_none() {
        return Ok(None);
    }
    Ok(Some(DualCertificate { method: method.to_string(), spectrum: spectrum.to_string() }))
}

/// Runs every extension available on `pair` and the absorption-free closure.
/// Returns the number of extensions performed.
fn exercise_extensions(pair: &SpectralPair) -> Result<usize> {
    let primes = pair.a().ctx().primes();
    let mut instances = 0;
    let reversed = spectral_pair(pair.b(), pair.a())?
        .ok_or_else(|| crate::error::invariant(format!("reverse of ({}, {}) is not spectral", pair.a(), pair.b())))?;
    for oriented in [pair, &reversed] {
        for &p in &primes {
            for k in absorption_exponents(oriented.b(), p)? {
                let extended = extend_pair(oriented, p, k)?;
                if spectral_pair(extended.a(), extended.b())?.is_none() {
                    return Err(crate::error::invariant(format!("extension at {p}^{k} is not spectral")));
                }
                instances += 1;
            }
        }
    }
    if instances > 0 {
        let closed = absorption_free_closure(pair)?;
        for &p in &primes {
            if !absorption_exponents(closed.a(), p)?.is_empty() || !absorption_exponents(closed.b(), p)?.is_empty() {
                return Err(crate::error::invariant(format!(
                    "closure ({}, {}) still has absorption at {p}",
                    closed.a(),
                    closed.b()
                )));
            }
        }
        if absorption_free_closure(&closed)? != closed {
            return Err(crate::error::invariant("absorption-free closure is not idempotent".to_string()));
        }
    }
    Ok(instances)
}

fn classify(ctx: &Arc<GroupContext>, bits: u128, options: &SurveyOptions) -> Result<Classified> {
    let a = to_set(ctx, bits);
    let n = ctx.n();
    let mut failures = Vec::new();
    let mut spectral_checks = 0;
    let mut tiling_checks = 0;
    let mut closures = 0;

    let zero_orders = zero_set(&a)?.vanishing_divisors().to_vec();
    let cm = check_t1t2(&a)?;
    let spectral = find_spectrum(&a, options.budget)?;
    let tile = find_tiling_complement(&a, options.budget)?;

    // Both verification routes run inside each verify call and must agree;
    // a disagreement surfaces as an error.
    let mut pair = None;
    if let SearchOutcome::Found(b) = &spectral {
        spectral_checks += 1;
        match spectral_pair(&a, b) {
            Ok(Some(p)) => pair = Some(p),
            Ok(None) => failures.push(format!("spectrum witness {b} fails verification")),
            Err(e) => failures.push(failure_text(&e)),
        }
    }
    spectral_checks += 1;
    if let Err(e) = verify_spectral_pair(&a, &a) {
        failures.push(failure_text(&e));
    }
    if let SearchOutcome::Found(t) = &tile {
        tiling_checks += 1;
        match verify_tiling_pair(&a, t) {
            Ok(c) if c.is_verified() => {}
            Ok(_) => failures.push(format!("complement witness {t} fails verification")),
            Err(e) => failures.push(failure_text(&e)),
        }
    }
    if n.is_multiple_of(a.mass()) {
        tiling_checks += 1;
        let progression: Vec<usize> = (0..n / a.mass()).collect();
        if let Err(e) = verify_tiling_pair(&a, &MaskMultiset::from_elements(ctx, &progression)) {
            failures.push(failure_text(&e));
        }
    }

    let mut dual = None;
    if let SearchOutcome::Found(t) = &tile {
        match certify_dual(&a, t, &cm) {
            Ok(Some(cert)) => dual = Some(cert),
            Ok(None) => failures.push(format!("tile with complement {t} has no spectral certificate")),
            Err(e) => failures.push(failure_text(&e)),
        }
    }

    let in_f = pair.is_some() && tile == SearchOutcome::Exhausted;
    let mut diagnostics = None;
    let mut extension_instances = 0;
    if let Some(pair) = &pair {
        if ctx.two_prime().is_some() {
            if in_f {
                let diag = (|| -> Result<SurveyDiagnostics> {
                    Ok(SurveyDiagnostics {
                        spectrum: pair.b().to_string(),
                        profile: root_profile(pair)?,
                        symmetry: symmetry_check(pair)?,
                        deficits: deficit_bounds_check(pair)?,
                    })
                })();
                match diag {
                    Ok(d) => diagnostics = Some(Box::new(d)),
                    Err(e) => failures.push(failure_text(&e)),
                }
            }
            if options.extensions {
                match exercise_extensions(pair) {
                    Ok(k) => {
                        extension_instances = k;
                        closures += usize::from(k > 0);
                    }
                    Err(e) => failures.push(format!("extension: {}", failure_text(&e))),
                }
            }
        }
    }

    let record = SurveyRecord {
        set: a.to_string(),
        size: a.mass(),
        zero_orders,
        spectral: RecordVerdict::from_outcome(&spectral),
        tile: RecordVerdict::from_outcome(&tile),
        cm,
        dual,
        extension_instances,
        in_f,
        diagnostics,
        failures,
    };
    Ok(Classified { record, spectral_checks, tiling_checks, closures })
}

#[derive(Serialize, Deserialize)]
struct Cursor {
    n: usize,
    mode: String,
    sizes: Vec<usize>,
    budget: u64,
    extensions: bool,
    summary: SurveySummary,
}

fn read_cursor(path: &Path) -> Result<Option<Cursor>> {
    match fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| precondition(format!("cursor {} is unreadable: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(precondition(format!("cursor {}: {e}", path.display()))),
    }
}

fn write_cursor(path: &Path, cursor: &Cursor) -> Result<()> {
    let text = serde_json::to_string(cursor).expect("cursor serializes");
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| precondition(format!("cannot write cursor {}: {e}", path.display())))
}

/// Classifies every canonical subset of `Z_N` of the requested sizes as
/// spectral or not and tile or not, passing each record to `sink` in
/// canonical order. Work inside a chunk runs on the rayon pool.
pub fn survey_stream(
    ctx: &Arc<GroupContext>,
    options: &SurveyOptions,
    sink: &mut dyn FnMut(&SurveyRecord) -> Result<()>,
) -> Result<SurveySummary> {
    let n = ctx.n();
    require_small(n)?;
    let sizes = options.sizes(n);
    let masks = canonical_masks(ctx, &sizes, options.mode);
    let mut summary = SurveySummary::new(n, &sizes, options, masks.len());

    if let Some(path) = &options.cursor {
        if let Some(saved) = read_cursor(path)? {
            let compatible = saved.n == n
                && saved.mode == mode_name(options.mode)
                && saved.sizes == sizes
                && saved.budget == options.budget
                && saved.extensions == options.extensions
                && saved.summary.orbits == masks.len();
            if !compatible {
                return Err(precondition(format!(
                    "cursor {} belongs to a different survey",
                    path.display()
                )));
            }
            summary = saved.summary;
        }
    }

    let chunk = options.chunk.max(1);
    while summary.completed_orbits < masks.len() {
        let start = summary.completed_orbits;
        let end = (start + chunk).min(masks.len());
        let classified: Vec<Result<Classified>> =
            masks[start..end].par_iter().map(|&bits| classify(ctx, bits, options)).collect();
        for outcome in classified {
            let outcome = outcome?;
            sink(&outcome.record)?;
            summary.absorb(&outcome);
        }
        if let Some(path) = &options.cursor {
            let cursor = Cursor {
                n,
                mode: mode_name(options.mode).to_string(),
                sizes: sizes.clone(),
                budget: options.budget,
                extensions: options.extensions,
                summary: summary.clone(),
            };
            write_cursor(path, &cursor)?;
        }
    }
    summary.finish();
    Ok(summary)
}

/// [`survey_stream`] collecting the records.
pub fn fuglede_survey(ctx: &Arc<GroupContext>, options: &SurveyOptions) -> Result<SurveyReport> {
    let mut records = Vec::new();
    let summary = survey_stream(ctx, options, &mut |r| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok(SurveyReport { records, summary })
}
