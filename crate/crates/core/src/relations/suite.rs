use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;

use super::check::{check_correction_rule, check_gf_identity, check_identity, check_linear_rule, CheckContext, DEFAULT_MEM_LIMIT};
use super::corpus::SuiteItem;
use super::report::{CheckedRange, Engine, Status, VerificationReport};
use crate::cache::SeriesCache;

pub const DEFAULT_ORDER: usize = 1024;
pub const DEFAULT_N_MAX: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSettings {
    /// Series order for identities and generating-function identities.
    pub order: usize,
    /// Last index scanned by rules.
    pub n_max: u64,
    pub engine: Engine,
    /// Worker threads; 0 picks the number of available cores.
    pub jobs: usize,
    pub mem_limit: u64,
    /// Record per-item wall time. Off by default so reports are reproducible.
    pub timings: bool,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        SuiteSettings {
            order: DEFAULT_ORDER,
            n_max: DEFAULT_N_MAX,
            engine: Engine::Series,
            jobs: 0,
            mem_limit: DEFAULT_MEM_LIMIT,
            timings: false,
        }
    }
}

/// Checks one item. Panics inside a check become an error report.
pub fn run_item(item: &SuiteItem, settings: &SuiteSettings, cache: &SeriesCache) -> VerificationReport {
    let ctx = CheckContext::new(cache).with_mem_limit(settings.mem_limit);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| match item {
        SuiteItem::Identity(r) => check_identity(r, settings.order, &ctx),
        SuiteItem::Gf(g) => check_gf_identity(g, settings.order, &ctx),
        SuiteItem::Rule(r) => check_linear_rule(r, settings.n_max, settings.engine, &ctx),
        SuiteItem::Correction(c) => check_correction_rule(c, settings.n_max, settings.engine, &ctx),
    }));
    let mut report = outcome.unwrap_or_else(|payload| {
        let reason = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        let range = CheckedRange { from: 0, to: 0 };
        VerificationReport::new(item.name(), item.kind(), settings.engine, range)
            .fail(Status::Error, format!("internal error: {reason}"))
    });
    if settings.timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Runs every item on a pool of `settings.jobs` workers sharing one cache.
/// Reports are ordered by item name, then kind.
pub fn run_suite(items: &[SuiteItem], settings: &SuiteSettings) -> Vec<VerificationReport> {
    run_suite_with(items, settings, &SeriesCache::new())
}

pub fn run_suite_with(items: &[SuiteItem], settings: &SuiteSettings, cache: &SeriesCache) -> Vec<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .expect("thread pool");
    let mut reports: Vec<VerificationReport> =
        pool.install(|| items.par_iter().map(|item| run_item(item, settings, cache)).collect());
    reports.sort_by(|a, b| a.name.cmp(&b.name).then(a.item.cmp(&b.item)));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdsl::{parse, IdentityRecord};

    fn identity(name: &str, lhs: &str, rhs: &str) -> SuiteItem {
        SuiteItem::Identity(IdentityRecord {
            name: name.into(),
            lhs: parse(lhs).unwrap(),
            rhs: parse(rhs).unwrap(),
            source: "test".into(),
        })
    }

    #[test]
    fn empty_suite() {
        assert!(run_suite(&[], &SuiteSettings::default()).is_empty());
    }

    #[test]
    fn sorted_and_independent() {
        let items = vec![
            identity("b", "psi(q)^2", "phi(q)*psi(q^2)"),
            identity("a", "phi(q)", "phi(q^4) + 2q*psi(q^8)"),
            identity("c", "phi(q)", "psi(q)"),
        ];
        let settings = SuiteSettings { order: 256, jobs: 2, ..SuiteSettings::default() };
        let reports = run_suite(&items, &settings);
        let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(reports[0].is_verified() && reports[1].is_verified());
        assert_eq!(reports[2].status, Status::Counterexample);
        let again = run_suite(&items, &SuiteSettings { jobs: 1, ..settings });
        assert_eq!(reports, again);
    }
}
