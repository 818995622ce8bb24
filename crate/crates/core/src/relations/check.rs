use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::model::{CorrectionRule, GfIdentity, LinearRule, SeqAt};
use super::report::{CheckedRange, Engine, Exceptional, ItemKind, Status, VerificationReport, Witness};
use crate::cache::SeriesCache;
use crate::fps::{Comparison, Series};
use crate::qdsl::{eval_with, IdentityRecord};
use crate::seq::{oracle_count, SeqSpec};

/// Default memory budget for series built by a single check: 4 GiB.
pub const DEFAULT_MEM_LIMIT: u64 = 4 << 30;

/// Shared state for a batch of checks.
pub struct CheckContext<'a> {
    pub cache: &'a SeriesCache,
    /// Upper bound, in bytes, on the estimated footprint of the series one
    /// check needs.
    pub mem_limit: u64,
}

impl<'a> CheckContext<'a> {
    pub fn new(cache: &'a SeriesCache) -> Self {
        CheckContext { cache, mem_limit: DEFAULT_MEM_LIMIT }
    }

    pub fn with_mem_limit(mut self, bytes: u64) -> Self {
        self.mem_limit = bytes;
        self
    }

    fn reserve(&self, order: usize, series: usize) -> Result<(), String> {
        // A BigInt is 32 bytes inline plus a limb when nonzero; products need
        // a few temporaries on top of the stored series.
        let estimate = (series as u128 + 3) * order as u128 * 40;
        if estimate > self.mem_limit as u128 {
            return Err(format!(
                "resource limit: {series} series of order {order} need about {estimate} bytes, \
                 over the {} byte budget",
                self.mem_limit
            ));
        }
        Ok(())
    }
}

/// Evaluates sequence values along affine indices with the selected engine.
struct SideTables {
    engine: Engine,
    series: HashMap<SeqSpec, Arc<Series>>,
}

impl SideTables {
    fn build(
        sides: impl Iterator<Item = SeqAt>,
        n_max: u64,
        engine: Engine,
        ctx: &CheckContext<'_>,
    ) -> Result<SideTables, String> {
        let sides: Vec<SeqAt> = sides.collect();
        let mut series = HashMap::new();
        if engine != Engine::Oracle {
            let order = sides
                .iter()
                .map(|s| s.at.mul.checked_mul(n_max).and_then(|v| v.checked_add(s.at.add + 1)))
                .try_fold(0u64, |acc, o| o.map(|o| acc.max(o)))
                .and_then(|o| usize::try_from(o).ok())
                .ok_or_else(|| "resource limit: required series order overflows".to_string())?;
            let mut specs: Vec<SeqSpec> = sides.iter().map(|s| s.spec().normalized()).collect();
            specs.sort();
            specs.dedup();
            ctx.reserve(order, specs.len())?;
            for spec in specs {
                series.insert(spec, ctx.cache.gf(&spec, order));
            }
        }
        Ok(SideTables { engine, series })
    }

    fn series_value(&self, side: &SeqAt, n: u64) -> BigInt {
        let s = &self.series[&side.spec().normalized()];
        s.coefficient(side.at.apply(n) as usize)
            .expect("series built to cover every index of the scan")
            .clone()
    }

    fn value(&self, side: &SeqAt, n: u64) -> Result<BigInt, String> {
        match self.engine {
            Engine::Series => Ok(self.series_value(side, n)),
            Engine::Oracle => Ok(oracle_value(side, n)),
            Engine::Both => {
                let s = self.series_value(side, n);
                let o = oracle_value(side, n);
                if s == o {
                    Ok(s)
                } else {
                    Err(format!(
                        "engines disagree on {}({};{}) at n={n}: series={s}, oracle={o}",
                        side.kind,
                        side.form,
                        side.at.apply(n)
                    ))
                }
            }
        }
    }
}

fn oracle_value(side: &SeqAt, n: u64) -> BigInt {
    BigInt::from(oracle_count(&side.spec(), side.at.apply(n)))
}

fn rule_sides(rule: &LinearRule, n: u64, eval: impl Fn(&SeqAt, u64) -> Result<BigInt, String>) -> Result<(BigInt, BigInt), String> {
    let lhs = eval(&rule.lhs, n)?;
    let mut rhs = BigInt::zero();
    for term in &rule.rhs {
        rhs += BigInt::from(term.coef) * eval(&term.seq(), n)?;
    }
    Ok((lhs, rhs))
}

fn rule_holds(rule: &LinearRule, lhs: &BigInt, rhs: &BigInt) -> bool {
    lhs * BigInt::from(rule.ratio.den) == rhs * BigInt::from(rule.ratio.num)
}

/// Scans `n_start..=n_max` over the rule's admissible residues.
pub fn check_linear_rule(rule: &LinearRule, n_max: u64, engine: Engine, ctx: &CheckContext<'_>) -> VerificationReport {
    let range = CheckedRange { from: rule.n_start, to: n_max };
    let mut report = VerificationReport::new(&rule.name, ItemKind::LinearRule, engine, range);
    if let Err(e) = rule.validate() {
        return report.fail(Status::Error, format!("invalid rule: {e}"));
    }
    if n_max < rule.n_start {
        return report.fail(Status::Skipped, "empty range");
    }
    let tables = match SideTables::build(rule.sides(), n_max, engine, ctx) {
        Ok(t) => t,
        Err(e) => return report.fail(Status::Error, e),
    };
    for n in (rule.n_start..=n_max).filter(|&n| rule.admits(n)) {
        report.checked += 1;
        let (lhs, rhs) = match rule_sides(rule, n, |s, n| tables.value(s, n)) {
            Ok(v) => v,
            Err(e) => return report.fail(Status::Error, e),
        };
        if rule_holds(rule, &lhs, &rhs) {
            continue;
        }
        report.witness = Some(Witness { n, lhs: lhs.to_string(), rhs: rhs.to_string() });
        if engine == Engine::Series {
            let (olhs, orhs) = rule_sides(rule, n, |s, n| Ok(oracle_value(s, n))).expect("oracle is total");
            if rule_holds(rule, &olhs, &orhs) {
                return report.fail(
                    Status::Error,
                    format!("series engine disagrees with oracle (oracle lhs={olhs}, rhs={orhs})"),
                );
            }
        }
        let r = rule.ratio;
        return report.fail(Status::Counterexample, format!("{}*lhs != {}*rhs", r.den, r.num));
    }
    report
}

/// Compares `scale_den * sum_n seq(mul*n+add) q^n` against the theta
/// expression to `order` coefficients.
pub fn check_gf_identity(id: &GfIdentity, order: usize, ctx: &CheckContext<'_>) -> VerificationReport {
    let range = CheckedRange { from: 0, to: order.saturating_sub(1) as u64 };
    let mut report = VerificationReport::new(&id.name, ItemKind::GfIdentity, Engine::Series, range);
    report.flags = id.flags.clone();
    if let Err(e) = id.validate() {
        return report.fail(Status::Error, format!("configuration error: {e}"));
    }
    if order == 0 {
        return report.fail(Status::Error, "order must be positive");
    }
    let (m, add) = (id.at.mul as usize, id.at.add as usize);
    let needed = m * (order - 1) + add + 1;
    if let Err(e) = ctx.reserve(needed, 2) {
        return report.fail(Status::Error, e);
    }
    let gf = ctx.cache.gf(&id.seq, needed);
    let lhs = gf
        .extract_progression(m, add % m)
        .and_then(|s| s.shift_down(add / m))
        .and_then(|s| s.truncate(order))
        .map(|s| s.scale(&BigInt::from(id.scale_den)));
    let lhs = match lhs {
        Ok(s) => s,
        Err(e) => return report.fail(Status::Error, e.to_string()),
    };
    let rhs = match eval_with(&id.rhs, order, ctx.cache) {
        Ok(s) => s,
        Err(e) => return report.fail(Status::Error, e.to_string()),
    };
    report.checked = order as u64;
    match lhs.equal_to_order(&rhs, order) {
        Ok(Comparison::Equal) => report,
        Ok(Comparison::Differs { exponent, left, right }) => {
            let n = exponent as u64;
            report.witness = Some(Witness { n, lhs: left.to_string(), rhs: right.to_string() });
            let oracle_lhs = BigInt::from(oracle_count(&id.seq, id.at.apply(n))) * BigInt::from(id.scale_den);
            if oracle_lhs == right {
                return report.fail(Status::Error, "series engine disagrees with oracle");
            }
            let mut msg = format!("coefficient of q^{n} differs");
            if !id.flags.is_empty() {
                msg.push_str(&format!("; flagged {}", id.flags.join(",")));
            }
            report.fail(Status::Counterexample, msg)
        }
        Err(e) => report.fail(Status::Error, e.to_string()),
    }
}

/// Compares both sides of a theta-series identity to `order` coefficients.
pub fn check_identity(rec: &IdentityRecord, order: usize, ctx: &CheckContext<'_>) -> VerificationReport {
    let range = CheckedRange { from: 0, to: order.saturating_sub(1) as u64 };
    let mut report = VerificationReport::new(&rec.name, ItemKind::Identity, Engine::Series, range);
    if let Err(e) = ctx.reserve(order, 4) {
        return report.fail(Status::Error, e);
    }
    let sides = eval_with(&rec.lhs, order, ctx.cache)
        .and_then(|l| eval_with(&rec.rhs, order, ctx.cache).map(|r| (l, r)));
    let (lhs, rhs) = match sides {
        Ok(v) => v,
        Err(e) => return report.fail(Status::Error, e.to_string()),
    };
    report.checked = order as u64;
    match lhs.equal_to_order(&rhs, order) {
        Ok(Comparison::Equal) => report,
        Ok(Comparison::Differs { exponent, left, right }) => {
            report.witness = Some(Witness { n: exponent as u64, lhs: left.to_string(), rhs: right.to_string() });
            report.fail(Status::Counterexample, format!("coefficient of q^{exponent} differs"))
        }
        Err(e) => report.fail(Status::Error, e.to_string()),
    }
}

/// Value predicted by the first family that fires at `n`, or 0.
///
/// Families are alternative descriptions of the same exceptional set, so
/// every solution `k` of every firing family must give the same value.
pub fn predicted_correction(rule: &CorrectionRule, n: u64) -> Result<i64, String> {
    let mut predicted: Option<i64> = None;
    for family in &rule.families {
        for k in family.solutions(n) {
            let v = family.value.at(k);
            match predicted {
                None => predicted = Some(v),
                Some(p) if p == v => {}
                Some(p) => {
                    return Err(format!("ambiguous prediction at n={n}: families give {p} and {v}"));
                }
            }
        }
    }
    Ok(predicted.unwrap_or(0))
}

enum Residual {
    Exact(BigInt),
    /// `subtrahend` was not divisible by the denominator.
    NonIntegral { minuend: BigInt, subtrahend: BigInt },
}

fn residual(rule: &CorrectionRule, n: u64, eval: impl Fn(&SeqAt, u64) -> Result<BigInt, String>) -> Result<Residual, String> {
    let minuend = eval(&rule.minuend, n)?;
    let subtrahend = eval(&rule.subtrahend, n)?;
    let (quot, rem) = subtrahend.div_rem(&BigInt::from(rule.subtrahend_den));
    if !rem.is_zero() {
        return Ok(Residual::NonIntegral { minuend, subtrahend });
    }
    Ok(Residual::Exact(minuend - quot))
}

/// Scans the residual `minuend - subtrahend/den` against the family
/// prediction for `n_start..=n_max`.
pub fn check_correction_rule(rule: &CorrectionRule, n_max: u64, engine: Engine, ctx: &CheckContext<'_>) -> VerificationReport {
    let range = CheckedRange { from: rule.n_start, to: n_max };
    let mut report = VerificationReport::new(&rule.name, ItemKind::CorrectionRule, engine, range);
    if let Err(e) = rule.validate() {
        return report.fail(Status::Error, format!("invalid rule: {e}"));
    }
    if n_max < rule.n_start {
        return report.fail(Status::Skipped, "empty range");
    }
    let sides = [rule.minuend, rule.subtrahend];
    let tables = match SideTables::build(sides.into_iter(), n_max, engine, ctx) {
        Ok(t) => t,
        Err(e) => return report.fail(Status::Error, e),
    };
    let den = rule.subtrahend_den;
    for n in rule.n_start..=n_max {
        report.checked += 1;
        let predicted = match predicted_correction(rule, n) {
            Ok(p) => BigInt::from(p),
            Err(e) => return report.fail(Status::Error, e),
        };
        let value = match residual(rule, n, |s, n| tables.value(s, n)) {
            Ok(Residual::Exact(v)) => v,
            Ok(Residual::NonIntegral { minuend, subtrahend }) => {
                report.witness = Some(Witness {
                    n,
                    lhs: format!("{minuend} - {subtrahend}/{den}"),
                    rhs: predicted.to_string(),
                });
                return report.fail(
                    Status::Counterexample,
                    format!("{} is not divisible by {den}", rule.subtrahend),
                );
            }
            Err(e) => return report.fail(Status::Error, e),
        };
        if !value.is_zero() {
            report.exceptional.push(Exceptional { n, value: value.to_string() });
        }
        if value == predicted {
            continue;
        }
        report.witness = Some(Witness { n, lhs: value.to_string(), rhs: predicted.to_string() });
        if engine == Engine::Series {
            let confirmed = match residual(rule, n, |s, n| Ok(oracle_value(s, n))) {
                Ok(Residual::Exact(v)) => v != predicted,
                _ => true,
            };
            if !confirmed {
                return report.fail(Status::Error, "series engine disagrees with oracle");
            }
        }
        return report.fail(Status::Counterexample, "residual differs from prediction");
    }
    report
}
