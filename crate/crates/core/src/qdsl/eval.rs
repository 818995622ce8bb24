use num_bigint::BigInt;

use super::ast::{Factor, Term, ThetaExpr};
use crate::cache::SeriesCache;
use crate::fps::{Series, SeriesError};

/// Evaluates `expr` to exactly `order` coefficients.
pub fn eval(expr: &ThetaExpr, order: usize) -> Result<Series, SeriesError> {
    eval_with(expr, order, &SeriesCache::new())
}

/// Like [`eval`], drawing theta leaves from a shared cache.
pub fn eval_with(expr: &ThetaExpr, order: usize, cache: &SeriesCache) -> Result<Series, SeriesError> {
    if order == 0 {
        return Err(SeriesError::ZeroPrecision);
    }
    let mut total = Series::zero(order);
    for term in &expr.terms {
        total = total.add(&eval_term(term, order, cache)?);
    }
    Ok(total)
}

fn eval_term(term: &Term, order: usize, cache: &SeriesCache) -> Result<Series, SeriesError> {
    let shift = usize::try_from(term.qexponent).unwrap_or(usize::MAX);
    if shift >= order {
        return Ok(Series::zero(order));
    }
    let mut product: Option<Series> = None;
    for factor in &term.factors {
        let value = eval_factor(factor, order, cache);
        product = Some(match product {
            None => value,
            Some(p) => p.mul(&value),
        });
    }
    let product = product.unwrap_or_else(|| Series::one(order));
    product
        .monomial_scale(&BigInt::from(term.coefficient), shift)
        .truncate(order)
}

fn eval_factor(factor: &Factor, order: usize, cache: &SeriesCache) -> Series {
    let leaf = cache.leaf(factor.func, factor.arg, order);
    let mut acc = (*leaf).clone();
    for _ in 1..factor.power {
        acc = acc.mul(&leaf);
    }
    acc
}
