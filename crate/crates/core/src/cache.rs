//! Memo table for theta leaves and generating functions.
//!
//! Entries are computed outside the lock and inserted first-writer-wins, so
//! concurrent fills are idempotent and a lookup never observes a partial
//! value.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::fps::Series;
use crate::seq::{self, SeqSpec, ThetaFunc};

type LeafKey = (ThetaFunc, u64, usize);
type GfKey = (SeqSpec, usize);

#[derive(Default)]
pub struct SeriesCache {
    leaves: Mutex<HashMap<LeafKey, Arc<Series>>>,
    gfs: Mutex<HashMap<GfKey, Arc<Series>>>,
}

impl SeriesCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `phi(q^k)` or `psi(q^k)` to precision `order`.
    pub fn leaf(&self, func: ThetaFunc, k: u64, order: usize) -> Arc<Series> {
        let key = (func, k, order);
        if let Some(s) = self.leaves.lock().unwrap().get(&key) {
            return Arc::clone(s);
        }
        let built = Arc::new(seq::theta(func, k, order));
        let mut map = self.leaves.lock().unwrap();
        Arc::clone(map.entry(key).or_insert(built))
    }

    /// Generating function of `spec` to precision `order`.
    pub fn gf(&self, spec: &SeqSpec, order: usize) -> Arc<Series> {
        let key = (spec.normalized(), order);
        if let Some(s) = self.gfs.lock().unwrap().get(&key) {
            return Arc::clone(s);
        }
        let built = Arc::new(seq::gf(&key.0, order));
        let mut map = self.gfs.lock().unwrap();
        Arc::clone(map.entry(key).or_insert(built))
    }

    pub fn len(&self) -> usize {
        self.leaves.lock().unwrap().len() + self.gfs.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
