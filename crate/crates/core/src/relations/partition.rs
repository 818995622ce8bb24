use super::model::{LinearRule, ResidueClass};

/// How many times each residue modulo `modulus` is claimed by a case table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCover {
    pub modulus: u64,
    /// Claims per residue: rule domains plus the shared exclusion.
    pub counts: Vec<u32>,
}

impl ResidueCover {
    pub fn is_partition(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }

    pub fn gaps(&self) -> Vec<u64> {
        self.residues_where(|c| c == 0)
    }

    pub fn overlaps(&self) -> Vec<u64> {
        self.residues_where(|c| c > 1)
    }

    fn residues_where(&self, pred: impl Fn(u32) -> bool) -> Vec<u64> {
        (0..self.modulus).filter(|&r| pred(self.counts[r as usize])).collect()
    }
}

/// Lifts the domains of `rules`, and their exclusions, to `modulus`.
///
/// Every rule must share the same exclusion, and every modulus involved must
/// divide `modulus`.
pub fn residue_cover(rules: &[&LinearRule], modulus: u64) -> Result<ResidueCover, String> {
    if modulus == 0 {
        return Err("modulus must be positive".into());
    }
    let exclusion = rules.first().and_then(|r| r.exclude.clone());
    let mut counts = vec![0u32; modulus as usize];
    let mut claim = |class: &ResidueClass| -> Result<(), String> {
        class.validate()?;
        if !modulus.is_multiple_of(class.modulus) {
            return Err(format!("modulus {} does not divide {modulus}", class.modulus));
        }
        for (r, count) in counts.iter_mut().enumerate() {
            if class.contains(r as u64) {
                *count += 1;
            }
        }
        Ok(())
    };
    for rule in rules {
        if rule.exclude != exclusion {
            return Err(format!("{} has a different exclusion", rule.name));
        }
        claim(&rule.domain)?;
    }
    if let Some(ex) = &exclusion {
        claim(ex)?;
    }
    Ok(ResidueCover { modulus, counts })
}
