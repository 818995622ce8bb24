//! Closed-form relations between `t(a,b,c;n)` and `N(a,b,c;·)` that hold for
//! whole families of forms.

use super::model::{AffineIndex, LinearRule, Ratio, ResidueClass, RhsTerm, SeqAt};
use crate::seq::{form_constant, Form, SeqKind};

pub const DEFAULT_ODD_PAIR_BOUND: u64 = 12;

pub const GROUP_SMALL: &str = "small_forms";
pub const GROUP_WEIGHT8: &str = "weight8_forms";
pub const GROUP_ODD_PAIR: &str = "odd_pair_forms";

fn n_term(coef: i64, form: Form, at: AffineIndex) -> RhsTerm {
    RhsTerm { coef, kind: SeqKind::Squares, form, at }
}

fn rule(group: &str, form: Form, rhs: Vec<RhsTerm>, ratio: Ratio) -> LinearRule {
    let [a, b, c] = form.coefficients();
    LinearRule {
        name: format!("{group}_{a}_{b}_{c}"),
        group: Some(group.to_string()),
        lhs: SeqAt::new(SeqKind::Triangular, form, AffineIndex::IDENTITY),
        rhs,
        ratio,
        domain: ResidueClass::all(),
        exclude: None,
        n_start: 1,
        note: None,
    }
}

fn sorted_forms(sum_max: u64) -> impl Iterator<Item = Form> {
    (1..=sum_max).flat_map(move |a| {
        (a..=sum_max).flat_map(move |b| {
            (b..=sum_max).filter(move |&c| a + b + c <= sum_max).map(move |c| Form::new(a, b, c).unwrap())
        })
    })
}

/// Every rule of the three families:
///
/// * `a+b+c <= 7`: `(2+C) t(n) = 2 N(8n+a+b+c)`;
/// * `a+b+c == 8`: `(2+C) t(n) = 2 (N(8n+8) - N(2n+2))`;
/// * `a, b` odd, `a = b (mod 4)`, `c = 2 (mod 4)`, all below `bound`:
///   `t(n) = N(8n+s) - N(2n+s/4)` with `s = a+b+c`.
///
/// `C` is the form constant. Forms are emitted with `a <= b` and, in the
/// first two families, `b <= c`.
pub fn generate_ach_rules(bound: u64) -> Vec<LinearRule> {
    let mut rules = Vec::new();
    for form in sorted_forms(7) {
        let c = form_constant(form).value;
        let at = AffineIndex::new(8, form.sum());
        rules.push(rule(GROUP_SMALL, form, vec![n_term(1, form, at)], Ratio::new(2, 2 + c)));
    }
    for form in sorted_forms(8).filter(|f| f.sum() == 8) {
        let c = form_constant(form).value;
        let rhs = vec![
            n_term(1, form, AffineIndex::new(8, 8)),
            n_term(-1, form, AffineIndex::new(2, 2)),
        ];
        rules.push(rule(GROUP_WEIGHT8, form, rhs, Ratio::new(2, 2 + c)));
    }
    for a in (1..bound).step_by(2) {
        for b in (a..bound).step_by(4) {
            for c in (2..bound).step_by(4) {
                let form = Form::new(a, b, c).unwrap();
                let s = form.sum();
                let rhs = vec![
                    n_term(1, form, AffineIndex::new(8, s)),
                    n_term(-1, form, AffineIndex::new(2, s / 4)),
                ];
                rules.push(rule(GROUP_ODD_PAIR, form, rhs, Ratio::new(1, 1)));
            }
        }
    }
    rules
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(rules: &'a [LinearRule], name: &str) -> &'a LinearRule {
        rules.iter().find(|r| r.name == name).unwrap()
    }

    #[test]
    fn family_sizes() {
        let rules = generate_ach_rules(DEFAULT_ODD_PAIR_BOUND);
        let count = |g: &str| rules.iter().filter(|r| r.group.as_deref() == Some(g)).count();
        assert_eq!(count(GROUP_SMALL), 11);
        assert_eq!(count(GROUP_WEIGHT8), 5);
        // 12 odd pairs a <= b < 12 with a = b (mod 4), c in {2, 6, 10}
        assert_eq!(count(GROUP_ODD_PAIR), 36);
    }

    #[test]
    fn documented_examples() {
        let rules = generate_ach_rules(DEFAULT_ODD_PAIR_BOUND);
        let r = find(&rules, "small_forms_1_1_1");
        assert_eq!(r.ratio, Ratio::new(2, 2));
        assert_eq!(r.rhs[0].at, AffineIndex::new(8, 3));

        let r = find(&rules, "small_forms_1_1_2");
        assert_eq!(r.ratio, Ratio::new(2, 3));

        let r = find(&rules, "weight8_forms_1_3_4");
        assert_eq!(r.ratio, Ratio::new(2, 3));
        assert_eq!(r.rhs[1].coef, -1);
        assert_eq!(r.rhs[1].at, AffineIndex::new(2, 2));

        let r = find(&rules, "odd_pair_forms_1_1_2");
        assert_eq!(r.ratio, Ratio::new(1, 1));
        assert_eq!(r.rhs[0].at, AffineIndex::new(8, 4));
        assert_eq!(r.rhs[1].at, AffineIndex::new(2, 1));
        assert!(rules.iter().any(|r| r.name == "odd_pair_forms_1_5_2"));
    }

    #[test]
    fn all_generated_rules_validate() {
        for r in generate_ach_rules(20) {
            r.validate().unwrap();
        }
    }
}
