use crate::condition::{Condition, Exists};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    fn flip(self) -> Self {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

/// A condition read as `Q(a, body)`: `∃(a, c)` directly, and `¬∃(a, c)` as
/// `∀(a, ¬c)` with a double negation removed.
#[derive(Debug, Clone)]
pub struct Quantified<'a> {
    pub quant: Quant,
    pub exists: &'a Exists,
    pub body: Condition,
}

impl<'a> Quantified<'a> {
    pub fn of(c: &'a Condition) -> Option<Self> {
        match c {
            Condition::Exists(e) => Some(Quantified {
                quant: Quant::Exists,
                exists: e,
                body: e.sub().clone(),
            }),
            Condition::Not(inner) => match &**inner {
                Condition::Exists(e) => Some(Quantified {
                    quant: Quant::Forall,
                    exists: e,
                    body: match e.sub() {
                        Condition::Not(x) => (**x).clone(),
                        other => other.clone().negate(),
                    },
                }),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConditionClass {
    pub basic: bool,
    pub positive: bool,
    pub negative: bool,
    pub existential: bool,
    pub universal: bool,
    pub proper: bool,
    pub generalized_proper: bool,
    pub legit: bool,
}

/// Decides the two non-syntactic parts of legitimacy.
pub trait LegitOracle {
    /// Whether the conjuncts, in the given order, form a preserving sequence.
    fn conjunction_preserving(&self, parts: &[Condition]) -> bool;

    /// Whether a repair program for `c` is known by other means.
    fn has_repair_program(&self, _c: &Condition) -> bool {
        false
    }
}

/// Accepts the sequences for which preservation follows from the shape
/// alone: all negative, all positive, negatives followed by one universal,
/// positives followed by one existential or universal condition.
#[derive(Debug, Clone, Copy, Default)]
pub struct SyntacticOracle;

impl LegitOracle for SyntacticOracle {
    fn conjunction_preserving(&self, parts: &[Condition]) -> bool {
        if parts.len() <= 1 {
            return true;
        }
        let classes: Vec<ConditionClass> = parts.iter().map(|c| classify_with(c, self)).collect();
        let (last, init) = classes.split_last().expect("nonempty");
        if classes.iter().all(|c| c.negative) || classes.iter().all(|c| c.positive) {
            return true;
        }
        (init.iter().all(|c| c.negative) && last.universal)
            || (init.iter().all(|c| c.positive) && (last.existential || last.universal))
    }
}

pub fn classify(c: &Condition) -> ConditionClass {
    classify_with(c, &SyntacticOracle)
}

pub fn classify_with(c: &Condition, oracle: &dyn LegitOracle) -> ConditionClass {
    let q = Quantified::of(c);
    let positive = matches!(c, Condition::Exists(e) if e.sub().is_true());
    let negative = matches!(&q, Some(q) if q.quant == Quant::Forall && q.exists.sub().is_true());
    let chain = alternating_to_true(c);
    let existential = chain && q.as_ref().is_some_and(|q| q.quant == Quant::Exists);
    let universal = chain && q.as_ref().is_some_and(|q| q.quant == Quant::Forall);
    let exists_not = matches!(c, Condition::Exists(e) if is_negative(e.sub()));
    let proper = c.is_true() || chain || negative || exists_not;
    let generalized_proper = !proper
        && q.as_ref()
            .is_some_and(|q| oracle.has_repair_program(&q.body) || classify_with(&q.body, oracle).legit);
    let legit = proper
        || generalized_proper
        || oracle.has_repair_program(c)
        || match c {
            Condition::And(cs) => {
                cs.iter().all(|c| classify_with(c, oracle).legit) && oracle.conjunction_preserving(cs)
            }
            Condition::Or(cs) => cs.iter().any(|c| classify_with(c, oracle).legit),
            _ => false,
        };
    ConditionClass {
        basic: positive || negative,
        positive,
        negative,
        existential,
        universal,
        proper,
        generalized_proper,
        legit,
    }
}

fn is_negative(c: &Condition) -> bool {
    matches!(c, Condition::Not(inner) if matches!(&**inner, Condition::Exists(e) if e.sub().is_true()))
}

/// `Q₁(a₁, Q₂(a₂, …, true))` with `Qᵢ₊₁` the dual of `Qᵢ`.
fn alternating_to_true(c: &Condition) -> bool {
    fn go(c: &Condition, expect: Option<Quant>) -> bool {
        let Some(q) = Quantified::of(c) else {
            return false;
        };
        if expect.is_some_and(|e| e != q.quant) {
            return false;
        }
        q.body.is_true() || go(&q.body, Some(q.quant.flip()))
    }
    go(c, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{condition::fixtures::*, graph::TypedGraph};

    #[test]
    fn negative_basic() {
        let c = classify(&Condition::not_exists(&TypedGraph::empty(), pl()).unwrap());
        assert!(c.negative && c.basic && c.proper && c.legit);
        assert!(!c.universal && !c.existential && !c.positive);
    }

    #[test]
    fn forall_exists_is_universal() {
        let c = classify(&every_place_has_token());
        assert!(c.universal && c.proper && c.legit);
        assert!(!c.existential && !c.negative && !c.basic);
    }

    #[test]
    fn exists_not_exists_is_proper_not_existential() {
        let inner = Condition::not_exists(&pl(), pl_tok_tk()).unwrap();
        let d = Condition::exists(&TypedGraph::empty(), pl(), inner).unwrap();
        let c = classify(&d);
        assert!(c.proper && c.legit);
        assert!(!c.existential && !c.universal);
    }

    #[test]
    fn positive_is_existential() {
        let c = classify(&Condition::exists_plain(&TypedGraph::empty(), pl()).unwrap());
        assert!(c.positive && c.existential && c.proper);
    }

    #[test]
    fn forall_not_exists_is_generalized_proper() {
        let d = Condition::forall(
            &TypedGraph::empty(),
            pl(),
            Condition::not_exists(&pl(), pl_tok_tk()).unwrap(),
        )
        .unwrap();
        let c = classify(&d);
        assert!(!c.proper && c.generalized_proper && c.legit);
    }

    #[test]
    fn conjunctions_follow_the_oracle() {
        let e = TypedGraph::empty();
        let neg = Condition::not_exists(&e, two_containers()).unwrap();
        let uni = every_place_has_token();
        assert!(classify(&Condition::and([neg.clone(), uni.clone()])).legit);
        // a universal before a negative is not covered by shape alone
        assert!(!classify(&Condition::and([uni.clone(), neg.clone()])).legit);
        assert!(!classify(&Condition::and([uni.clone(), uni.clone()])).legit);

        struct Always;
        impl LegitOracle for Always {
            fn conjunction_preserving(&self, _: &[Condition]) -> bool {
                true
            }
        }
        assert!(classify_with(&Condition::and([uni.clone(), neg]), &Always).legit);
    }

    #[test]
    fn disjunction_needs_one_legit_part() {
        let e = TypedGraph::empty();
        let uni = every_place_has_token();
        let bad = Condition::and([uni.clone(), uni.clone()]);
        assert!(classify(&Condition::or([bad.clone(), Condition::not_exists(&e, pl()).unwrap()])).legit);
        assert!(!classify(&Condition::or([bad.clone(), bad])).legit);
    }

    #[test]
    fn forall_true_and_false() {
        let e = TypedGraph::empty();
        let vacuous = Condition::forall(&e, pl(), Condition::True).unwrap();
        assert!(classify(&vacuous).proper);
        assert!(classify(&Condition::True).proper);
        assert!(!classify(&Condition::falsity()).legit);
    }
}
