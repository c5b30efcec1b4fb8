use crate::{
    condition::{equivalent, Condition, Exists},
    graph::{has_match, PartialMorphism},
};

/// Equivalence-preserving clean-up: constant folding, double negation,
/// flattening, De Morgan for negated disjunctions, removal of duplicate
/// operands and of `∄X` conjuncts implied by a smaller `∄Y` (dually for
/// `∃` disjuncts).
pub fn simplify(c: &Condition) -> Condition {
    match c {
        Condition::True => Condition::True,
        Condition::Not(inner) => match simplify(inner) {
            Condition::Not(x) => *x,
            Condition::Or(xs) => simplify(&Condition::And(xs.into_iter().map(Condition::negate).collect())),
            other => Condition::Not(Box::new(other)),
        },
        Condition::Exists(e) => {
            let sub = simplify(e.sub());
            if sub.is_false() {
                Condition::falsity()
            } else {
                Condition::exists_unchecked(e.graph().clone(), e.from_anchor().clone(), sub)
            }
        }
        Condition::And(cs) => {
            let mut parts = Vec::new();
            for c in cs {
                match simplify(c) {
                    Condition::True => {}
                    f if f.is_false() => return Condition::falsity(),
                    Condition::And(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            let parts = drop_subsumed(dedupe(parts), true);
            if has_complement(&parts) {
                return Condition::falsity();
            }
            match parts.len() {
                0 => Condition::True,
                1 => parts.into_iter().next().expect("one"),
                _ => Condition::And(parts),
            }
        }
        Condition::Or(cs) => {
            let mut parts = Vec::new();
            for c in cs {
                match simplify(c) {
                    Condition::True => return Condition::True,
                    f if f.is_false() => {}
                    Condition::Or(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            let parts = drop_subsumed(dedupe(parts), false);
            if has_complement(&parts) {
                return Condition::True;
            }
            match parts.len() {
                0 => Condition::falsity(),
                1 => parts.into_iter().next().expect("one"),
                _ => Condition::Or(parts),
            }
        }
    }
}

fn dedupe(parts: Vec<Condition>) -> Vec<Condition> {
    let mut out: Vec<Condition> = Vec::with_capacity(parts.len());
    for p in parts {
        if !out.iter().any(|q| q == &p || equivalent(q, &p)) {
            out.push(p);
        }
    }
    out
}

/// Some operand is the negation of another one.
fn has_complement(parts: &[Condition]) -> bool {
    parts.iter().any(|p| {
        let Condition::Not(inner) = p else { return false };
        parts.iter().any(|q| equivalent(q, inner))
    })
}

/// In a conjunction, `∄Y` implies `∄X` whenever `Y` embeds into `X` over
/// the anchor; in a disjunction, `∃X` implies `∃Y`. Either way the operand
/// over `X` is redundant.
fn drop_subsumed(parts: Vec<Condition>, conjunction: bool) -> Vec<Condition> {
    let plain = |c: &Condition| -> Option<Exists> {
        let e = if conjunction {
            match c {
                Condition::Not(inner) => match &**inner {
                    Condition::Exists(e) => e,
                    _ => return None,
                },
                _ => return None,
            }
        } else {
            match c {
                Condition::Exists(e) => e,
                _ => return None,
            }
        };
        e.sub().is_true().then(|| (**e).clone())
    };
    let basics: Vec<Option<Exists>> = parts.iter().map(plain).collect();
    let mut dropped = vec![false; parts.len()];
    for i in 0..parts.len() {
        let Some(x) = &basics[i] else { continue };
        for j in 0..parts.len() {
            if i == j || dropped[j] {
                continue;
            }
            let Some(y) = &basics[j] else { continue };
            if embeds_over_anchor(y, x) {
                dropped[i] = true;
                break;
            }
        }
    }
    parts
        .into_iter()
        .zip(dropped)
        .filter(|(_, d)| !d)
        .map(|(p, _)| p)
        .collect()
}

fn embeds_over_anchor(y: &Exists, x: &Exists) -> bool {
    let (gy, gx) = (y.graph(), x.graph());
    if gy.size() > gx.size() {
        return false;
    }
    let mut fixed = PartialMorphism::undefined(gy.node_count(), gy.edge_count());
    for (k, &v) in y.from_anchor().nodes.iter().enumerate() {
        fixed.nodes[v] = Some(x.from_anchor().nodes[k]);
    }
    for (k, &e) in y.from_anchor().edges.iter().enumerate() {
        fixed.edges[e] = Some(x.from_anchor().edges[k]);
    }
    has_match(gy, gx, &fixed)
}
