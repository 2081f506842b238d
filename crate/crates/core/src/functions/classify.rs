//! Exhaustive classification of biset functions at desk scale.

use serde::Serialize;

use super::BisetFunction;
use crate::bisets::{all_bisets, Biset, BisetError, BisetIndexer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub a: Biset,
    pub b: Biset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    const HOLDS: Verdict = Verdict { holds: true, counterexample: None };

    fn fail(a: Biset, b: Biset) -> Verdict {
        Verdict { holds: false, counterexample: Some(Counterexample { a, b }) }
    }

    fn record(&mut self, ok: bool, a: &Biset, b: &Biset) {
        if !ok && self.holds {
            *self = Verdict::fail(*a, *b);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub function: String,
    pub n: usize,
    pub symmetric: Verdict,
    pub modular: Verdict,
    pub supermodular: Verdict,
    pub intersecting_supermodular: Verdict,
    pub crossing_supermodular: Verdict,
    pub positively_intersecting_supermodular: Verdict,
    pub positively_skew_supermodular: Verdict,
    pub independence_free: Verdict,
    pub nonpositive_on_co_void: Verdict,
}

/// All `3ⁿ` values of a function, indexed densely.
pub(crate) struct ValueTable {
    index: BisetIndexer,
    values: Vec<i64>,
}

impl ValueTable {
    pub(crate) fn new(f: &BisetFunction, cap: usize) -> Result<Self, BisetError> {
        let index = BisetIndexer::new(f.ground(), cap)?;
        let mut values = vec![0; index.len()];
        for b in all_bisets(f.ground()) {
            values[index.index(&b)] = f.evaluate(&b);
        }
        Ok(ValueTable { index, values })
    }

    #[inline]
    pub(crate) fn get(&self, b: &Biset) -> i64 {
        self.values[self.index.index(b)]
    }
}

#[inline]
pub(crate) fn supermodular_slack(val: &impl Fn(&Biset) -> i64, a: &Biset, b: &Biset) -> i64 {
    val(&a.meet(b)) + val(&a.join(b)) - val(a) - val(b)
}

#[inline]
pub(crate) fn co_supermodular_slack(val: &impl Fn(&Biset) -> i64, a: &Biset, b: &Biset) -> i64 {
    val(&a.diff(b)) + val(&b.diff(a)) - val(a) - val(b)
}

/// Exhaustively test every class over all `3ⁿ` bisets and their pairs.
pub fn classify(f: &BisetFunction, cap: usize) -> Result<ClassReport, BisetError> {
    let table = ValueTable::new(f, cap)?;
    let val = |b: &Biset| table.get(b);
    let all: Vec<Biset> = all_bisets(f.ground()).collect();

    let mut symmetric = Verdict::HOLDS;
    for a in &all {
        let co = a.co_biset();
        symmetric.record(val(a) == val(&co), a, &co);
    }

    let mut modular = Verdict::HOLDS;
    let mut supermodular = Verdict::HOLDS;
    let mut intersecting = Verdict::HOLDS;
    let mut crossing = Verdict::HOLDS;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            let slack = supermodular_slack(&val, a, b);
            modular.record(slack == 0, a, b);
            supermodular.record(slack >= 0, a, b);
            if a.intersects(b) {
                intersecting.record(slack >= 0, a, b);
                if a.crosses(b) {
                    crossing.record(slack >= 0, a, b);
                }
            }
        }
    }

    Ok(ClassReport {
        function: f.name().to_string(),
        n: f.ground().n(),
        symmetric,
        modular,
        supermodular,
        intersecting_supermodular: intersecting,
        crossing_supermodular: crossing,
        positively_intersecting_supermodular: check_positively_intersecting_supermodular(f, cap)?,
        positively_skew_supermodular: check_positively_skew_supermodular(f, cap)?,
        independence_free: check_independence_free(f, cap)?,
        nonpositive_on_co_void: check_nonpositive_on_co_void(f, cap)?,
    })
}

fn positives(f: &BisetFunction, cap: usize) -> Result<Vec<Biset>, BisetError> {
    Ok(f.positive_bisets(cap)?.into_iter().map(|(b, _)| b).collect())
}

/// Supermodular inequality for every intersecting pair of positive bisets.
pub fn check_positively_intersecting_supermodular(f: &BisetFunction, cap: usize) -> Result<Verdict, BisetError> {
    let pos = positives(f, cap)?;
    let table = ValueTable::new(f, cap)?;
    let val = |b: &Biset| table.get(b);
    let mut v = Verdict::HOLDS;
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            if a.intersects(b) {
                v.record(supermodular_slack(&val, a, b) >= 0, a, b);
                if !v.holds {
                    return Ok(v);
                }
            }
        }
    }
    Ok(v)
}

/// Supermodular or co-supermodular inequality for every positive pair.
pub fn check_positively_skew_supermodular(f: &BisetFunction, cap: usize) -> Result<Verdict, BisetError> {
    let pos = positives(f, cap)?;
    let table = ValueTable::new(f, cap)?;
    let val = |b: &Biset| table.get(b);
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            if supermodular_slack(&val, a, b) < 0 && co_supermodular_slack(&val, a, b) < 0 {
                return Ok(Verdict::fail(*a, *b));
            }
        }
    }
    Ok(Verdict::HOLDS)
}

/// No two distinct positive bisets are independent.
pub fn check_independence_free(f: &BisetFunction, cap: usize) -> Result<Verdict, BisetError> {
    let pos = positives(f, cap)?;
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            if a.relation(b).is_independent() {
                return Ok(Verdict::fail(*a, *b));
            }
        }
    }
    Ok(Verdict::HOLDS)
}

/// `f ≤ 0` on every co-void biset. The counterexample repeats the biset.
pub fn check_nonpositive_on_co_void(f: &BisetFunction, cap: usize) -> Result<Verdict, BisetError> {
    f.ground().check_cap(cap)?;
    Ok(all_bisets(f.ground())
        .filter(|b| b.is_co_void())
        .find(|b| f.evaluate(b) > 0)
        .map_or(Verdict::HOLDS, |b| Verdict::fail(b, b)))
}

/// For symmetric crossing supermodular `f`: every positive pair that is not
/// independent satisfies the supermodular or the co-supermodular inequality.
pub fn check_skew_unless_independent(f: &BisetFunction, cap: usize) -> Result<Verdict, BisetError> {
    let pos = positives(f, cap)?;
    let table = ValueTable::new(f, cap)?;
    let val = |b: &Biset| table.get(b);
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            if a.relation(b).is_independent() {
                continue;
            }
            if supermodular_slack(&val, a, b) < 0 && co_supermodular_slack(&val, a, b) < 0 {
                return Ok(Verdict::fail(*a, *b));
            }
        }
    }
    Ok(Verdict::HOLDS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisets::{GroundSet, NodeSet, DEFAULT_ENUMERATION_CAP as CAP};

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    #[test]
    fn kcs_is_symmetric_crossing_supermodular() {
        for n in 2..=4 {
            for k in 1..=3 {
                let r = classify(&BisetFunction::kcs(g(n), k), CAP).unwrap();
                assert!(r.crossing_supermodular.holds, "n={n} k={k}: {r:?}");
                assert!(r.symmetric.holds);
            }
        }
    }

    #[test]
    fn kcs_is_not_intersecting_supermodular() {
        let r = classify(&BisetFunction::kcs(g(3), 1), CAP).unwrap();
        assert!(!r.intersecting_supermodular.holds);
        let c = r.intersecting_supermodular.counterexample.unwrap();
        assert!(c.a.intersects(&c.b));
    }

    #[test]
    fn boundary_size_is_modular() {
        let r = classify(&BisetFunction::boundary_size(g(4)), CAP).unwrap();
        assert!(r.modular.holds && r.supermodular.holds && r.symmetric.holds);
    }

    #[test]
    fn kcs_is_not_independence_free() {
        let v = g(4);
        let f = BisetFunction::kcs(v, 2);
        let a = v.biset(NodeSet::from_nodes([0]), NodeSet::from_nodes([0, 1]));
        let b = v.biset(NodeSet::from_nodes([1]), NodeSet::from_nodes([0, 1]));
        assert!(f.evaluate(&a) > 0 && f.evaluate(&b) > 0);
        assert!(a.relation(&b).is_independent());
        let verdict = check_independence_free(&f, CAP).unwrap();
        assert!(!verdict.holds);
        let c = verdict.counterexample.unwrap();
        assert!(c.a.relation(&c.b).is_independent());
    }

    #[test]
    fn fan_is_intersecting_supermodular() {
        let v = g(4);
        let f = BisetFunction::fan(v, 2, NodeSet::from_nodes([0, 1]));
        let r = classify(&f, CAP).unwrap();
        assert!(r.intersecting_supermodular.holds);
        assert!(r.nonpositive_on_co_void.holds);
    }

    #[test]
    fn nonsymmetric_function_reports_counterexample() {
        let v = g(3);
        let f = BisetFunction::inner_meet(v, NodeSet::from_nodes([0]));
        let r = classify(&f, CAP).unwrap();
        assert!(r.modular.holds);
        let c = r.symmetric.counterexample.unwrap();
        assert_eq!(c.b, c.a.co_biset());
        assert_ne!(f.evaluate(&c.a), f.evaluate(&c.b));
    }

    #[test]
    fn skew_unless_independent_on_kcs() {
        for n in 3..=5 {
            assert!(check_skew_unless_independent(&BisetFunction::kcs(g(n), 2), CAP).unwrap().holds);
        }
    }
}
