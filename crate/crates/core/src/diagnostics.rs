//! Fiber structure of colorings of `G x Z_n`, `n` odd.
//!
//! For `g` in `G` the fiber is `P_g = {(g, x) : x in Z_n}`. For a
//! rainbow-free coloring whose fiber `P_0` carries the most colors, every
//! other fiber adds at most one color of its own, and the auxiliary coloring
//! of `G` that records that extra color (or `Alpha` when there is none) is
//! again rainbow-free. These checks test both statements on concrete
//! colorings rather than assuming them.

use std::collections::BTreeSet;

use crate::ap::{enumerate_aps, is_rainbow_free};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// `G x Z_n` viewed as `|G|` fibers of size `n`. Element `(g, x)` has index
/// `g * n + x`, matching `base.times_cyclic(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSplit {
    pub base: GroupSpec,
    pub fiber_order: u64,
}

impl FiberSplit {
    pub fn new(base: GroupSpec, fiber_order: u64) -> Self {
        Self { base, fiber_order }
    }

    pub fn total(&self) -> Result<GroupSpec> {
        self.base.times_cyclic(self.fiber_order)
    }

    fn check(&self, coloring: &Coloring) -> Result<()> {
        if coloring.len() != self.base.order() * self.fiber_order as usize {
            return Err(Error::InconsistentSplit {
                base: self.base.to_string(),
                fiber: self.fiber_order,
                order: coloring.len(),
            });
        }
        Ok(())
    }

    fn check_odd(&self) -> Result<()> {
        if self.fiber_order.is_multiple_of(2) {
            return Err(Error::EvenFiber(self.fiber_order));
        }
        Ok(())
    }
}

/// `c(P_g)` for each `g`, in element-index order of the base.
pub fn fiber_color_profile(coloring: &Coloring, split: &FiberSplit) -> Result<Vec<BTreeSet<u32>>> {
    split.check(coloring)?;
    let n = split.fiber_order as usize;
    Ok(coloring
        .colors()
        .chunks_exact(n)
        .map(|fiber| fiber.iter().copied().collect())
        .collect())
}

/// First fiber with the most colors.
fn widest_fiber(profile: &[BTreeSet<u32>]) -> usize {
    let mut best = 0;
    for (g, set) in profile.iter().enumerate() {
        if set.len() > profile[best].len() {
            best = g;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberLemmaReport {
    pub holds: bool,
    /// Index in the base of the fiber compared against.
    pub base_fiber: usize,
    /// Fibers with two or more colors missing from the base fiber.
    pub violations: Vec<usize>,
}

/// Whether `|c(P_g) \ c(P_b)| <= 1` for all `g`, with `P_b` the first
/// fiber of maximum color count.
pub fn check_fiber_lemma(coloring: &Coloring, split: &FiberSplit) -> Result<FiberLemmaReport> {
    split.check_odd()?;
    let profile = fiber_color_profile(coloring, split)?;
    Ok(fiber_lemma_against(&profile, widest_fiber(&profile)))
}

/// The same comparison against an arbitrary base fiber.
pub fn check_fiber_lemma_at(
    coloring: &Coloring,
    split: &FiberSplit,
    base_fiber: usize,
) -> Result<FiberLemmaReport> {
    split.check_odd()?;
    let profile = fiber_color_profile(coloring, split)?;
    if base_fiber >= profile.len() {
        return Err(Error::IndexOutOfRange {
            index: base_fiber,
            order: profile.len(),
        });
    }
    Ok(fiber_lemma_against(&profile, base_fiber))
}

fn fiber_lemma_against(profile: &[BTreeSet<u32>], base_fiber: usize) -> FiberLemmaReport {
    let base = &profile[base_fiber];
    let violations: Vec<usize> = profile
        .iter()
        .enumerate()
        .filter(|(_, set)| set.difference(base).count() > 1)
        .map(|(g, _)| g)
        .collect();
    FiberLemmaReport {
        holds: violations.is_empty(),
        base_fiber,
        violations,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AuxLabel {
    /// The fiber has no color outside the base fiber.
    Alpha,
    Color(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxColoring {
    pub base_fiber: usize,
    pub labels: Vec<AuxLabel>,
}

impl AuxColoring {
    pub fn to_coloring(&self) -> Coloring {
        Coloring::from_labels(self.labels.iter().copied())
    }
}

/// Colors `g` by the one color of `P_g` outside the widest fiber, or
/// `Alpha`. Defined only when no fiber has two such colors.
///
/// Comparing against the widest fiber `P_b` instead of `P_0` gives the
/// translate by `b` of the coloring the lemma describes, so rainbow-freeness
/// is unaffected.
pub fn aux_coloring(coloring: &Coloring, split: &FiberSplit) -> Result<AuxColoring> {
    split.check_odd()?;
    let profile = fiber_color_profile(coloring, split)?;
    let base_fiber = widest_fiber(&profile);
    let base = &profile[base_fiber];
    let labels = profile
        .iter()
        .enumerate()
        .map(|(g, set)| {
            let extra: Vec<u32> = set.difference(base).copied().collect();
            match extra[..] {
                [] => Ok(AuxLabel::Alpha),
                [c] => Ok(AuxLabel::Color(c)),
                _ => Err(Error::AuxUndefined {
                    fiber: g,
                    extra: extra.len(),
                }),
            }
        })
        .collect::<Result<_>>()?;
    Ok(AuxColoring { base_fiber, labels })
}

/// False only if `coloring` is rainbow-free on `G x Z_n` while its
/// auxiliary coloring has a rainbow 3-AP in `G`.
pub fn check_aux_lemma(coloring: &Coloring, split: &FiberSplit) -> Result<bool> {
    split.check(coloring)?;
    let total = enumerate_aps(&split.total()?, 3)?;
    if !is_rainbow_free(coloring, &total) {
        return Ok(true);
    }
    let aux = aux_coloring(coloring, split)?;
    Ok(is_rainbow_free(
        &aux.to_coloring(),
        &enumerate_aps(&split.base, 3)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{mod2_coloring, product_coloring_odd, singleton_zero_coloring};
    use crate::oracle::{aw_exact, for_each_rainbow_free, OracleConfig};

    fn spec(f: &[u64]) -> GroupSpec {
        GroupSpec::new(f.to_vec()).unwrap()
    }

    fn sets(v: &[&[u32]]) -> Vec<BTreeSet<u32>> {
        v.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn profiles() {
        let split = FiberSplit::new(spec(&[2]), 3);
        let by_base = Coloring::from(vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(
            fiber_color_profile(&by_base, &split).unwrap(),
            sets(&[&[0], &[1]])
        );
        assert_eq!(
            fiber_color_profile(&Coloring::monochrome(6), &split).unwrap(),
            sets(&[&[0], &[0]])
        );
        assert_eq!(
            fiber_color_profile(&Coloring::rainbow(6), &split).unwrap(),
            sets(&[&[0, 1, 2], &[3, 4, 5]])
        );
        assert!(matches!(
            fiber_color_profile(&Coloring::rainbow(5), &split),
            Err(Error::InconsistentSplit { .. })
        ));
    }

    #[test]
    fn even_fibers_are_refused() {
        let split = FiberSplit::new(spec(&[3]), 2);
        let c = Coloring::monochrome(6);
        assert!(matches!(
            check_fiber_lemma(&c, &split),
            Err(Error::EvenFiber(2))
        ));
        assert!(matches!(aux_coloring(&c, &split), Err(Error::EvenFiber(2))));
    }

    #[test]
    fn every_rainbow_free_coloring_of_z3_z3() {
        let split = FiberSplit::new(spec(&[3]), 3);
        let mut seen = 0;
        for_each_rainbow_free(&spec(&[3, 3]), 3, &OracleConfig::default(), |c| {
            seen += 1;
            assert!(check_fiber_lemma(c, &split).unwrap().holds, "{c}");
            assert!(check_aux_lemma(c, &split).unwrap(), "{c}");
        })
        .unwrap();
        assert!(seen > 1);
    }

    #[test]
    fn every_rainbow_free_coloring_of_z3_z5() {
        let split = FiberSplit::new(spec(&[3]), 5);
        for_each_rainbow_free(&spec(&[3, 5]), 3, &OracleConfig::default(), |c| {
            assert!(check_fiber_lemma(c, &split).unwrap().holds, "{c}");
            assert!(check_aux_lemma(c, &split).unwrap(), "{c}");
        })
        .unwrap();
    }

    #[test]
    fn oracle_witness_of_z3_z3() {
        let w = aw_exact(&spec(&[3, 3]), 3, &OracleConfig::default())
            .unwrap()
            .witness
            .unwrap();
        let split = FiberSplit::new(spec(&[3]), 3);
        assert!(check_fiber_lemma(&w, &split).unwrap().holds);
        assert!(check_aux_lemma(&w, &split).unwrap());
    }

    #[test]
    fn negative_control() {
        // fiber 1 adds two colors to the widest fiber 0
        let c = Coloring::from(vec![0, 1, 1, 2, 3, 3, 0, 0, 0]);
        let split = FiberSplit::new(spec(&[3]), 3);
        let report = check_fiber_lemma(&c, &split).unwrap();
        assert!(!report.holds);
        assert_eq!(report.base_fiber, 0);
        assert_eq!(report.violations, vec![1]);
        assert!(!is_rainbow_free(
            &c,
            &enumerate_aps(&spec(&[3, 3]), 3).unwrap()
        ));
        // the aux map is undefined here, but the coloring is out of scope
        assert!(check_aux_lemma(&c, &split).unwrap());
        assert!(matches!(
            aux_coloring(&c, &split),
            Err(Error::AuxUndefined { fiber: 1, extra: 2 })
        ));
    }

    #[test]
    fn aux_examples() {
        let split = FiberSplit::new(spec(&[3]), 3);
        let shared = Coloring::from(vec![0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let aux = aux_coloring(&shared, &split).unwrap();
        assert!(aux.labels.iter().all(|&l| l == AuxLabel::Alpha));
        assert!(check_aux_lemma(&Coloring::monochrome(9), &split).unwrap());

        let two_extra = Coloring::from(vec![0, 1, 1, 2, 3, 3, 0, 0, 0]);
        assert!(matches!(
            aux_coloring(&two_extra, &split),
            Err(Error::AuxUndefined { .. })
        ));
    }

    #[test]
    fn product_outputs_satisfy_both_lemmas() {
        let c3 = singleton_zero_coloring(&spec(&[3])).unwrap();
        let c5 = singleton_zero_coloring(&spec(&[5])).unwrap();
        for (g, c_g) in [
            (spec(&[3]), c3.clone()),
            (spec(&[2, 2]), mod2_coloring(&spec(&[2, 2])).unwrap()),
            (spec(&[4]), mod2_coloring(&spec(&[4])).unwrap()),
        ] {
            for (n, c_n) in [(3, &c3), (5, &c5)] {
                let c = product_coloring_odd(&g, &c_g, n, c_n).unwrap();
                let split = FiberSplit::new(g.clone(), n);
                assert!(check_fiber_lemma(&c, &split).unwrap().holds);
                assert!(check_aux_lemma(&c, &split).unwrap());
            }
        }
        // over Z3xZ3 the c_n colors sit off the h = 0 fiber, so each
        // non-base fiber reads as the one c_n color
        let c = product_coloring_odd(&spec(&[3]), &c3, 3, &c3).unwrap();
        let aux = aux_coloring(&c, &FiberSplit::new(spec(&[3]), 3)).unwrap();
        assert_eq!(aux.labels.len(), 3);
    }

    #[test]
    fn base_choice_among_widest_fibers_is_irrelevant() {
        let split = FiberSplit::new(spec(&[3]), 3);
        for_each_rainbow_free(&spec(&[3, 3]), 3, &OracleConfig::default(), |c| {
            let profile = fiber_color_profile(c, &split).unwrap();
            let widest = profile.iter().map(BTreeSet::len).max().unwrap();
            let outcomes: BTreeSet<bool> = (0..profile.len())
                .filter(|&g| profile[g].len() == widest)
                .map(|g| check_fiber_lemma_at(c, &split, g).unwrap().holds)
                .collect();
            assert_eq!(outcomes.len(), 1, "{c}");
        })
        .unwrap();
    }
}
