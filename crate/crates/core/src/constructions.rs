//! Extremal rainbow-free colorings.
//!
//! Every public constructor checks its output against the full 3-AP catalog
//! and returns [`Error::Verification`] instead of an unverified coloring.

use log::debug;

use crate::ap::{enumerate_aps, find_rainbow};
use crate::classify::Classifier;
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::formulas::formula_record;
use crate::group::{GroupSpec, PrimePower};
use crate::record::Mode;

fn verified(spec: &GroupSpec, coloring: Coloring, what: &str) -> Result<Coloring> {
    let catalog = enumerate_aps(spec, 3)?;
    if let Some(ap) = find_rainbow(&coloring, &catalog) {
        return Err(Error::Verification {
            group: spec.to_string(),
            detail: format!("{what} produced rainbow 3-AP {ap:?} in {coloring}"),
        });
    }
    Ok(coloring)
}

fn check_len(spec: &GroupSpec, coloring: &Coloring) -> Result<()> {
    if coloring.len() != spec.order() {
        return Err(Error::ColoringLength {
            expected: spec.order(),
            got: coloring.len(),
        });
    }
    Ok(())
}

/// `c(x) = x mod 2`, coordinatewise. Uses `2^s` colors where `s` counts the
/// nontrivial factors.
pub fn mod2_coloring(spec: &GroupSpec) -> Result<Coloring> {
    if spec.factors().iter().any(|&m| !m.is_power_of_two()) {
        return Err(Error::NotTwoGroup(spec.to_string()));
    }
    let table = spec.table();
    let coloring = Coloring::from_labels(
        (0..table.len()).map(|i| table.coords(i).iter().map(|x| x % 2).collect::<Vec<_>>()),
    );
    verified(spec, coloring, "mod2_coloring")
}

/// The identity alone in one color, everything else in another.
pub fn singleton_zero_coloring(spec: &GroupSpec) -> Result<Coloring> {
    if spec.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    let coloring = Coloring::from_labels((0..spec.order()).map(|i| i == 0));
    verified(spec, coloring, "singleton_zero_coloring")
}

/// Coloring of `G x Z_n`: `c_g` on the fiber `h = 0`, `c_n(h)` elsewhere.
///
/// The color `c_n` gives to 0 is unused, so the result has
/// `|c_g| + |c_n| - 1` colors. If `c_g` is unitary at the identity the
/// result is unitary at `(0, 0)`.
pub fn product_coloring_odd(
    spec_g: &GroupSpec,
    c_g: &Coloring,
    n: u64,
    c_n: &Coloring,
) -> Result<Coloring> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenFiber(n));
    }
    check_len(spec_g, c_g)?;
    check_len(&GroupSpec::cyclic(n)?, c_n)?;
    if !c_n.is_unitary_at(0) {
        return Err(Error::NotUnitaryAtZero);
    }
    let spec = spec_g.times_cyclic(n)?;
    let offset = c_g.num_colors() as u32;
    let n = n as usize;
    let labels = (0..spec.order()).map(|i| {
        let (g, h) = (i / n, i % n);
        if h == 0 {
            c_g.color(g)
        } else {
            offset + c_n.color(h)
        }
    });
    verified(&spec, Coloring::from_labels(labels), "product_coloring_odd")
}

/// Coloring of `G' x Z_{2^m}`: `c(g, h) = c'(g)`, except that `(a, 0)` gets a
/// fresh color. One more color than `c'`, unitary at `(a, 0)`.
///
/// Only the `m = 1` step and the step from the trivial group are
/// rainbow-free in general: with `G'` nontrivial and `m >= 2` the
/// progression `(a, 0), (a + d, 1), (a + 2d, 2)` is rainbow whenever
/// `c'(a + d) != c'(a)`. Such calls fail verification.
pub fn unitary_extension(
    spec_prime: &GroupSpec,
    c_prime: &Coloring,
    a: usize,
    m: u32,
) -> Result<Coloring> {
    if spec_prime.factors().iter().any(|&f| !f.is_power_of_two()) {
        return Err(Error::NotTwoGroup(spec_prime.to_string()));
    }
    if m == 0 {
        return Err(Error::InvalidLength(0));
    }
    check_len(spec_prime, c_prime)?;
    if a >= c_prime.len() {
        return Err(Error::IndexOutOfRange {
            index: a,
            order: c_prime.len(),
        });
    }
    if !c_prime.is_unitary_at(a) {
        return Err(Error::NotUnitaryAt(a));
    }
    let q = 1usize << m;
    let spec = spec_prime.times_cyclic(q as u64)?;
    let fresh = c_prime.num_colors() as u32;
    let labels = (0..spec.order()).map(|i| {
        if i == a * q {
            fresh
        } else {
            c_prime.color(i / q)
        }
    });
    verified(&spec, Coloring::from_labels(labels), "unitary_extension")
}

/// Rainbow-free coloring of `spec` with `value - 1` colors, where `value`
/// is the closed-form `aw` or `awu`. In `Awu` mode the result is unitary at
/// the identity.
///
/// The 2-part is colored mod 2 (`Aw`) or by unitary extensions starting
/// from the trivial group, largest factor first (`Awu`). Odd prime powers
/// are then folded in with [`product_coloring_odd`], using the
/// singleton-at-zero coloring for primes with `aw(Z_p,3) = 3` and an oracle
/// witness otherwise.
pub fn build_extremal(spec: &GroupSpec, mode: Mode, classifier: &Classifier) -> Result<Coloring> {
    let decomposition = spec.primary_decomposition();
    let target = formula_record(spec, mode, classifier)?.value - 1;

    let mut current = GroupSpec::trivial();
    let mut coloring = Coloring::monochrome(1);
    let twos: Vec<u64> = decomposition.two_factors().map(PrimePower::value).collect();
    match mode {
        Mode::Aw => {
            for &q in &twos {
                current = current.times_cyclic(q)?;
            }
            coloring = mod2_coloring(&current)?;
        }
        Mode::Awu => {
            for &q in &twos {
                coloring = unitary_extension(&current, &coloring, 0, q.trailing_zeros())?;
                current = current.times_cyclic(q)?;
            }
        }
    }

    for factor in decomposition.odd_factors() {
        let q = factor.value();
        let c_q = odd_factor_coloring(factor, classifier)?;
        coloring = product_coloring_odd(&current, &coloring, q, &c_q)?;
        current = current.times_cyclic(q)?;
        debug!("{current}: {} colors", coloring.num_colors());
    }

    debug_assert_eq!(current, decomposition.canonical_spec());
    let coloring = verified(
        spec,
        coloring.pullback(&spec.canonical_map()),
        "build_extremal",
    )?;
    if coloring.num_colors() as u64 != target {
        return Err(Error::Verification {
            group: spec.to_string(),
            detail: format!(
                "built {} colors, formula expects {target}",
                coloring.num_colors()
            ),
        });
    }
    if mode == Mode::Awu && !coloring.is_unitary_at(0) {
        return Err(Error::Verification {
            group: spec.to_string(),
            detail: "unitary construction lost its singleton".into(),
        });
    }
    Ok(coloring)
}

/// Rainbow-free coloring of `Z_{p^e}` that is unitary at 0 with
/// `awu(Z_{p^e},3) - 1` colors.
fn odd_factor_coloring(factor: &PrimePower, classifier: &Classifier) -> Result<Coloring> {
    let q = factor.value();
    let spec = GroupSpec::cyclic(q)?;
    let unconstructible = |e: Error| Error::Unconstructible {
        factor: q,
        reason: e.to_string(),
    };
    if factor.e == 1 {
        let class = classifier
            .classify_odd_prime(factor.p)
            .map_err(unconstructible)?;
        if class.aw_value == 3 {
            return singleton_zero_coloring(&spec);
        }
    }
    let record = classifier
        .exact(&spec, 3, Mode::Awu)
        .map_err(unconstructible)?;
    let witness = record.witness.ok_or_else(|| Error::Unconstructible {
        factor: q,
        reason: "oracle returned no witness".into(),
    })?;
    let Some(&single) = witness.singletons().first() else {
        return Err(Error::Unconstructible {
            factor: q,
            reason: "oracle witness is not unitary".into(),
        });
    };
    Ok(witness.translate(&spec.table(), single))
}
