//! Closed forms for `aw(G,3)` and `awu(G,3)`.
//!
//! With `s` the number of cyclic 2-power factors of `G` and `n` its largest
//! odd divisor:
//!
//! * `aw(Z_n,3)` for `n = 2^e0 * prod p_j^e_j` is `2` (or `3` when
//!   `e0 >= 1`) plus `e_j` for each prime with `aw(Z_p,3) = 3` and `2 e_j`
//!   for each prime with `aw(Z_p,3) = 4`; `aw(Z_1,3) = 2`.
//! * `aw(G,3) = 2^s + aw(Z_n,3) - 1`.
//! * `awu(G,3) = s + aw(Z_n,3)`.
//!
//! Which odd primes have `aw(Z_p,3) = 4` is not known in closed form; it is
//! taken from the oracle through [`Classifier`].
//!
//! The unitary closed form disagrees with exhaustive search on the groups of
//! order at most 16 with two or more `Z_2` factors (for example `Z2xZ2` has
//! no non-degenerate 3-AP, so its value is `|G| + 1 = 5`, not 4). It is
//! implemented as stated; `aw check` reports those groups.

use crate::classify::Classifier;
use crate::error::Result;
use crate::group::{factorize, GroupSpec};
use crate::record::{AwRecord, Mode, Provenance};

pub use crate::classify::PrimeClass;

pub fn classify_odd_prime(p: u64, classifier: &Classifier) -> Result<PrimeClass> {
    classifier.classify_odd_prime(p)
}

/// `aw(Z_n, 3)`.
pub fn aw_cyclic3(n: u64, classifier: &Classifier) -> Result<u64> {
    if n <= 1 {
        return Ok(2);
    }
    let mut value = 2;
    for (p, e) in factorize(n) {
        if p == 2 {
            value += 1;
            continue;
        }
        let class = classifier.classify_odd_prime(p)?;
        value += u64::from(e) * (class.aw_value - 2);
    }
    Ok(value)
}

fn formula(spec: &GroupSpec, mode: Mode, value: u64) -> AwRecord {
    AwRecord {
        spec: spec.clone(),
        k: 3,
        mode,
        value,
        provenance: Provenance::Formula,
        witness: None,
    }
}

/// `aw(G,3) = 2^s + aw(Z_n,3) - 1`.
pub fn aw_abelian3(spec: &GroupSpec, classifier: &Classifier) -> Result<AwRecord> {
    let d = spec.primary_decomposition();
    let value = (1u64 << d.s()) + aw_cyclic3(d.odd_part(), classifier)? - 1;
    Ok(formula(spec, Mode::Aw, value))
}

/// `awu(G,3) = s + aw(Z_n,3)`.
pub fn awu_abelian3(spec: &GroupSpec, classifier: &Classifier) -> Result<AwRecord> {
    let d = spec.primary_decomposition();
    let value = d.s() as u64 + aw_cyclic3(d.odd_part(), classifier)?;
    Ok(formula(spec, Mode::Awu, value))
}

pub fn formula_record(spec: &GroupSpec, mode: Mode, classifier: &Classifier) -> Result<AwRecord> {
    match mode {
        Mode::Aw => aw_abelian3(spec, classifier),
        Mode::Awu => awu_abelian3(spec, classifier),
    }
}

/// True iff the closed forms give `aw = awu`, i.e. `2^s - 1 = s`, i.e.
/// `s <= 1`. This is "odd order or cyclic 2-part"; a group such as
/// `Z4xZ3xZ3` qualifies without being cyclic.
pub fn aw_equals_awu(spec: &GroupSpec) -> bool {
    spec.primary_decomposition().s() <= 1
}
