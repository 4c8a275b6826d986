//! Exact aw/awu by exhaustive search over canonical colorings.
//!
//! Colorings are built element by element in index order as restricted-growth
//! strings, so each set partition is visited once. A partial coloring carries
//! a domain per uncolored element: once some AP has all but one element
//! colored with pairwise distinct colors, the last element must reuse one of
//! them, and in particular cannot open a fresh color. The number of
//! uncolored elements that are still unconstrained bounds how many colors a
//! completion can add.
//!
//! The maximum is found first with a fresh-color-first search that also uses
//! translation symmetry (unitary: the singleton sits at the identity; any
//! mode: a smallest color class contains the identity). The witness is then
//! the first coloring with exactly that many colors in lexicographic order,
//! found by a second search without symmetry pruning. That witness does not
//! depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};

use log::{debug, info};
use rayon::prelude::*;

use crate::ap::{enumerate_aps, is_rainbow_free, ApCatalog};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::record::{AwRecord, Mode, Provenance};

/// Color masks are `u64`, so no search can use more than this many elements.
pub const HARD_ORDER_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Largest group order the search will accept.
    pub max_order: usize,
    /// Worker threads for the maximization phase; 1 runs inline.
    pub workers: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_order: 24,
            workers: 1,
        }
    }
}

impl OracleConfig {
    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn check(&self, spec: &GroupSpec) -> Result<()> {
        let order = spec.order();
        let bound = self.max_order.min(HARD_ORDER_LIMIT);
        if order > bound {
            return Err(Error::Infeasible { order, bound });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Any,
    Unitary,
}

impl From<Mode> for SearchMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Aw => SearchMode::Any,
            Mode::Awu => SearchMode::Unitary,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub mode: SearchMode,
    /// Maximum color count of a rainbow-free exact coloring in this mode.
    /// Zero only when no coloring qualifies (unitary mode with `k = 2`).
    pub max_colors: usize,
    /// Lexicographically smallest canonical coloring attaining `max_colors`.
    pub witness: Option<Coloring>,
    pub nodes_explored: u64,
}

pub fn max_rainbow_free(
    spec: &GroupSpec,
    k: usize,
    mode: SearchMode,
    config: &OracleConfig,
) -> Result<SearchResult> {
    config.check(spec)?;
    let catalog = enumerate_aps(spec, k)?;
    let (max_colors, mut nodes) = maximize(&catalog, mode, config.workers);
    info!("{spec}: max {max_colors} colors ({mode:?}), {nodes} nodes");

    let witness = if max_colors == 0 {
        None
    } else {
        let mut search = Search::new(&catalog);
        let found = search.first_with_colors(max_colors, mode == SearchMode::Unitary);
        nodes += search.nodes;
        let witness = found.expect("a coloring attaining the maximum exists");
        debug_assert!(is_rainbow_free(&witness, &catalog));
        Some(witness)
    };
    Ok(SearchResult {
        mode,
        max_colors,
        witness,
        nodes_explored: nodes,
    })
}

fn exact(spec: &GroupSpec, k: usize, mode: Mode, config: &OracleConfig) -> Result<AwRecord> {
    let result = max_rainbow_free(spec, k, mode.into(), config)?;
    Ok(AwRecord {
        spec: spec.clone(),
        k,
        mode,
        value: result.max_colors as u64 + 1,
        provenance: Provenance::Oracle,
        witness: result.witness,
    })
}

/// aw(G,k) = 1 + the most colors a rainbow-free exact coloring can use.
pub fn aw_exact(spec: &GroupSpec, k: usize, config: &OracleConfig) -> Result<AwRecord> {
    exact(spec, k, Mode::Aw, config)
}

/// awu(G,k) = 1 + the most colors a rainbow-free unitary exact coloring can use.
pub fn awu_exact(spec: &GroupSpec, k: usize, config: &OracleConfig) -> Result<AwRecord> {
    exact(spec, k, Mode::Awu, config)
}

pub fn exact_record(
    spec: &GroupSpec,
    k: usize,
    mode: Mode,
    config: &OracleConfig,
) -> Result<AwRecord> {
    exact(spec, k, mode, config)
}

/// Number of canonical colorings visited. With `prune = false` nothing is
/// checked and the count is the Bell number of the group order.
pub fn count_canonical_colorings(
    spec: &GroupSpec,
    k: usize,
    prune: bool,
    config: &OracleConfig,
) -> Result<u64> {
    config.check(spec)?;
    let catalog = enumerate_aps(spec, k)?;
    let mut search = Search::new(&catalog);
    search.check = prune;
    let mut leaves = 0u64;
    search.enumerate(&mut |_| leaves += 1);
    Ok(leaves)
}

/// Calls `visit` on every rainbow-free canonical coloring, in lexicographic
/// order.
pub fn for_each_rainbow_free(
    spec: &GroupSpec,
    k: usize,
    config: &OracleConfig,
    mut visit: impl FnMut(&Coloring),
) -> Result<u64> {
    config.check(spec)?;
    let catalog = enumerate_aps(spec, k)?;
    let mut search = Search::new(&catalog);
    let mut leaves = 0u64;
    search.enumerate(&mut |colors| {
        leaves += 1;
        visit(&Coloring::from_labels(colors.iter().copied()));
    });
    Ok(leaves)
}

const UNSET: u32 = u32::MAX;
const FREE: u64 = u64::MAX;
const PROGRESS_EVERY: u64 = 1 << 24;

/// Depth-first search state over one catalog.
struct Search<'a> {
    catalog: &'a ApCatalog,
    n: usize,
    color: Vec<u32>,
    sizes: Vec<u32>,
    used: usize,
    singles: usize,
    /// Allowed existing colors per uncolored element; `FREE` also allows a
    /// fresh color.
    domain: Vec<u64>,
    free_uncolored: usize,
    trail: Vec<(u32, u64)>,
    check: bool,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(catalog: &'a ApCatalog) -> Self {
        let n = catalog.order();
        assert!(n <= HARD_ORDER_LIMIT);
        Self {
            catalog,
            n,
            color: vec![UNSET; n],
            sizes: vec![0; n + 1],
            used: 0,
            singles: 0,
            domain: vec![FREE; n],
            free_uncolored: n,
            trail: Vec::new(),
            check: true,
            nodes: 0,
        }
    }

    /// Colors element `i` with `c` and propagates; false means the partial
    /// coloring already contains a rainbow AP or left some element with no
    /// admissible color. Undo with `unassign` either way.
    fn assign(&mut self, i: usize, c: u32) -> bool {
        self.nodes += 1;
        self.color[i] = c;
        if c as usize == self.used {
            self.used += 1;
        }
        self.sizes[c as usize] += 1;
        match self.sizes[c as usize] {
            1 => self.singles += 1,
            2 => self.singles -= 1,
            _ => {}
        }
        if self.domain[i] == FREE {
            self.free_uncolored -= 1;
        }
        if !self.check {
            return true;
        }

        let mut ok = true;
        for &id in self.catalog.incidence(i) {
            let ap = self.catalog.ap(id as usize);
            let mut mask = 0u64;
            let mut distinct = true;
            let mut open = UNSET;
            let mut open_count = 0;
            for &x in ap {
                let cx = self.color[x as usize];
                if cx == UNSET {
                    open_count += 1;
                    open = x;
                } else {
                    let bit = 1u64 << cx;
                    if mask & bit != 0 {
                        distinct = false;
                        break;
                    }
                    mask |= bit;
                }
            }
            if !distinct || open_count > 1 {
                continue;
            }
            if open_count == 0 {
                // every element colored, all colors distinct
                ok = false;
                break;
            }
            let u = open as usize;
            let old = self.domain[u];
            let new = old & mask;
            if new != old {
                if old == FREE {
                    self.free_uncolored -= 1;
                }
                self.trail.push((open, old));
                self.domain[u] = new;
                if new == 0 {
                    ok = false;
                    break;
                }
            }
        }
        ok
    }

    fn unassign(&mut self, i: usize, mark: usize) {
        while self.trail.len() > mark {
            let (u, old) = self.trail.pop().expect("trail above mark");
            if old == FREE {
                self.free_uncolored += 1;
            }
            self.domain[u as usize] = old;
        }
        let c = self.color[i] as usize;
        match self.sizes[c] {
            1 => self.singles -= 1,
            2 => self.singles += 1,
            _ => {}
        }
        self.sizes[c] -= 1;
        if self.sizes[c] == 0 {
            self.used -= 1;
        }
        self.color[i] = UNSET;
        if self.domain[i] == FREE {
            self.free_uncolored += 1;
        }
    }

    /// Admissible colors for element `i`: existing ones ascending, then the
    /// fresh color if allowed.
    fn choices(&self, i: usize, out: &mut Vec<u32>) {
        out.clear();
        let d = self.domain[i];
        if !self.check || d == FREE {
            out.extend(0..self.used as u32);
            if self.used < HARD_ORDER_LIMIT {
                out.push(self.used as u32);
            }
        } else {
            let mut bits = d;
            while bits != 0 {
                out.push(bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
    }

    fn enumerate(&mut self, visit: &mut dyn FnMut(&[u32])) {
        let mut scratch = Vec::new();
        self.enumerate_from(0, visit, &mut scratch);
    }

    fn enumerate_from(&mut self, i: usize, visit: &mut dyn FnMut(&[u32]), scratch: &mut Vec<u32>) {
        if i == self.n {
            visit(&self.color);
            return;
        }
        self.choices(i, scratch);
        let options = scratch.clone();
        for c in options {
            let mark = self.trail.len();
            if self.assign(i, c) {
                self.enumerate_from(i + 1, visit, scratch);
            }
            self.unassign(i, mark);
        }
    }

    /// First coloring, in lexicographic order, with exactly `target` colors
    /// (and a singleton class when `unitary`).
    fn first_with_colors(&mut self, target: usize, unitary: bool) -> Option<Coloring> {
        let mut scratch = Vec::new();
        if self.first_from(0, target, unitary, &mut scratch) {
            Some(Coloring::from_labels(self.color.iter().copied()))
        } else {
            None
        }
    }

    fn first_from(
        &mut self,
        i: usize,
        target: usize,
        unitary: bool,
        scratch: &mut Vec<u32>,
    ) -> bool {
        if self.used > target || self.used + self.free_uncolored < target {
            return false;
        }
        if unitary && self.used == target && self.singles == 0 {
            return false;
        }
        if i == self.n {
            return self.used == target && (!unitary || self.singles > 0);
        }
        self.choices(i, scratch);
        let options = scratch.clone();
        for c in options {
            let mark = self.trail.len();
            if self.assign(i, c) && self.first_from(i + 1, target, unitary, scratch) {
                return true;
            }
            self.unassign(i, mark);
        }
        false
    }
}

/// Branch and bound for the maximum color count.
struct Maximizer<'s> {
    best: &'s AtomicUsize,
    unitary: bool,
    next_report: u64,
}

impl Maximizer<'_> {
    fn admissible(&self, search: &Search<'_>, i: usize, c: u32) -> bool {
        if c != 0 || i == 0 {
            return true;
        }
        if self.unitary {
            // the identity is the singleton
            return false;
        }
        // color 0 is a smallest class of any coloring that beats `best`
        let best = self.best.load(Ordering::Relaxed);
        (search.sizes[0] as usize) < search.n / (best + 1)
    }

    fn run(&mut self, search: &mut Search<'_>, i: usize, scratch: &mut Vec<u32>) {
        if search.nodes >= self.next_report {
            debug!(
                "search: {} nodes, best {} colors",
                search.nodes,
                self.best.load(Ordering::Relaxed)
            );
            self.next_report += PROGRESS_EVERY;
        }
        let best = self.best.load(Ordering::Relaxed);
        if search.used + search.free_uncolored <= best {
            return;
        }
        if i == search.n {
            if !self.unitary || search.singles > 0 {
                self.best.fetch_max(search.used, Ordering::Relaxed);
            }
            return;
        }
        search.choices(i, scratch);
        // fresh color first, then existing colors from the top
        let mut options = scratch.clone();
        options.reverse();
        for c in options {
            if !self.admissible(search, i, c) {
                continue;
            }
            let mark = search.trail.len();
            if search.assign(i, c) {
                self.run(search, i + 1, scratch);
            }
            search.unassign(i, mark);
        }
    }
}

/// Returns (max colors, nodes explored).
fn maximize(catalog: &ApCatalog, mode: SearchMode, workers: usize) -> (usize, u64) {
    let unitary = mode == SearchMode::Unitary;
    let best = AtomicUsize::new(0);
    if workers <= 1 || catalog.order() < 8 {
        let mut search = Search::new(catalog);
        let mut m = Maximizer {
            best: &best,
            unitary,
            next_report: PROGRESS_EVERY,
        };
        m.run(&mut search, 0, &mut Vec::new());
        return (best.into_inner(), search.nodes);
    }

    // Split on the colorings of the first few elements.
    let depth = catalog.order().min(6);
    let mut prefixes = Vec::new();
    {
        let mut search = Search::new(catalog);
        collect_prefixes(
            &mut search,
            0,
            depth,
            unitary,
            &mut Vec::new(),
            &mut prefixes,
        );
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let nodes: u64 = pool.install(|| {
        prefixes
            .par_iter()
            .map(|prefix: &Vec<u32>| {
                let mut search = Search::new(catalog);
                for (i, &c) in prefix.iter().enumerate() {
                    let ok = search.assign(i, c);
                    debug_assert!(ok);
                }
                let mut m = Maximizer {
                    best: &best,
                    unitary,
                    next_report: PROGRESS_EVERY,
                };
                m.run(&mut search, prefix.len(), &mut Vec::new());
                search.nodes
            })
            .sum()
    });
    (best.into_inner(), nodes)
}

fn collect_prefixes(
    search: &mut Search<'_>,
    i: usize,
    depth: usize,
    unitary: bool,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if i == depth {
        out.push(prefix.clone());
        return;
    }
    let mut options = Vec::new();
    search.choices(i, &mut options);
    options.reverse();
    for c in options {
        if unitary && c == 0 && i > 0 {
            continue;
        }
        let mark = search.trail.len();
        if search.assign(i, c) {
            prefix.push(c);
            collect_prefixes(search, i + 1, depth, unitary, prefix, out);
            prefix.pop();
        }
        search.unassign(i, mark);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ap::find_rainbow;

    fn spec(f: &[u64]) -> GroupSpec {
        GroupSpec::new(f.to_vec()).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    /// Maximum over every labeling in [0, n)^n, checking progressions
    /// straight from element arithmetic. Only for tiny groups.
    fn brute_force_max(g: &GroupSpec, unitary: bool) -> usize {
        let n = g.order();
        let elems: Vec<_> = g.elements().collect();
        let mut triples = Vec::new();
        for a in &elems {
            for d in &elems {
                let x = g.element_index(a).unwrap();
                let y = g.element_index(&g.add(a, d).unwrap()).unwrap();
                let z = g
                    .element_index(&g.add(a, &g.scale(2, d).unwrap()).unwrap())
                    .unwrap();
                if x != y && y != z && x != z {
                    triples.push((x, y, z));
                }
            }
        }
        let mut best = 0;
        let mut labels = vec![0usize; n];
        loop {
            let rainbow = triples.iter().any(|&(x, y, z)| {
                labels[x] != labels[y] && labels[y] != labels[z] && labels[x] != labels[z]
            });
            if !rainbow {
                let mut counts = vec![0; n];
                for &l in &labels {
                    counts[l] += 1;
                }
                let distinct = counts.iter().filter(|&&c| c > 0).count();
                if !unitary || counts.contains(&1) {
                    best = best.max(distinct);
                }
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == n {
                    return best;
                }
                labels[pos] += 1;
                if labels[pos] < n {
                    break;
                }
                labels[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn examples() {
        let r = max_rainbow_free(&spec(&[3]), 3, SearchMode::Any, &cfg()).unwrap();
        assert_eq!(r.max_colors, 2);
        let r = max_rainbow_free(&spec(&[2, 2]), 3, SearchMode::Any, &cfg()).unwrap();
        assert_eq!(r.max_colors, 4);
        assert_eq!(r.witness.unwrap(), Coloring::rainbow(4));
        let r = max_rainbow_free(&spec(&[4]), 3, SearchMode::Any, &cfg()).unwrap();
        assert_eq!(r.max_colors, 2);

        assert_eq!(aw_exact(&spec(&[2]), 3, &cfg()).unwrap().value, 3);
        assert_eq!(aw_exact(&spec(&[9]), 3, &cfg()).unwrap().value, 4);
        assert_eq!(aw_exact(&GroupSpec::trivial(), 3, &cfg()).unwrap().value, 2);
        assert_eq!(
            awu_exact(&GroupSpec::trivial(), 3, &cfg()).unwrap().value,
            2
        );
    }

    #[test]
    fn klein_four_unitary_is_five() {
        // No non-degenerate 3-AP exists, so the all-distinct coloring is a
        // unitary rainbow-free 4-coloring.
        assert_eq!(brute_force_max(&spec(&[2, 2]), true), 4);
        let r = awu_exact(&spec(&[2, 2]), 3, &cfg()).unwrap();
        assert_eq!(r.value, 5);
    }

    #[test]
    fn agrees_with_brute_force() {
        for f in [
            &[1][..],
            &[2],
            &[3],
            &[4],
            &[5],
            &[6],
            &[2, 2],
            &[7],
            &[4, 2],
            &[2, 3],
        ] {
            let g = spec(f);
            for (mode, unitary) in [(SearchMode::Any, false), (SearchMode::Unitary, true)] {
                let r = max_rainbow_free(&g, 3, mode, &cfg()).unwrap();
                assert_eq!(r.max_colors, brute_force_max(&g, unitary), "{g} {mode:?}");
            }
        }
    }

    #[test]
    fn witness_is_lexicographically_first() {
        for f in [&[5][..], &[6], &[3, 3], &[4, 2], &[8]] {
            let g = spec(f);
            let cat = enumerate_aps(&g, 3).unwrap();
            for mode in [SearchMode::Any, SearchMode::Unitary] {
                let r = max_rainbow_free(&g, 3, mode, &cfg()).unwrap();
                let w = r.witness.clone().unwrap();
                assert!(find_rainbow(&w, &cat).is_none());
                assert_eq!(w.num_colors(), r.max_colors);
                let mut all = Vec::new();
                for_each_rainbow_free(&g, 3, &cfg(), |c| {
                    if c.num_colors() == r.max_colors && (mode == SearchMode::Any || c.is_unitary())
                    {
                        all.push(c.clone());
                    }
                })
                .unwrap();
                assert_eq!(all.iter().min(), Some(&w), "{g} {mode:?}");
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_result() {
        for f in [&[3, 3][..], &[4, 4], &[2, 2, 3]] {
            let g = spec(f);
            for mode in [SearchMode::Any, SearchMode::Unitary] {
                let one = max_rainbow_free(&g, 3, mode, &cfg()).unwrap();
                let four = max_rainbow_free(&g, 3, mode, &cfg().with_workers(4)).unwrap();
                assert_eq!(one.max_colors, four.max_colors);
                assert_eq!(one.witness, four.witness);
            }
        }
    }

    #[test]
    fn bell_numbers_without_pruning() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let got = count_canonical_colorings(&spec(&[n]), 3, false, &cfg()).unwrap();
            assert_eq!(got, bell);
        }
    }

    #[test]
    fn other_progression_lengths() {
        // k = 2: every pair is an AP, so only the monochrome coloring survives
        let r = max_rainbow_free(&spec(&[5]), 2, SearchMode::Any, &cfg()).unwrap();
        assert_eq!(r.max_colors, 1);
        let r = max_rainbow_free(&spec(&[5]), 2, SearchMode::Unitary, &cfg()).unwrap();
        assert_eq!(r.max_colors, 0);
        assert!(r.witness.is_none());
        // k = 4 in Z_5: brute force via the catalog enumeration
        let cat = enumerate_aps(&spec(&[5]), 4).unwrap();
        let mut best = 0;
        for_each_rainbow_free(&spec(&[5]), 4, &cfg(), |c| best = best.max(c.num_colors())).unwrap();
        let r = max_rainbow_free(&spec(&[5]), 4, SearchMode::Any, &cfg()).unwrap();
        assert_eq!(r.max_colors, best);
        assert!(find_rainbow(r.witness.as_ref().unwrap(), &cat).is_none());
    }

    #[test]
    fn infeasible_orders_are_refused() {
        let err = aw_exact(&spec(&[5, 5]), 3, &cfg()).unwrap_err();
        assert!(matches!(
            err,
            Error::Infeasible {
                order: 25,
                bound: 24
            }
        ));
        let err = aw_exact(&spec(&[65]), 3, &cfg().with_max_order(1000)).unwrap_err();
        assert!(matches!(
            err,
            Error::Infeasible {
                order: 65,
                bound: 64
            }
        ));
    }
}
