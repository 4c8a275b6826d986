use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::group::IndexTable;

/// An exact coloring of group elements, indexed like the group.
///
/// Always stored as a restricted-growth string: color ids are 0-based and
/// the first occurrence of color `j` precedes the first occurrence of
/// `j + 1`. Two colorings that differ only by renaming colors are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct Coloring {
    colors: Vec<u32>,
    num_colors: usize,
}

impl Coloring {
    /// Canonicalizes arbitrary labels (first-seen order).
    pub fn from_labels<T, I>(labels: I) -> Self
    where
        T: Eq + Hash,
        I: IntoIterator<Item = T>,
    {
        let mut ids: HashMap<T, u32> = HashMap::new();
        let colors: Vec<u32> = labels
            .into_iter()
            .map(|label| {
                let next = ids.len() as u32;
                *ids.entry(label).or_insert(next)
            })
            .collect();
        Self {
            colors,
            num_colors: ids.len(),
        }
    }

    pub fn monochrome(len: usize) -> Self {
        Self::from_labels(std::iter::repeat_n(0u32, len))
    }

    pub fn rainbow(len: usize) -> Self {
        Self::from_labels(0..len as u32)
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, element: usize) -> u32 {
        self.colors[element]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Elements whose color is used nowhere else, ascending.
    pub fn singletons(&self) -> Vec<usize> {
        let sizes = self.class_sizes();
        (0..self.len())
            .filter(|&i| sizes[self.colors[i] as usize] == 1)
            .collect()
    }

    pub fn is_unitary(&self) -> bool {
        self.class_sizes().contains(&1)
    }

    pub fn is_unitary_at(&self, element: usize) -> bool {
        let c = self.colors[element];
        self.colors.iter().filter(|&&x| x == c).count() == 1
    }

    /// Recolors class `b` as class `a` and re-canonicalizes.
    pub fn merge(&self, a: u32, b: u32) -> Self {
        Self::from_labels(self.colors.iter().map(|&c| if c == b { a } else { c }))
    }

    /// `c'(x) = c(map[x])`.
    pub fn pullback(&self, map: &[usize]) -> Self {
        Self::from_labels(map.iter().map(|&i| self.colors[i]))
    }

    /// `c'(x) = c(x + shift)`.
    pub fn translate(&self, table: &IndexTable, shift: usize) -> Self {
        Self::from_labels((0..self.len()).map(|x| self.colors[table.add(x, shift)]))
    }
}

impl From<Vec<u32>> for Coloring {
    fn from(labels: Vec<u32>) -> Self {
        Self::from_labels(labels)
    }
}

impl From<Coloring> for Vec<u32> {
    fn from(c: Coloring) -> Self {
        c.colors
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.colors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
