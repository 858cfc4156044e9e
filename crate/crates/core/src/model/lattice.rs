use std::fmt;

use itertools::Itertools;

use crate::{Error, Result};

/// A lattice site, identified by its integer coordinates.
///
/// Abstract site sets use one-dimensional coordinates as opaque indices.
/// Sites are ordered lexicographically, which fixes the canonical labeling
/// used by volumes, polymers and the Penrose map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site(Vec<i64>);

impl Site {
    pub fn new(coords: Vec<i64>) -> Self {
        Site(coords)
    }

    /// An abstract site carrying only an index.
    pub fn index(i: i64) -> Self {
        Site(vec![i])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn manhattan(&self, other: &Site) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    pub fn euclidean(&self, other: &Site) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| ((a - b) as f64).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_neighbor(&self, other: &Site) -> bool {
        self.manhattan(other) == 1
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A finite set of sites with free boundary conditions, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    sites: Vec<Site>,
}

impl Volume {
    pub fn new(mut sites: Vec<Site>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidParameter("volume must be nonempty".into()));
        }
        let dim = sites[0].dim();
        if sites.iter().any(|s| s.dim() != dim) {
            return Err(Error::InvalidParameter(
                "volume sites have mixed dimensions".into(),
            ));
        }
        sites.sort();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("volume has duplicate sites".into()));
        }
        Ok(Volume { sites })
    }

    /// `len` consecutive sites of `Z`.
    pub fn chain(len: usize) -> Result<Self> {
        Volume::new((0..len as i64).map(Site::index).collect())
    }

    /// The box `[0, s_1) x ... x [0, s_d)` in `Z^d`.
    pub fn cuboid(sides: &[usize]) -> Result<Self> {
        if sides.is_empty() || sides.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "box sides must be positive, got {sides:?}"
            )));
        }
        let sites = sides
            .iter()
            .map(|&s| 0..s as i64)
            .multi_cartesian_product()
            .map(Site::new)
            .collect();
        Volume::new(sites)
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sites[0].dim()
    }

    pub fn index_of(&self, site: &Site) -> Option<usize> {
        self.sites.binary_search(site).ok()
    }

    /// Unordered index pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).tuple_combinations()
    }
}

/// Spin values aligned with the canonical site order of a volume.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    spins: Vec<i32>,
}

impl SpinConfiguration {
    pub fn new(spins: Vec<i32>) -> Self {
        SpinConfiguration { spins }
    }

    pub fn zeros(len: usize) -> Self {
        SpinConfiguration {
            spins: vec![0; len],
        }
    }

    pub fn spins(&self) -> &[i32] {
        &self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    /// The globally flipped configuration `-σ`.
    pub fn flipped(&self) -> Self {
        SpinConfiguration {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }

    /// Every configuration on `len` sites with spins in `{-bound, …, bound}`,
    /// in lexicographic order.
    pub fn all(len: usize, bound: u32) -> impl Iterator<Item = SpinConfiguration> {
        let b = bound as i32;
        (0..len)
            .map(move |_| -b..=b)
            .multi_cartesian_product()
            .map(SpinConfiguration::new)
    }
}

impl From<Vec<i32>> for SpinConfiguration {
    fn from(spins: Vec<i32>) -> Self {
        SpinConfiguration::new(spins)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuboid_is_sorted_and_complete() {
        let vol = Volume::cuboid(&[2, 3]).unwrap();
        assert_eq!(vol.len(), 6);
        assert_eq!(vol.sites()[0], Site::new(vec![0, 0]));
        assert_eq!(vol.sites()[5], Site::new(vec![1, 2]));
        assert!(vol.sites().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn duplicate_sites_rejected() {
        let err = Volume::new(vec![Site::index(1), Site::index(1)]);
        assert!(err.is_err());
        assert!(Volume::new(vec![]).is_err());
    }

    #[test]
    fn configuration_enumeration_count() {
        assert_eq!(SpinConfiguration::all(3, 1).count(), 27);
        assert_eq!(SpinConfiguration::all(2, 2).count(), 25);
    }

    #[test]
    fn neighbors() {
        let a = Site::new(vec![0, 0]);
        assert!(a.is_neighbor(&Site::new(vec![0, 1])));
        assert!(!a.is_neighbor(&Site::new(vec![1, 1])));
        assert_eq!(a.euclidean(&Site::new(vec![3, 4])), 5.0);
    }
}
