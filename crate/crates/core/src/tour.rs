use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// City identifier, `0..N`.
pub type City = usize;

/// A permutation of `0..N` read cyclically: the last city connects back to
/// the first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<City>", into = "Vec<City>")]
pub struct Tour(Vec<City>);

impl Tour {
    pub fn from_order(order: Vec<City>) -> Result<Self> {
        check_permutation(&order)?;
        Ok(Tour(order))
    }

    pub fn identity(n: usize) -> Self {
        Tour((0..n).collect())
    }

    /// Uniformly random permutation of `0..n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<City> = (0..n).collect();
        order.shuffle(rng);
        Tour(order)
    }

    pub fn order(&self) -> &[City] {
        &self.0
    }

    pub(crate) fn order_mut(&mut self) -> &mut [City] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Directed edges of the cycle, including the wraparound edge.
    pub fn edges(&self) -> impl Iterator<Item = (City, City)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    /// Rotation that puts city 0 first. Direction is kept: a reversed tour
    /// is a different directed cycle.
    pub fn canonical_form(&self) -> Tour {
        let Some(pos) = self.0.iter().position(|&c| c == 0) else {
            return self.clone();
        };
        let mut order = self.0.clone();
        order.rotate_left(pos);
        Tour(order)
    }

    /// True when both tours describe the same directed cycle.
    pub fn same_cycle(&self, other: &Tour) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

impl TryFrom<Vec<City>> for Tour {
    type Error = Error;

    fn try_from(order: Vec<City>) -> Result<Self> {
        Tour::from_order(order)
    }
}

impl From<Tour> for Vec<City> {
    fn from(t: Tour) -> Self {
        t.0
    }
}

impl AsRef<[City]> for Tour {
    fn as_ref(&self) -> &[City] {
        &self.0
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_permutation(order: &[City]) -> Result<()> {
    let n = order.len();
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n {
            return Err(Error::NotPermutation(format!("city {c} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::NotPermutation(format!("city {c} repeated")));
        }
    }
    Ok(())
}
