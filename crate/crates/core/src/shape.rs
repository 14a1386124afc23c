//! Site layout of a shared multipartite system and the Alice/Bob partition.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Ordered local dimensions plus the set of sites Alice keeps. Site 0 is the
/// most significant digit of a computational-basis index, so ket strings read
/// left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemShape {
    local_dims: Vec<usize>,
    alice_sites: BTreeSet<usize>,
    strides: Vec<usize>,
}

impl SubsystemShape {
    /// Alice must keep a nonempty proper subset of the sites, and every local
    /// dimension must be at least 2.
    pub fn new(local_dims: Vec<usize>, alice_sites: &[usize]) -> Result<Self> {
        if local_dims.is_empty() {
            return Err(Error::InvalidShape("no sites".into()));
        }
        if let Some(&d) = local_dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidShape(format!("local dimension {d} < 2")));
        }
        let alice: BTreeSet<usize> = alice_sites.iter().copied().collect();
        if alice.is_empty() {
            return Err(Error::InvalidShape("Alice keeps no sites".into()));
        }
        if let Some(&s) = alice.iter().find(|&&s| s >= local_dims.len()) {
            return Err(Error::InvalidShape(format!(
                "Alice site {s} out of range for {} sites",
                local_dims.len()
            )));
        }
        if alice.len() == local_dims.len() {
            return Err(Error::InvalidShape("Alice keeps every site, Bob has none".into()));
        }
        let mut strides = alloc::vec![1usize; local_dims.len()];
        for s in (0..local_dims.len().saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * local_dims[s + 1];
        }
        Ok(Self { local_dims, alice_sites: alice, strides })
    }

    pub fn site_count(&self) -> usize {
        self.local_dims.len()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn total_dim(&self) -> usize {
        self.local_dims.iter().product()
    }

    pub fn alice_sites(&self) -> Vec<usize> {
        self.alice_sites.iter().copied().collect()
    }

    pub fn bob_sites(&self) -> Vec<usize> {
        (0..self.site_count()).filter(|s| !self.alice_sites.contains(s)).collect()
    }

    pub fn alice_dim(&self) -> usize {
        self.alice_sites.iter().map(|&s| self.local_dims[s]).product()
    }

    pub fn bob_dim(&self) -> usize {
        self.bob_sites().iter().map(|&s| self.local_dims[s]).product()
    }

    pub fn alice_dims(&self) -> Vec<usize> {
        self.alice_sites.iter().map(|&s| self.local_dims[s]).collect()
    }

    /// Shape of Bob's remaining sites with Bob keeping everything but one
    /// virtual site is meaningless, so Bob's marginal is described plainly by
    /// its dimensions.
    pub fn bob_dims(&self) -> Vec<usize> {
        self.bob_sites().iter().map(|&s| self.local_dims[s]).collect()
    }

    /// Expands a mixed-radix index over `sites` (ascending site order, local
    /// dims taken from the shape) into its contribution to a full-space index,
    /// with all other digits zero.
    pub fn scatter_index(&self, sites: &[usize], mut sub_index: usize) -> usize {
        let mut full = 0usize;
        for &s in sites.iter().rev() {
            let d = self.local_dims[s];
            full += (sub_index % d) * self.strides[s];
            sub_index /= d;
        }
        full
    }

    /// Full-space index from Alice's and Bob's sub-indices.
    pub fn compose_index(&self, alice_index: usize, bob_index: usize) -> usize {
        self.scatter_index(&self.alice_sites(), alice_index)
            + self.scatter_index(&self.bob_sites(), bob_index)
    }
}
