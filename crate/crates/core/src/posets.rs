//! Subset-system combinatorics over the index set `L = {0, ..., ell}`.
//!
//! Systems of subsets of `L` (here: bitmask sets) drive the generalized
//! decompositions: lower/upper closures, minimal/maximal elements, and
//! the two complements
//!
//! `upper_complement(a) = 2^L \ lower_closure(a)
//!                      = { J | forall I in a: J \ I nonempty }`
//! `lower_complement(a) = 2^L \ upper_closure(a)
//!                      = { J | forall I in a: I \ J nonempty }`.
//!
//! `|L|` is capped at 20 so a subset is one machine word and full `2^L`
//! enumeration stays honest.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

pub const MAX_GROUND: usize = 20;

/// The ground index set `{0, ..., ell}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IndexSet {
    pub ell: usize,
}

impl IndexSet {
    pub fn new(ell: usize) -> Result<Self> {
        if ell + 1 > MAX_GROUND {
            return Err(Error::budget(format!(
                "index set size {} exceeds the cap of {}",
                ell + 1,
                MAX_GROUND
            )));
        }
        Ok(Self { ell })
    }

    pub fn size(&self) -> usize {
        self.ell + 1
    }

    /// Bitmask of the full set `L`.
    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask((1u32 << self.size()) - 1)
    }

    pub fn all_subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..(1u32 << self.size())).map(SubsetMask)
    }
}

/// A subset of `L` encoded as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut m = 0u32;
        for &i in indices {
            m |= 1 << i;
        }
        SubsetMask(m)
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    pub fn difference(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    pub fn insert(&self, i: usize) -> SubsetMask {
        SubsetMask(self.0 | 1 << i)
    }

    pub fn remove(&self, i: usize) -> SubsetMask {
        SubsetMask(self.0 & !(1 << i))
    }

    /// `|{j in self : j < i}|` — the Koszul sign exponent.
    pub fn count_below(&self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }
}

/// A family of subsets of the ground set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaSystem {
    pub ground: IndexSet,
    pub members: BTreeSet<SubsetMask>,
}

impl AlphaSystem {
    pub fn new(ground: IndexSet, members: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let full = ground.full_mask();
        let members: BTreeSet<SubsetMask> = members.into_iter().collect();
        if members.iter().any(|m| !m.is_subset_of(&full)) {
            return Err(Error::input("system member is not a subset of the ground set"));
        }
        Ok(Self { ground, members })
    }

    pub fn empty(ground: IndexSet) -> Self {
        Self { ground, members: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &SubsetMask) -> bool {
        self.members.contains(m)
    }

    /// Validates the direct decomposition role: nonempty and `L` absent.
    pub fn check_alpha_role(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::input("alpha system must be nonempty"));
        }
        if self.members.contains(&self.ground.full_mask()) {
            return Err(Error::input(
                "alpha-decomposition role forbids the full index set as a member",
            ));
        }
        Ok(())
    }

    /// Validates the dual role: nonempty and not the bare `{empty}`.
    pub fn check_dual_role(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::input("dual system must be nonempty"));
        }
        if self.members.len() == 1 && self.members.contains(&SubsetMask::EMPTY) {
            return Err(Error::input("dual role forbids the bare {empty-set} system"));
        }
        Ok(())
    }

    /// `{ J | J subseteq I for some member I }`.
    pub fn lower_closure(&self) -> AlphaSystem {
        let members = self
            .ground
            .all_subsets()
            .filter(|j| self.members.iter().any(|i| j.is_subset_of(i)))
            .collect();
        AlphaSystem { ground: self.ground, members }
    }

    /// `{ J subseteq L | J supseteq I for some member I }`.
    pub fn upper_closure(&self) -> AlphaSystem {
        let members = self
            .ground
            .all_subsets()
            .filter(|j| self.members.iter().any(|i| i.is_subset_of(j)))
            .collect();
        AlphaSystem { ground: self.ground, members }
    }

    /// Minimal members under inclusion.
    pub fn minimal(&self) -> AlphaSystem {
        let members = self
            .members
            .iter()
            .filter(|m| !self.members.iter().any(|o| o != *m && o.is_subset_of(m)))
            .copied()
            .collect();
        AlphaSystem { ground: self.ground, members }
    }

    /// Maximal members under inclusion.
    pub fn maximal(&self) -> AlphaSystem {
        let members = self
            .members
            .iter()
            .filter(|m| !self.members.iter().any(|o| o != *m && m.is_subset_of(o)))
            .copied()
            .collect();
        AlphaSystem { ground: self.ground, members }
    }

    /// `2^L` minus the lower closure; pointwise this is
    /// `{ J | forall I in self: J \ I nonempty }`.
    pub fn upper_complement(&self) -> AlphaSystem {
        let lower = self.lower_closure();
        let members = self
            .ground
            .all_subsets()
            .filter(|j| !lower.members.contains(j))
            .collect();
        AlphaSystem { ground: self.ground, members }
    }

    /// `2^L` minus the upper closure; pointwise
    /// `{ J | forall I in self: I \ J nonempty }`.
    pub fn lower_complement(&self) -> AlphaSystem {
        let upper = self.upper_closure();
        let members = self
            .ground
            .all_subsets()
            .filter(|j| !upper.members.contains(j))
            .collect();
        AlphaSystem { ground: self.ground, members }
    }
}

/// All four closure/extremal views of a system at once.
pub struct Closures {
    pub lower: AlphaSystem,
    pub upper: AlphaSystem,
    pub mins: AlphaSystem,
    pub maxs: AlphaSystem,
}

pub fn closures(a: &AlphaSystem) -> Result<Closures> {
    if a.is_empty() {
        return Err(Error::input("closures of an empty system are not defined"));
    }
    Ok(Closures {
        lower: a.lower_closure(),
        upper: a.upper_closure(),
        mins: a.minimal(),
        maxs: a.maximal(),
    })
}

/// Both complements, cross-checked against their pointwise definitions.
pub fn complements(a: &AlphaSystem) -> Result<(AlphaSystem, AlphaSystem)> {
    if a.is_empty() {
        return Err(Error::input("complements of an empty system are not defined"));
    }
    let up = a.upper_complement();
    let lo = a.lower_complement();
    // the pointwise forms must agree with the set-difference forms
    for j in a.ground.all_subsets() {
        let in_up = a.members.iter().all(|i| !j.difference(i).is_empty());
        let in_lo = a.members.iter().all(|i| !i.difference(&j).is_empty());
        if in_up != up.members.contains(&j) || in_lo != lo.members.contains(&j) {
            return Err(Error::math(
                "complement definitions disagree (internal inconsistency)",
            ));
        }
    }
    Ok((up, lo))
}

/// Search the power set for the family of subsets the oracle accepts,
/// returning the minimal accepted sets and the maximal sets of the lower
/// complement.
///
/// The oracle decides whether the factor subsystem indexed by `J` is
/// relatively invertible (`1` lies in the ideal the factors generate).
/// It must be monotone under inclusion; the search prunes oracle calls
/// by inheriting acceptance from subsets, then spot-checks monotonicity
/// around the minimal frontier.
pub fn optimal_alpha(
    ground: IndexSet,
    mut unit_oracle: impl FnMut(SubsetMask) -> bool,
) -> Result<(AlphaSystem, AlphaSystem)> {
    let n = ground.size();
    let total = 1usize << n;
    let mut accepted = vec![false; total];
    let mut by_size: Vec<Vec<SubsetMask>> = vec![Vec::new(); n + 1];
    for j in ground.all_subsets() {
        by_size[j.len()].push(j);
    }
    for size in 0..=n {
        for &j in &by_size[size] {
            let inherited = j
                .indices()
                .iter()
                .any(|&i| accepted[j.remove(i).0 as usize]);
            accepted[j.0 as usize] = inherited || unit_oracle(j);
        }
    }
    let alpha_p = AlphaSystem {
        ground,
        members: ground
            .all_subsets()
            .filter(|j| accepted[j.0 as usize])
            .collect(),
    };
    let mins = alpha_p.minimal();
    // monotonicity spot check: every superset-by-one of a minimal
    // accepted set must also be accepted
    for m in &mins.members {
        for i in 0..n {
            if !m.contains(i) && !unit_oracle(m.insert(i)) {
                return Err(Error::math("oracle violates upward closure"));
            }
        }
    }
    if alpha_p.is_empty() {
        return Ok((AlphaSystem::empty(ground), AlphaSystem::empty(ground)));
    }
    let beta = alpha_p.lower_complement().maximal();
    Ok((mins, beta))
}
