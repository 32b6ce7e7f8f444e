use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::claim::Claim;
use crate::Error;

/// The four classes a judge sorts claims into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionClass {
    Grounded,
    Ungrounded,
    Contradicted,
    Complementary,
}

impl PartitionClass {
    pub const ALL: [PartitionClass; 4] = [
        PartitionClass::Grounded,
        PartitionClass::Ungrounded,
        PartitionClass::Contradicted,
        PartitionClass::Complementary,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            PartitionClass::Grounded => "grounded",
            PartitionClass::Ungrounded => "ungrounded",
            PartitionClass::Contradicted => "contradicted",
            PartitionClass::Complementary => "complementary",
        }
    }
}

/// A report's claims sorted into grounded / ungrounded / contradicted /
/// complementary classes.
///
/// The classes are disjoint under normalized claim identity; a partition that
/// lists the same claim twice is rejected at construction rather than
/// silently repaired. Within a class the input order is preserved. On the
/// wire the partition is the four `*_claims` lists of a judge verdict, and
/// missing lists read as empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PartitionWire", into = "PartitionWire")]
pub struct Partition {
    grounded: Vec<Claim>,
    ungrounded: Vec<Claim>,
    contradicted: Vec<Claim>,
    complementary: Vec<Claim>,
}

impl Partition {
    /// Builds a partition, rejecting any claim identity that appears in more
    /// than one class or twice in the same class.
    pub fn new(
        grounded: Vec<Claim>,
        ungrounded: Vec<Claim>,
        contradicted: Vec<Claim>,
        complementary: Vec<Claim>,
    ) -> crate::Result<Partition> {
        let mut seen: HashMap<String, &'static str> = HashMap::new();
        let classes = [
            (&grounded, PartitionClass::Grounded),
            (&ungrounded, PartitionClass::Ungrounded),
            (&contradicted, PartitionClass::Contradicted),
            (&complementary, PartitionClass::Complementary),
        ];
        for (claims, class) in classes {
            for claim in claims.iter() {
                if let Some(first) = seen.insert(claim.identity(), class.label()) {
                    return Err(Error::PartitionOverlap {
                        text: claim.text().to_string(),
                        first,
                        second: class.label(),
                    });
                }
            }
        }
        Ok(Partition {
            grounded,
            ungrounded,
            contradicted,
            complementary,
        })
    }

    /// The empty partition (a report with no extracted claims).
    pub fn empty() -> Partition {
        Partition {
            grounded: Vec::new(),
            ungrounded: Vec::new(),
            contradicted: Vec::new(),
            complementary: Vec::new(),
        }
    }

    /// Single-claim partition with the claim in the given class.
    pub fn singleton(claim: Claim, class: PartitionClass) -> Partition {
        let mut partition = Partition::empty();
        match class {
            PartitionClass::Grounded => partition.grounded.push(claim),
            PartitionClass::Ungrounded => partition.ungrounded.push(claim),
            PartitionClass::Contradicted => partition.contradicted.push(claim),
            PartitionClass::Complementary => partition.complementary.push(claim),
        }
        partition
    }

    pub fn grounded(&self) -> &[Claim] {
        &self.grounded
    }

    pub fn ungrounded(&self) -> &[Claim] {
        &self.ungrounded
    }

    pub fn contradicted(&self) -> &[Claim] {
        &self.contradicted
    }

    pub fn complementary(&self) -> &[Claim] {
        &self.complementary
    }

    pub fn class(&self, class: PartitionClass) -> &[Claim] {
        match class {
            PartitionClass::Grounded => &self.grounded,
            PartitionClass::Ungrounded => &self.ungrounded,
            PartitionClass::Contradicted => &self.contradicted,
            PartitionClass::Complementary => &self.complementary,
        }
    }

    /// Class sizes as (|grounded|, |ungrounded|, |contradicted|, |complementary|).
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        (
            self.grounded.len(),
            self.ungrounded.len(),
            self.contradicted.len(),
            self.complementary.len(),
        )
    }

    pub fn total_claims(&self) -> usize {
        self.grounded.len()
            + self.ungrounded.len()
            + self.contradicted.len()
            + self.complementary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total_claims() == 0
    }

    /// All claims with their class, in class order then input order.
    pub fn iter_with_class(&self) -> impl Iterator<Item = (&Claim, PartitionClass)> {
        PartitionClass::ALL
            .into_iter()
            .flat_map(move |class| self.class(class).iter().map(move |claim| (claim, class)))
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionWire {
    #[serde(default)]
    grounded_claims: Vec<Claim>,
    #[serde(default)]
    ungrounded_claims: Vec<Claim>,
    #[serde(default)]
    contradicted_claims: Vec<Claim>,
    #[serde(default)]
    complementary_claims: Vec<Claim>,
}

impl TryFrom<PartitionWire> for Partition {
    type Error = Error;

    fn try_from(wire: PartitionWire) -> crate::Result<Partition> {
        Partition::new(
            wire.grounded_claims,
            wire.ungrounded_claims,
            wire.contradicted_claims,
            wire.complementary_claims,
        )
    }
}

impl From<Partition> for PartitionWire {
    fn from(partition: Partition) -> PartitionWire {
        PartitionWire {
            grounded_claims: partition.grounded,
            ungrounded_claims: partition.ungrounded,
            contradicted_claims: partition.contradicted,
            complementary_claims: partition.complementary,
        }
    }
}
