//! The four experimental conditions (direction × range).

use serde::{Deserialize, Serialize};

use crate::geometry::{AdjustmentDirection, RangeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Condition {
    pub direction: AdjustmentDirection,
    pub range: RangeKind,
}

impl Condition {
    /// Column order used throughout: forward-small, forward-large,
    /// backward-small, backward-large.
    pub const ALL: [Condition; 4] = [
        Condition::new(AdjustmentDirection::Forward, RangeKind::Small),
        Condition::new(AdjustmentDirection::Forward, RangeKind::Large),
        Condition::new(AdjustmentDirection::Backward, RangeKind::Small),
        Condition::new(AdjustmentDirection::Backward, RangeKind::Large),
    ];

    pub const fn new(direction: AdjustmentDirection, range: RangeKind) -> Self {
        Condition { direction, range }
    }

    pub fn index(self) -> usize {
        let d = match self.direction {
            AdjustmentDirection::Forward => 0,
            AdjustmentDirection::Backward => 2,
        };
        let r = match self.range {
            RangeKind::Small => 0,
            RangeKind::Large => 1,
        };
        d + r
    }

    /// Snake-case column name, e.g. `backward_large`.
    pub fn key(self) -> &'static str {
        ["forward_small", "forward_large", "backward_small", "backward_large"][self.index()]
    }
}

/// One value per condition, stored in [`Condition::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "NamedConditions<T>", into = "NamedConditions<T>", bound(serialize = "T: Clone + Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ConditionMap<T>(pub [T; 4]);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedConditions<T> {
    forward_small: T,
    forward_large: T,
    backward_small: T,
    backward_large: T,
}

impl<T> From<NamedConditions<T>> for ConditionMap<T> {
    fn from(n: NamedConditions<T>) -> Self {
        ConditionMap([n.forward_small, n.forward_large, n.backward_small, n.backward_large])
    }
}

impl<T> From<ConditionMap<T>> for NamedConditions<T> {
    fn from(m: ConditionMap<T>) -> Self {
        let [forward_small, forward_large, backward_small, backward_large] = m.0;
        NamedConditions { forward_small, forward_large, backward_small, backward_large }
    }
}

impl<T> ConditionMap<T> {
    pub fn get(&self, condition: Condition) -> &T {
        &self.0[condition.index()]
    }

    pub fn get_mut(&mut self, condition: Condition) -> &mut T {
        &mut self.0[condition.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Condition, &T)> {
        Condition::ALL.into_iter().zip(self.0.iter())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> ConditionMap<U> {
        ConditionMap(self.0.each_ref().map(f))
    }
}

impl<T: Copy> ConditionMap<T> {
    pub fn splat(value: T) -> Self {
        ConditionMap([value; 4])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_matches_all_order() {
        for (i, c) in Condition::ALL.iter().enumerate() {
            assert_eq!(c.index(), i);
        }
        assert_eq!(Condition::ALL[3].key(), "backward_large");
    }
}
