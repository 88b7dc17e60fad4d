//! Accumulated wear of the robot: how far each motor has turned and how often
//! each tendon segment between two nodes has been travelled.

use alloc::collections::BTreeMap;

use crate::env::{Axis, NodeId, Section, SectionEnv, STEP_SPACING};
use crate::fitness::Path;
use crate::{Error, Result};

/// Two motors per section.
pub const MOTOR_COUNT: usize = 4;

/// Motor driving `axis` of `section`: `2k` is X and `2k + 1` is Y of section `k`.
pub fn motor_for(section: Section, axis: Axis) -> usize {
    2 * section.index()
        + match axis {
            Axis::X => 0,
            Axis::Y => 1,
        }
}

/// An undirected edge of one section's lattice, stored low id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegmentKey {
    pub section: Section,
    pub a: NodeId,
    pub b: NodeId,
}

impl SegmentKey {
    pub fn new(section: Section, a: NodeId, b: NodeId) -> Self {
        SegmentKey {
            section,
            a: a.min(b),
            b: a.max(b),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WearState {
    motor_steps: [u64; MOTOR_COUNT],
    segments: BTreeMap<SegmentKey, u64>,
}

impl WearState {
    /// A pristine robot.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn motor_steps(&self, motor: usize) -> u64 {
        self.motor_steps.get(motor).copied().unwrap_or(0)
    }

    pub fn all_motor_steps(&self) -> [u64; MOTOR_COUNT] {
        self.motor_steps
    }

    pub fn set_motor_steps(&mut self, motor: usize, steps: u64) -> Result<()> {
        let slot = self
            .motor_steps
            .get_mut(motor)
            .ok_or(Error::UnknownMotor(motor))?;
        *slot = steps;
        Ok(())
    }

    /// Times the segment `a - b` of `section` has been travelled.
    pub fn segment_use(&self, section: Section, a: NodeId, b: NodeId) -> u64 {
        self.segments
            .get(&SegmentKey::new(section, a, b))
            .copied()
            .unwrap_or(0)
    }

    /// Sets a segment count. The pair must be adjacent in `env`. A zero count
    /// removes the entry.
    pub fn set_segment_use(
        &mut self,
        env: &SectionEnv,
        section: Section,
        a: NodeId,
        b: NodeId,
        count: u64,
    ) -> Result<()> {
        env.move_axis(a, b)?;
        let key = SegmentKey::new(section, a, b);
        if count == 0 {
            self.segments.remove(&key);
        } else {
            self.segments.insert(key, count);
        }
        Ok(())
    }

    /// Segments with a non-zero count, in key order.
    pub fn segments(&self) -> impl Iterator<Item = (SegmentKey, u64)> + '_ {
        self.segments.iter().map(|(k, v)| (*k, *v))
    }

    /// The state after the robot executes `path`: each move adds one lattice
    /// spacing of steps to the motor of the moved axis and one use to the
    /// segment it travels.
    pub fn apply_path(&self, env: &SectionEnv, path: &Path) -> Result<WearState> {
        let section = path.section();
        let mut next = self.clone();
        for (a, b) in path.edges() {
            let axis = env.move_axis(a, b)?;
            next.motor_steps[motor_for(section, axis)] += STEP_SPACING as u64;
            *next
                .segments
                .entry(SegmentKey::new(section, a, b))
                .or_insert(0) += 1;
        }
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn env() -> SectionEnv {
        SectionEnv::new()
    }

    fn path(env: &SectionEnv, section: Section, nodes: Vec<NodeId>) -> Path {
        Path::new(env, section, nodes).unwrap()
    }

    #[test]
    fn single_x_move() {
        let e = env();
        let a = e.id_at((0, 0)).unwrap();
        let b = e.id_at((1, 0)).unwrap();
        let s = WearState::new()
            .apply_path(&e, &path(&e, Section::Lower, vec![a, b]))
            .unwrap();
        assert_eq!(s.motor_steps(0), 70);
        assert_eq!(s.motor_steps(1), 0);
        assert_eq!(s.segment_use(Section::Lower, b, a), 1);
        assert_eq!(s.segment_use(Section::Upper, a, b), 0);
    }

    #[test]
    fn upper_y_move_hits_motor_three() {
        let e = env();
        let s = WearState::new()
            .apply_path(&e, &path(&e, Section::Upper, vec![30, 20]))
            .unwrap();
        assert_eq!(s.all_motor_steps(), [0, 0, 0, 70]);
    }

    #[test]
    fn single_node_path_is_noop() {
        let e = env();
        let mut s = WearState::new();
        s.set_motor_steps(2, 5).unwrap();
        let t = s
            .apply_path(&e, &path(&e, Section::Lower, vec![12]))
            .unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn repeated_segment_counts_twice() {
        let e = env();
        let s = WearState::new()
            .apply_path(&e, &path(&e, Section::Lower, vec![30, 31, 30]))
            .unwrap();
        assert_eq!(s.segment_use(Section::Lower, 30, 31), 2);
        assert_eq!(s.motor_steps(0), 140);
    }

    #[test]
    fn rejects_unknown_motor_and_non_adjacent_segment() {
        let e = env();
        let mut s = WearState::new();
        assert_eq!(s.set_motor_steps(4, 1), Err(Error::UnknownMotor(4)));
        assert_eq!(
            s.set_segment_use(&e, Section::Lower, 30, 32, 1),
            Err(Error::NotAdjacent(30, 32))
        );
        assert_eq!(s, WearState::new());
    }

    fn walk(e: &SectionEnv, start: NodeId, choices: &[usize]) -> Vec<NodeId> {
        let mut nodes = vec![start];
        for c in choices {
            let last = *nodes.last().unwrap();
            let adj = e.neighbors(last);
            nodes.push(adj[c % adj.len()]);
        }
        nodes
    }

    proptest! {
        #[test]
        fn apply_is_additive(start in 0usize..61,
                             p in proptest::collection::vec(0usize..4, 0..20),
                             q in proptest::collection::vec(0usize..4, 0..20),
                             upper in any::<bool>()) {
            let e = env();
            let section = if upper { Section::Upper } else { Section::Lower };
            let first = walk(&e, start, &p);
            let second = walk(&e, *first.last().unwrap(), &q);
            let s1 = WearState::new()
                .apply_path(&e, &path(&e, section, first.clone())).unwrap()
                .apply_path(&e, &path(&e, section, second.clone())).unwrap();
            let mut joined = first.clone();
            joined.extend_from_slice(&second[1..]);
            let s2 = WearState::new().apply_path(&e, &path(&e, section, joined.clone())).unwrap();
            prop_assert_eq!(&s1, &s2);

            let total: u64 = s2.all_motor_steps().iter().sum();
            prop_assert_eq!(total, 70 * (joined.len() as u64 - 1));
            let uses: u64 = s2.segments().map(|(_, c)| c).sum();
            prop_assert_eq!(uses, joined.len() as u64 - 1);
        }
    }
}
