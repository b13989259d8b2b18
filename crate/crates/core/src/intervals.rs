//! Open-interval geometry on parallel tracks, tagged interval families and
//! their intersection graphs.
//!
//! Two multi-track intervals intersect iff their intervals on some common
//! track overlap. Intervals are open, so `(0, 1)` and `(1, 2)` are disjoint.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::formulas::Literal;

/// Track count used by the clause construction.
pub const TRACKS: usize = 3;
/// Copies of each literal interval in a constructed family.
pub const LITERAL_COPIES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty open interval ({lo}, {hi})")]
    EmptyInterval { lo: i64, hi: i64 },
    #[error("track {track} out of range 1..={tracks}")]
    TrackOutOfRange { track: usize, tracks: usize },
    #[error("duplicate tag {0}")]
    DuplicateTag(Tag),
    #[error("tag {tag} out of range for {num_vars} variables and {num_clauses} clauses")]
    TagOutOfRange {
        tag: Tag,
        num_vars: usize,
        num_clauses: usize,
    },
    #[error("unknown tag {0}")]
    UnknownTag(Tag),
    #[error("copies {0} and {1} have different geometry")]
    NotTwins(Tag, Tag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    lo: i64,
    hi: i64,
}

impl OpenInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self, GeometryError> {
        if lo >= hi {
            return Err(GeometryError::EmptyInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn intersects(&self, other: &OpenInterval) -> bool {
        interval_intersects(self, other)
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

pub fn interval_intersects(a: &OpenInterval, b: &OpenInterval) -> bool {
    a.lo.max(b.lo) < a.hi.min(b.hi)
}

/// One open interval per track; tracks are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiTrackInterval<const T: usize = TRACKS> {
    tracks: [OpenInterval; T],
}

impl<const T: usize> MultiTrackInterval<T> {
    pub fn new(tracks: [OpenInterval; T]) -> Self {
        Self { tracks }
    }

    pub fn tracks(&self) -> &[OpenInterval; T] {
        &self.tracks
    }

    /// Panics if `track` is outside `1..=T`.
    pub fn track(&self, track: usize) -> OpenInterval {
        self.tracks[track - 1]
    }

    pub fn with_track(
        mut self,
        track: usize,
        interval: OpenInterval,
    ) -> Result<Self, GeometryError> {
        if track == 0 || track > T {
            return Err(GeometryError::TrackOutOfRange { track, tracks: T });
        }
        self.tracks[track - 1] = interval;
        Ok(self)
    }

    /// First track (1-based) on which both overlap.
    pub fn overlapping_track(&self, other: &Self) -> Option<usize> {
        self.tracks
            .iter()
            .zip(&other.tracks)
            .position(|(a, b)| interval_intersects(a, b))
            .map(|idx| idx + 1)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.overlapping_track(other).is_some()
    }

    pub fn endpoints_within(&self, bound: i64) -> bool {
        self.tracks.iter().all(|t| -bound <= t.lo && t.hi <= bound)
    }
}

pub fn mti_intersects<const T: usize>(
    u: &MultiTrackInterval<T>,
    v: &MultiTrackInterval<T>,
) -> bool {
    u.intersects(v)
}

/// What a vertex stands for once copies are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexClass {
    Literal(Literal),
    /// 1-based clause index.
    Clause(usize),
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexClass::Literal(lit) => write!(f, "{lit}"),
            VertexClass::Clause(k) => write!(f, "c{k}"),
        }
    }
}

/// Identity of a family member. Text form: `+i.c`, `-i.c`, `k#`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Pos { var: usize, copy: usize },
    Neg { var: usize, copy: usize },
    Clause(usize),
}

impl Tag {
    pub fn literal(lit: Literal, copy: usize) -> Self {
        if lit.is_positive() {
            Tag::Pos {
                var: lit.var(),
                copy,
            }
        } else {
            Tag::Neg {
                var: lit.var(),
                copy,
            }
        }
    }

    pub fn class(&self) -> VertexClass {
        match *self {
            Tag::Pos { var, .. } => VertexClass::Literal(Literal::pos(var)),
            Tag::Neg { var, .. } => VertexClass::Literal(Literal::neg(var)),
            Tag::Clause(k) => VertexClass::Clause(k),
        }
    }

    pub fn as_literal(&self) -> Option<Literal> {
        match self.class() {
            VertexClass::Literal(lit) => Some(lit),
            VertexClass::Clause(_) => None,
        }
    }

    pub fn is_clause(&self) -> bool {
        matches!(self, Tag::Clause(_))
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Pos { var, copy } => write!(f, "+{var}.{copy}"),
            Tag::Neg { var, copy } => write!(f, "-{var}.{copy}"),
            Tag::Clause(k) => write!(f, "{k}#"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed tag {0:?}")]
pub struct TagParseError(pub String);

impl FromStr for Tag {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TagParseError(s.to_string());
        let positive_index = |t: &str| -> Result<usize, TagParseError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            match t.parse::<usize>() {
                Ok(0) | Err(_) => Err(bad()),
                Ok(v) => Ok(v),
            }
        };
        if let Some(k) = s.strip_suffix('#') {
            return Ok(Tag::Clause(positive_index(k)?));
        }
        let (positive, rest) = match s.as_bytes().first() {
            Some(b'+') => (true, &s[1..]),
            Some(b'-') => (false, &s[1..]),
            _ => return Err(bad()),
        };
        let (var, copy) = rest.split_once('.').ok_or_else(bad)?;
        let (var, copy) = (positive_index(var)?, positive_index(copy)?);
        Ok(if positive {
            Tag::Pos { var, copy }
        } else {
            Tag::Neg { var, copy }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Member {
    pub tag: Tag,
    pub interval: MultiTrackInterval,
}

/// Tagged 3-track intervals over an instance with `num_vars` variables and
/// `num_clauses` clauses. Tags are unique and in range.
#[derive(Debug, Clone)]
pub struct TrackFamily {
    num_vars: usize,
    num_clauses: usize,
    members: Vec<Member>,
    index: HashMap<Tag, usize>,
}

impl PartialEq for TrackFamily {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars
            && self.num_clauses == other.num_clauses
            && self.members == other.members
    }
}

impl Eq for TrackFamily {}

impl TrackFamily {
    pub fn new(
        num_vars: usize,
        num_clauses: usize,
        members: Vec<Member>,
    ) -> Result<Self, GeometryError> {
        let mut index = HashMap::with_capacity(members.len());
        for (pos, member) in members.iter().enumerate() {
            let in_range = match member.tag {
                Tag::Pos { var, copy } | Tag::Neg { var, copy } => {
                    (1..=num_vars).contains(&var) && (1..=LITERAL_COPIES).contains(&copy)
                }
                Tag::Clause(k) => (1..=num_clauses).contains(&k),
            };
            if !in_range {
                return Err(GeometryError::TagOutOfRange {
                    tag: member.tag,
                    num_vars,
                    num_clauses,
                });
            }
            if index.insert(member.tag, pos).is_some() {
                return Err(GeometryError::DuplicateTag(member.tag));
            }
        }
        Ok(Self {
            num_vars,
            num_clauses,
            members,
            index,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, tag: &Tag) -> bool {
        self.index.contains_key(tag)
    }

    pub fn get(&self, tag: &Tag) -> Option<&MultiTrackInterval> {
        self.index.get(tag).map(|&pos| &self.members[pos].interval)
    }

    /// Largest endpoint magnitude a constructed family may use.
    pub fn coordinate_bound(&self) -> i64 {
        self.num_vars as i64 + 1
    }

    /// Tags of every copy of `lit` present, in family order.
    pub fn literal_copies(&self, lit: Literal) -> impl Iterator<Item = Tag> + '_ {
        self.members
            .iter()
            .map(|m| m.tag)
            .filter(move |t| t.as_literal() == Some(lit))
    }

    pub fn clause_tags(&self) -> impl Iterator<Item = Tag> + '_ {
        self.members.iter().map(|m| m.tag).filter(Tag::is_clause)
    }

    /// Copy of the family with one track of one member replaced.
    pub fn with_replaced_track(
        &self,
        tag: &Tag,
        track: usize,
        interval: OpenInterval,
    ) -> Result<Self, GeometryError> {
        let pos = *self.index.get(tag).ok_or(GeometryError::UnknownTag(*tag))?;
        let mut out = self.clone();
        out.members[pos].interval = out.members[pos].interval.with_track(track, interval)?;
        Ok(out)
    }
}

/// Vertex-weighted undirected simple graph with labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph<L> {
    labels: Vec<L>,
    weights: Vec<u64>,
    adjacency: Vec<FixedBitSet>,
}

impl<L> IntersectionGraph<L> {
    /// Edgeless graph. Panics if the lengths differ or a weight is 0.
    pub fn new(labels: Vec<L>, weights: Vec<u64>) -> Self {
        assert_eq!(labels.len(), weights.len());
        assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
        let n = labels.len();
        Self {
            labels,
            weights,
            adjacency: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    /// Panics on a self-loop or out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loops are not allowed");
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones(..)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency
            .iter()
            .map(|r| r.count_ones(..))
            .sum::<usize>()
            / 2
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(idx, &u)| {
            vertices[idx + 1..]
                .iter()
                .all(|&v| u != v && self.is_adjacent(u, v))
        })
    }

    pub fn total_weight(&self, vertices: &[usize]) -> u64 {
        vertices.iter().map(|&v| self.weights[v]).sum()
    }

    pub fn map_labels<M>(self, f: impl FnMut(L) -> M) -> IntersectionGraph<M> {
        IntersectionGraph {
            labels: self.labels.into_iter().map(f).collect(),
            weights: self.weights,
            adjacency: self.adjacency,
        }
    }
}

/// One unit-weight vertex per member, in family order.
pub fn build_graph(family: &TrackFamily) -> IntersectionGraph<Tag> {
    let members = family.members();
    let mut graph = IntersectionGraph::new(
        members.iter().map(|m| m.tag).collect(),
        vec![1; members.len()],
    );
    for (u, a) in members.iter().enumerate() {
        for (v, b) in members.iter().enumerate().skip(u + 1) {
            if a.interval.intersects(&b.interval) {
                graph.add_edge(u, v);
            }
        }
    }
    graph
}

/// Merges members of the same class (the copies of one literal) into a
/// single vertex weighted by the number of copies. The copies must have
/// identical geometry; they are then true twins and the maximum-weight
/// clique of the result equals the maximum clique of [`build_graph`].
pub fn collapse_twins(
    family: &TrackFamily,
) -> Result<IntersectionGraph<VertexClass>, GeometryError> {
    let mut order: Vec<(VertexClass, Member)> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    let mut slot: HashMap<VertexClass, usize> = HashMap::new();
    for member in family.members() {
        let class = member.tag.class();
        match slot.get(&class) {
            Some(&idx) => {
                let (_, rep) = order[idx];
                if rep.interval != member.interval {
                    return Err(GeometryError::NotTwins(rep.tag, member.tag));
                }
                counts[idx] += 1;
            }
            None => {
                slot.insert(class, order.len());
                order.push((class, *member));
                counts.push(1);
            }
        }
    }
    let mut graph = IntersectionGraph::new(order.iter().map(|(c, _)| *c).collect(), counts);
    for (u, (_, a)) in order.iter().enumerate() {
        for (v, (_, b)) in order.iter().enumerate().skip(u + 1) {
            if a.interval.intersects(&b.interval) {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> OpenInterval {
        OpenInterval::new(lo, hi).unwrap()
    }

    fn mti(t: [(i64, i64); 3]) -> MultiTrackInterval {
        MultiTrackInterval::new(t.map(|(lo, hi)| iv(lo, hi)))
    }

    #[test]
    fn open_interval_overlap() {
        assert!(interval_intersects(&iv(1, 3), &iv(2, 4)));
        assert!(!interval_intersects(&iv(-1, 1), &iv(1, 5)));
        assert!(interval_intersects(&iv(1, 2), &iv(1, 2)));
    }

    #[test]
    fn empty_interval_is_rejected() {
        assert_eq!(
            OpenInterval::new(2, 2).unwrap_err(),
            GeometryError::EmptyInterval { lo: 2, hi: 2 }
        );
        assert!(OpenInterval::new(3, 1).is_err());
    }

    #[test]
    fn multi_track_uses_same_track_only() {
        // Overlap exists only across different tracks: not an intersection.
        let u = mti([(0, 1), (5, 6), (10, 11)]);
        let v = mti([(5, 6), (10, 11), (0, 1)]);
        assert!(!mti_intersects(&u, &v));
        let w = mti([(7, 8), (5, 7), (20, 21)]);
        assert_eq!(u.overlapping_track(&w), Some(2));
    }

    #[test]
    fn literal_sample_geometry() {
        // n = 4: positive x1 against negative x1 and positive x2.
        let pos1 = mti([(-1, 1), (1, 5), (1, 2)]);
        let neg1 = mti([(1, 5), (-1, 1), (-2, -1)]);
        let pos2 = mti([(-2, 2), (2, 5), (2, 3)]);
        assert!(!mti_intersects(&pos1, &neg1));
        assert_eq!(pos1.overlapping_track(&pos2), Some(1));
        let c1 = mti([(-5, -3), (-5, 1), (2, 3)]);
        assert_eq!(c1.overlapping_track(&neg1), Some(2));
    }

    #[test]
    fn tag_text_round_trip() {
        for text in ["+1.1", "-3.12", "4#"] {
            let tag: Tag = text.parse().unwrap();
            assert_eq!(tag.to_string(), text);
        }
        for bad in [
            "", "+1", "1.2", "+0.1", "-1.0", "#", "0#", "+1.x", "+ 1.1", "+-1.1",
        ] {
            assert!(bad.parse::<Tag>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn family_rejects_duplicate_and_out_of_range_tags() {
        let m = Member {
            tag: Tag::Clause(1),
            interval: mti([(0, 1), (0, 1), (0, 1)]),
        };
        assert_eq!(
            TrackFamily::new(1, 1, vec![m, m]).unwrap_err(),
            GeometryError::DuplicateTag(Tag::Clause(1))
        );
        let far = Member {
            tag: Tag::Pos { var: 2, copy: 1 },
            ..m
        };
        assert!(matches!(
            TrackFamily::new(1, 1, vec![far]).unwrap_err(),
            GeometryError::TagOutOfRange { .. }
        ));
        let thirteenth = Member {
            tag: Tag::Neg { var: 1, copy: 13 },
            ..m
        };
        assert!(TrackFamily::new(1, 1, vec![thirteenth]).is_err());
    }

    #[test]
    fn empty_family_gives_empty_graph() {
        let family = TrackFamily::new(0, 0, vec![]).unwrap();
        assert!(build_graph(&family).is_empty());
        assert!(collapse_twins(&family).unwrap().is_empty());
    }

    #[test]
    fn identical_members_share_an_edge() {
        let geom = mti([(0, 1), (0, 1), (0, 1)]);
        let family = TrackFamily::new(
            1,
            1,
            vec![
                Member {
                    tag: Tag::Pos { var: 1, copy: 1 },
                    interval: geom,
                },
                Member {
                    tag: Tag::Clause(1),
                    interval: geom,
                },
            ],
        )
        .unwrap();
        let g = build_graph(&family);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn collapse_rejects_diverging_copies() {
        let family = TrackFamily::new(
            1,
            0,
            vec![
                Member {
                    tag: Tag::Pos { var: 1, copy: 1 },
                    interval: mti([(0, 1), (0, 1), (0, 1)]),
                },
                Member {
                    tag: Tag::Pos { var: 1, copy: 2 },
                    interval: mti([(0, 2), (0, 1), (0, 1)]),
                },
            ],
        )
        .unwrap();
        assert!(matches!(
            collapse_twins(&family).unwrap_err(),
            GeometryError::NotTwins(..)
        ));
    }

    #[test]
    fn with_replaced_track_checks_tag_and_track() {
        let family = TrackFamily::new(
            0,
            1,
            vec![Member {
                tag: Tag::Clause(1),
                interval: mti([(0, 1), (0, 1), (0, 1)]),
            }],
        )
        .unwrap();
        let moved = family
            .with_replaced_track(&Tag::Clause(1), 3, iv(4, 5))
            .unwrap();
        assert_eq!(moved.get(&Tag::Clause(1)).unwrap().track(3), iv(4, 5));
        assert!(family
            .with_replaced_track(&Tag::Clause(2), 1, iv(0, 1))
            .is_err());
        assert!(family
            .with_replaced_track(&Tag::Clause(1), 4, iv(0, 1))
            .is_err());
    }
}
