//! Spider collections: non-crossing partitions of the sn boundary vertices
//! of a disc into n blocks of size s, an optional annular hole marking, the
//! first-leg codec, and exhaustive partial-collection oracles.
//!
//! A spider is represented purely by its foot set — star trees with the
//! same feet are isotopic in the disc. Complementary faces are tracked via
//! boundary gaps: gap g is the arc between vertex g and vertex g+1 (mod
//! sn), and two gaps share a face exactly when no block separates them.

use num_bigint::BigUint;
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error as ThisError;

use crate::counting::a_count;
use crate::error::domain;
use crate::Error;

/// First violated invariant of a candidate collection, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum SpiderViolation {
    #[error("vertex {0} is outside 1..=sn")]
    OutOfRange(u32),
    #[error("block {0:?} does not have exactly s elements")]
    BlockSize(Vec<u32>),
    #[error("vertex {0} appears in more than one block")]
    Overlap(u32),
    #[error("vertex {0} is not covered by any block")]
    Uncovered(u32),
    #[error("blocks {0:?} and {1:?} cross")]
    Crossing(Vec<u32>, Vec<u32>),
    #[error("too many blocks: {0} > n = {1}")]
    TooManyBlocks(usize, u32),
    #[error("hole gap {0} is outside 1..=sn")]
    HoleOutOfRange(u32),
}

fn blocks_cross(a: &[u32], b: &[u32]) -> bool {
    // slot of x relative to a = number of elements of a below x; blocks are
    // non-crossing iff b sits in one inner slot or entirely outside
    let mut slots: Vec<usize> = b.iter().map(|&x| a.partition_point(|&y| y < x)).collect();
    slots.sort_unstable();
    slots.dedup();
    if slots.len() <= 1 {
        return false;
    }
    !slots.iter().all(|&g| g == 0 || g == a.len())
}

fn normalize_blocks(blocks: impl IntoIterator<Item = Vec<u32>>) -> Vec<Vec<u32>> {
    let mut blocks: Vec<Vec<u32>> = blocks
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect();
    blocks.sort();
    blocks
}

fn check_blocks(
    s: u32,
    n: u32,
    blocks: &[Vec<u32>],
    require_cover: bool,
) -> Result<(), SpiderViolation> {
    let sn = s * n;
    if !require_cover && blocks.len() > n as usize {
        return Err(SpiderViolation::TooManyBlocks(blocks.len(), n));
    }
    let mut seen = vec![false; sn as usize + 1];
    for block in blocks {
        if block.len() != s as usize {
            return Err(SpiderViolation::BlockSize(block.clone()));
        }
        for &v in block {
            if v < 1 || v > sn {
                return Err(SpiderViolation::OutOfRange(v));
            }
            if seen[v as usize] {
                return Err(SpiderViolation::Overlap(v));
            }
            seen[v as usize] = true;
        }
    }
    if require_cover {
        if let Some(v) = (1..=sn).find(|&v| !seen[v as usize]) {
            return Err(SpiderViolation::Uncovered(v));
        }
    }
    for (x, a) in blocks.iter().enumerate() {
        for b in &blocks[x + 1..] {
            if blocks_cross(a, b) {
                return Err(SpiderViolation::Crossing(a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

/// A full collection: n disjoint non-crossing s-blocks covering 1..=sn.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpiderCollection {
    s: u32,
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl SpiderCollection {
    pub fn new(s: u32, n: u32, blocks: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, Error> {
        domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
        Ok(SpiderCollection {
            s,
            n,
            blocks: normalize_blocks(blocks),
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Blocks sorted internally and by smallest element.
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn validate(&self) -> Result<(), SpiderViolation> {
        if self.blocks.len() != self.n as usize {
            return Err(SpiderViolation::TooManyBlocks(self.blocks.len(), self.n));
        }
        check_blocks(self.s, self.n, &self.blocks, true)
    }
}

impl<'de> Deserialize<'de> for SpiderCollection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            s: u32,
            n: u32,
            blocks: Vec<Vec<u32>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let c = SpiderCollection::new(raw.s, raw.n, raw.blocks).map_err(D::Error::custom)?;
        c.validate().map_err(D::Error::custom)?;
        Ok(c)
    }
}

/// A collection with a marked complementary face for the annular hole,
/// canonicalized to the smallest gap index of that face.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnularSpiderCollection {
    collection: SpiderCollection,
    hole_gap: u32,
}

impl AnnularSpiderCollection {
    /// Accepts any gap of the intended face and stores the face minimum.
    pub fn new(collection: SpiderCollection, hole_gap: u32) -> Result<Self, Error> {
        collection.validate().map_err(Error::InvalidSpiders)?;
        let sn = collection.s * collection.n;
        if hole_gap < 1 || hole_gap > sn {
            return Err(SpiderViolation::HoleOutOfRange(hole_gap).into());
        }
        let faces = gap_faces(collection.s, collection.n, &collection.blocks);
        let face = faces
            .iter()
            .find(|f| f.contains(&hole_gap))
            .expect("every gap lies in a face");
        Ok(AnnularSpiderCollection {
            collection,
            hole_gap: face[0],
        })
    }

    pub fn collection(&self) -> &SpiderCollection {
        &self.collection
    }

    pub fn hole_gap(&self) -> u32 {
        self.hole_gap
    }

    /// Drops the hole marking.
    pub fn forget_hole(&self) -> SpiderCollection {
        self.collection.clone()
    }
}

impl Serialize for AnnularSpiderCollection {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AnnularSpiderCollection", 4)?;
        st.serialize_field("s", &self.collection.s)?;
        st.serialize_field("n", &self.collection.n)?;
        st.serialize_field("blocks", &self.collection.blocks)?;
        st.serialize_field("hole_gap", &self.hole_gap)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for AnnularSpiderCollection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            s: u32,
            n: u32,
            blocks: Vec<Vec<u32>>,
            hole_gap: u32,
        }
        let raw = Raw::deserialize(deserializer)?;
        let c = SpiderCollection::new(raw.s, raw.n, raw.blocks).map_err(D::Error::custom)?;
        AnnularSpiderCollection::new(c, raw.hole_gap).map_err(D::Error::custom)
    }
}

/// Wire form of a first-legs line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegsRecord {
    pub s: u32,
    pub n: u32,
    pub legs: Vec<u32>,
}

/// An i-element partial collection: blocks disjoint and non-crossing, free
/// vertices allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartialSpiders {
    s: u32,
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl PartialSpiders {
    pub fn new(s: u32, n: u32, blocks: impl IntoIterator<Item = Vec<u32>>) -> Result<Self, Error> {
        domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
        Ok(PartialSpiders {
            s,
            n,
            blocks: normalize_blocks(blocks),
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn validate(&self) -> Result<(), SpiderViolation> {
        check_blocks(self.s, self.n, &self.blocks, false)
    }
}

/// Sector of gap g around a block with the given sorted feet: sector t runs
/// anti-clockwise from foot t to foot t+1 (last sector wraps).
fn sector_index(feet: &[u32], g: u32) -> usize {
    match feet.partition_point(|&f| f <= g) {
        0 => feet.len() - 1,
        k => k - 1,
    }
}

/// Partition of the gaps 1..=sn into complementary faces: gaps share a face
/// iff they sit in the same sector of every block. Faces are sorted gap
/// lists, ordered by smallest gap. Works for full and partial collections.
pub fn gap_faces(s: u32, n: u32, blocks: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let sn = s * n;
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<u32>> = Default::default();
    for g in 1..=sn {
        let sig: Vec<usize> = blocks.iter().map(|b| sector_index(b, g)).collect();
        groups.entry(sig).or_default().push(g);
    }
    let mut faces: Vec<Vec<u32>> = groups.into_values().collect();
    faces.sort();
    faces
}

/// Faces of a full collection; always (s-1)n + 1 of them.
pub fn faces_of_collection(c: &SpiderCollection) -> Result<Vec<Vec<u32>>, Error> {
    c.validate().map_err(Error::InvalidSpiders)?;
    let faces = gap_faces(c.s, c.n, &c.blocks);
    debug_assert_eq!(faces.len() as u32, (c.s - 1) * c.n + 1);
    Ok(faces)
}

fn legs_for_hole_face(collection: &SpiderCollection, hole_face: &[u32]) -> Vec<u32> {
    let probe = hole_face[0];
    let mut legs: Vec<u32> = collection
        .blocks
        .iter()
        .map(|feet| {
            let t = sector_index(feet, probe);
            debug_assert!(
                hole_face.iter().all(|&g| sector_index(feet, g) == t),
                "hole face split by a block sector"
            );
            feet[(t + 1) % feet.len()]
        })
        .collect();
    legs.sort_unstable();
    legs
}

/// First legs of all spiders: per block, the anti-clockwise end foot of the
/// sector holding the hole face. Strictly increasing, length n.
pub fn first_legs(ac: &AnnularSpiderCollection) -> Result<Vec<u32>, Error> {
    let c = &ac.collection;
    let faces = gap_faces(c.s, c.n, &c.blocks);
    let hole_face = faces
        .iter()
        .find(|f| f.contains(&ac.hole_gap))
        .ok_or_else(|| Error::Internal("hole gap lost its face".into()))?;
    let legs = legs_for_hole_face(c, hole_face);
    debug_assert!(legs.windows(2).all(|w| w[0] < w[1]));
    Ok(legs)
}

/// Unique annular collection with the given first legs: place a spider on s
/// consecutive vertices at the first leg whose successor gap is at least s,
/// cut it away, recurse; then recover the hole face as the one whose legs
/// reproduce the input.
pub fn legs_decode(s: u32, n: u32, legs: &[u32]) -> Result<AnnularSpiderCollection, Error> {
    domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
    let sn = s * n;
    if legs.len() != n as usize {
        return Err(Error::MalformedCode(format!(
            "expected {} legs, got {}",
            n,
            legs.len()
        )));
    }
    if legs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MalformedCode("legs must be strictly increasing".into()));
    }
    if legs.iter().any(|&v| v < 1 || v > sn) {
        return Err(Error::MalformedCode(format!("leg outside 1..={sn}")));
    }

    let mut poly: Vec<u32> = (1..=sn).collect();
    let mut remaining: Vec<u32> = legs.to_vec();
    let mut blocks: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
    while !remaining.is_empty() {
        let m_cur = poly.len() as u32;
        let positions: Vec<u32> = remaining
            .iter()
            .map(|lab| poly.binary_search(lab).unwrap() as u32 + 1)
            .collect();
        let k = positions.len();
        let j = (0..k)
            .find(|&t| {
                let gap = if t + 1 < k {
                    positions[t + 1] - positions[t]
                } else {
                    m_cur - positions[k - 1] + positions[0]
                };
                gap >= s
            })
            .ok_or_else(|| Error::Internal("no pigeonhole gap in legs decode".into()))?;
        let pj = positions[j];
        let feet: Vec<u32> = (0..s)
            .map(|t| poly[((pj - 1 + t) % m_cur) as usize])
            .collect();
        blocks.push(feet.clone());
        poly.retain(|v| !feet.contains(v));
        remaining.remove(j);
    }
    debug_assert!(poly.is_empty());

    let collection = SpiderCollection::new(s, n, blocks)?;
    debug_assert_eq!(collection.validate(), Ok(()));
    let faces = gap_faces(s, n, &collection.blocks);
    let mut hole = None;
    for face in &faces {
        if legs_for_hole_face(&collection, face) == legs {
            if hole.replace(face[0]).is_some() {
                return Err(Error::Internal("two faces reproduce the same legs".into()));
            }
        }
    }
    let hole_gap = hole.ok_or_else(|| Error::Internal("no face reproduces the legs".into()))?;
    Ok(AnnularSpiderCollection {
        collection,
        hole_gap,
    })
}

/// All full collections, deterministic lexicographic order, by interval
/// recursion (independent of the first-leg codec): the smallest uncovered
/// vertex starts a block, the block splits its segment, segments are
/// processed left to right. Segments whose size is not a multiple of s are
/// pruned.
pub fn enumerate_disc(s: u32, n: u32) -> Result<Vec<SpiderCollection>, Error> {
    domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
    let mut out = Vec::new();
    let segments = vec![(1..=s * n).collect::<Vec<u32>>()];
    let mut acc: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
    disc_rec(s, n, segments, &mut acc, &mut out);
    Ok(out)
}

fn disc_rec(
    s: u32,
    n: u32,
    mut segments: Vec<Vec<u32>>,
    acc: &mut Vec<Vec<u32>>,
    out: &mut Vec<SpiderCollection>,
) {
    let Some(seg) = segments.pop() else {
        out.push(SpiderCollection {
            s,
            n,
            blocks: acc.clone(),
        });
        return;
    };
    if seg.is_empty() {
        disc_rec(s, n, segments, acc, out);
        return;
    }
    // segments is treated as a stack: keep later segments below
    let mut picked = vec![0usize];
    choose_feet(s, n, &seg, &mut picked, &mut segments, acc, out);
}

fn choose_feet(
    s: u32,
    n: u32,
    seg: &[u32],
    picked: &mut Vec<usize>,
    rest: &mut Vec<Vec<u32>>,
    acc: &mut Vec<Vec<u32>>,
    out: &mut Vec<SpiderCollection>,
) {
    if picked.len() == s as usize {
        let tail = seg.len() - picked[picked.len() - 1] - 1;
        if tail % s as usize != 0 {
            return;
        }
        let block: Vec<u32> = picked.iter().map(|&p| seg[p]).collect();
        // pieces between consecutive feet, rightmost first so the stack
        // pops them left to right
        let mut pieces: Vec<Vec<u32>> = Vec::new();
        pieces.push(seg[picked[picked.len() - 1] + 1..].to_vec());
        for t in (1..picked.len()).rev() {
            pieces.push(seg[picked[t - 1] + 1..picked[t]].to_vec());
        }
        let added = pieces.len();
        rest.extend(pieces);
        acc.push(block);
        let segments = rest.clone();
        disc_rec(s, n, segments, acc, out);
        acc.pop();
        rest.truncate(rest.len() - added);
        return;
    }
    let prev = picked[picked.len() - 1];
    for next in prev + 1..seg.len() {
        // the stretch skipped between feet must itself be partitionable
        if (next - prev - 1) % s as usize != 0 {
            continue;
        }
        picked.push(next);
        choose_feet(s, n, seg, picked, rest, acc, out);
        picked.pop();
    }
}

/// All annular collections: every disc collection with every complementary
/// face as the hole. |A(s,n)| = C(sn, n).
pub fn enumerate_annular(s: u32, n: u32) -> Result<Vec<AnnularSpiderCollection>, Error> {
    let mut out = Vec::new();
    for c in enumerate_disc(s, n)? {
        for face in gap_faces(s, n, &c.blocks) {
            out.push(AnnularSpiderCollection {
                collection: c.clone(),
                hole_gap: face[0],
            });
        }
    }
    Ok(out)
}

/// All i-element partial collections (every vertex may also stay free).
pub fn enumerate_partials(s: u32, n: u32, i: u32) -> Result<Vec<PartialSpiders>, Error> {
    domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
    domain(i <= n, "require i <= n")?;
    let mut out = Vec::new();
    let segments = vec![(1..=s * n).collect::<Vec<u32>>()];
    let mut acc: Vec<Vec<u32>> = Vec::with_capacity(i as usize);
    partial_rec(s, n, i as usize, segments, &mut acc, &mut out);
    Ok(out)
}

fn partial_rec(
    s: u32,
    n: u32,
    blocks_left: usize,
    mut segments: Vec<Vec<u32>>,
    acc: &mut Vec<Vec<u32>>,
    out: &mut Vec<PartialSpiders>,
) {
    if blocks_left == 0 {
        out.push(PartialSpiders {
            s,
            n,
            blocks: normalize_blocks(acc.clone()),
        });
        return;
    }
    let total: usize = segments.iter().map(|seg| seg.len()).sum();
    if total < blocks_left * s as usize {
        return;
    }
    let Some(mut seg) = segments.pop() else {
        return;
    };
    if seg.is_empty() {
        partial_rec(s, n, blocks_left, segments, acc, out);
        return;
    }
    // branch 1: the first vertex of the segment starts a block
    let mut picked = vec![0usize];
    choose_partial_feet(s, n, blocks_left, &seg, &mut picked, &mut segments, acc, out);
    // branch 2: it stays free
    seg.remove(0);
    segments.push(seg);
    partial_rec(s, n, blocks_left, segments, acc, out);
}

#[allow(clippy::too_many_arguments)]
fn choose_partial_feet(
    s: u32,
    n: u32,
    blocks_left: usize,
    seg: &[u32],
    picked: &mut Vec<usize>,
    rest: &mut Vec<Vec<u32>>,
    acc: &mut Vec<Vec<u32>>,
    out: &mut Vec<PartialSpiders>,
) {
    if picked.len() == s as usize {
        let block: Vec<u32> = picked.iter().map(|&p| seg[p]).collect();
        let mut pieces: Vec<Vec<u32>> = Vec::new();
        pieces.push(seg[picked[picked.len() - 1] + 1..].to_vec());
        for t in (1..picked.len()).rev() {
            pieces.push(seg[picked[t - 1] + 1..picked[t]].to_vec());
        }
        let added = pieces.len();
        rest.extend(pieces);
        acc.push(block);
        let segments = rest.clone();
        partial_rec(s, n, blocks_left - 1, segments, acc, out);
        acc.pop();
        rest.truncate(rest.len() - added);
        return;
    }
    let prev = picked[picked.len() - 1];
    for next in prev + 1..seg.len() {
        picked.push(next);
        choose_partial_feet(s, n, blocks_left, seg, picked, rest, acc, out);
        picked.pop();
    }
}

/// Face criterion for completability: a partial extends to a full
/// collection iff every complementary face has a free-vertex count
/// divisible by s.
pub fn completable(p: &PartialSpiders) -> Result<bool, Error> {
    p.validate().map_err(Error::InvalidSpiders)?;
    Ok(free_counts_per_face(p).iter().all(|&c| c % p.s == 0))
}

fn free_counts_per_face(p: &PartialSpiders) -> Vec<u32> {
    let sn = p.s * p.n;
    let faces = gap_faces(p.s, p.n, &p.blocks);
    let mut face_of_gap = vec![0usize; sn as usize + 1];
    for (fi, face) in faces.iter().enumerate() {
        for &g in face {
            face_of_gap[g as usize] = fi;
        }
    }
    let mut used = vec![false; sn as usize + 1];
    for b in &p.blocks {
        for &v in b {
            used[v as usize] = true;
        }
    }
    let mut counts = vec![0u32; faces.len()];
    for v in 1..=sn {
        if !used[v as usize] {
            // a free vertex touches two gaps that share its face
            counts[face_of_gap[v as usize]] += 1;
        }
    }
    counts
}

/// Brute-force completability: some full collection contains every block of
/// the partial. Used to certify the face criterion.
pub fn completable_brute(p: &PartialSpiders) -> Result<bool, Error> {
    p.validate().map_err(Error::InvalidSpiders)?;
    let fulls = enumerate_disc(p.s, p.n)?;
    Ok(fulls.iter().any(|c| contains_blocks(c, p)))
}

fn contains_blocks(c: &SpiderCollection, p: &PartialSpiders) -> bool {
    p.blocks.iter().all(|b| c.blocks.binary_search(b).is_ok())
}

/// Exhaustively counts completable i-element partials — in the disc, or
/// with an annular hole marking (every complementary face of a completable
/// partial admits a completion that keeps the hole inside it, since spiders
/// are trees and cannot enclose the hole). Oracle for the closed counts
/// only; guarded to desk scale.
pub fn count_partials(s: u32, n: u32, i: u32, annular: bool) -> Result<BigUint, Error> {
    const GUARD: u64 = 2_000_000;
    let bound = a_count(s as u64, n as u64, i as u64)?;
    if bound > BigUint::from(GUARD) {
        return Err(Error::SizeGuard(format!(
            "count_partials({s}, {n}, {i}) would visit more than {GUARD} objects"
        )));
    }
    let mut total: u64 = 0;
    for p in enumerate_partials(s, n, i)? {
        if completable(&p)? {
            if annular {
                let faces = gap_faces(s, n, &p.blocks).len() as u64;
                debug_assert_eq!(faces, ((s as u64) - 1) * i as u64 + 1);
                total += faces;
            } else {
                total += 1;
            }
        }
    }
    Ok(BigUint::from(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{binomial, d_count, fuss_count};
    use num_traits::ToPrimitive;

    fn coll(s: u32, n: u32, blocks: &[&[u32]]) -> SpiderCollection {
        SpiderCollection::new(s, n, blocks.iter().map(|b| b.to_vec())).unwrap()
    }

    #[test]
    fn validate_catches_violations() {
        let cross = coll(2, 2, &[&[1, 3], &[2, 4]]);
        assert!(matches!(
            cross.validate(),
            Err(SpiderViolation::Crossing(_, _))
        ));
        let bad_size = SpiderCollection::new(2, 2, vec![vec![1, 2, 3], vec![4]]).unwrap();
        assert!(matches!(
            bad_size.validate(),
            Err(SpiderViolation::BlockSize(_))
        ));
        let gap = SpiderCollection::new(2, 2, vec![vec![1, 2], vec![3, 3]]).unwrap();
        assert!(gap.validate().is_err());
    }

    #[test]
    fn faces_match_hand_traces() {
        let c = coll(2, 2, &[&[2, 3], &[1, 4]]);
        assert_eq!(
            faces_of_collection(&c).unwrap(),
            vec![vec![1, 3], vec![2], vec![4]]
        );
        let c2 = coll(3, 1, &[&[1, 2, 3]]);
        assert_eq!(faces_of_collection(&c2).unwrap().len(), 3);
        let c3 = coll(2, 2, &[&[1, 2], &[3, 4]]);
        assert_eq!(
            faces_of_collection(&c3).unwrap(),
            vec![vec![1], vec![2, 4], vec![3]]
        );
    }

    #[test]
    fn first_legs_hand_traces() {
        let ac = AnnularSpiderCollection::new(coll(2, 2, &[&[2, 3], &[1, 4]]), 4).unwrap();
        assert_eq!(first_legs(&ac).unwrap(), vec![1, 2]);
        let ac2 = AnnularSpiderCollection::new(coll(2, 2, &[&[1, 2], &[3, 4]]), 2).unwrap();
        assert_eq!(first_legs(&ac2).unwrap(), vec![1, 3]);
        for k in 1..=4u32 {
            let c = coll(4, 1, &[&[1, 2, 3, 4]]);
            let ac = AnnularSpiderCollection::new(c, k).unwrap();
            // single spider: the hole sector ends at the leg after gap k
            assert_eq!(first_legs(&ac).unwrap(), vec![k % 4 + 1]);
        }
    }

    #[test]
    fn legs_decode_hand_traces() {
        let ac = legs_decode(2, 2, &[1, 2]).unwrap();
        assert_eq!(ac.collection().blocks(), &[vec![1, 4], vec![2, 3]]);
        assert_eq!(ac.hole_gap(), 4);

        let ac2 = legs_decode(2, 2, &[1, 3]).unwrap();
        assert_eq!(ac2.collection().blocks(), &[vec![1, 2], vec![3, 4]]);
        assert_eq!(ac2.hole_gap(), 2);

        let single = legs_decode(3, 1, &[2]).unwrap();
        assert_eq!(single.collection().blocks(), &[vec![1, 2, 3]]);
    }

    #[test]
    fn legs_decode_rejects_malformed() {
        assert!(matches!(
            legs_decode(2, 2, &[2, 1]),
            Err(Error::MalformedCode(_))
        ));
        assert!(matches!(
            legs_decode(2, 2, &[1]),
            Err(Error::MalformedCode(_))
        ));
        assert!(matches!(
            legs_decode(2, 2, &[1, 9]),
            Err(Error::MalformedCode(_))
        ));
    }

    #[test]
    fn legs_round_trip_small() {
        for (s, n) in [(2u32, 2u32), (2, 3), (3, 2), (3, 3)] {
            let sn = s * n;
            let mut count = 0u64;
            let mut legs = Vec::new();
            gen_increasing(sn, n as usize, 1, &mut legs, &mut |seq: &[u32]| {
                let ac = legs_decode(s, n, seq).unwrap();
                assert_eq!(first_legs(&ac).unwrap(), seq);
                count += 1;
            });
            assert_eq!(
                count,
                binomial(sn as u64, n as i64).to_u64().unwrap(),
                "legs space size at s={s} n={n}"
            );
            for ac in enumerate_annular(s, n).unwrap() {
                let seq = first_legs(&ac).unwrap();
                assert_eq!(legs_decode(s, n, &seq).unwrap(), ac);
            }
        }
    }

    fn gen_increasing(
        max: u32,
        len: usize,
        min: u32,
        current: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]),
    ) {
        if current.len() == len {
            f(current);
            return;
        }
        for v in min..=max {
            current.push(v);
            gen_increasing(max, len, v + 1, current, f);
            current.pop();
        }
    }

    #[test]
    fn forget_hole_fibers() {
        let annular = enumerate_annular(2, 2).unwrap();
        assert_eq!(annular.len(), 6);
        let c = coll(2, 2, &[&[2, 3], &[1, 4]]);
        let fiber = annular
            .iter()
            .filter(|ac| ac.forget_hole() == c)
            .count();
        assert_eq!(fiber, 3);
        assert_eq!(enumerate_disc(2, 2).unwrap().len(), 2);
    }

    #[test]
    fn enumerate_disc_matches_paper_example() {
        let got: Vec<_> = enumerate_disc(3, 2)
            .unwrap()
            .iter()
            .map(|c| c.blocks().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![vec![1, 2, 3], vec![4, 5, 6]],
                vec![vec![1, 2, 6], vec![3, 4, 5]],
                vec![vec![1, 5, 6], vec![2, 3, 4]],
            ]
        );
        assert_eq!(enumerate_disc(4, 1).unwrap().len(), 1);
        assert_eq!(enumerate_disc(2, 3).unwrap().len(), 5);
    }

    #[test]
    fn completable_examples() {
        let bad = PartialSpiders::new(2, 2, vec![vec![1, 3]]).unwrap();
        assert!(!completable(&bad).unwrap());
        assert!(!completable_brute(&bad).unwrap());
        let empty = PartialSpiders::new(2, 2, Vec::<Vec<u32>>::new()).unwrap();
        assert!(completable(&empty).unwrap());
        let good = PartialSpiders::new(2, 2, vec![vec![1, 2]]).unwrap();
        assert!(completable(&good).unwrap());
        assert!(completable_brute(&good).unwrap());
    }

    #[test]
    fn count_partials_examples() {
        assert_eq!(
            count_partials(2, 2, 1, false).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(
            count_partials(2, 2, 1, true).unwrap(),
            BigUint::from(8u32)
        );
        for (s, n) in [(2u32, 3u32), (3, 2)] {
            assert_eq!(
                count_partials(s, n, n, false).unwrap(),
                fuss_count(s as u64, n as u64).unwrap()
            );
        }
    }

    #[test]
    fn criterion_matches_brute_force() {
        for (s, n) in [(2u32, 3u32), (3, 2), (2, 4)] {
            let fulls = enumerate_disc(s, n).unwrap();
            for i in 0..=n {
                for p in enumerate_partials(s, n, i).unwrap() {
                    let by_criterion = completable(&p).unwrap();
                    assert_eq!(
                        by_criterion,
                        completable_brute(&p).unwrap(),
                        "criterion disagrees at s={s} n={n} blocks={:?}",
                        p.blocks()
                    );
                    // annular consistency: a face marking survives iff some
                    // completion keeps a face inside it, which happens for
                    // every face exactly when the blocks are completable
                    for face in gap_faces(s, n, p.blocks()) {
                        let consistent = fulls
                            .iter()
                            .filter(|c| contains_blocks(c, &p))
                            .any(|c| {
                                gap_faces(s, n, c.blocks())
                                    .iter()
                                    .any(|f| f.iter().all(|g| face.contains(g)))
                            });
                        assert_eq!(
                            consistent,
                            by_criterion,
                            "annular marking at s={s} n={n} blocks={:?} face={face:?}",
                            p.blocks()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn count_partials_matches_formulas_at_s2() {
        for n in 1..=4u32 {
            for i in 0..=n {
                assert_eq!(
                    count_partials(2, n, i, false).unwrap(),
                    d_count(2, n as u64, i as u64).unwrap()
                );
                assert_eq!(
                    count_partials(2, n, i, true).unwrap(),
                    a_count(2, n as u64, i as u64).unwrap()
                );
            }
        }
    }

    #[test]
    fn count_partials_matches_subset_brute_force() {
        // independent truth: distinct i-subsets of blocks of full collections
        for (s, n) in [(2u32, 4u32), (3, 2), (3, 3), (4, 2)] {
            let fulls = enumerate_disc(s, n).unwrap();
            for i in 0..=n {
                let mut subsets = std::collections::BTreeSet::new();
                for c in &fulls {
                    let mut pick = Vec::new();
                    subsets_of(c.blocks(), i as usize, 0, &mut pick, &mut subsets);
                }
                assert_eq!(
                    count_partials(s, n, i, false).unwrap(),
                    BigUint::from(subsets.len()),
                    "disc count at s={s} n={n} i={i}"
                );
                let annular: usize = subsets
                    .iter()
                    .map(|blocks| gap_faces(s, n, blocks).len())
                    .sum();
                assert_eq!(
                    count_partials(s, n, i, true).unwrap(),
                    BigUint::from(annular),
                    "annular count at s={s} n={n} i={i}"
                );
            }
        }
        // frozen value: the 3 full collections at s=3, n=2 expose 6 distinct
        // blocks, each completable
        assert_eq!(
            count_partials(3, 2, 1, false).unwrap(),
            BigUint::from(6u32)
        );
    }

    fn subsets_of(
        blocks: &[Vec<u32>],
        want: usize,
        from: usize,
        pick: &mut Vec<Vec<u32>>,
        out: &mut std::collections::BTreeSet<Vec<Vec<u32>>>,
    ) {
        if pick.len() == want {
            out.insert(pick.clone());
            return;
        }
        for idx in from..blocks.len() {
            pick.push(blocks[idx].clone());
            subsets_of(blocks, want, idx + 1, pick, out);
            pick.pop();
        }
    }

    #[test]
    fn size_guard_refuses_large_oracle_runs() {
        assert!(matches!(
            count_partials(4, 40, 20, true),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn jsonl_wire_shapes() {
        let ac = AnnularSpiderCollection::new(coll(2, 2, &[&[2, 3], &[1, 4]]), 3).unwrap();
        // gap 3 belongs to the face {1, 3}, whose canonical gap is 1
        assert_eq!(ac.hole_gap(), 1);
        let line = serde_json::to_string(&ac).unwrap();
        assert_eq!(
            line,
            r#"{"s":2,"n":2,"blocks":[[1,4],[2,3]],"hole_gap":1}"#
        );
        let back: AnnularSpiderCollection = serde_json::from_str(&line).unwrap();
        assert_eq!(back, ac);

        let c: SpiderCollection =
            serde_json::from_str(r#"{"s":3,"n":2,"blocks":[[4,5,6],[3,2,1]]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"s":3,"n":2,"blocks":[[1,2,3],[4,5,6]]}"#
        );
    }
}
