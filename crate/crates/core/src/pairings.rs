//! Labeled non-crossing pairings and the bijection with disc spider
//! collections.
//!
//! The disc boundary carries 2(s-1)n vertices in 2n blocks of s-1; odd
//! blocks are labeled 1..s-1 anti-clockwise, even blocks s-1..1. A pairing
//! is a non-crossing perfect matching whose arcs join equal labels.
//!
//! `phi_forward` peels the arcs leaving block 1: they cut the disc into s
//! regions whose interiors are again labeled pairings after rotating the
//! vertex numbering so the first full block comes first (region i rotates
//! by s-i). Each region converts recursively to a spider collection and is
//! pasted between consecutive legs of the block-1 spider, with the region's
//! first vertex landing i-1 steps anti-clockwise of the region start.
//! `phi_inverse` mirrors the same coordinates exactly.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error as ThisError;

use crate::error::domain;
use crate::spiders::SpiderCollection;
use crate::Error;

/// First violated invariant of a candidate pairing, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum PairingViolation {
    #[error("arc ({0}, {1}) has an endpoint outside 1..=2(s-1)n")]
    OutOfRange(u32, u32),
    #[error("vertex {0} is an end of more than one arc")]
    DoubleEnd(u32),
    #[error("vertex {0} is not an end of any arc")]
    Unmatched(u32),
    #[error("arcs ({0}, {1}) and ({2}, {3}) cross")]
    Crossing(u32, u32, u32, u32),
    #[error("arc ({0}, {1}) joins labels {2} and {3}")]
    LabelMismatch(u32, u32, u32, u32),
}

/// Label of vertex v: its position within its block for odd blocks,
/// reversed for even blocks.
pub fn label_of(s: u32, n: u32, v: u32) -> Result<u32, Error> {
    domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
    let m = 2 * (s - 1) * n;
    domain(v >= 1 && v <= m, "vertex outside 1..=2(s-1)n")?;
    let block = (v - 1) / (s - 1) + 1;
    let pos = (v - 1) % (s - 1) + 1;
    Ok(if block % 2 == 1 { pos } else { s - pos })
}

/// A labeled pairing candidate; arcs stored as sorted (lo, hi) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabeledPairing {
    s: u32,
    n: u32,
    arcs: Vec<(u32, u32)>,
}

impl LabeledPairing {
    pub fn new(s: u32, n: u32, arcs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, Error> {
        domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
        let mut arcs: Vec<(u32, u32)> = arcs
            .into_iter()
            .map(|(u, w)| if u <= w { (u, w) } else { (w, u) })
            .collect();
        arcs.sort_unstable();
        Ok(LabeledPairing { s, n, arcs })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    pub fn vertex_count(&self) -> u32 {
        2 * (self.s - 1) * self.n
    }

    /// Perfect-matching, non-crossing and equal-label checks.
    pub fn validate(&self) -> Result<(), PairingViolation> {
        let m = self.vertex_count();
        let mut ends = vec![0u8; m as usize + 1];
        for &(u, w) in &self.arcs {
            if u < 1 || w > m {
                return Err(PairingViolation::OutOfRange(u, w));
            }
            for v in [u, w] {
                ends[v as usize] += 1;
                if ends[v as usize] > 1 {
                    return Err(PairingViolation::DoubleEnd(v));
                }
            }
        }
        if let Some(v) = (1..=m).find(|&v| ends[v as usize] == 0) {
            return Err(PairingViolation::Unmatched(v));
        }
        for (x, &a) in self.arcs.iter().enumerate() {
            for &b in &self.arcs[x + 1..] {
                let cross = (a.0 < b.0 && b.0 < a.1 && a.1 < b.1)
                    || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1);
                if cross {
                    return Err(PairingViolation::Crossing(a.0, a.1, b.0, b.1));
                }
            }
        }
        for &(u, w) in &self.arcs {
            let (lu, lw) = (
                label_of(self.s, self.n, u).expect("range checked"),
                label_of(self.s, self.n, w).expect("range checked"),
            );
            if lu != lw {
                return Err(PairingViolation::LabelMismatch(u, w, lu, lw));
            }
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for LabeledPairing {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            s: u32,
            n: u32,
            arcs: Vec<(u32, u32)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        LabeledPairing::new(raw.s, raw.n, raw.arcs).map_err(D::Error::custom)
    }
}

/// All valid pairings, deterministic order: the first vertex of an interval
/// matches each equal-label vertex that splits the rest into even pieces.
pub fn enumerate_pairings(s: u32, n: u32) -> Result<Vec<LabeledPairing>, Error> {
    domain(s >= 2 && n >= 1, "require s >= 2 and n >= 1")?;
    let m = 2 * (s - 1) * n;
    let matchings = match_interval(s, n, 1, m);
    Ok(matchings
        .into_iter()
        .map(|arcs| LabeledPairing { s, n, arcs })
        .collect())
}

fn match_interval(s: u32, n: u32, lo: u32, hi: u32) -> Vec<Vec<(u32, u32)>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let first_label = label_of(s, n, lo).expect("in range");
    let mut out = Vec::new();
    let mut u = lo + 1;
    while u <= hi {
        if (u - lo) % 2 == 1 && label_of(s, n, u).expect("in range") == first_label {
            for inner in match_interval(s, n, lo + 1, u - 1) {
                for outer in match_interval(s, n, u + 1, hi) {
                    let mut arcs = Vec::with_capacity(inner.len() + outer.len() + 1);
                    arcs.push((lo, u));
                    arcs.extend(inner.iter().copied());
                    arcs.extend(outer.iter().copied());
                    arcs.sort_unstable();
                    out.push(arcs);
                }
            }
        }
        u += 1;
    }
    out
}

struct SubRegion {
    spiders: u32,
    /// Arcs renumbered to the region's own vertex ordering.
    arcs: Vec<(u32, u32)>,
}

/// Splits a pairing on 2(s-1)r vertices into the s regions cut off by the
/// arcs of block 1. Regions are reported in anti-clockwise order; region i
/// (1-based) starts its own vertex numbering at interior position s-i+1.
fn split_regions(s: u32, r: u32, arcs: &[(u32, u32)]) -> Result<Vec<SubRegion>, Error> {
    let m = 2 * (s - 1) * r;
    let mut partner = vec![0u32; m as usize + 1];
    for &(u, w) in arcs {
        partner[u as usize] = w;
        partner[w as usize] = u;
    }
    // partners of block-1 vertices 1..s-1; nested, so strictly decreasing
    let t: Vec<u32> = (1..s).map(|k| partner[k as usize]).collect();
    for w in t.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::Internal(
                "block-1 arcs are not nested in label order".into(),
            ));
        }
    }
    if t[t.len() - 1] < s {
        return Err(Error::Internal("block-1 arc ends inside block 1".into()));
    }

    let bounds = |i: u32| -> (u32, u32) {
        // interior vertex range (inclusive) of region i
        if i == 1 {
            (s, t[(s - 2) as usize] - 1)
        } else if i < s {
            (t[(s - i) as usize] + 1, t[(s - i - 1) as usize] - 1)
        } else {
            (t[0] + 1, m)
        }
    };

    let mut regions = Vec::with_capacity(s as usize);
    let mut spider_total = 0;
    for i in 1..=s {
        let (lo, hi) = bounds(i);
        let len = if hi >= lo { hi - lo + 1 } else { 0 };
        if len % (2 * (s - 1)) != 0 {
            return Err(Error::Internal(format!(
                "region {i} has {len} vertices, not a multiple of 2(s-1)"
            )));
        }
        let spiders = len / (2 * (s - 1));
        spider_total += spiders;
        let offset = s - i; // rotation: new vertex 1 = interior position s-i+1
        let renumber = |v: u32| -> u32 { ((v - lo) + len - offset) % len + 1 };
        let mut sub_arcs = Vec::new();
        for &(u, w) in arcs {
            if u >= lo && u <= hi {
                if w < lo || w > hi {
                    return Err(Error::Internal(format!(
                        "arc ({u}, {w}) bridges two regions"
                    )));
                }
                sub_arcs.push((renumber(u), renumber(w)));
            }
        }
        regions.push(SubRegion {
            spiders,
            arcs: sub_arcs,
        });
    }
    if spider_total != r - 1 {
        return Err(Error::Internal(
            "region spider counts do not sum to r - 1".into(),
        ));
    }
    Ok(regions)
}

/// Pairing → spider collection.
pub fn phi_forward(p: &LabeledPairing) -> Result<SpiderCollection, Error> {
    p.validate().map_err(Error::InvalidPairing)?;
    let blocks = forward_rec(p.s, p.n, p.arcs())?;
    let c = SpiderCollection::new(p.s, p.n, blocks)?;
    debug_assert_eq!(c.validate(), Ok(()));
    Ok(c)
}

fn forward_rec(s: u32, r: u32, arcs: &[(u32, u32)]) -> Result<Vec<Vec<u32>>, Error> {
    if r == 1 {
        return Ok(vec![(1..=s).collect()]);
    }
    let regions = split_regions(s, r, arcs)?;

    // legs of the block-1 spider: leg 1 at vertex 1, then one leg after
    // each pasted region
    let mut legs = Vec::with_capacity(s as usize);
    let mut cursor = 1u32;
    for region in &regions {
        legs.push(cursor);
        cursor += s * region.spiders + 1;
    }
    debug_assert_eq!(cursor, s * r + 1);

    let mut blocks = vec![legs.clone()];
    for (idx, region) in regions.iter().enumerate() {
        if region.spiders == 0 {
            continue;
        }
        let i = idx as u32 + 1;
        let sub_blocks = forward_rec(s, region.spiders, &region.arcs)?;
        let span = s * region.spiders;
        let base = legs[idx] + 1;
        for sub in sub_blocks {
            let mapped: Vec<u32> = sub
                .iter()
                .map(|&w| base + (i - 1 + w - 1) % span)
                .collect();
            blocks.push(mapped);
        }
    }
    Ok(blocks)
}

/// Spider collection → pairing.
pub fn phi_inverse(c: &SpiderCollection) -> Result<LabeledPairing, Error> {
    c.validate().map_err(Error::InvalidSpiders)?;
    let arcs = inverse_rec(c.s(), c.n(), c.blocks())?;
    let p = LabeledPairing::new(c.s(), c.n(), arcs)?;
    debug_assert_eq!(p.validate(), Ok(()));
    Ok(p)
}

fn inverse_rec(s: u32, r: u32, blocks: &[Vec<u32>]) -> Result<Vec<(u32, u32)>, Error> {
    if r == 1 {
        // unique pairing: block-1 vertex k meets the equal label in block 2
        return Ok((1..s).map(|k| (k, 2 * s - 1 - k)).collect());
    }
    let legs = blocks
        .iter()
        .find(|b| b.contains(&1))
        .ok_or_else(|| Error::Internal("no spider has a leg at vertex 1".into()))?;

    // sub-collections between consecutive legs, renumbered by undoing the
    // paste rotation of region i
    let mut sub_pairings: Vec<(u32, Vec<(u32, u32)>)> = Vec::with_capacity(s as usize);
    for i in 1..=s {
        let lo = legs[(i - 1) as usize] + 1;
        let hi = if (i as usize) < legs.len() {
            legs[i as usize] - 1
        } else {
            s * r
        };
        let len = if hi >= lo { hi - lo + 1 } else { 0 };
        if len % s != 0 {
            return Err(Error::Internal(format!(
                "region {i} holds {len} vertices, not a multiple of s"
            )));
        }
        let spiders = len / s;
        if spiders == 0 {
            sub_pairings.push((0, Vec::new()));
            continue;
        }
        let mut sub_blocks = Vec::new();
        for b in blocks {
            if b == legs {
                continue;
            }
            if b[0] >= lo && b[0] <= hi {
                if *b.last().unwrap() > hi {
                    return Err(Error::Internal("spider crosses a region boundary".into()));
                }
                let mut mapped: Vec<u32> =
                    b.iter().map(|&v| (v - lo + len - (i - 1)) % len + 1).collect();
                mapped.sort_unstable();
                sub_blocks.push(mapped);
            }
        }
        if sub_blocks.len() != spiders as usize {
            return Err(Error::Internal("region spider count mismatch".into()));
        }
        sub_blocks.sort();
        sub_pairings.push((spiders, inverse_rec(s, spiders, &sub_blocks)?));
    }

    // lay the regions back out around block 1
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    let mut cursor = s - 1; // last vertex of block 1
    let mut t_vals = vec![0u32; s as usize]; // t_vals[k] = partner of block-1 vertex k
    for (idx, (spiders, sub_arcs)) in sub_pairings.iter().enumerate() {
        let i = idx as u32 + 1;
        let len = 2 * (s - 1) * spiders;
        let start = cursor + 1;
        let offset = s - i;
        for &(wa, wb) in sub_arcs {
            let place = |w: u32| start + (offset + w - 1) % len;
            arcs.push((place(wa), place(wb)));
        }
        cursor += len;
        if i < s {
            // the arc from block-1 vertex s-i lands right after region i
            cursor += 1;
            t_vals[(s - i) as usize] = cursor;
        }
    }
    if cursor != 2 * (s - 1) * r {
        return Err(Error::Internal("region layout does not fill the disc".into()));
    }
    for k in 1..s {
        arcs.push((k, t_vals[k as usize]));
    }
    Ok(arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::fuss_count;
    use crate::spiders::enumerate_disc;
    use num_traits::ToPrimitive;

    fn pairing(s: u32, n: u32, arcs: &[(u32, u32)]) -> LabeledPairing {
        LabeledPairing::new(s, n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn labels_follow_block_parity() {
        assert_eq!(label_of(3, 2, 1).unwrap(), 1);
        assert_eq!(label_of(3, 2, 2).unwrap(), 2);
        assert_eq!(label_of(3, 2, 3).unwrap(), 2);
        assert_eq!(label_of(3, 2, 4).unwrap(), 1);
        for v in 1..=6 {
            assert_eq!(label_of(2, 3, v).unwrap(), 1);
        }
        assert!(label_of(3, 2, 9).is_err());
        assert!(label_of(3, 2, 0).is_err());
    }

    #[test]
    fn validate_catches_violations() {
        assert_eq!(pairing(2, 2, &[(1, 4), (2, 3)]).validate(), Ok(()));
        assert_eq!(
            pairing(2, 2, &[(1, 3), (2, 4)]).validate(),
            Err(PairingViolation::Crossing(1, 3, 2, 4))
        );
        assert_eq!(
            pairing(3, 2, &[(1, 4), (2, 3), (5, 8), (6, 7)]).validate(),
            Ok(())
        );
        assert_eq!(
            pairing(3, 2, &[(1, 2), (3, 4), (5, 8), (6, 7)]).validate(),
            Err(PairingViolation::LabelMismatch(1, 2, 1, 2))
        );
        assert_eq!(
            pairing(2, 2, &[(1, 2), (3, 3)]).validate(),
            Err(PairingViolation::DoubleEnd(3))
        );
        assert_eq!(
            pairing(2, 2, &[(1, 2)]).validate(),
            Err(PairingViolation::Unmatched(3))
        );
    }

    #[test]
    fn enumerate_counts_match_closed_form() {
        assert_eq!(enumerate_pairings(3, 2).unwrap().len(), 3);
        assert_eq!(enumerate_pairings(5, 1).unwrap().len(), 1);
        assert_eq!(enumerate_pairings(2, 3).unwrap().len(), 5);
        for (s, n) in [(2u32, 5u32), (3, 3), (4, 2)] {
            assert_eq!(
                enumerate_pairings(s, n).unwrap().len() as u64,
                fuss_count(s as u64, n as u64).unwrap().to_u64().unwrap()
            );
        }
    }

    #[test]
    fn phi_base_case() {
        let p = &enumerate_pairings(4, 1).unwrap()[0];
        assert_eq!(p.arcs(), &[(1, 6), (2, 5), (3, 4)]);
        let c = phi_forward(p).unwrap();
        assert_eq!(c.blocks(), &[vec![1, 2, 3, 4]]);
        assert_eq!(&phi_inverse(&c).unwrap(), p);
    }

    #[test]
    fn phi_matches_hand_traces() {
        let m1 = pairing(3, 2, &[(1, 4), (2, 3), (5, 8), (6, 7)]);
        assert_eq!(
            phi_forward(&m1).unwrap().blocks(),
            &[vec![1, 2, 3], vec![4, 5, 6]]
        );
        let m2 = pairing(3, 2, &[(1, 8), (2, 3), (4, 5), (6, 7)]);
        assert_eq!(
            phi_forward(&m2).unwrap().blocks(),
            &[vec![1, 2, 6], vec![3, 4, 5]]
        );
        let m3 = pairing(3, 2, &[(1, 8), (2, 7), (3, 6), (4, 5)]);
        assert_eq!(
            phi_forward(&m3).unwrap().blocks(),
            &[vec![1, 5, 6], vec![2, 3, 4]]
        );
    }

    #[test]
    fn phi_degenerate_s2_is_matching_bijection() {
        let pairings = enumerate_pairings(2, 2).unwrap();
        let collections: Vec<_> = pairings
            .iter()
            .map(|p| phi_forward(p).unwrap())
            .collect();
        let expected = enumerate_disc(2, 2).unwrap();
        for c in &expected {
            assert_eq!(collections.iter().filter(|&x| x == c).count(), 1);
        }
    }

    #[test]
    fn phi_round_trips_small() {
        for (s, n) in [(2u32, 4u32), (3, 2), (3, 3), (4, 2)] {
            let pairings = enumerate_pairings(s, n).unwrap();
            let mut images = std::collections::BTreeSet::new();
            for p in &pairings {
                let c = phi_forward(p).unwrap();
                assert_eq!(c.validate(), Ok(()));
                assert_eq!(&phi_inverse(&c).unwrap(), p, "inverse(forward) at s={s} n={n}");
                images.insert(c);
            }
            assert_eq!(images.len(), pairings.len(), "forward is injective");
            for c in enumerate_disc(s, n).unwrap() {
                let p = phi_inverse(&c).unwrap();
                assert_eq!(p.validate(), Ok(()));
                assert_eq!(phi_forward(&p).unwrap(), c, "forward(inverse) at s={s} n={n}");
            }
        }
    }

    #[test]
    fn wire_shape() {
        let p = pairing(3, 2, &[(2, 3), (1, 4), (6, 7), (5, 8)]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"s":3,"n":2,"arcs":[[1,4],[2,3],[5,8],[6,7]]}"#
        );
    }
}
