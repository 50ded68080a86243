//! Codec between pointed dissections of the (sn+2)-gon and code pairs
//! (non-decreasing beginnings sequence, bitstring of length n-1 with one
//! bit per induction level).
//!
//! Both directions peel one level at a time: scan the beginnings in current
//! positional order for the first cyclic gap of at least s+1, look at the
//! chord from that beginning to the vertex s+1 positions anti-clockwise,
//! record (or replay) whether it is a diagonal, and truncate the s vertices
//! strictly between before recursing on the smaller polygon. Gaps are
//! measured in positions of the *current* truncated polygon, with the
//! wrap-around gap from the last entry back to the first taken as the full
//! remaining circle, so a lone entry always qualifies.

use serde::{Deserialize, Serialize};

use crate::dissection::{beginning_on_cycle, Dissection, PointedDissection, Region};
use crate::error::domain;
use crate::Error;

/// Code pair for a pointed dissection: `a` is non-decreasing over
/// 1..=sn+2 with one entry per diagonal, `eps` has length n-1 and exactly
/// `a.len()` ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiCode {
    pub a: Vec<u32>,
    pub eps: Vec<u8>,
}

/// Wire form of a code line: parameters plus the pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiCodeRecord {
    pub s: u32,
    pub n: u32,
    pub a: Vec<u32>,
    pub eps: Vec<u8>,
}

impl PsiCodeRecord {
    pub fn new(s: u32, n: u32, code: PsiCode) -> Self {
        PsiCodeRecord {
            s,
            n,
            a: code.a,
            eps: code.eps,
        }
    }

    pub fn code(&self) -> PsiCode {
        PsiCode {
            a: self.a.clone(),
            eps: self.eps.clone(),
        }
    }
}

impl PsiCode {
    /// Structural check against the code set for (s, n).
    pub fn validate_for(&self, s: u32, n: u32) -> Result<(), Error> {
        domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
        let m = s * n + 2;
        if self.eps.len() != (n - 1) as usize {
            return Err(Error::MalformedCode(format!(
                "eps has length {}, expected n - 1 = {}",
                self.eps.len(),
                n - 1
            )));
        }
        if let Some(&bad) = self.eps.iter().find(|&&b| b > 1) {
            return Err(Error::MalformedCode(format!("eps entry {bad} is not a bit")));
        }
        let ones = self.eps.iter().filter(|&&b| b == 1).count();
        if ones != self.a.len() {
            return Err(Error::MalformedCode(format!(
                "eps has {} ones but a has {} entries",
                ones,
                self.a.len()
            )));
        }
        if self.a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::MalformedCode("a is not non-decreasing".into()));
        }
        if self.a.iter().any(|&v| v < 1 || v > m) {
            return Err(Error::MalformedCode(format!(
                "a entry outside 1..={m}"
            )));
        }
        Ok(())
    }
}

fn cyclic_pos(pos: u32, step: u32, m: u32) -> u32 {
    (pos - 1 + step) % m + 1
}

/// First index j (0-based) where the anti-clockwise positional gap from
/// entry j to its cyclic successor is at least `threshold`. The gap from
/// the last entry wraps around the whole circle back to the first.
fn first_big_gap(positions: &[u32], m: u32, threshold: u32) -> Option<usize> {
    let k = positions.len();
    for j in 0..k {
        let gap = if j + 1 < k {
            positions[j + 1] - positions[j]
        } else {
            m - positions[k - 1] + positions[0]
        };
        if gap >= threshold {
            return Some(j);
        }
    }
    None
}

/// Labels at the s positions strictly anti-clockwise of `pos` (positions
/// pos+1 ..= pos+s, cyclically).
fn cut_labels(poly: &[u32], pos: u32, s: u32) -> Vec<u32> {
    let m = poly.len() as u32;
    (1..=s)
        .map(|t| poly[(cyclic_pos(pos, t, m) - 1) as usize])
        .collect()
}

/// Beginnings of the remaining diagonals relative to the current polygon
/// (sorted labels) and base, as sorted labels. The polygon is sorted, so
/// label order and positional order coincide.
fn beginning_labels(
    poly: &[u32],
    diagonals: &[(u32, u32)],
    base: &[u32],
) -> Result<Vec<u32>, Error> {
    let m = poly.len() as u32;
    let pos_of = |label: u32| -> Result<u32, Error> {
        poly.binary_search(&label)
            .map(|idx| idx as u32 + 1)
            .map_err(|_| Error::Internal(format!("label {label} not on current polygon")))
    };
    let base_pos: Vec<u32> = base.iter().map(|&b| pos_of(b)).collect::<Result<_, _>>()?;
    let mut labels = Vec::with_capacity(diagonals.len());
    for &(u, w) in diagonals {
        let (pu, pw) = (pos_of(u)?, pos_of(w)?);
        let begin_pos = beginning_on_cycle(m, &base_pos, pu, pw)?;
        labels.push(poly[(begin_pos - 1) as usize]);
    }
    labels.sort_unstable();
    Ok(labels)
}

/// Encode a pointed dissection to its code pair.
pub fn psi_encode(pd: &PointedDissection) -> Result<PsiCode, Error> {
    let d = pd.dissection();
    let (s, n) = (d.s(), d.n());
    let a = pd.beginnings_sequence()?;

    let mut poly: Vec<u32> = (1..=d.vertex_count()).collect();
    let mut diagonals: Vec<(u32, u32)> = d.diagonals().to_vec();
    let mut base: Vec<u32> = pd.base().vertices().to_vec();
    let mut eps: Vec<u8> = Vec::with_capacity((n - 1) as usize);

    loop {
        let m_cur = poly.len() as u32;
        let n_cur = (m_cur - 2) / s;
        if n_cur <= 1 {
            if !diagonals.is_empty() {
                return Err(Error::Internal(
                    "diagonals remain on an (s+2)-gon".into(),
                ));
            }
            check_base_is_whole(&poly, &base)?;
            break;
        }
        if diagonals.is_empty() {
            // only one bitstring with zero ones remains
            eps.resize(eps.len() + (n_cur - 1) as usize, 0);
            check_base_is_whole(&poly, &base)?;
            break;
        }

        let begin_labels = beginning_labels(&poly, &diagonals, &base)?;
        let positions: Vec<u32> = begin_labels
            .iter()
            .map(|lab| poly.binary_search(lab).unwrap() as u32 + 1)
            .collect();
        let j = first_big_gap(&positions, m_cur, s + 1).ok_or_else(|| {
            Error::Internal("no pigeonhole gap found during encode".into())
        })?;
        let pj = positions[j];
        let c_pos = cyclic_pos(pj, s + 1, m_cur);
        let va = poly[(pj - 1) as usize];
        let vc = poly[(c_pos - 1) as usize];
        let chord = if va <= vc { (va, vc) } else { (vc, va) };

        let hit = diagonals.binary_search(&chord).is_ok();
        if hit {
            let idx = diagonals.binary_search(&chord).unwrap();
            diagonals.remove(idx);
            eps.push(1);
        } else {
            eps.push(0);
        }

        let cut = cut_labels(&poly, pj, s);
        if diagonals
            .iter()
            .any(|&(u, w)| cut.contains(&u) || cut.contains(&w))
        {
            return Err(Error::Internal(format!(
                "truncated vertices {cut:?} still meet a diagonal"
            )));
        }
        let in_base = cut.iter().filter(|v| base.binary_search(v).is_ok()).count();
        if hit {
            if in_base > 0 {
                return Err(Error::Internal("base region would be cut off".into()));
            }
        } else if in_base == cut.len() {
            // the base owns the whole truncated arc: contract it
            base.retain(|v| !cut.contains(v));
        } else if in_base > 0 {
            return Err(Error::Internal("base region partially truncated".into()));
        }
        poly.retain(|v| !cut.contains(v));

        // threading check: recomputing the beginnings on the truncated
        // polygon must give the previous labels minus the consumed one
        #[cfg(debug_assertions)]
        {
            let mut expected = begin_labels.clone();
            if hit {
                let idx = expected.binary_search(&va).unwrap();
                expected.remove(idx);
            }
            let recomputed = beginning_labels(&poly, &diagonals, &base)?;
            debug_assert_eq!(recomputed, expected, "beginnings drifted after truncation");
        }
    }

    debug_assert_eq!(eps.len(), (n - 1) as usize);
    debug_assert_eq!(eps.iter().filter(|&&b| b == 1).count(), a.len());
    Ok(PsiCode { a, eps })
}

fn check_base_is_whole(poly: &[u32], base: &[u32]) -> Result<(), Error> {
    if poly != base {
        return Err(Error::Internal(
            "empty dissection whose base is not the whole polygon".into(),
        ));
    }
    Ok(())
}

/// Decode a code pair back to its pointed dissection. Total on the full
/// code set for (s, n).
pub fn psi_decode(s: u32, n: u32, code: &PsiCode) -> Result<PointedDissection, Error> {
    code.validate_for(s, n)?;
    let poly: Vec<u32> = (1..=s * n + 2).collect();
    let (diagonals, base) = decode_level(s, poly, code.a.clone(), &code.eps)?;
    let d = Dissection::new(s, n, diagonals)?;
    PointedDissection::new(d, Region::new(base))
        .map_err(|e| Error::Internal(format!("decode produced an invalid dissection: {e}")))
}

fn decode_level(
    s: u32,
    poly: Vec<u32>,
    a: Vec<u32>,
    eps: &[u8],
) -> Result<(Vec<(u32, u32)>, Vec<u32>), Error> {
    if a.is_empty() {
        debug_assert!(eps.iter().all(|&b| b == 0));
        return Ok((Vec::new(), poly));
    }
    let m_cur = poly.len() as u32;
    let positions: Vec<u32> = a
        .iter()
        .map(|&label| {
            poly.binary_search(&label)
                .map(|idx| idx as u32 + 1)
                .map_err(|_| Error::Internal(format!("code entry {label} left the polygon")))
        })
        .collect::<Result<_, _>>()?;
    let j = first_big_gap(&positions, m_cur, s + 1)
        .ok_or_else(|| Error::Internal("no pigeonhole gap found during decode".into()))?;
    let pj = positions[j];
    let c_pos = cyclic_pos(pj, s + 1, m_cur);
    let va = poly[(pj - 1) as usize];
    let vc = poly[(c_pos - 1) as usize];

    let (bit, rest) = eps
        .split_first()
        .ok_or_else(|| Error::Internal("ran out of bits during decode".into()))?;
    let mut a_next = a;
    if *bit == 1 {
        a_next.remove(j);
    }
    let cut = cut_labels(&poly, pj, s);
    let mut poly_next = poly;
    poly_next.retain(|v| !cut.contains(v));

    let (mut diagonals, mut base) = decode_level(s, poly_next, a_next, rest)?;
    if *bit == 1 {
        diagonals.push(if va <= vc { (va, vc) } else { (vc, va) });
    } else if base.binary_search(&va).is_ok() && base.binary_search(&vc).is_ok() {
        // the chord bounds the base region, so the truncated arc rejoins it
        base.extend(cut);
        base.sort_unstable();
    }
    Ok((diagonals, base))
}

/// All codes for (s, n, i): non-decreasing sequences of length i over
/// 1..=sn+2 crossed with the (n-1)-bitstrings having i ones.
pub fn enumerate_codes(s: u32, n: u32, i: u32) -> Result<Vec<PsiCode>, Error> {
    domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
    domain(i <= n - 1, "require i <= n - 1")?;
    let m = s * n + 2;
    let mut sequences = Vec::new();
    let mut current = Vec::with_capacity(i as usize);
    gen_non_decreasing(m, i as usize, 1, &mut current, &mut sequences);
    let mut bitstrings = Vec::new();
    let mut bits = vec![0u8; (n - 1) as usize];
    gen_bitstrings(&mut bits, 0, i as usize, &mut bitstrings);
    let mut out = Vec::with_capacity(sequences.len() * bitstrings.len());
    for a in &sequences {
        for eps in &bitstrings {
            out.push(PsiCode {
                a: a.clone(),
                eps: eps.clone(),
            });
        }
    }
    Ok(out)
}

fn gen_non_decreasing(
    m: u32,
    remaining: usize,
    min: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for v in min..=m {
        current.push(v);
        gen_non_decreasing(m, remaining - 1, v, current, out);
        current.pop();
    }
}

fn gen_bitstrings(bits: &mut Vec<u8>, from: usize, ones: usize, out: &mut Vec<Vec<u8>>) {
    if ones == 0 {
        out.push(bits.clone());
        return;
    }
    if bits.len() - from < ones {
        return;
    }
    for pos in from..bits.len() {
        bits[pos] = 1;
        gen_bitstrings(bits, pos + 1, ones - 1, out);
        bits[pos] = 0;
    }
}
