//! Polygon dissections: data model, validation, face computation, the
//! base-region orientation rule, and independent brute-force enumeration.
//!
//! Vertices of the (sn+2)-gon are 1-indexed anti-clockwise. All face and
//! arc computations are purely combinatorial (interval recursion over the
//! non-crossing chord structure); there is no floating-point geometry here.

use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error as ThisError;

use crate::error::domain;
use crate::Error;

/// First violated invariant of a candidate dissection, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum DissectionViolation {
    #[error("diagonal ({0}, {1}) has an endpoint outside 1..=polygon size")]
    OutOfRange(u32, u32),
    #[error("diagonal ({0}, {1}) joins adjacent or equal vertices")]
    AdjacentEndpoints(u32, u32),
    #[error("diagonal ({0}, {1}) appears more than once")]
    DuplicateDiagonal(u32, u32),
    #[error("diagonals ({0}, {1}) and ({2}, {3}) cross")]
    Crossing(u32, u32, u32, u32),
    #[error("face {0:?} has {size} vertices, not congruent to 2 mod s", size = .0.len())]
    FaceSize(Vec<u32>),
    #[error("base {0:?} is not a face of the dissection")]
    BaseNotAFace(Vec<u32>),
}

/// One face of a dissection, stored canonically: vertex labels ascending,
/// which is the anti-clockwise cycle rotated to start at its smallest
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Region(Vec<u32>);

impl Region {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Region(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Region::new(Vec::<u32>::deserialize(deserializer)?))
    }
}

fn norm_pair(u: u32, w: u32) -> (u32, u32) {
    if u <= w {
        (u, w)
    } else {
        (w, u)
    }
}

fn crosses(a: (u32, u32), b: (u32, u32)) -> bool {
    let ((a1, a2), (b1, b2)) = (a, b);
    (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2)
}

/// A dissection of the convex (sn+2)-gon by non-crossing diagonals whose
/// faces all have vertex count ≡ 2 (mod s).
///
/// Construction only normalizes (diagonals stored as sorted `(lo, hi)`
/// pairs); use [`Dissection::validate`] to obtain a violation report, as
/// candidates may be arbitrary diagonal sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dissection {
    s: u32,
    n: u32,
    diagonals: Vec<(u32, u32)>,
}

impl Dissection {
    pub fn new(
        s: u32,
        n: u32,
        diagonals: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, Error> {
        domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
        let mut diagonals: Vec<(u32, u32)> =
            diagonals.into_iter().map(|(u, w)| norm_pair(u, w)).collect();
        diagonals.sort_unstable();
        Ok(Dissection { s, n, diagonals })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertex_count(&self) -> u32 {
        self.s * self.n + 2
    }

    /// Diagonals as sorted `(lo, hi)` pairs.
    pub fn diagonals(&self) -> &[(u32, u32)] {
        &self.diagonals
    }

    /// Range, adjacency, duplicate and crossing checks — everything except
    /// face sizes.
    fn structural(&self) -> Result<(), DissectionViolation> {
        let m = self.vertex_count();
        for &(u, w) in &self.diagonals {
            if u < 1 || w > m {
                return Err(DissectionViolation::OutOfRange(u, w));
            }
            if u == w || w - u == 1 || (u == 1 && w == m) {
                return Err(DissectionViolation::AdjacentEndpoints(u, w));
            }
        }
        for t in 1..self.diagonals.len() {
            if self.diagonals[t] == self.diagonals[t - 1] {
                let (u, w) = self.diagonals[t];
                return Err(DissectionViolation::DuplicateDiagonal(u, w));
            }
        }
        for (x, &a) in self.diagonals.iter().enumerate() {
            for &b in &self.diagonals[x + 1..] {
                if crosses(a, b) {
                    return Err(DissectionViolation::Crossing(a.0, a.1, b.0, b.1));
                }
            }
        }
        Ok(())
    }

    /// Reports the first violated invariant, or `Ok(())` for a valid
    /// dissection.
    pub fn validate(&self) -> Result<(), DissectionViolation> {
        self.structural()?;
        let rem = 2 % self.s;
        for face in self.faces_unchecked() {
            if face.len() as u32 % self.s != rem {
                return Err(DissectionViolation::FaceSize(face.0));
            }
        }
        Ok(())
    }

    /// All faces in canonical order. Requires the non-crossing structure to
    /// be sound; face sizes are not checked here.
    pub fn faces(&self) -> Result<Vec<Region>, Error> {
        self.structural()?;
        Ok(self.faces_unchecked())
    }

    fn faces_unchecked(&self) -> Vec<Region> {
        let poly: Vec<u32> = (1..=self.vertex_count()).collect();
        let mut out = Vec::with_capacity(self.diagonals.len() + 1);
        split_faces(poly, self.diagonals.clone(), &mut out);
        out.sort();
        out
    }
}

/// Interval recursion: each chord splits the current sub-polygon in two and
/// every remaining chord lands entirely on one side.
fn split_faces(poly: Vec<u32>, mut chords: Vec<(u32, u32)>, out: &mut Vec<Region>) {
    let Some((u, w)) = chords.pop() else {
        out.push(Region::new(poly));
        return;
    };
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for c in chords {
        if u <= c.0 && c.1 <= w {
            inside.push(c);
        } else {
            outside.push(c);
        }
    }
    let (mut poly_in, mut poly_out) = (Vec::new(), Vec::new());
    for v in poly {
        if u <= v && v <= w {
            poly_in.push(v);
        }
        if v <= u || v >= w {
            poly_out.push(v);
        }
    }
    split_faces(poly_in, inside, out);
    split_faces(poly_out, outside, out);
}

impl<'de> Deserialize<'de> for Dissection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            s: u32,
            n: u32,
            diagonals: Vec<(u32, u32)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Dissection::new(raw.s, raw.n, raw.diagonals).map_err(D::Error::custom)
    }
}

/// A dissection with a distinguished base region. Always valid by
/// construction: the base must be one of the faces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedDissection {
    dissection: Dissection,
    base: Region,
}

impl PointedDissection {
    pub fn new(dissection: Dissection, base: Region) -> Result<Self, Error> {
        dissection.validate().map_err(Error::InvalidDissection)?;
        if !dissection.faces_unchecked().contains(&base) {
            return Err(DissectionViolation::BaseNotAFace(base.0).into());
        }
        Ok(PointedDissection { dissection, base })
    }

    /// Skips revalidation; caller guarantees `base` is a face of a valid
    /// dissection.
    pub(crate) fn from_parts_unchecked(dissection: Dissection, base: Region) -> Self {
        PointedDissection { dissection, base }
    }

    pub fn dissection(&self) -> &Dissection {
        &self.dissection
    }

    pub fn base(&self) -> &Region {
        &self.base
    }

    /// The endpoint of `diagonal` from which travel keeps the base region on
    /// the left, i.e. the endpoint x such that every base vertex lies on the
    /// closed anti-clockwise arc from the other endpoint to x.
    pub fn diagonal_beginning(&self, diagonal: (u32, u32)) -> Result<u32, Error> {
        let (u, w) = norm_pair(diagonal.0, diagonal.1);
        if self.dissection.diagonals.binary_search(&(u, w)).is_err() {
            return Err(Error::MissingDiagonal(u, w));
        }
        let m = self.dissection.vertex_count();
        beginning_on_cycle(m, self.base.vertices(), u, w)
    }

    /// Beginnings of all diagonals, as a non-decreasing vertex list.
    pub fn beginnings_sequence(&self) -> Result<Vec<u32>, Error> {
        let mut seq = Vec::with_capacity(self.dissection.diagonals.len());
        for &(u, w) in &self.dissection.diagonals {
            let m = self.dissection.vertex_count();
            seq.push(beginning_on_cycle(m, self.base.vertices(), u, w)?);
        }
        seq.sort_unstable();
        Ok(seq)
    }
}

/// True iff position x lies on the closed anti-clockwise arc from..=to of a
/// cycle with m positions.
pub(crate) fn arc_contains(m: u32, from: u32, to: u32, x: u32) -> bool {
    debug_assert!(x >= 1 && x <= m);
    if from <= to {
        from <= x && x <= to
    } else {
        x >= from || x <= to
    }
}

/// Beginning of the chord {u, w} on an m-cycle with the given base
/// positions: exactly one endpoint has the whole base on the closed arc
/// from the other endpoint to it.
pub(crate) fn beginning_on_cycle(
    m: u32,
    base: &[u32],
    u: u32,
    w: u32,
) -> Result<u32, Error> {
    let to_u = base.iter().all(|&b| arc_contains(m, w, u, b));
    let to_w = base.iter().all(|&b| arc_contains(m, u, w, b));
    match (to_u, to_w) {
        (true, false) => Ok(u),
        (false, true) => Ok(w),
        _ => Err(Error::Internal(format!(
            "chord ({u}, {w}) has no unique beginning for base {base:?}"
        ))),
    }
}

impl Serialize for PointedDissection {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PointedDissection", 4)?;
        st.serialize_field("s", &self.dissection.s)?;
        st.serialize_field("n", &self.dissection.n)?;
        st.serialize_field("diagonals", &self.dissection.diagonals)?;
        st.serialize_field("base", &self.base)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PointedDissection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            s: u32,
            n: u32,
            diagonals: Vec<(u32, u32)>,
            base: Region,
        }
        let raw = Raw::deserialize(deserializer)?;
        let d = Dissection::new(raw.s, raw.n, raw.diagonals).map_err(D::Error::custom)?;
        PointedDissection::new(d, raw.base).map_err(D::Error::custom)
    }
}

/// Every element of Q_i(s, n) exactly once, lexicographically by sorted
/// diagonal list.
///
/// Independent of the codec: candidate diagonals (restricted to spans that
/// leave both boundary arcs ≡ 2 mod s, which any valid face structure
/// forces) are chosen by non-crossing backtracking and the resulting sets
/// filtered by the face-size rule.
pub fn enumerate_dissections(s: u32, n: u32, i: u32) -> Result<Vec<Dissection>, Error> {
    domain(s >= 1 && n >= 1, "require s >= 1 and n >= 1")?;
    domain(i <= n - 1, "require i <= n - 1")?;
    let m = s * n + 2;
    let mut candidates = Vec::new();
    for u in 1..=m {
        for w in (u + 2)..=m {
            if u == 1 && w == m {
                continue;
            }
            if (w - u - 1) % s == 0 {
                candidates.push((u, w));
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(i as usize);
    backtrack(s, n, &candidates, 0, i as usize, &mut chosen, &mut out);
    Ok(out)
}

fn backtrack(
    s: u32,
    n: u32,
    candidates: &[(u32, u32)],
    start: usize,
    need: usize,
    chosen: &mut Vec<(u32, u32)>,
    out: &mut Vec<Dissection>,
) {
    if need == 0 {
        let d = Dissection::new(s, n, chosen.iter().copied()).expect("params already checked");
        if d.validate().is_ok() {
            out.push(d);
        }
        return;
    }
    if candidates.len() - start < need {
        return;
    }
    for idx in start..candidates.len() {
        let c = candidates[idx];
        if chosen.iter().any(|&p| crosses(p, c)) {
            continue;
        }
        chosen.push(c);
        backtrack(s, n, candidates, idx + 1, need - 1, chosen, out);
        chosen.pop();
    }
}

/// Every dissection paired with each of its faces as base; total count is
/// p_count(s, n, i).
pub fn enumerate_pointed(s: u32, n: u32, i: u32) -> Result<Vec<PointedDissection>, Error> {
    let mut out = Vec::new();
    for d in enumerate_dissections(s, n, i)? {
        for face in d.faces_unchecked() {
            out.push(PointedDissection::from_parts_unchecked(d.clone(), face));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diss(s: u32, n: u32, diagonals: &[(u32, u32)]) -> Dissection {
        Dissection::new(s, n, diagonals.iter().copied()).unwrap()
    }

    #[test]
    fn validate_accepts_fan_triangulation() {
        assert_eq!(diss(1, 4, &[(1, 3), (1, 4), (1, 5)]).validate(), Ok(()));
    }

    #[test]
    fn validate_reports_crossing() {
        let d = diss(1, 4, &[(1, 4), (3, 6)]);
        assert_eq!(
            d.validate(),
            Err(DissectionViolation::Crossing(1, 4, 3, 6))
        );
    }

    #[test]
    fn validate_reports_face_size() {
        let d = diss(2, 2, &[(1, 3)]);
        assert_eq!(
            d.validate(),
            Err(DissectionViolation::FaceSize(vec![1, 2, 3]))
        );
    }

    #[test]
    fn validate_reports_bad_endpoints() {
        let m6 = diss(1, 4, &[(2, 3)]);
        assert_eq!(
            m6.validate(),
            Err(DissectionViolation::AdjacentEndpoints(2, 3))
        );
        let wrap = diss(1, 4, &[(1, 6)]);
        assert_eq!(
            wrap.validate(),
            Err(DissectionViolation::AdjacentEndpoints(1, 6))
        );
        let out = diss(1, 4, &[(2, 9)]);
        assert_eq!(out.validate(), Err(DissectionViolation::OutOfRange(2, 9)));
        let dup = diss(1, 4, &[(1, 4), (4, 1)]);
        assert_eq!(
            dup.validate(),
            Err(DissectionViolation::DuplicateDiagonal(1, 4))
        );
    }

    #[test]
    fn faces_of_hexagon() {
        assert_eq!(
            diss(1, 4, &[]).faces().unwrap(),
            vec![Region::new(vec![1, 2, 3, 4, 5, 6])]
        );
        assert_eq!(
            diss(1, 4, &[(1, 4)]).faces().unwrap(),
            vec![
                Region::new(vec![1, 2, 3, 4]),
                Region::new(vec![1, 4, 5, 6]),
            ]
        );
        assert_eq!(
            diss(1, 4, &[(1, 3), (1, 4)]).faces().unwrap(),
            vec![
                Region::new(vec![1, 2, 3]),
                Region::new(vec![1, 3, 4]),
                Region::new(vec![1, 4, 5, 6]),
            ]
        );
    }

    #[test]
    fn faces_count_and_edge_coverage() {
        for (s, n, i) in [(1, 4, 2), (2, 3, 2), (3, 2, 1)] {
            for d in enumerate_dissections(s, n, i).unwrap() {
                let faces = d.faces().unwrap();
                assert_eq!(faces.len(), d.diagonals().len() + 1);
                // every face size ≡ 2 mod s, and sizes sum to sn + 2(i+1)
                let total: usize = faces.iter().map(|f| f.len()).sum();
                assert_eq!(
                    total as u32,
                    s * n + 2 + 2 * d.diagonals().len() as u32
                );
            }
        }
    }

    #[test]
    fn beginning_follows_base_side() {
        let d = diss(1, 4, &[(1, 4)]);
        let faces = d.faces().unwrap();
        let pd_right =
            PointedDissection::new(d.clone(), Region::new(vec![1, 4, 5, 6])).unwrap();
        assert_eq!(pd_right.diagonal_beginning((1, 4)).unwrap(), 1);
        let pd_left = PointedDissection::new(d, Region::new(vec![1, 2, 3, 4])).unwrap();
        assert_eq!(pd_left.diagonal_beginning((4, 1)).unwrap(), 4);
        assert_eq!(faces.len(), 2);

        let d2 = diss(1, 4, &[(1, 3), (4, 6)]);
        let pd2 = PointedDissection::new(d2, Region::new(vec![1, 3, 4, 6])).unwrap();
        assert_eq!(pd2.diagonal_beginning((4, 6)).unwrap(), 4);
        assert_eq!(pd2.beginnings_sequence().unwrap(), vec![1, 4]);
    }

    #[test]
    fn beginnings_sequence_examples() {
        let whole = PointedDissection::new(
            diss(1, 4, &[]),
            Region::new(vec![1, 2, 3, 4, 5, 6]),
        )
        .unwrap();
        assert_eq!(whole.beginnings_sequence().unwrap(), Vec::<u32>::new());

        let one = PointedDissection::new(
            diss(1, 4, &[(1, 4)]),
            Region::new(vec![1, 4, 5, 6]),
        )
        .unwrap();
        assert_eq!(one.beginnings_sequence().unwrap(), vec![1]);
    }

    #[test]
    fn beginning_requires_membership() {
        let pd = PointedDissection::new(
            diss(1, 4, &[(1, 4)]),
            Region::new(vec![1, 4, 5, 6]),
        )
        .unwrap();
        assert_eq!(
            pd.diagonal_beginning((2, 5)),
            Err(Error::MissingDiagonal(2, 5))
        );
    }

    #[test]
    fn base_must_be_a_face() {
        let err = PointedDissection::new(
            diss(1, 4, &[(1, 4)]),
            Region::new(vec![2, 3, 4]),
        );
        assert!(matches!(
            err,
            Err(Error::InvalidDissection(DissectionViolation::BaseNotAFace(_)))
        ));
    }

    #[test]
    fn enumerate_matches_hand_counts() {
        assert_eq!(enumerate_dissections(1, 3, 2).unwrap().len(), 5);
        assert_eq!(enumerate_dissections(5, 4, 0).unwrap().len(), 1);
        let hex = enumerate_dissections(2, 2, 1).unwrap();
        let got: Vec<_> = hex.iter().map(|d| d.diagonals().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![(1, 4)], vec![(2, 5)], vec![(3, 6)]]
        );
    }

    #[test]
    fn enumerate_pointed_counts() {
        assert_eq!(enumerate_pointed(1, 2, 1).unwrap().len(), 4);
        assert_eq!(enumerate_pointed(4, 3, 0).unwrap().len(), 1);
        assert_eq!(enumerate_pointed(1, 4, 3).unwrap().len(), 56);
    }

    #[test]
    fn enumerate_rejects_bad_params() {
        assert!(matches!(
            enumerate_dissections(1, 3, 3),
            Err(Error::ParamDomain(_))
        ));
        assert!(matches!(
            enumerate_pointed(0, 3, 1),
            Err(Error::ParamDomain(_))
        ));
    }

    #[test]
    fn jsonl_round_trip_is_canonical() {
        let pd = PointedDissection::new(
            diss(1, 4, &[(4, 1)]),
            Region::new(vec![6, 5, 4, 1]),
        )
        .unwrap();
        let line = serde_json::to_string(&pd).unwrap();
        assert_eq!(
            line,
            r#"{"s":1,"n":4,"diagonals":[[1,4]],"base":[1,4,5,6]}"#
        );
        let back: PointedDissection = serde_json::from_str(&line).unwrap();
        assert_eq!(back, pd);

        let bad: Result<PointedDissection, _> =
            serde_json::from_str(r#"{"s":1,"n":4,"diagonals":[[1,4]],"base":[2,3,4]}"#);
        assert!(bad.is_err());
    }
}
