//! Self-verification sweep: every counting formula against its independent
//! enumeration oracle, every codec against exhaustive round trips, and the
//! arithmetic identities behind the closed forms.
//!
//! Enumeration-backed families run within the caller's (max_s, max_n)
//! bounds; the pure-arithmetic families always run at s <= 6, n <= 30.

use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::counting::{a_count, d_count, fuss_count, p_count, q_count};
use crate::dissection::{enumerate_dissections, enumerate_pointed};
use crate::pairings::{enumerate_pairings, phi_forward, phi_inverse};
use crate::psi::{enumerate_codes, psi_decode, psi_encode};
use crate::spiders::{
    completable, completable_brute, count_partials, enumerate_annular, enumerate_disc,
    enumerate_partials, first_legs, legs_decode,
};

/// One executed check: a family name, the parameter point, what was
/// expected (a count or "identity"), what was observed, and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub family: &'static str,
    pub params: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub max_s: u32,
    pub max_n: u32,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn family_count(&self) -> usize {
        let mut names: Vec<&str> = self.checks.iter().map(|c| c.family).collect();
        names.sort_unstable();
        names.dedup();
        names.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {} {}: expected {}, observed {} ({} ms)\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.family,
                c.params,
                c.expected,
                c.observed,
                c.millis
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "overall: {} ({} checks, {} families, {} failed)\n",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.family_count(),
            failed
        ));
        out
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn run(
        &mut self,
        family: &'static str,
        params: String,
        body: impl FnOnce() -> (String, String, bool),
    ) {
        let start = Instant::now();
        let (expected, observed, pass) = body();
        self.checks.push(Check {
            family,
            params,
            expected,
            observed,
            pass,
            millis: start.elapsed().as_millis(),
        });
    }

    /// Count comparison against a formula value.
    fn count(
        &mut self,
        family: &'static str,
        params: String,
        expected: Result<BigUint, crate::Error>,
        observed: impl FnOnce() -> Result<BigUint, crate::Error>,
    ) {
        self.run(family, params, || match (expected, observed()) {
            (Ok(e), Ok(o)) => {
                let pass = e == o;
                (e.to_string(), o.to_string(), pass)
            }
            (e, o) => (format!("{e:?}"), format!("{o:?}"), false),
        });
    }

    /// Identity check over a number of items; observed reports failures.
    fn identity(
        &mut self,
        family: &'static str,
        params: String,
        body: impl FnOnce() -> Result<(usize, usize), crate::Error>,
    ) {
        self.run(family, params, || match body() {
            Ok((total, failed)) => (
                "identity".to_string(),
                format!("{}/{} round trips ok", total - failed, total),
                failed == 0,
            ),
            Err(e) => ("identity".to_string(), format!("error: {e}"), false),
        });
    }
}

/// Runs the full check suite within the given bounds.
pub fn run_verify(max_s: u32, max_n: u32) -> VerifyReport {
    let mut rec = Recorder { checks: Vec::new() };

    dissection_families(&mut rec, max_s, max_n);
    psi_families(&mut rec, max_s, max_n);
    spider_families(&mut rec, max_s, max_n);
    pairing_families(&mut rec, max_s, max_n);
    partial_families(&mut rec, max_s, max_n);
    arithmetic_families(&mut rec, max_s, max_n);

    VerifyReport {
        max_s,
        max_n,
        checks: rec.checks,
    }
}

fn dissection_families(rec: &mut Recorder, max_s: u32, max_n: u32) {
    for s in 1..=max_s {
        for n in 1..=max_n {
            for i in 0..n {
                rec.count(
                    "dissection-count-q",
                    format!("s={s} n={n} i={i}"),
                    q_count(s.into(), n.into(), i.into()),
                    || Ok(BigUint::from(enumerate_dissections(s, n, i)?.len())),
                );
                rec.count(
                    "pointed-count-p",
                    format!("s={s} n={n} i={i}"),
                    p_count(s.into(), n.into(), i.into()),
                    || Ok(BigUint::from(enumerate_pointed(s, n, i)?.len())),
                );
            }
        }
    }
}

fn psi_families(rec: &mut Recorder, max_s: u32, max_n: u32) {
    for s in 1..=max_s {
        for n in 1..=max_n {
            for i in 0..n {
                rec.identity(
                    "psi-roundtrip-pointed",
                    format!("s={s} n={n} i={i}"),
                    || {
                        let items = enumerate_pointed(s, n, i)?;
                        let mut failed = 0;
                        for pd in &items {
                            let code = psi_encode(pd)?;
                            if &psi_decode(s, n, &code)? != pd {
                                failed += 1;
                            }
                        }
                        Ok((items.len(), failed))
                    },
                );
                rec.identity(
                    "psi-roundtrip-code",
                    format!("s={s} n={n} i={i}"),
                    || {
                        let codes = enumerate_codes(s, n, i)?;
                        let mut failed = 0;
                        for code in &codes {
                            // decode is total on the code set
                            let pd = psi_decode(s, n, code)?;
                            let ok = pd.dissection().diagonals().len() == i as usize
                                && &psi_encode(&pd)? == code;
                            if !ok {
                                failed += 1;
                            }
                        }
                        Ok((codes.len(), failed))
                    },
                );
            }
        }
    }
}

fn spider_families(rec: &mut Recorder, max_s: u32, max_n: u32) {
    for s in 2..=max_s.max(2) {
        for n in 1..=max_n {
            rec.count(
                "spider-count-f",
                format!("s={s} n={n}"),
                fuss_count(s.into(), n.into()),
                || Ok(BigUint::from(enumerate_disc(s, n)?.len())),
            );
            rec.count(
                "annular-count",
                format!("s={s} n={n}"),
                Ok(crate::counting::binomial((s * n).into(), n as i64)),
                || Ok(BigUint::from(enumerate_annular(s, n)?.len())),
            );
            rec.identity("legs-roundtrip", format!("s={s} n={n}"), || {
                let mut total = 0;
                let mut failed = 0;
                for ac in enumerate_annular(s, n)? {
                    let legs = first_legs(&ac)?;
                    total += 1;
                    if legs_decode(s, n, &legs)? != ac {
                        failed += 1;
                    }
                }
                let mut legs = Vec::new();
                all_increasing(s * n, n as usize, 1, &mut legs, &mut |seq: &[u32]| {
                    total += 1;
                    match legs_decode(s, n, seq) {
                        Ok(ac) => {
                            if first_legs(&ac).map(|l| l != seq).unwrap_or(true) {
                                failed += 1;
                            }
                        }
                        Err(_) => failed += 1,
                    }
                });
                Ok((total, failed))
            });
            rec.identity("forget-hole-fibers", format!("s={s} n={n}"), || {
                let mut fibers: std::collections::BTreeMap<_, usize> = Default::default();
                for ac in enumerate_annular(s, n)? {
                    *fibers.entry(ac.forget_hole()).or_default() += 1;
                }
                let expected_fiber = ((s - 1) * n + 1) as usize;
                let total = fibers.len();
                let failed = fibers.values().filter(|&&v| v != expected_fiber).count();
                // the projection must also hit every disc collection
                if total != enumerate_disc(s, n)?.len() {
                    return Ok((total, total));
                }
                Ok((total, failed))
            });
        }
    }
}

fn all_increasing(
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
        all_increasing(max, len, v + 1, current, f);
        current.pop();
    }
}

fn pairing_families(rec: &mut Recorder, max_s: u32, max_n: u32) {
    // Catalan reference values for the s = 2 specialization
    const CATALAN: [u64; 9] = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
    for s in 2..=max_s.max(2) {
        for n in 1..=max_n {
            rec.count(
                "pairing-count-fprime",
                format!("s={s} n={n}"),
                fuss_count(s.into(), n.into()),
                || Ok(BigUint::from(enumerate_pairings(s, n)?.len())),
            );
            rec.identity("phi-roundtrip", format!("s={s} n={n}"), || {
                let pairings = enumerate_pairings(s, n)?;
                let mut total = 0;
                let mut failed = 0;
                for p in &pairings {
                    total += 1;
                    let c = phi_forward(p)?;
                    if c.validate().is_err() || &phi_inverse(&c)? != p {
                        failed += 1;
                    }
                }
                for c in enumerate_disc(s, n)? {
                    total += 1;
                    let p = phi_inverse(&c)?;
                    if p.validate().is_err() || phi_forward(&p)? != c {
                        failed += 1;
                    }
                }
                Ok((total, failed))
            });
        }
    }
    for n in 1..=max_n.min(8) {
        rec.count(
            "catalan-specialization",
            format!("s=2 n={n}"),
            Ok(BigUint::from(CATALAN[n as usize])),
            || Ok(BigUint::from(enumerate_pairings(2, n)?.len())),
        );
    }
}

fn partial_families(rec: &mut Recorder, max_s: u32, max_n: u32) {
    for s in 2..=max_s.max(2) {
        for n in 1..=max_n {
            for i in 0..=n {
                rec.count(
                    "partial-count-d",
                    format!("s={s} n={n} i={i}"),
                    d_count(s.into(), n.into(), i.into()),
                    || count_partials(s, n, i, false),
                );
                rec.count(
                    "partial-count-a",
                    format!("s={s} n={n} i={i}"),
                    a_count(s.into(), n.into(), i.into()),
                    || count_partials(s, n, i, true),
                );
                rec.identity(
                    "completable-criterion",
                    format!("s={s} n={n} i={i}"),
                    || {
                        let mut total = 0;
                        let mut failed = 0;
                        for p in enumerate_partials(s, n, i)? {
                            total += 1;
                            if completable(&p)? != completable_brute(&p)? {
                                failed += 1;
                            }
                        }
                        Ok((total, failed))
                    },
                );
            }
        }
    }
}

/// True iff `divisor` divides `numerator`.
pub fn divides(numerator: &BigUint, divisor: u64) -> bool {
    use num_integer::Integer;
    use num_traits::Zero;
    numerator.mod_floor(&BigUint::from(divisor)).is_zero()
}

fn arithmetic_families(rec: &mut Recorder, max_s: u32, max_n: u32) {
    // divisibility is checked by remainder, not by the aborting division,
    // so a non-exact point is reported instead of killing the sweep
    for s in 1..=max_s as u64 {
        rec.identity("divisibility-q", format!("s={s} n<={max_n}"), || {
            let mut total = 0;
            let mut failed = 0;
            for n in 1..=max_n as u64 {
                for i in 0..n {
                    total += 1;
                    if !divides(&p_count(s, n, i)?, i + 1) {
                        failed += 1;
                    }
                }
            }
            Ok((total, failed))
        });
        rec.identity("divisibility-d", format!("s={s} n<={max_n}"), || {
            let mut total = 0;
            let mut failed = 0;
            for n in 1..=max_n as u64 {
                for i in 0..=n {
                    total += 1;
                    if !divides(&a_count(s, n, i)?, i * (s - 1) + 1) {
                        failed += 1;
                    }
                }
            }
            Ok((total, failed))
        });
    }
    for s in 2..=max_s.max(2) as u64 {
        rec.identity("fuss-identity", format!("s={s} n<={max_n}"), || {
            let mut total = 0;
            let mut failed = 0;
            for n in 1..=max_n as u64 {
                total += 1;
                let f = fuss_count(s, n)?;
                if d_count(s, n, n)? != f || q_count(s - 1, n, n - 1)? != f {
                    failed += 1;
                }
            }
            Ok((total, failed))
        });
    }
}
