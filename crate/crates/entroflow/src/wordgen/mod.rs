//! Construction of the two symbolic sequences.
//!
//! The staged words live over the alphabet {0, 1, α}: α is a placeholder
//! later resolved to 0 or 1. Stage words obey the recursion
//! `x_{n} = x_{n-1} ~x_{n-1} x_{n-1}` where `~w` replaces one α of `w` by 1
//! so that a run of `2n-1` ones appears. The corrected one-sided sequence
//! fills placeholder slots so that, per stage `n`, all `2^{p_n}` fillings of
//! the stage word occur as disjoint aligned blocks; every leftover α
//! becomes 1. The two-sided sequence mirrors the corrected prefix around a
//! forced 0 at the origin.
//!
//! The second construction (the zero-dominated word) lives in [`dag`] as a
//! concatenation DAG with big-integer lengths.

pub mod dag;
pub mod format;

use std::fmt;

use crate::error::{Error, Result};

/// Construction cap for stage words (lengths grow by a factor of 3).
pub const STAGE_CAP: u32 = 16;

/// Correction cap: stage 5 would already demand 2^41 disjoint occurrences.
pub const CORRECTION_STAGE_CAP: u32 = 4;

/// Hard cap on the materialized buffer while searching for correction slots.
const BUFFER_CAP: usize = 48_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageSym {
    Zero,
    One,
    Alpha,
}

impl fmt::Display for StageSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            StageSym::Zero => '0',
            StageSym::One => '1',
            StageSym::Alpha => 'α',
        };
        write!(f, "{c}")
    }
}

/// A stage word: `2·3^(n-1)` symbols over {0, 1, α}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageWord {
    stage: u32,
    symbols: Vec<StageSym>,
}

impl StageWord {
    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn symbols(&self) -> &[StageSym] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alpha_count(&self) -> u64 {
        self.symbols
            .iter()
            .filter(|s| **s == StageSym::Alpha)
            .count() as u64
    }

    /// Longest run of consecutive 1 symbols (α does not count).
    pub fn max_one_run(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for s in &self.symbols {
            if *s == StageSym::One {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }

    pub fn contains_one_run(&self, len: usize) -> bool {
        self.max_one_run() >= len
    }
}

impl fmt::Display for StageWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `p_n = (3^(n-1) + 1) / 2`, the number of α symbols in the stage-n word.
pub fn pn(n: u32) -> u64 {
    assert!(n >= 1, "stage must be positive");
    (3u64.pow(n - 1) + 1) / 2
}

/// Replace the leftmost α whose promotion to 1 creates a run of
/// `2*stage - 1` ones. Returns the α index and the modified word.
fn tilde(symbols: &[StageSym], stage: u32) -> Option<(usize, Vec<StageSym>)> {
    let target = (2 * stage - 1) as usize;
    let n = symbols.len();
    // ones_left[i]: run of 1s ending just before i; ones_right[i]: starting just after i.
    let mut ones_left = vec![0usize; n];
    let mut run = 0;
    for i in 0..n {
        ones_left[i] = run;
        run = if symbols[i] == StageSym::One { run + 1 } else { 0 };
    }
    let mut ones_right = vec![0usize; n];
    run = 0;
    for i in (0..n).rev() {
        ones_right[i] = run;
        run = if symbols[i] == StageSym::One { run + 1 } else { 0 };
    }
    for i in 0..n {
        if symbols[i] == StageSym::Alpha && ones_left[i] + 1 + ones_right[i] >= target {
            let mut out = symbols.to_vec();
            out[i] = StageSym::One;
            return Some((i, out));
        }
    }
    None
}

/// Build the stage-n word together with its promoted variant.
pub fn build_ohno_stage(n: u32) -> Result<(StageWord, StageWord)> {
    if n == 0 {
        return Err(Error::Bounds {
            what: "stage must be >= 1".into(),
        });
    }
    if n > STAGE_CAP {
        return Err(Error::ResourceBound {
            what: "stage word construction".into(),
            requested: n.to_string(),
            feasible: STAGE_CAP.to_string(),
        });
    }
    let mut word = vec![StageSym::One, StageSym::Alpha];
    let mut stage = 1;
    while stage < n {
        let (_, t) = tilde(&word, stage).expect("a promotable α always exists");
        let mut next = Vec::with_capacity(word.len() * 3);
        next.extend_from_slice(&word);
        next.extend_from_slice(&t);
        next.extend_from_slice(&word);
        word = next;
        stage += 1;
    }
    let (_, promoted) = tilde(&word, stage).expect("a promotable α always exists");
    Ok((
        StageWord {
            stage: n,
            symbols: word,
        },
        StageWord {
            stage: n,
            symbols: promoted,
        },
    ))
}

/// One corrected occurrence: an aligned block start and the filling integer
/// whose big-endian bits were written into the block's α slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectedOccurrence {
    pub start: usize,
    pub filling: u64,
}

#[derive(Debug, Clone)]
pub struct StageCorrection {
    pub stage: u32,
    pub block_len: usize,
    pub occurrences: Vec<CorrectedOccurrence>,
}

/// The corrected one-sided sequence, materialized to a requested length.
#[derive(Debug, Clone)]
pub struct CorrectedPrefix {
    bits: Vec<u8>,
    corrections: Vec<StageCorrection>,
    max_stage: u32,
}

impl CorrectedPrefix {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn max_corrected_stage(&self) -> u32 {
        self.max_stage
    }

    pub fn corrections(&self) -> &[StageCorrection] {
        &self.corrections
    }

    pub fn stage_correction(&self, n: u32) -> Result<&StageCorrection> {
        self.corrections
            .iter()
            .find(|c| c.stage == n)
            .ok_or(Error::StageNotCorrected { stage: n })
    }
}

/// Growing pristine buffer of stage-word symbols. The prefix is stable under
/// growth because `x_{m+1}` begins with `x_m`.
struct OhnoBuffer {
    stage: u32,
    symbols: Vec<StageSym>,
}

impl OhnoBuffer {
    fn new() -> Self {
        OhnoBuffer {
            stage: 1,
            symbols: vec![StageSym::One, StageSym::Alpha],
        }
    }

    /// Triple the buffer, returning the newly appended tail.
    fn grow(&mut self) -> Result<Vec<StageSym>> {
        if self.symbols.len() * 3 > BUFFER_CAP {
            return Err(Error::ResourceBound {
                what: "correction search buffer".into(),
                requested: (self.symbols.len() * 3).to_string(),
                feasible: BUFFER_CAP.to_string(),
            });
        }
        let (_, t) = tilde(&self.symbols, self.stage).expect("a promotable α always exists");
        let mut tail = t;
        tail.extend_from_slice(&self.symbols);
        self.symbols.extend_from_slice(&tail);
        self.stage += 1;
        Ok(tail)
    }
}

/// Write the big-endian bits of `filling` into the α slots of
/// `work[start..start+len]`, left to right.
fn fill_block(work: &mut [StageSym], start: usize, len: usize, p: u32, filling: u64) {
    let mut bit_idx = 0u32;
    for i in start..start + len {
        if work[i] == StageSym::Alpha {
            let bit = (filling >> (p - 1 - bit_idx)) & 1;
            work[i] = if bit == 1 { StageSym::One } else { StageSym::Zero };
            bit_idx += 1;
        }
    }
    debug_assert_eq!(bit_idx, p);
}

/// Build the corrected prefix of the requested length with corrections
/// applied for every stage up to `max_stage`.
pub fn build_corrected_prefix(target_length: usize, max_stage: u32) -> Result<CorrectedPrefix> {
    if target_length == 0 || max_stage == 0 {
        return Err(Error::Bounds {
            what: "target_length and max_stage must be positive".into(),
        });
    }
    if max_stage > CORRECTION_STAGE_CAP {
        return Err(Error::ResourceBound {
            what: format!("corrections need 2^p_n occurrences; stage {max_stage} is infeasible"),
            requested: max_stage.to_string(),
            feasible: CORRECTION_STAGE_CAP.to_string(),
        });
    }

    let mut buffer = OhnoBuffer::new();
    let mut work = buffer.symbols.clone();
    while work.len() < target_length {
        let tail = buffer.grow()?;
        work.extend_from_slice(&tail);
    }

    let mut corrections = Vec::new();
    let mut boundary = 0usize; // end of the previous stage's corrected region
    for n in 1..=max_stage {
        let block = 2 * 3usize.pow(n - 1);
        let p = pn(n) as u32;
        let need = 1u64 << p;
        let mut occurrences = Vec::with_capacity(need as usize);
        let mut filling = 0u64;
        let mut s = boundary.div_ceil(block) * block;
        let mut found = 0u64;
        let mut last_end = 0usize;
        while found < need {
            while s + block > work.len() {
                let tail = buffer.grow()?;
                work.extend_from_slice(&tail);
            }
            let alphas = work[s..s + block]
                .iter()
                .filter(|y| **y == StageSym::Alpha)
                .count() as u64;
            if alphas == pn(n) {
                found += 1;
                last_end = s + block;
                // Once a needed block overflows the requested length the
                // scan only continues to learn the feasible length.
                if s + block <= target_length {
                    fill_block(&mut work, s, block, p, filling);
                    occurrences.push(CorrectedOccurrence { start: s, filling });
                    filling += 1;
                }
            }
            s += block;
        }
        if (occurrences.len() as u64) < need {
            return Err(Error::ResourceBound {
                what: format!("stage {n} corrections do not fit in the requested prefix"),
                requested: target_length.to_string(),
                feasible: last_end.to_string(),
            });
        }
        boundary = occurrences.last().map(|o| o.start + block).unwrap_or(boundary);
        corrections.push(StageCorrection {
            stage: n,
            block_len: block,
            occurrences,
        });
    }

    let bits = work[..target_length]
        .iter()
        .map(|s| match s {
            StageSym::Zero => 0u8,
            // Every α not consumed by a correction becomes 1.
            StageSym::One | StageSym::Alpha => 1u8,
        })
        .collect();
    Ok(CorrectedPrefix {
        bits,
        corrections,
        max_stage,
    })
}

/// A window of the two-sided sequence: index 0 is the forced 0, negative
/// indices mirror positive ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSequenceWindow {
    radius: usize,
    values: Vec<u8>, // index k stored at position radius + k
}

impl BiSequenceWindow {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn get(&self, k: i64) -> Option<u8> {
        let r = self.radius as i64;
        if k < -r || k > r {
            return None;
        }
        Some(self.values[(k + r) as usize])
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }
}

pub fn xstar_window(prefix: &CorrectedPrefix, radius: usize) -> Result<BiSequenceWindow> {
    if radius == 0 || radius > prefix.len() {
        return Err(Error::Bounds {
            what: format!(
                "radius {radius} outside (0, {}] for this prefix",
                prefix.len()
            ),
        });
    }
    let mut values = Vec::with_capacity(2 * radius + 1);
    for k in -(radius as i64)..=(radius as i64) {
        let v = if k == 0 {
            0
        } else {
            prefix.bits()[(k.unsigned_abs() as usize) - 1]
        };
        values.push(v);
    }
    Ok(BiSequenceWindow { radius, values })
}

/// A materialized {0,1} word over a contiguous integer index range.
/// `origin` is the index of `bits[0]`; two-sided windows use a negative
/// origin.
#[derive(Debug, Clone)]
pub struct SampledWord {
    origin: i64,
    bits: Vec<u8>,
}

impl SampledWord {
    pub fn new(origin: i64, bits: Vec<u8>) -> Self {
        SampledWord { origin, bits }
    }

    pub fn from_prefix(prefix: &CorrectedPrefix) -> Self {
        SampledWord {
            origin: 0,
            bits: prefix.bits().to_vec(),
        }
    }

    pub fn from_window(window: &BiSequenceWindow) -> Self {
        SampledWord {
            origin: -(window.radius() as i64),
            bits: window.values().to_vec(),
        }
    }

    /// Two-sided view of the corrected prefix under the mirror rule.
    pub fn xstar(prefix: &CorrectedPrefix, radius: usize) -> Result<Self> {
        Ok(Self::from_window(&xstar_window(prefix, radius)?))
    }

    pub fn get(&self, k: i64) -> Option<u8> {
        if k < self.origin {
            return None;
        }
        let idx = (k - self.origin) as usize;
        self.bits.get(idx).copied()
    }

    pub fn lo(&self) -> i64 {
        self.origin
    }

    /// One past the last valid index.
    pub fn hi(&self) -> i64 {
        self.origin + self.bits.len() as i64
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_string(w: &StageWord) -> String {
        w.to_string()
    }

    #[test]
    fn stage_one() {
        let (x, xt) = build_ohno_stage(1).unwrap();
        assert_eq!(word_string(&x), "1α");
        assert_eq!(word_string(&xt), "11");
    }

    #[test]
    fn stage_two_matches_worked_example() {
        let (x, xt) = build_ohno_stage(2).unwrap();
        assert_eq!(word_string(&x), "1α111α");
        assert_eq!(word_string(&xt), "11111α");
        assert!(xt.contains_one_run(3));
    }

    #[test]
    fn stage_three_by_hand() {
        let (x, _) = build_ohno_stage(3).unwrap();
        assert_eq!(word_string(&x), "1α111α11111α1α111α");
        assert_eq!(x.len(), 18);
        assert_eq!(x.alpha_count(), 5);
        assert_eq!(pn(3), 5);
    }

    #[test]
    fn stage_laws_hold() {
        for n in 1..=10 {
            let (x, xt) = build_ohno_stage(n).unwrap();
            assert_eq!(x.len(), 2 * 3usize.pow(n - 1));
            assert_eq!(x.alpha_count(), pn(n));
            assert!(xt.contains_one_run(2 * n as usize - 1));
            assert_eq!(x.alpha_count(), xt.alpha_count() + 1);
        }
    }

    #[test]
    fn pn_values() {
        assert_eq!(pn(1), 1);
        assert_eq!(pn(2), 2);
        assert_eq!(pn(5), 41);
    }

    #[test]
    fn stage_cap_is_enforced() {
        assert!(matches!(
            build_ohno_stage(STAGE_CAP + 1),
            Err(Error::ResourceBound { .. })
        ));
    }

    #[test]
    fn corrected_prefix_starts_as_expected() {
        // First structural block filled with 0, second with 1; middle block
        // is the promoted variant "11".
        let p = build_corrected_prefix(6, 1).unwrap();
        assert_eq!(p.bits(), &[1, 0, 1, 1, 1, 1]);
        let c = p.stage_correction(1).unwrap();
        assert_eq!(c.occurrences.len(), 2);
        assert_eq!(c.occurrences[0], CorrectedOccurrence { start: 0, filling: 0 });
        assert_eq!(c.occurrences[1], CorrectedOccurrence { start: 4, filling: 1 });
    }

    #[test]
    fn corrected_prefix_stage2_has_four_variants() {
        let p = build_corrected_prefix(10_000, 2).unwrap();
        let c = p.stage_correction(2).unwrap();
        assert_eq!(c.occurrences.len(), 4);
        let mut variants = std::collections::BTreeSet::new();
        for occ in &c.occurrences {
            variants.insert(p.bits()[occ.start..occ.start + c.block_len].to_vec());
        }
        assert_eq!(variants.len(), 4);
        // Occurrences sit strictly right of the stage-1 region and are aligned.
        let s1_end = {
            let c1 = p.stage_correction(1).unwrap();
            c1.occurrences.last().unwrap().start + c1.block_len
        };
        for occ in &c.occurrences {
            assert!(occ.start >= s1_end);
            assert_eq!(occ.start % c.block_len, 0);
        }
    }

    #[test]
    fn corrected_prefix_rejects_overdeep_stage() {
        assert!(matches!(
            build_corrected_prefix(1000, 5),
            Err(Error::ResourceBound { .. })
        ));
    }

    #[test]
    fn corrected_prefix_reports_feasible_length() {
        let err = build_corrected_prefix(40, 2).unwrap_err();
        match err {
            Error::ResourceBound { feasible, .. } => {
                let need: usize = feasible.parse().unwrap();
                assert!(need > 40);
                assert!(build_corrected_prefix(need, 2).is_ok());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn xstar_window_mirrors() {
        let p = build_corrected_prefix(6, 1).unwrap();
        let w = xstar_window(&p, 2).unwrap();
        assert_eq!(w.values(), &[0, 1, 0, 1, 0]);
        assert_eq!(w.get(0), Some(0));
        assert_eq!(w.get(-1), w.get(1));
        let w1 = xstar_window(&p, 1).unwrap();
        assert_eq!(w1.values(), &[1, 0, 1]);
        assert!(xstar_window(&p, 7).is_err());
    }

    #[test]
    fn sampled_word_bounds() {
        let w = SampledWord::new(-2, vec![1, 0, 1, 1, 0]);
        assert_eq!(w.get(-2), Some(1));
        assert_eq!(w.get(2), Some(0));
        assert_eq!(w.get(3), None);
        assert_eq!(w.get(-3), None);
    }
}
