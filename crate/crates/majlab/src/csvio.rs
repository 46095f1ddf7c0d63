//! Trial-record CSV: fixed all-numeric schema, one row per trial, stable
//! to the byte for identical inputs. The header carries k implicitly
//! through the widths of the per-state column groups.

use anyhow::{bail, Context, Result};
use majlab_core::dynamics::TrialRecord;
use std::fmt::Write as _;
use std::path::Path;

/// Column header for a k-state experiment.
pub fn header(k: usize) -> String {
    let mut h = String::from("trial_id,seed,n,p,k,rounds_to_unanimity,winner,tie_r1,tie_r2,tie_r3");
    for group in ["n_init", "x_strong", "parts_r1", "parts_r2", "parts_r3"] {
        for i in 1..=k {
            let _ = write!(h, ",{group}_{i}");
        }
    }
    h
}

/// Renders all trial rows. Records must carry at least three rounds of
/// part sizes and tie counts (guaranteed by max_rounds >= 3).
pub fn render(n: usize, p: f64, k: usize, records: &[TrialRecord]) -> Result<String> {
    let mut out = header(k);
    out.push('\n');
    for (id, r) in records.iter().enumerate() {
        if r.part_sizes_by_round.len() < 3 || r.tie_count_by_round.len() < 3 {
            bail!("trial {id} carries fewer than three recorded rounds");
        }
        if r.initial_counts.len() != k || r.strong_counts_round1.len() != k {
            bail!("trial {id} disagrees with k = {k}");
        }
        let _ = write!(
            out,
            "{id},{},{n},{p},{k},{},{},{},{},{}",
            r.seed,
            r.rounds_to_unanimity,
            r.winner,
            r.tie_count_by_round[0],
            r.tie_count_by_round[1],
            r.tie_count_by_round[2],
        );
        let groups: [&[u64]; 5] = [
            &r.initial_counts,
            &r.strong_counts_round1,
            &r.part_sizes_by_round[0],
            &r.part_sizes_by_round[1],
            &r.part_sizes_by_round[2],
        ];
        for g in groups {
            for v in g {
                let _ = write!(out, ",{v}");
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_trials(path: &Path, n: usize, p: f64, k: usize, records: &[TrialRecord]) -> Result<()> {
    let text = render(n, p, k, records)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// A parsed trials file. Rounds beyond the third are not stored in the
/// file, so reconstructed records carry exactly three.
pub struct TrialsFile {
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub records: Vec<TrialRecord>,
}

pub fn read_trials(path: &Path) -> Result<TrialsFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let head = lines.next().context("empty trials file")?;
    // Recover k from the header width: 10 fixed columns + 5 groups of k.
    let cols = head.split(',').count();
    if cols < 15 || (cols - 10) % 5 != 0 {
        bail!("unrecognized trials header ({cols} columns)");
    }
    let k = (cols - 10) / 5;
    if head != header(k) {
        bail!("trials header does not match the k = {k} schema");
    }

    let mut n: Option<usize> = None;
    let mut p: Option<f64> = None;
    let mut records = Vec::new();
    for (rowno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            bail!("row {rowno}: expected {cols} fields, got {}", fields.len());
        }
        let ctx = |what: &str| format!("row {rowno}: bad {what}");
        let trial_id: usize = fields[0].parse().with_context(|| ctx("trial_id"))?;
        if trial_id != rowno {
            bail!("row {rowno}: trial_id {trial_id} out of order");
        }
        let seed: u64 = fields[1].parse().with_context(|| ctx("seed"))?;
        let row_n: usize = fields[2].parse().with_context(|| ctx("n"))?;
        let row_p: f64 = fields[3].parse().with_context(|| ctx("p"))?;
        let row_k: usize = fields[4].parse().with_context(|| ctx("k"))?;
        if row_k != k {
            bail!("row {rowno}: k = {row_k} disagrees with header k = {k}");
        }
        match (n, p) {
            (None, None) => {
                n = Some(row_n);
                p = Some(row_p);
            }
            (Some(n0), Some(p0)) if n0 == row_n && p0 == row_p => {}
            _ => bail!("row {rowno}: (n, p) changes mid-file"),
        }
        let rounds_to_unanimity: i32 =
            fields[5].parse().with_context(|| ctx("rounds_to_unanimity"))?;
        let winner: u8 = fields[6].parse().with_context(|| ctx("winner"))?;
        let tie: Vec<u64> = fields[7..10]
            .iter()
            .map(|f| f.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| ctx("tie counts"))?;
        let mut groups: Vec<Vec<u64>> = Vec::with_capacity(5);
        for gi in 0..5 {
            let start = 10 + gi * k;
            let g: Vec<u64> = fields[start..start + k]
                .iter()
                .map(|f| f.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .with_context(|| ctx("count group"))?;
            groups.push(g);
        }
        let parts_r3 = groups.pop().unwrap();
        let parts_r2 = groups.pop().unwrap();
        let parts_r1 = groups.pop().unwrap();
        let strong = groups.pop().unwrap();
        let initial = groups.pop().unwrap();
        if initial.iter().sum::<u64>() != row_n as u64 {
            bail!("row {rowno}: initial counts do not sum to n");
        }
        records.push(TrialRecord {
            seed,
            initial_counts: initial,
            part_sizes_by_round: vec![parts_r1, parts_r2, parts_r3],
            tie_count_by_round: tie,
            strong_counts_round1: strong,
            rounds_to_unanimity,
            winner,
        });
    }
    if records.is_empty() {
        bail!("trials file has no rows");
    }
    Ok(TrialsFile {
        n: n.unwrap(),
        p: p.unwrap(),
        k,
        records,
    })
}
