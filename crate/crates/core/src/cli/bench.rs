//! Wall-clock timing of summarize and solve over synthetic problems.

use std::io::Write;
use std::time::Instant;

use super::generate::{generate, GenerateParams};
use crate::align::{self, SummarizeOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub summarize_s: Vec<f64>,
    pub solve_s: Vec<f64>,
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

impl BenchRow {
    pub fn summarize_median(&self) -> f64 {
        median(&self.summarize_s)
    }

    pub fn solve_median(&self) -> f64 {
        median(&self.solve_s)
    }

    pub fn total_median(&self) -> f64 {
        let totals: Vec<f64> = self.summarize_s.iter().zip(&self.solve_s).map(|(a, b)| a + b).collect();
        median(&totals)
    }
}

pub fn run(n_list: &[usize], repetitions: usize, opts: &SummarizeOptions) -> Result<Vec<BenchRow>, String> {
    if repetitions == 0 {
        return Err("repetitions must be at least 1".into());
    }
    n_list
        .iter()
        .map(|&n| {
            let params = GenerateParams {
                n,
                noise_sigma: 0.01,
                seed: 1,
                angle: 0.8,
                axis: [1.0, -1.0, 0.5],
                translation: [0.5, -2.0, 1.0],
            };
            let (problem, _) = generate(&params).map_err(|e| e.to_string())?;
            let mut row = BenchRow {
                n,
                summarize_s: Vec::with_capacity(repetitions),
                solve_s: Vec::with_capacity(repetitions),
            };
            for _ in 0..repetitions {
                let t0 = Instant::now();
                let summary = align::summarize_with(&problem, opts).map_err(|e| e.to_string())?;
                let t1 = Instant::now();
                let sol = align::solve_summary(&problem, &summary).map_err(|e| e.to_string())?;
                let t2 = Instant::now();
                std::hint::black_box(sol);
                row.summarize_s.push((t1 - t0).as_secs_f64());
                row.solve_s.push((t2 - t1).as_secs_f64());
            }
            Ok(row)
        })
        .collect()
}

pub fn write_csv<W: Write>(mut out: W, rows: &[BenchRow]) -> std::io::Result<()> {
    writeln!(out, "n,repetitions,summarize_median_s,solve_median_s,total_median_s")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{:e},{:e},{:e}",
            r.n,
            r.summarize_s.len(),
            r.summarize_median(),
            r.solve_median(),
            r.total_median()
        )?;
    }
    Ok(())
}
