//! Brute-force reference computations. These deliberately avoid the
//! library's contrast formulation and ranking code.
#![allow(clippy::needless_range_loop)]

#![allow(dead_code)]

use statrs::distribution::{ContinuousCDF, FisherSnedecor};

pub type Cells = Vec<[[f64; 2]; 2]>;

#[derive(Debug, Clone, Copy)]
pub struct OracleEffect {
    pub ss_effect: f64,
    pub ss_error: f64,
    pub f: f64,
    pub p: f64,
    pub partial_eta_sq: f64,
}

/// Classical sums-of-squares decomposition of a 2×2 within-subject design,
/// effects in order direction (first index), size (second index), interaction.
pub fn brute_rm_anova(cells: &Cells) -> [OracleEffect; 3] {
    let n = cells.len();
    let nf = n as f64;
    let mut grand = 0.0;
    let mut a_mean = [0.0; 2];
    let mut b_mean = [0.0; 2];
    let mut ab_mean = [[0.0; 2]; 2];
    let mut s_mean = vec![0.0; n];
    let mut sa_mean = vec![[0.0; 2]; n];
    let mut sb_mean = vec![[0.0; 2]; n];
    for (s, c) in cells.iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                let y = c[a][b];
                grand += y / (4.0 * nf);
                a_mean[a] += y / (2.0 * nf);
                b_mean[b] += y / (2.0 * nf);
                ab_mean[a][b] += y / nf;
                s_mean[s] += y / 4.0;
                sa_mean[s][a] += y / 2.0;
                sb_mean[s][b] += y / 2.0;
            }
        }
    }
    let mut ss = [0.0; 3];
    let mut ss_err = [0.0; 3];
    for a in 0..2 {
        ss[0] += 2.0 * nf * (a_mean[a] - grand).powi(2);
    }
    for b in 0..2 {
        ss[1] += 2.0 * nf * (b_mean[b] - grand).powi(2);
    }
    for a in 0..2 {
        for b in 0..2 {
            ss[2] += nf * (ab_mean[a][b] - a_mean[a] - b_mean[b] + grand).powi(2);
        }
    }
    for s in 0..n {
        for a in 0..2 {
            ss_err[0] += 2.0 * (sa_mean[s][a] - s_mean[s] - a_mean[a] + grand).powi(2);
        }
        for b in 0..2 {
            ss_err[1] += 2.0 * (sb_mean[s][b] - s_mean[s] - b_mean[b] + grand).powi(2);
        }
        for a in 0..2 {
            for b in 0..2 {
                let r = cells[s][a][b] - sa_mean[s][a] - sb_mean[s][b] - ab_mean[a][b]
                    + s_mean[s]
                    + a_mean[a]
                    + b_mean[b]
                    - grand;
                ss_err[2] += r * r;
            }
        }
    }
    let df = nf - 1.0;
    let dist = FisherSnedecor::new(1.0, df).unwrap();
    [0, 1, 2].map(|e| {
        let f = ss[e] / (ss_err[e] / df);
        OracleEffect {
            ss_effect: ss[e],
            ss_error: ss_err[e],
            f,
            p: dist.sf(f),
            partial_eta_sq: ss[e] / (ss[e] + ss_err[e]),
        }
    })
}

/// Aligned values for one effect (0 direction, 1 size, 2 interaction),
/// recomputing every mean by explicit loops.
pub fn brute_align(cells: &Cells, effect: usize) -> Cells {
    let n = cells.len() as f64;
    let cell_mean = |a: usize, b: usize| cells.iter().map(|c| c[a][b]).sum::<f64>() / n;
    let a_mean = |a: usize| (cell_mean(a, 0) + cell_mean(a, 1)) / 2.0;
    let b_mean = |b: usize| (cell_mean(0, b) + cell_mean(1, b)) / 2.0;
    let grand = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| cell_mean(a, b)).sum::<f64>() / 4.0;
    cells
        .iter()
        .map(|c| {
            let mut out = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    let est = match effect {
                        0 => a_mean(a) - grand,
                        1 => b_mean(b) - grand,
                        _ => cell_mean(a, b) - a_mean(a) - b_mean(b) + grand,
                    };
                    out[a][b] = c[a][b] - cell_mean(a, b) + est;
                }
            }
            out
        })
        .collect()
}

/// Midranks by pairwise counting (exact comparisons).
pub fn brute_ranks(cells: &Cells) -> Cells {
    let flat: Vec<f64> = cells.iter().flat_map(|c| [c[0][0], c[0][1], c[1][0], c[1][1]]).collect();
    let rank = |v: f64| {
        let less = flat.iter().filter(|&&w| w < v).count() as f64;
        let equal = flat.iter().filter(|&&w| w == v).count() as f64;
        less + (equal + 1.0) / 2.0
    };
    cells.iter().map(|c| [[rank(c[0][0]), rank(c[0][1])], [rank(c[1][0]), rank(c[1][1])]]).collect()
}

/// Benjamini-Hochberg by direct evaluation of the step-up minimum.
pub fn brute_bh(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut sorted: Vec<(usize, f64)> = p.iter().copied().enumerate().collect();
    sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut out = vec![0.0; m];
    for (pos, &(idx, _)) in sorted.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (k, &(_, pk)) in sorted.iter().enumerate().skip(pos) {
            best = best.min(pk * m as f64 / (k + 1) as f64);
        }
        out[idx] = best.min(1.0);
    }
    out
}
