//! Rank statistics for validating predictions against opinion scores.
//!
//! SRCC is computed as Pearson correlation on average-tie ranks. The
//! 6*sum(d^2) shortcut is wrong under ties, so it appears only as a test
//! oracle for tie-free inputs.

use crate::error::{Error, Result};

/// Average-tie ranks of an input series.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    ranks: Vec<f64>,
}

impl RankVector {
    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { index });
    }
    Ok(())
}

/// Ascending ranks starting at 1; tied values share the average of the
/// ranks they span.
pub fn rank(values: &[f64]) -> Result<RankVector> {
    if values.is_empty() {
        return Err(Error::TooFewSamples { n: 0, min: 1 });
    }
    check_finite(values)?;

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .expect("finiteness was checked")
    });

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold one tie group; 1-based ranks average.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &original in &order[start..end] {
            ranks[original] = avg;
        }
        start = end;
    }
    Ok(RankVector { ranks })
}

/// Pearson correlation with shared guards: equal lengths, n >= 3, finite,
/// neither side constant.
fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 3 {
        return Err(Error::TooFewSamples {
            n: a.len(),
            min: 3,
        });
    }
    check_finite(a)?;
    check_finite(b)?;

    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank-order correlation coefficient: Pearson on ranks.
pub fn srcc(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 3 {
        return Err(Error::TooFewSamples {
            n: a.len(),
            min: 3,
        });
    }
    let ra = rank(a)?;
    let rb = rank(b)?;
    pearson(ra.ranks(), rb.ranks())
}

/// Pearson linear correlation coefficient.
pub fn plcc(a: &[f64], b: &[f64]) -> Result<f64> {
    pearson(a, b)
}
