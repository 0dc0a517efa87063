use super::StatsError;

/// Benjamini-Hochberg adjusted p-values, returned in input order.
pub fn fdr_adjust(pvalues: &[f64]) -> Result<Vec<f64>, StatsError> {
    if let Some((index, &value)) = pvalues
        .iter()
        .enumerate()
        .find(|(_, p)| !(0.0..=1.0).contains(*p))
    {
        return Err(StatsError::PValueOutOfRange { index, value });
    }
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));

    let mut adjusted = vec![0.0; m];
    let mut running = f64::INFINITY;
    for (rank0, &i) in order.iter().enumerate().rev() {
        let q = (pvalues[i] * m as f64 / (rank0 + 1) as f64).max(pvalues[i]);
        running = running.min(q);
        adjusted[i] = running.min(1.0);
    }
    Ok(adjusted)
}
