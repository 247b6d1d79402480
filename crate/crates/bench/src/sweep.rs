use std::time::Instant;

use nystrom_core::colselect::{
    greedy_order, qrcp_order, refined_select, sigma_min_sq, uniform_select, IndexSet, Provenance,
};
use nystrom_core::dense::{spectral_norm_est, Spectrum, SymMatrix};
use nystrom_core::nystrom::{
    error_report, nystrom_stabilized, nystrom_stabilized_eig, run_variant, Approximation, Variant,
};
use nystrom_core::{Error, Real};

use crate::config::{EpsilonRule, ExperimentConfig, Precision, Selector};
use crate::error::{BenchError, Result};
use crate::matrix::build_matrix;
use crate::record::{sort_records, Status, SweepRecord};

/// Errors this far above the optimal one (or the roundoff floor `u√n`)
/// mark a run as unstable.
const UNSTABLE_FACTOR: f64 = 100.0;

/// Build the configured matrix and run the sweep in the configured
/// precision. Records come back in canonical order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let a = build_matrix(&config.matrix, config.seed)?;
    match config.precision {
        Precision::Double => sweep_matrix(&a, config),
        Precision::Single => sweep_matrix(&a.cast::<f32>(), config),
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

enum Seeds {
    Prefix(Vec<usize>),
    Uniform,
}

fn select<T: Real>(a: &SymMatrix<T>, config: &ExperimentConfig, seeds: &Seeds, rank: usize) -> Result<IndexSet> {
    let n = a.n();
    let prefix = |order: &[usize], provenance| -> Result<IndexSet> {
        let take = rank.min(order.len());
        Ok(IndexSet::new(order[..take].to_vec(), n, provenance)?)
    };
    Ok(match (config.selector, seeds) {
        (Selector::Uniform, _) | (_, Seeds::Uniform) => uniform_select(n, rank, config.seed.wrapping_add(rank as u64))?,
        (Selector::Greedy, Seeds::Prefix(order)) => prefix(order, Provenance::Greedy)?,
        (Selector::Qrcp, Seeds::Prefix(order)) => prefix(order, Provenance::Qrcp)?,
        (Selector::Refined, Seeds::Prefix(order)) => {
            refined_select(a, &prefix(order, Provenance::Qrcp)?, config.refine_delta)?
        }
    })
}

/// Stabilized Nyström, switching to eigenvalue truncation of the core when
/// the pivoted Cholesky meets a dominant negative diagonal.
fn stabilized_with_fallback<T: Real>(a: &SymMatrix<T>, j: &IndexSet, eps: T) -> nystrom_core::Result<Approximation<T>> {
    match nystrom_stabilized(a, j, eps) {
        Err(Error::NegativePivotDominant { .. }) => nystrom_stabilized_eig(a, j, eps),
        other => other,
    }
    .map(Approximation::Factor)
}

/// Run the sweep of `config` on an already assembled matrix.
pub fn sweep_matrix<T: Real>(a: &SymMatrix<T>, config: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let n = a.n();
    if let Some(&bad) = config.ranks.iter().find(|&&r| r > n) {
        return Err(BenchError::ConfigInvalid(format!("rank {bad} exceeds dimension {n}")));
    }
    let max_rank = *config.ranks.iter().max().expect("validated nonempty");
    let spectrum = Spectrum::of(&a.cast::<f64>());
    let eps = match config.epsilon {
        EpsilonRule::TenUNorm => T::of(10.0 * T::UNIT_ROUNDOFF * spectral_norm_est(a, 50, 0)?),
        EpsilonRule::Fixed(v) => T::of(v),
    };
    let seeds = match config.selector {
        Selector::Greedy => Seeds::Prefix(greedy_order(a, max_rank)?),
        Selector::Qrcp | Selector::Refined => Seeds::Prefix(qrcp_order(a, max_rank)?),
        Selector::Uniform => Seeds::Uniform,
    };
    let floor = T::UNIT_ROUNDOFF * (n as f64).sqrt();

    let mut records = Vec::with_capacity(config.ranks.len() * config.variants.len());
    for &rank in &config.ranks {
        let tsvd_rel_frob = spectrum.tsvd_rel_frob(rank);
        let blank = |variant| SweepRecord {
            rank,
            variant,
            selector: config.selector,
            rel_frob: None,
            rel_spectral: None,
            tsvd_rel_frob,
            r_hat: None,
            sigma_min_sq: None,
            wall_time_ms: None,
            status: Status::Breakdown,
        };
        let j = match select(a, config, &seeds, rank) {
            Ok(j) => j,
            Err(_) => {
                records.extend(config.variants.iter().map(|&v| blank(v)));
                continue;
            }
        };
        let sigma = sigma_min_sq(a, &j).ok();

        for &variant in &config.variants {
            let start = Instant::now();
            let outcome = match variant {
                Variant::Stabilized => stabilized_with_fallback(a, &j, eps),
                Variant::Shifted => run_variant(variant, a, &j, Some(eps)),
                _ => run_variant(variant, a, &j, None),
            };
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let mut rec = blank(variant);
            rec.sigma_min_sq = sigma;
            rec.wall_time_ms = config.timing.then_some(elapsed);
            if let Ok(approx) = outcome {
                let rep = error_report(a, &approx, Some(&spectrum))?;
                rec.rel_frob = finite(rep.rel_frob);
                rec.rel_spectral = finite(rep.rel_spectral);
                rec.r_hat = Some(approx.r_hat());
                let limit = UNSTABLE_FACTOR * tsvd_rel_frob.max(floor);
                rec.status = match rec.rel_frob {
                    Some(e) if e <= limit && rec.rel_spectral.is_some() => Status::Ok,
                    _ => Status::UnstableFlag,
                };
            }
            records.push(rec);
        }
    }
    sort_records(&mut records);
    Ok(records)
}
