use nalgebra::DMatrix;

use crate::colselect::maxvol::maxvol_refine;
use crate::colselect::{IndexSet, Provenance};
use crate::dense::{check_finite, pivoted_cholesky_core, PivotStop, SymMatrix};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::{partial_shuffle, Stream};

fn check_rank(r: usize, n: usize) -> Result<()> {
    if r == 0 || r > n {
        Err(Error::RankOutOfRange { rank: r, n })
    } else {
        Ok(())
    }
}

/// Pivot order of complete-pivoting Cholesky on `A`, at most `r` pivots.
///
/// A pivot counts as positive when it exceeds `n · u · max_i A_ii`; the
/// returned order stops early at the first non-positive pivot.
pub fn greedy_order<T: Real>(a: &SymMatrix<T>, r: usize) -> Result<Vec<usize>> {
    check_rank(r, a.n())?;
    check_finite(a.as_matrix())?;
    let max_diag = a.diagonal().into_iter().fold(T::zero(), |m, d| m.max(d));
    let floor = T::of(a.n() as f64) * T::unit_roundoff() * max_diag;
    let run = pivoted_cholesky_core(a.as_matrix(), PivotStop::Positive { floor }, r)?;
    Ok(run.perm[..run.steps].to_vec())
}

/// First `r` pivots of greedy diagonal pivoting (pivoted Cholesky with no
/// truncation). Ties go to the smallest index.
pub fn greedy_pivot_select<T: Real>(a: &SymMatrix<T>, r: usize) -> Result<IndexSet> {
    let order = greedy_order(a, r)?;
    if order.len() < r {
        return Err(Error::PivotBreakdown { partial: order, requested: r });
    }
    IndexSet::new(order, a.n(), Provenance::Greedy)
}

/// First `r` column pivots of Householder QR with column pivoting on `A`.
///
/// Column norms are recomputed from the updated trailing block at every
/// step rather than downdated. The pivot order is a prefix property: the
/// first `k` pivots do not depend on `r >= k`.
pub fn qrcp_order<T: Real>(a: &SymMatrix<T>, r: usize) -> Result<Vec<usize>> {
    let n = a.n();
    check_rank(r, n)?;
    check_finite(a.as_matrix())?;
    let mut m: DMatrix<T> = a.as_matrix().clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut v = vec![T::zero(); n];

    for k in 0..r {
        let mut p = k;
        let mut best = -T::one();
        for j in k..n {
            let col = m.column(j);
            let s = col.rows(k, n - k).iter().fold(T::zero(), |acc, &x| acc + x * x);
            if s > best || (s == best && perm[j] < perm[p]) {
                best = s;
                p = j;
            }
        }
        if p != k {
            m.swap_columns(k, p);
            perm.swap(k, p);
        }
        let norm = best.sqrt();
        if norm == T::zero() || k + 1 == n {
            continue;
        }

        // Householder vector for m[k.., k]
        let x0 = m[(k, k)];
        let alpha = if x0 >= T::zero() { -norm } else { norm };
        let len = n - k;
        for i in 0..len {
            v[i] = m[(k + i, k)];
        }
        v[0] -= alpha;
        let vnorm2 = v[..len].iter().fold(T::zero(), |acc, &x| acc + x * x);
        if vnorm2 == T::zero() {
            continue;
        }
        let scale = T::of(2.0) / vnorm2;
        m[(k, k)] = alpha;
        for i in 1..len {
            m[(k + i, k)] = T::zero();
        }
        for j in (k + 1)..n {
            let rows = m.nrows();
            let tail = &mut m.as_mut_slice()[j * rows + k..(j + 1) * rows];
            let dot = v[..len].iter().zip(tail.iter()).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            let f = dot * scale;
            for (t, &vi) in tail.iter_mut().zip(v[..len].iter()) {
                *t -= f * vi;
            }
        }
    }
    perm.truncate(r);
    Ok(perm)
}

pub fn qrcp_select<T: Real>(a: &SymMatrix<T>, r: usize) -> Result<IndexSet> {
    IndexSet::new(qrcp_order(a, r)?, a.n(), Provenance::Qrcp)
}

/// `r` distinct indices drawn uniformly without replacement (partial
/// Fisher-Yates on stream 0 of `seed`, see [`crate::rng`]).
pub fn uniform_select(n: usize, r: usize, seed: u64) -> Result<IndexSet> {
    check_rank(r, n)?;
    let mut stream = Stream::new(seed, 0);
    IndexSet::new(partial_shuffle(n, r, &mut stream), n, Provenance::Uniform)
}

/// Refine a seed index set to a locally max-vol set.
///
/// When the seed's core matrix is numerically singular (the requested rank
/// exceeds the numerical rank), the numerically independent part of the
/// seed (greedy pivots of `A(J, J)`) is refined instead and the remaining
/// slots are filled from the seed in order.
pub fn refined_select<T: Real>(a: &SymMatrix<T>, seed: &IndexSet, delta: f64) -> Result<IndexSet> {
    let r = seed.len();
    match maxvol_refine(a, seed, delta) {
        Ok(set) => Ok(set),
        Err(Error::SingularSubmatrix) => {
            let core = a.principal(seed.indices());
            let independent: Vec<usize> = greedy_order(&core, r)?
                .into_iter()
                .map(|p| seed.indices()[p])
                .collect();
            if independent.is_empty() {
                return Ok(seed.clone().with_provenance(Provenance::Refined));
            }
            let start = IndexSet::new(independent, a.n(), seed.provenance())?;
            let refined = match maxvol_refine(a, &start, delta) {
                Ok(set) => set,
                Err(Error::SingularSubmatrix) => start,
                Err(e) => return Err(e),
            };
            let mut out = refined.indices().to_vec();
            for &i in seed.indices() {
                if out.len() == r {
                    break;
                }
                if !out.contains(&i) {
                    out.push(i);
                }
            }
            IndexSet::new(out, a.n(), Provenance::Refined)
        }
        Err(e) => Err(e),
    }
}
